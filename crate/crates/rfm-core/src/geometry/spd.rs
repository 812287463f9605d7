//! SPD(n) closed forms under the affine-invariant metric
//! g_X(U, V) = tr(X^{-1} U X^{-1} V). Points and tangents are flattened
//! row-major n x n symmetric matrices.

use nalgebra::DMatrix;

use super::Point;
use crate::{Result, RfmError};

pub fn symmetrize(flat: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = 0.5 * (flat[i * n + j] + flat[j * n + i]);
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        out[i * n + i] = 1.0;
    }
    out
}

fn mat(flat: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, flat)
}

fn flat(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(m[(i, j)]);
        }
    }
    out
}

fn sym_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eig = m
        .clone()
        .try_symmetric_eigen(1e-14, 256)
        .ok_or_else(|| RfmError::NumericFailure("symmetric eigendecomposition stalled".into()))?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Q f(Lambda) Q^T for a symmetric matrix.
fn apply_spectral(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let (vals, q) = sym_eigen(m)?;
    let n = m.nrows();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = f(vals[i]);
    }
    Ok(&q * d * q.transpose())
}

pub fn min_eigenvalue(flat_m: &[f64], n: usize) -> Result<f64> {
    let (vals, _) = sym_eigen(&mat(flat_m, n))?;
    Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
}

/// (X^{1/2}, X^{-1/2}) in one eigendecomposition.
fn sqrt_pair(x: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (vals, q) = sym_eigen(x)?;
    let n = x.nrows();
    let mut s = DMatrix::zeros(n, n);
    let mut si = DMatrix::zeros(n, n);
    for i in 0..n {
        if vals[i] <= 0.0 {
            return Err(RfmError::NumericFailure(format!(
                "matrix square root hit non-positive eigenvalue {}",
                vals[i]
            )));
        }
        s[(i, i)] = vals[i].sqrt();
        si[(i, i)] = 1.0 / vals[i].sqrt();
    }
    Ok((&q * s * q.transpose(), &q * si * q.transpose()))
}

/// Exp_X(V) = X^{1/2} expm(X^{-1/2} V X^{-1/2}) X^{1/2}.
pub fn exp(x: &[f64], v: &[f64], n: usize) -> Result<Point> {
    let xm = mat(x, n);
    let vm = mat(&symmetrize(v, n), n);
    let (s, si) = sqrt_pair(&xm)?;
    let w = &si * vm * &si;
    let ew = apply_spectral(&w, f64::exp)?;
    let out = &s * ew * &s;
    Ok(Point { ambient: symmetrize(&flat(&out), n) })
}

/// Log_X(Y) = X^{1/2} logm(X^{-1/2} Y X^{-1/2}) X^{1/2}.
pub fn log(x: &[f64], y: &[f64], n: usize) -> Result<Vec<f64>> {
    let (s, si) = sqrt_pair(&mat(x, n))?;
    let w = &si * mat(y, n) * &si;
    let lw = apply_spectral(&w, |e| {
        if e <= 0.0 {
            f64::NAN
        } else {
            e.ln()
        }
    })?;
    if lw.iter().any(|x| !x.is_finite()) {
        return Err(RfmError::NumericFailure("matrix logarithm of a non-SPD argument".into()));
    }
    let out = &s * lw * &s;
    Ok(symmetrize(&flat(&out), n))
}

/// d(X, Y) = || logm(X^{-1/2} Y X^{-1/2}) ||_F.
pub fn distance(x: &[f64], y: &[f64], n: usize) -> f64 {
    let (_, si) = match sqrt_pair(&mat(x, n)) {
        Ok(p) => p,
        Err(_) => return f64::NAN,
    };
    let w = &si * mat(y, n) * &si;
    match sym_eigen(&w) {
        Ok((vals, _)) => vals.iter().map(|e| e.max(1e-300).ln().powi(2)).sum::<f64>().sqrt(),
        Err(_) => f64::NAN,
    }
}

/// g_X(U, V) = tr(X^{-1} U X^{-1} V).
pub fn inner(x: &[f64], u: &[f64], v: &[f64], n: usize) -> f64 {
    let xm = mat(x, n);
    let inv = xm.clone().try_inverse().unwrap_or_else(|| DMatrix::identity(n, n));
    let a = &inv * mat(u, n);
    let b = &inv * mat(v, n);
    (a * b).trace()
}

/// Parallel transport X -> Y: E |-> G E G^T with G = (Y X^{-1})^{1/2},
/// computed as X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{-1/2}.
pub fn transport(x: &[f64], y: &[f64], v: &[f64], n: usize) -> Result<Vec<f64>> {
    let (s, si) = sqrt_pair(&mat(x, n))?;
    let w = &si * mat(y, n) * &si;
    let wh = apply_spectral(&w, |e| e.max(0.0).sqrt())?;
    let g = &s * wh * &si;
    let out = &g * mat(v, n) * g.transpose();
    Ok(symmetrize(&flat(&out), n))
}

/// Orthonormal frame at X: X^{1/2} B X^{1/2} over the standard orthonormal
/// symmetric basis B in {E_ii, (E_ij + E_ji)/sqrt(2)} at the identity.
pub fn frame(x: &[f64], n: usize) -> Vec<Vec<f64>> {
    let (s, _) = sqrt_pair(&mat(x, n)).expect("frame at a valid SPD point");
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i..n {
            let mut b = DMatrix::zeros(n, n);
            if i == j {
                b[(i, i)] = 1.0;
            } else {
                b[(i, j)] = inv_sqrt2;
                b[(j, i)] = inv_sqrt2;
            }
            let e = &s * b * &s;
            out.push(symmetrize(&flat(&e), n));
        }
    }
    out
}

/// Eigenvalues of the whitened tangent X^{-1/2} V X^{-1/2}. The affine
/// invariants of (X, V) are exactly these numbers.
pub fn whitened_eigenvalues(x: &[f64], v: &[f64], n: usize) -> Result<Vec<f64>> {
    let (_, si) = sqrt_pair(&mat(x, n))?;
    let w = &si * mat(&symmetrize(v, n), n) * &si;
    let (vals, _) = sym_eigen(&w)?;
    Ok(vals)
}

/// Random symmetric matrix with independent N(0, sigma^2) Frobenius-orthonormal
/// coefficients.
pub fn random_symmetric<R: rand::Rng>(rng: &mut R, n: usize, sigma: f64) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i..n {
            let g: f64 = super::gaussian_vec(rng, 1)[0] * sigma;
            if i == j {
                out[i * n + i] = g;
            } else {
                out[i * n + j] = g * inv_sqrt2;
                out[j * n + i] = g * inv_sqrt2;
            }
        }
    }
    out
}

/// Coordinates (log-eigenvalues ascending, rotation angle in [0, pi)) of a
/// 2x2 SPD matrix; used by the metrics binning.
pub fn spd_log_coords(x: &[f64]) -> Result<[f64; 3]> {
    let (vals, q) = sym_eigen(&mat(x, 2))?;
    let (l0, l1, c, s) = if vals[0] <= vals[1] {
        (vals[0], vals[1], q[(0, 0)], q[(1, 0)])
    } else {
        (vals[1], vals[0], q[(0, 1)], q[(1, 1)])
    };
    if l0 <= 0.0 {
        return Err(RfmError::InvalidArgument("log coords of a non-SPD matrix".into()));
    }
    let mut angle = s.atan2(c);
    if angle < 0.0 {
        angle += std::f64::consts::PI;
    }
    if angle >= std::f64::consts::PI {
        angle -= std::f64::consts::PI;
    }
    Ok([l0.ln(), l1.ln(), angle])
}

/// Inverse of [`spd_log_coords`] (up to eigenvector sign conventions).
pub fn spd_from_log_coords(coords: &[f64; 3]) -> Vec<f64> {
    let (l0, l1, a) = (coords[0].exp(), coords[1].exp(), coords[2]);
    let (c, s) = (a.cos(), a.sin());
    // R diag(l0, l1) R^T with R = [[c, -s], [s, c]].
    vec![
        c * c * l0 + s * s * l1,
        c * s * (l0 - l1),
        c * s * (l0 - l1),
        s * s * l0 + c * c * l1,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_log_diagonal() {
        let x = identity(2);
        let v = vec![2f64.ln(), 0.0, 0.0, 0.0];
        let y = exp(&x, &v, 2).unwrap();
        assert!((y.ambient[0] - 2.0).abs() < 1e-12);
        assert!((y.ambient[3] - 1.0).abs() < 1e-12);

        let y2 = vec![4.0, 0.0, 0.0, 1.0];
        let l = log(&x, &y2, 2).unwrap();
        assert!((l[0] - 4f64.ln()).abs() < 1e-12);
        assert!(l[3].abs() < 1e-12);
    }

    #[test]
    fn distance_closed_form() {
        let x = identity(2);
        let y = vec![(2.0f64).exp(), 0.0, 0.0, 1.0];
        assert!((distance(&x, &y, 2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn frame_at_identity_is_standard_basis() {
        let f = frame(&identity(2), 2);
        assert_eq!(f.len(), 3);
        assert!((f[0][0] - 1.0).abs() < 1e-12);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f[1][1] - inv_sqrt2).abs() < 1e-12);
        assert!((f[1][2] - inv_sqrt2).abs() < 1e-12);
    }

    #[test]
    fn log_coords_roundtrip() {
        let x = vec![2.0, 0.3, 0.3, 1.0];
        let c = spd_log_coords(&x).unwrap();
        let back = spd_from_log_coords(&c);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-10, "{x:?} vs {back:?}");
        }
    }
}
