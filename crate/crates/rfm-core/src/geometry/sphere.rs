//! Unit hypersphere closed forms in ambient R^{d+1} coordinates.

use super::{axpy, dot, norm, scale, Point, ANTIPODAL_CUTOFF};
use crate::{Result, RfmError};

/// Below this tangent norm the exp/log trigonometry switches to 4th-order
/// Taylor branches to avoid 0/0.
const SMALL_ANGLE: f64 = 1e-4;

fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    if (n - 1.0).abs() > 1e-15 {
        let inv = 1.0 / n;
        for x in &mut v {
            *x *= inv;
        }
    }
    v
}

/// Exp_x(v) = cos(|v|) x + sin(|v|) v / |v|.
pub fn exp(x: &[f64], v: &[f64]) -> Result<Point> {
    let r = norm(v);
    let (c, sinc) = if r < SMALL_ANGLE {
        let r2 = r * r;
        (1.0 - r2 / 2.0 + r2 * r2 / 24.0, 1.0 - r2 / 6.0 + r2 * r2 / 120.0)
    } else {
        (r.cos(), r.sin() / r)
    };
    let out: Vec<f64> = x.iter().zip(v).map(|(xi, vi)| c * xi + sinc * vi).collect();
    Ok(Point { ambient: renormalize(out) })
}

/// Angle between unit vectors, conditioned well at both ends of [0, pi]
/// (acos alone loses half the mantissa near the poles).
fn angle(x: &[f64], y: &[f64]) -> f64 {
    let c = dot(x, y).clamp(-1.0, 1.0);
    if c > 0.9 {
        let chord: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        2.0 * (0.5 * chord).asin()
    } else if c < -0.9 {
        let chord: f64 = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
        std::f64::consts::PI - 2.0 * (0.5 * chord).asin()
    } else {
        c.acos()
    }
}

/// Log_x(y): rejects pairs within `ANTIPODAL_CUTOFF` of the cut locus.
pub fn log(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let c = dot(x, y).clamp(-1.0, 1.0);
    let theta = angle(x, y);
    if theta > std::f64::consts::PI - ANTIPODAL_CUTOFF {
        return Err(RfmError::DomainError(format!(
            "sphere log at distance {theta:.9} is inside the antipodal cutoff"
        )));
    }
    // perp = y - <x,y> x has norm sin(theta).
    let perp = axpy(-c, x, y);
    if theta < SMALL_ANGLE {
        // theta/sin(theta) = 1 + theta^2/6 + 7 theta^4/360 + ...
        let t2 = theta * theta;
        return Ok(scale(&perp, 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0));
    }
    Ok(scale(&perp, theta / theta.sin()))
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    angle(x, y)
}

/// Parallel transport along the minimizing geodesic x -> y.
pub fn transport(x: &[f64], y: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let lg = log(x, y)?;
    let r = norm(&lg);
    if r < 1e-14 {
        return Ok(v.to_vec());
    }
    let e = scale(&lg, 1.0 / r);
    let a = dot(v, &e);
    // v stays fixed off the geodesic plane; within it, e rotates to
    // cos(r) e - sin(r) x.
    let mut out = v.to_vec();
    for i in 0..out.len() {
        out[i] += a * ((r.cos() - 1.0) * e[i] - r.sin() * x[i]);
    }
    Ok(out)
}

/// Tangent frame from the Householder reflection mapping e_{d+1} to x; its
/// first d columns are an orthonormal basis of x-perp.
pub fn frame(x: &[f64], d: usize) -> Vec<Vec<f64>> {
    let last = d;
    let mut w = x.to_vec();
    w[last] -= 1.0;
    let w2 = dot(&w, &w);
    if w2 < 1e-24 {
        return (0..d)
            .map(|i| {
                let mut e = vec![0.0; d + 1];
                e[i] = 1.0;
                e
            })
            .collect();
    }
    (0..d)
        .map(|j| {
            let mut col = vec![0.0; d + 1];
            col[j] = 1.0;
            let coeff = 2.0 * w[j] / w2;
            for i in 0..=d {
                col[i] -= coeff * w[i];
            }
            col
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_circle_exp() {
        // x = e3, v = (pi/2) e1 -> e1.
        let x = vec![0.0, 0.0, 1.0];
        let v = vec![std::f64::consts::FRAC_PI_2, 0.0, 0.0];
        let y = exp(&x, &v).unwrap();
        assert!((y.ambient[0] - 1.0).abs() < 1e-14);
        assert!(y.ambient[2].abs() < 1e-14);
    }

    #[test]
    fn log_inverts_quarter_circle() {
        let x = vec![0.0, 0.0, 1.0];
        let y = vec![1.0, 0.0, 0.0];
        let v = log(&x, &y).unwrap();
        assert!((v[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!(v[1].abs() < 1e-14 && v[2].abs() < 1e-14);
    }

    #[test]
    fn antipodal_rejected() {
        let x = vec![0.0, 0.0, 1.0];
        let y = vec![0.0, 0.0, -1.0];
        assert!(log(&x, &y).is_err());
        assert!((distance(&x, &y) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn transport_fixes_rotation_axis() {
        // Quarter circle e3 -> e1 keeps e2 fixed.
        let x = vec![0.0, 0.0, 1.0];
        let y = vec![1.0, 0.0, 0.0];
        let v = vec![0.0, 1.0, 0.0];
        let out = transport(&x, &y, &v).unwrap();
        assert!((out[1] - 1.0).abs() < 1e-14);
        assert!(out[0].abs() < 1e-14 && out[2].abs() < 1e-14);
    }

    #[test]
    fn frame_at_pole_is_standard() {
        let x = vec![0.0, 0.0, 1.0];
        let f = frame(&x, 2);
        assert_eq!(f.len(), 2);
        assert!((f[0][0] - 1.0).abs() < 1e-15);
        assert!((f[1][1] - 1.0).abs() < 1e-15);
    }
}
