//! Closed-form Riemannian primitives for the unit hypersphere S^d, SPD(n)
//! under the affine-invariant metric, and Euclidean space.
//!
//! Points and tangents are kept in ambient coordinates (unit vectors in
//! R^{d+1}, flattened symmetric n x n matrices, plain vectors). All operations
//! are pure; renormalization (sphere projection, symmetrization) is applied
//! after every arithmetic step with a drift budget of 1e-12 per op.

mod sphere;
mod spd;

use crate::{Result, RfmError};

pub use spd::{spd_from_log_coords, spd_log_coords};

/// Sphere points are renormalized to this tolerance after every operation.
pub const POINT_DRIFT_TOL: f64 = 1e-12;

/// Log map rejects sphere pairs closer than this to the cut locus.
pub const ANTIPODAL_CUTOFF: f64 = 1e-6;

/// Which manifold an object lives on, with its static curvature data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    /// Unit d-sphere embedded in R^{d+1}, d >= 1.
    Sphere { d: usize },
    /// Symmetric positive definite n x n matrices, affine-invariant metric.
    Spd { n: usize },
    /// Flat R^d.
    Euclidean { d: usize },
}

/// Static curvature descriptors of a manifold (Assumption-1 style data).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptor {
    /// Intrinsic dimension.
    pub dim: usize,
    /// Lower sectional curvature bound.
    pub k_min: f64,
    /// Upper sectional curvature bound.
    pub k_max: f64,
    /// Curvature operator bound: ||R(u,v)v|| <= l_r ||u|| ||v||^2.
    pub l_r: f64,
    /// Injectivity radius (infinite for Hadamard and flat spaces).
    pub inj_radius: f64,
}

/// A point in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub ambient: Vec<f64>,
}

/// A tangent vector attached to its base point, in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub base: Point,
    pub vec: Vec<f64>,
}

/// A g-orthonormal tangent frame at a base point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub base: Point,
    pub vectors: Vec<Vec<f64>>,
}

impl Manifold {
    pub fn sphere(d: usize) -> Self {
        assert!(d >= 1, "sphere dimension must be >= 1");
        Manifold::Sphere { d }
    }

    pub fn spd(n: usize) -> Self {
        assert!(n >= 1, "SPD order must be >= 1");
        Manifold::Spd { n }
    }

    pub fn euclidean(d: usize) -> Self {
        assert!(d >= 1, "Euclidean dimension must be >= 1");
        Manifold::Euclidean { d }
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        match *self {
            Manifold::Sphere { d } => d,
            Manifold::Spd { n } => n * (n + 1) / 2,
            Manifold::Euclidean { d } => d,
        }
    }

    /// Length of the ambient coordinate vector of a point.
    pub fn ambient_len(&self) -> usize {
        match *self {
            Manifold::Sphere { d } => d + 1,
            Manifold::Spd { n } => n * n,
            Manifold::Euclidean { d } => d,
        }
    }

    /// Curvature and injectivity data.
    pub fn descriptor(&self) -> Descriptor {
        match *self {
            Manifold::Sphere { .. } => Descriptor {
                dim: self.dim(),
                k_min: 1.0,
                k_max: 1.0,
                l_r: 1.0,
                inj_radius: std::f64::consts::PI,
            },
            Manifold::Spd { .. } => Descriptor {
                dim: self.dim(),
                k_min: -0.5,
                k_max: 0.0,
                l_r: 0.5,
                inj_radius: f64::INFINITY,
            },
            Manifold::Euclidean { .. } => Descriptor {
                dim: self.dim(),
                k_min: 0.0,
                k_max: 0.0,
                l_r: 0.0,
                inj_radius: f64::INFINITY,
            },
        }
    }

    /// Geodesic diameter, where finite.
    pub fn diameter(&self) -> Option<f64> {
        match *self {
            Manifold::Sphere { .. } => Some(std::f64::consts::PI),
            _ => None,
        }
    }

    /// Validate and renormalize a raw ambient vector into a point.
    pub fn point(&self, ambient: Vec<f64>) -> Result<Point> {
        if ambient.len() != self.ambient_len() {
            return Err(RfmError::InvalidArgument(format!(
                "point has ambient length {}, expected {}",
                ambient.len(),
                self.ambient_len()
            )));
        }
        if !ambient.iter().all(|x| x.is_finite()) {
            return Err(RfmError::InvalidArgument("non-finite point coordinates".into()));
        }
        match *self {
            Manifold::Sphere { .. } => {
                let n = norm(&ambient);
                if n < 0.5 {
                    return Err(RfmError::InvalidArgument(
                        "sphere point too far from the unit sphere to renormalize".into(),
                    ));
                }
                Ok(Point { ambient: scale(&ambient, 1.0 / n) })
            }
            Manifold::Spd { n } => {
                let sym = spd::symmetrize(&ambient, n);
                let min_eig = spd::min_eigenvalue(&sym, n)?;
                if min_eig <= 0.0 {
                    return Err(RfmError::InvalidArgument(format!(
                        "SPD point has non-positive eigenvalue {min_eig}"
                    )));
                }
                Ok(Point { ambient: sym })
            }
            Manifold::Euclidean { .. } => Ok(Point { ambient }),
        }
    }

    /// Build a tangent at `base` from a raw ambient vector, projecting onto
    /// the tangent space.
    pub fn tangent(&self, base: &Point, vec: Vec<f64>) -> Result<Tangent> {
        if vec.len() != self.ambient_len() {
            return Err(RfmError::InvalidArgument(format!(
                "tangent has ambient length {}, expected {}",
                vec.len(),
                self.ambient_len()
            )));
        }
        if !vec.iter().all(|x| x.is_finite()) {
            return Err(RfmError::InvalidArgument("non-finite tangent coordinates".into()));
        }
        Ok(Tangent { base: base.clone(), vec: self.project_tangent(base, &vec) })
    }

    /// Orthogonal projection of an ambient vector onto T_x M.
    pub fn project_tangent(&self, x: &Point, w: &[f64]) -> Vec<f64> {
        match *self {
            Manifold::Sphere { .. } => {
                let c = dot(w, &x.ambient);
                w.iter().zip(&x.ambient).map(|(wi, xi)| wi - c * xi).collect()
            }
            Manifold::Spd { n } => spd::symmetrize(w, n),
            Manifold::Euclidean { .. } => w.to_vec(),
        }
    }

    /// Zero tangent at `x`.
    pub fn zero_tangent(&self, x: &Point) -> Tangent {
        Tangent { base: x.clone(), vec: vec![0.0; self.ambient_len()] }
    }

    /// Riemannian inner product of two tangent coordinate vectors at `x`.
    pub fn inner(&self, x: &Point, u: &[f64], v: &[f64]) -> f64 {
        match *self {
            Manifold::Sphere { .. } | Manifold::Euclidean { .. } => dot(u, v),
            Manifold::Spd { n } => spd::inner(&x.ambient, u, v, n),
        }
    }

    /// Riemannian norm of a tangent coordinate vector at `x`.
    pub fn norm(&self, x: &Point, v: &[f64]) -> f64 {
        self.inner(x, v, v).max(0.0).sqrt()
    }

    /// Exponential map.
    pub fn exp_map(&self, v: &Tangent) -> Result<Point> {
        if !v.vec.iter().all(|x| x.is_finite()) {
            return Err(RfmError::InvalidArgument("non-finite tangent".into()));
        }
        match *self {
            Manifold::Sphere { .. } => sphere::exp(&v.base.ambient, &v.vec),
            Manifold::Spd { n } => spd::exp(&v.base.ambient, &v.vec, n),
            Manifold::Euclidean { .. } => Ok(Point {
                ambient: add(&v.base.ambient, &v.vec),
            }),
        }
    }

    /// Logarithm map: the tangent at `x` with exp_map(log_map(x, y)) = y.
    pub fn log_map(&self, x: &Point, y: &Point) -> Result<Tangent> {
        let vec = match *self {
            Manifold::Sphere { .. } => sphere::log(&x.ambient, &y.ambient)?,
            Manifold::Spd { n } => spd::log(&x.ambient, &y.ambient, n)?,
            Manifold::Euclidean { .. } => sub(&y.ambient, &x.ambient),
        };
        Ok(Tangent { base: x.clone(), vec })
    }

    /// Geodesic distance.
    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match *self {
            Manifold::Sphere { .. } => sphere::distance(&x.ambient, &y.ambient),
            Manifold::Spd { n } => spd::distance(&x.ambient, &y.ambient, n),
            Manifold::Euclidean { .. } => norm(&sub(&y.ambient, &x.ambient)),
        }
    }

    /// Parallel transport of `v` from `x` to `y` along the minimizing geodesic.
    pub fn parallel_transport(&self, x: &Point, y: &Point, v: &Tangent) -> Result<Tangent> {
        let vec = match *self {
            Manifold::Sphere { .. } => sphere::transport(&x.ambient, &y.ambient, &v.vec)?,
            Manifold::Spd { n } => spd::transport(&x.ambient, &y.ambient, &v.vec, n)?,
            Manifold::Euclidean { .. } => v.vec.clone(),
        };
        Ok(Tangent { base: y.clone(), vec })
    }

    /// Point at parameter `t` on the geodesic x0 -> x1 (t in [0,1] maps onto
    /// the segment; the curve extends beyond for other t).
    pub fn geodesic_point(&self, x0: &Point, x1: &Point, t: f64) -> Result<Point> {
        let lg = self.log_map(x0, x1)?;
        let v = Tangent { base: x0.clone(), vec: scale(&lg.vec, t) };
        self.exp_map(&v)
    }

    /// Velocity of the geodesic interpolation at time `t`, attached to the
    /// interpolated point: the transported initial velocity, which equals
    /// Log of the endpoint scaled by 1/(1-t).
    pub fn bridge_velocity(&self, x0: &Point, x1: &Point, t: f64) -> Result<Tangent> {
        if t >= 1.0 {
            return Err(RfmError::DomainError(format!("bridge velocity needs t < 1, got {t}")));
        }
        let lg = self.log_map(x0, x1)?;
        let xt = self.exp_map(&Tangent { base: x0.clone(), vec: scale(&lg.vec, t) })?;
        self.parallel_transport(x0, &xt, &lg)
    }

    /// Same velocity via the endpoint formula (1/(1-t)) Log_{X_t}(x1).
    /// Cross-checks `bridge_velocity` to 1e-8 in the property suite.
    pub fn bridge_velocity_endpoint(&self, x0: &Point, x1: &Point, t: f64) -> Result<Tangent> {
        if t >= 1.0 {
            return Err(RfmError::DomainError(format!("bridge velocity needs t < 1, got {t}")));
        }
        let xt = self.geodesic_point(x0, x1, t)?;
        let lg = self.log_map(&xt, x1)?;
        Ok(Tangent { base: xt, vec: scale(&lg.vec, 1.0 / (1.0 - t)) })
    }

    /// Deterministic g-orthonormal frame at `x`.
    pub fn orthonormal_frame(&self, x: &Point) -> Frame {
        let vectors = match *self {
            Manifold::Sphere { d } => sphere::frame(&x.ambient, d),
            Manifold::Spd { n } => spd::frame(&x.ambient, n),
            Manifold::Euclidean { d } => (0..d)
                .map(|i| {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    e
                })
                .collect(),
        };
        Frame { base: x.clone(), vectors }
    }

    /// Riemannian divergence of a tangent field by central differences along
    /// frame geodesics with parallel-transport pullback. Second order in
    /// `step`.
    pub fn divergence_fd<F>(&self, field: F, t: f64, x: &Point, step: f64) -> Result<f64>
    where
        F: Fn(f64, &Point) -> Result<Tangent>,
    {
        if step <= 0.0 {
            return Err(RfmError::InvalidArgument(format!("divergence step must be > 0, got {step}")));
        }
        let frame = self.orthonormal_frame(x);
        let mut div = 0.0;
        for e in &frame.vectors {
            let xp = self.exp_map(&Tangent { base: x.clone(), vec: scale(e, step) })?;
            let xm = self.exp_map(&Tangent { base: x.clone(), vec: scale(e, -step) })?;
            let up = self.parallel_transport(&xp, x, &field(t, &xp)?)?;
            let um = self.parallel_transport(&xm, x, &field(t, &xm)?)?;
            let diff = sub(&up.vec, &um.vec);
            div += self.inner(x, &diff, e) / (2.0 * step);
        }
        Ok(div)
    }

    /// Uniform random point (sphere), Riemannian-Gaussian-ish point (SPD), or
    /// standard Gaussian point (Euclidean). Intended for tests and sweeps.
    pub fn random_point<R: rand::Rng>(&self, rng: &mut R) -> Point {
        match *self {
            Manifold::Sphere { d } => {
                let v = gaussian_vec(rng, d + 1);
                Point { ambient: scale(&v, 1.0 / norm(&v)) }
            }
            Manifold::Spd { n } => {
                let s = spd::random_symmetric(rng, n, 0.5);
                spd::exp(&spd::identity(n), &s, n).expect("exp from identity")
            }
            Manifold::Euclidean { d } => Point { ambient: gaussian_vec(rng, d) },
        }
    }

    /// Random tangent at `x` with Riemannian norm `r`.
    pub fn random_tangent<R: rand::Rng>(&self, rng: &mut R, x: &Point, r: f64) -> Tangent {
        let raw = gaussian_vec(rng, self.ambient_len());
        let mut v = self.project_tangent(x, &raw);
        let n = self.norm(x, &v);
        if n < 1e-14 {
            v = self.project_tangent(x, &vec![1.0; self.ambient_len()]);
        }
        let n = self.norm(x, &v);
        Tangent { base: x.clone(), vec: scale(&v, r / n) }
    }
}

/// Model function s_c(r): the zero-initial-value constant-curvature Jacobi
/// solution. Returns (s, s').
pub fn model_function_s(k_min: f64, r: f64) -> (f64, f64) {
    debug_assert!(r >= 0.0);
    if k_min > 0.0 {
        let sq = k_min.sqrt();
        ((sq * r).sin() / sq, (sq * r).cos())
    } else if k_min < 0.0 {
        let sq = (-k_min).sqrt();
        ((sq * r).sinh() / sq, (sq * r).cosh())
    } else {
        (r, 1.0)
    }
}

/// Companion model function s_c^(2)(r): the unit-initial-value, zero-slope
/// branch (cos / 1 / cosh).
pub fn model_function_s2(k_min: f64, r: f64) -> f64 {
    if k_min > 0.0 {
        (k_min.sqrt() * r).cos()
    } else if k_min < 0.0 {
        ((-k_min).sqrt() * r).cosh()
    } else {
        1.0
    }
}

/// Signed coefficient of the normal Jacobi field on a constant-curvature
/// space with J(0) = j0 E, J'(0) = dj0 E along a parallel unit normal E:
/// j(t) = j0 s_c^(2)(t) + dj0 s_c(t). The field norm is |j(t)|.
pub fn jacobi_closed_form(c: f64, t: f64, j0_perp_norm: f64, dj0_perp_norm: f64) -> f64 {
    debug_assert!(t >= 0.0);
    j0_perp_norm * model_function_s2(c, t) + dj0_perp_norm * model_function_s(c, t).0
}

/// Surface volume of the unit d-sphere (exact recurrence, no gamma calls).
pub fn sphere_volume(d: usize) -> f64 {
    // Vol(S^0) = 2, Vol(S^1) = 2 pi, Vol(S^d) = 2 pi Vol(S^{d-2}) / (d - 1).
    match d {
        0 => 2.0,
        1 => std::f64::consts::TAU,
        _ => std::f64::consts::TAU * sphere_volume(d - 2) / (d as f64 - 1.0),
    }
}

// Flat little-endian ambient coordinate helpers, shared across the crate.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub(crate) fn gaussian_vec<R: rand::Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    // Box-Muller keeps us independent of distribution-crate API churn.
    let mut out = Vec::with_capacity(len + 1);
    while out.len() < len {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u1.ln()).sqrt();
        out.push(r * u2.cos());
        out.push(r * u2.sin());
    }
    out.truncate(len);
    out
}
