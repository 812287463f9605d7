//! Riemannian flow matching at desk scale.
//!
//! The crate is organized around five subsystems:
//!
//! - [`geometry`]: exact closed-form primitives (Exp, Log, transport, frames,
//!   curvature model functions) for the unit hypersphere, SPD matrices under
//!   the affine-invariant metric, and flat Euclidean space.
//! - [`bridge`]: geodesic-bridge conditional and marginal densities, the
//!   population velocity field, scores, analytic field perturbations, and the
//!   hypersphere regularity constants.
//! - [`sampler`]: manifold Euler integration with step schedules, the
//!   invertibility step guard, and the frozen-velocity interpolated field.
//! - [`metrics`]: binned total-variation estimation, rate regression, and the
//!   TV-derivative inequality diagnostic.
//! - [`oracle`]: independent brute-force oracles (ODE integrators, FD
//!   Jacobians, rejection histograms, bound sweeps) used to certify the
//!   closed-form implementations.

pub mod bridge;
pub mod geometry;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod sampler;

use thiserror::Error;

/// Error taxonomy shared across all subsystems.
#[derive(Debug, Error)]
pub enum RfmError {
    /// Input outside the caller contract (non-finite values, bad sizes, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Input outside the mathematical domain (cut locus, t >= 1, ...).
    #[error("domain error: {0}")]
    DomainError(String),
    /// A numeric procedure failed to converge or became unreliable.
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

pub type Result<T> = std::result::Result<T, RfmError>;
