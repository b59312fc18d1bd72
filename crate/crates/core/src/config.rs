//! Numerical thresholds shared across the crate.
//!
//! The constants are the defaults; [`Tolerances`] carries overrides through
//! the entry points that accept one.

pub const MEMBERSHIP_TOL: f64 = 1e-8;
pub const TANGENT_TOL: f64 = 1e-9;
pub const RETRACT_BASIN: f64 = 0.5;
pub const DEGENERACY_REL: f64 = 1e-6;
pub const FLOW_GRAD_STOP: f64 = 1e-8;
pub const FLOW_CONVERGE_DIST: f64 = 1e-6;
pub const CRITICAL_GRAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest membership residual accepted for a manifold point.
    pub membership: f64,
    /// Largest normal component accepted for a tangent vector.
    pub tangent: f64,
    /// Largest residual a retraction will try to project back.
    pub retract_basin: f64,
    /// Hessian eigenvalues within this fraction of the spectral radius count as zero.
    pub degeneracy_rel: f64,
    /// Flow integration stops once the gradient norm drops below this.
    pub flow_grad_stop: f64,
    /// A converged flow must end this close to a critical point.
    pub flow_converge_dist: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: MEMBERSHIP_TOL,
            tangent: TANGENT_TOL,
            retract_basin: RETRACT_BASIN,
            degeneracy_rel: DEGENERACY_REL,
            flow_grad_stop: FLOW_GRAD_STOP,
            flow_converge_dist: FLOW_CONVERGE_DIST,
        }
    }
}
