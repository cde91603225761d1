use thiserror::Error;

/// Errors raised by the stability computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the model.
    #[error("domain error: {0}")]
    Domain(String),

    /// A denominator factor of a rational coefficient vanishes.
    #[error("singular denominator: factor {factor} vanishes")]
    Singular { factor: &'static str },

    /// `u^2` hits one of the poles of the classical KAM determinant.
    #[error("resonance pole of the KAM determinant at u^2 = {u_sq}")]
    ResonancePole { u_sq: f64 },

    /// The characteristic quadratic in `omega^2` has complex roots.
    #[error("linearly unstable: frequency discriminant {discriminant} < 0")]
    Unstable { discriminant: f64 },

    /// The perturbed resonance quadratic in `mu` has no real root.
    #[error("no real root: quadratic discriminant {discriminant} < 0")]
    NoRealRoot { discriminant: f64 },

    /// The equilibrium formula leaves its range of validity.
    #[error("degenerate equilibrium: {0}")]
    DegeneratePoint(String),

    /// The particle is too close to one of the primaries.
    #[error("collision singularity: r1 = {r1:e}, r2 = {r2:e}")]
    Collision { r1: f64, r2: f64 },

    /// The adaptive integrator could not honour its tolerances.
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    /// `linearize` was asked to expand around a point that is not at rest.
    #[error("not an equilibrium: residual norm {residual:e} exceeds {limit:e}")]
    NotEquilibrium { residual: f64, limit: f64 },
}

impl Error {
    /// True for numerical singularities (vanishing factors, poles, collisions).
    pub fn is_singularity(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::ResonancePole { .. }
                | Error::Collision { .. }
                | Error::StepUnderflow { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
