use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vector modulus {norm} is not within 1e-6 of unity")]
    NotUnit { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The drive is weaker than the anisotropy, so the spin stays in its starting hemisphere.
    #[error(
        "confined orbit: anisotropy a = {a} is not below the drive field h = {h}; the spin cannot cross the equator"
    )]
    Confinement { h: f64, a: f64 },

    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("no root found: {0}")]
    NoRoot(String),

    /// Double root of the quartic first integral: the orbit is a separatrix with infinite period.
    #[error("separatrix orbit (double turning point near z = {z}); the period diverges")]
    Separatrix { z: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics, as opposed to bad input or infeasible designs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoRoot(_) | Error::Separatrix { .. } | Error::NonFinite { .. }
        )
    }
}
