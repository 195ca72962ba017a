use thiserror::Error;

/// Errors raised by model construction, numerics, formula evaluation and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bracket [{lo}, {hi}] does not contain a sign change (f(lo)={f_lo}, f(hi)={f_hi})")]
    BracketInvalid {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("quadrature on [{a}, {b}] did not converge: estimated error {error:e} after {subdivisions} subdivisions")]
    NoConvergence {
        a: f64,
        b: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("root isolation failed: {0}")]
    RootIsolationFailure(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("Laplace inversion unstable at x={x}: successive estimates {first} and {second} disagree")]
    InversionUnstable { x: f64, first: f64, second: f64 },

    #[error("denominator is non-positive ({0:e}); quadrature has failed")]
    DenominatorNonPositive(f64),

    #[error("simulation horizon too short: censored-mass bound {bound:e} exceeds 0.1 x std error {std_error:e}")]
    HorizonTooShort { bound: f64, std_error: f64 },

    #[error("discretization unstable: estimates at dt ({coarse}) and dt/2 ({fine}) differ by {z:.2} standard errors")]
    DiscretizationUnstable { coarse: f64, fine: f64, z: f64 },
}

impl Error {
    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidModel(_) | Error::InvalidParameter(_) | Error::BracketInvalid { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
