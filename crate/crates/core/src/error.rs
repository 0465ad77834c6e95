use thiserror::Error;

/// Failures raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavelength {value} um outside the valid range [{min}, {max}] um")]
    WavelengthOutOfRange { value: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The mismatch function has no sign change on the search bracket.
    #[error(
        "no phase-matching solution on [{lo_deg:.4}, {hi_deg:.4}] deg \
         (mismatch {f_lo:.6e} .. {f_hi:.6e}): {detail}"
    )]
    NoSolution {
        lo_deg: f64,
        hi_deg: f64,
        f_lo: f64,
        f_hi: f64,
        detail: String,
    },

    #[error("total internal reflection at the exit face (n sin theta = {0:.6})")]
    TotalInternalReflection(f64),

    #[error("pump amplitude is zero, gain rate undefined")]
    PumpZero,

    #[error("state has off-diagonal weight {0:.3e}")]
    NonDiagonal(f64),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("crystal file: {0}")]
    CrystalFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
