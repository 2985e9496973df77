use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("measurement strength {0} outside [0, 1]")]
    InvalidStrength(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not unitary (max |U'U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    #[error("unknown subsystem '{0}' (expected 'hot' or 'cold')")]
    UnknownSubsystem(String),

    #[error("unknown cycle kind '{0}'")]
    UnknownCycleKind(String),

    #[error("regime violation: {0} does not hold")]
    Regime(String),

    #[error("degenerate boundary beta_c*omega_c = beta_h*omega_h: {0}")]
    DegenerateBoundary(String),

    #[error("no measurement-induced engine at xi = 0")]
    UndefinedEngine,

    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("sweep produced no valid grid point")]
    EmptySweep,

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    /// True for errors that stem from the thermodynamic regime rather than
    /// from malformed input.
    pub fn is_regime(&self) -> bool {
        matches!(self, Error::Regime(_) | Error::DegenerateBoundary(_))
    }
}
