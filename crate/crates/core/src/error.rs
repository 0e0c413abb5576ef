use thiserror::Error;

/// Everything that can go wrong between reading a scenario and emitting a profile.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive input: {0}")]
    NonPositiveInput(&'static str),

    #[error("causality violation: sound speed squared {0} outside (0, 1)")]
    CausalityViolation(f64),

    #[error("invalid equation of state: {0}")]
    InvalidEos(String),

    #[error("invalid fluid state: {0}")]
    InvalidState(String),

    #[error("degenerate field configuration: {0}")]
    DegenerateField(String),

    #[error("magnetosonic roots are complex (discriminant {0:e})")]
    ComplexMagnetosonicRoots(f64),

    #[error("unphysical phase point (y = {y}, v = {v}): {reason}")]
    UnphysicalPoint { y: f64, v: f64, reason: &'static str },

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("locus is multi-valued near y = {at}")]
    MultiValued { at: f64 },

    #[error("no bracket found for locus at {at}")]
    BracketNotFound { at: f64 },

    #[error("degenerate rest point: {0}")]
    DegeneratePoint(String),

    #[error("degenerate configuration (parallel or perpendicular field): {0}")]
    DegenerateConfiguration(String),

    #[error("profile not connected: left the corridor at (y = {y}, v = {v})")]
    NotConnected { y: f64, v: f64 },

    #[error("step size underflow at x = {x}")]
    StiffnessLimit { x: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {constraint}")]
    Validation { field: String, constraint: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
