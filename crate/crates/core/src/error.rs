use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong between reading an instance and reporting a volume.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("constraint {row} has an all-zero normal")]
    ZeroNormal { row: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{m} constraints cannot bound a polytope in dimension {n} (need at least {need})", need = n + 1)]
    TooFewConstraints { m: usize, n: usize },

    #[error("feasible region is empty")]
    Infeasible,

    #[error("feasible region is unbounded along coordinate {axis}")]
    Unbounded { axis: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("rounding: shape matrix lost positive definiteness at iteration {iteration}")]
    RoundingCholesky { iteration: usize },

    #[error("rounding: no sandwich after {iterations} shallow cuts")]
    RoundingStalled { iterations: usize },

    #[error("walk produced an empty chord [{t_min}, {t_max}]")]
    EmptyChord { t_min: f64, t_max: f64 },

    #[error("phase {phase}: no sample landed in the inner body")]
    EmptyPhase { phase: usize },

    #[error("phase {phase}: rescaled start point left the body")]
    StartOutside { phase: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("rejection oracle limited to dimension {max}, got {n}")]
    OracleDimension { n: usize, max: usize },

    #[error("generator gave up after {attempts} unbounded draws")]
    GenerationFailed { attempts: usize },

    #[error("no admissible splitting hyperplane after {attempts} attempts")]
    SplitFailed { attempts: usize },

    #[error("trial {index} failed: {source}")]
    Trial {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable code, printed by the CLI ahead of the message.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::ZeroNormal { .. } => "zero_normal",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::TooFewConstraints { .. } => "too_few_constraints",
            Error::Infeasible => "infeasible",
            Error::Unbounded { .. } => "unbounded",
            Error::NotPositiveDefinite { .. } => "not_positive_definite",
            Error::RoundingCholesky { .. } => "rounding_cholesky",
            Error::RoundingStalled { .. } => "rounding_stalled",
            Error::EmptyChord { .. } => "empty_chord",
            Error::EmptyPhase { .. } => "empty_phase",
            Error::StartOutside { .. } => "start_outside",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::OracleDimension { .. } => "oracle_dimension",
            Error::GenerationFailed { .. } => "generation_failed",
            Error::SplitFailed { .. } => "split_failed",
            Error::Trial { .. } => "trial_failed",
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                "file_not_found"
            }
            Error::Io { .. } => "io",
        }
    }
}
