use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the simulator can report. Each variant maps to one process
/// exit status in the command-line tool (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("selectivity violated in stage '{stage}': {detail}")]
    Selectivity { stage: String, detail: String },

    #[error("adiabaticity violated: parameter {parameter:.4} exceeds limit {limit}")]
    Adiabaticity { parameter: f64, limit: f64 },

    #[error("integration error: {message}")]
    Integration {
        message: String,
        suggested_dt: Option<f64>,
    },

    #[error("basis budget exceeded: {requested} states requested, budget {budget}")]
    BasisBudget { requested: usize, budget: usize },

    #[error("physics error: {0}")]
    Physics(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no fringe found: {0}")]
    NoFringe(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("{} warning(s) promoted to errors: {}", .0.len(), .0.join("; "))]
    StrictWarnings(Vec<String>),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("output encoding error: {0}")]
    Encoding(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn physics(msg: impl Into<String>) -> Self {
        Error::Physics(msg.into())
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Selectivity { .. } => 3,
            Error::Adiabaticity { .. } => 4,
            Error::Integration { .. } | Error::BasisBudget { .. } => 5,
            Error::Physics(_) | Error::Degenerate(_) => 6,
            Error::NoFringe(_) => 7,
            Error::Normalization(_) => 8,
            Error::StrictWarnings(_) => 9,
            Error::Io { .. } | Error::Encoding(_) => 10,
        }
    }
}
