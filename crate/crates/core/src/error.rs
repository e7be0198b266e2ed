use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("iteration {iteration} needs {count} beams but only {n_rf} RF chains are available")]
    BeamOverflow {
        iteration: usize,
        count: usize,
        n_rf: usize,
    },

    #[error("no rectangular grid places exactly {n_beams} beams inside the ROI")]
    NoDftGrid { n_beams: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("ground point ({x:.1}, {y:.1}) m never enters the ROI during the requested window")]
    EmptySeries { x: f64, y: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable short tag used in the CLI's single-line error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::BeamOverflow { .. } => "beam-overflow",
            Error::NoDftGrid { .. } => "no-dft-grid",
            Error::Parse { .. } => "parse",
            Error::UnknownKey(_) => "unknown-key",
            Error::EmptySeries { .. } => "empty-series",
            Error::Io { .. } => "io",
        }
    }
}
