use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] pvlab_core::Error),
    #[error("replicate with seed {seed} failed: {source}")]
    Replicate { seed: u64, source: pvlab_core::Error },
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("format error: {0}")]
    Format(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl HarnessError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Core(pvlab_core::Error::OutOfRegime { .. })
            | Self::Core(pvlab_core::Error::InvalidDomain(_))
            | Self::Core(pvlab_core::Error::InvalidArgument(_))
            | Self::Core(pvlab_core::Error::WrongRegime(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
