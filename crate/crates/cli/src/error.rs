use thiserror::Error;

/// Everything that stops a run before it produces a verdict (exit code 1).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] gcdsum_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
