use crate::special::SpecialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical singularity: {0}")]
    Singularity(String),
    #[error("special function failure: {0}")]
    Special(#[from] SpecialError),
    #[error("monte carlo starvation: {accepted} accepted trials, at least {required} required")]
    Starvation { accepted: u64, required: u64 },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code reported by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Unsupported(_) | Error::Io(_) => 2,
            Error::Singularity(_) | Error::Special(_) => 3,
            Error::Starvation { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
