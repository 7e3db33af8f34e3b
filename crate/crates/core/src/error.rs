use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("torsion level {level} too low for N = {needed}")]
    LevelTooLow { level: u32, needed: u32 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("2-adic stabilization did not converge after {0} rounds")]
    Stabilization(usize),
    #[error("element is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("did not converge: {0}")]
    NoConvergence(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
