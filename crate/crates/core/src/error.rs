use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported element order r = {0} (expected 1 or 2)")]
    UnsupportedOrder(usize),
    #[error("generator set has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("DOF matrix is singular: rank {rank} of {size}")]
    SingularDofMatrix { rank: usize, size: usize },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("level {level}: {source}")]
    Level {
        level: u32,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
