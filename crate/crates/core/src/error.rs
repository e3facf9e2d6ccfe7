use thiserror::Error;

/// Errors raised by the simulation and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("edge {0} is not in the lattice")]
    EdgeNotInLattice(String),

    #[error("path is not closed: {0}")]
    NotClosed(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("loop syntax error: {0}")]
    LoopSyntax(String),

    #[error("locations {x} and {y} do not carry matching edges")]
    MismatchedLocations { x: usize, y: usize },

    #[error("padding hypothesis violated: {0}")]
    PaddingViolated(String),

    #[error("numerical fault: {0}")]
    NumericalFault(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudget(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
