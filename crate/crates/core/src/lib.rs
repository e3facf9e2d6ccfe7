//! Lattice Yang-Mills loop equations: simulation, exact loop algebra and verification.

pub mod cli;
pub mod error;
pub mod group;
pub mod lattice;
pub mod loops;
pub mod observables;
pub mod oracle;
pub mod sampler;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use group::{AlgebraElement, GroupElement, GroupKind, GroupSpec};
pub use lattice::{DirectedEdge, Lattice, Plaquette};
pub use loops::{Loop, LoopSequence, OpKind, OperationSets};
pub use observables::{ActionParams, Configuration};
pub use sampler::{ChainConfig, Scheme};
pub use stats::MCEstimate;
