//! Exact and Monte Carlo tools for the hard-core lattice gas on `[-n, n]^d`:
//! odd cutsets, the shift transformations, interior approximations and
//! perfect sampling.

pub mod approx;
pub mod cli;
pub mod cutset;
pub mod error;
pub mod exact;
pub mod gibbs;
pub mod lattice;
pub mod sampler;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Rational;
pub use gibbs::{BoundaryCondition, Configuration};
pub use lattice::{Direction, LatticeBox, Parity, Vertex};
