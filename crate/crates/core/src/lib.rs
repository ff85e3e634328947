//! Quantum symmetries of graphs built from sums and complements.

pub mod automorphisms;
pub mod canonical;
pub mod decomposition;
pub mod error;
pub mod graph;
pub mod homcount;
pub mod io;
pub mod magic;
pub mod quantum_expr;
mod refine;
pub mod schmidt;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Distance, Graph, VertexSet};
