//! Graphs from iterated barycentric subdivision of a triangle, their effective
//! resistances, and the resistance scaling of the hexacarpet.

pub mod analysis;
pub mod complex;
pub mod error;
pub mod graphs;
pub mod network;

pub use complex::{CellWord, Dim, HexPoint, HexSymmetry, Point, SideSet, SimplexId, SimplicialComplex};
pub use error::{Error, Result};
pub use graphs::{GraphFamily, VertexPartition, WeightedGraph};
pub use network::{Flow, Potential, Resistance, ResistanceResult, SolverOptions};
