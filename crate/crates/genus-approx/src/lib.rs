//! Approximate Euler genus, orientable genus, crossing number and planar
//! vertex/edge deletion for bounded-degree graphs.
//!
//! Every drawing produced here is a combinatorial rotation system with edge
//! signs, and every answer is either a drawing that re-validates by face
//! tracing or a rejection carrying evidence that the true value exceeds the
//! requested budget. The [`oracle`] module provides exhaustive ground truth
//! for small graphs.

pub mod graphcore;
pub mod planarity;
pub mod embedding;
pub mod decomp;
pub mod gridminor;
pub mod patchwork;
pub mod genusdraw;
pub mod reductions;
pub mod oracle;
pub mod cli;

pub use graphcore::{Edge, Graph, GraphError, Vertex};
