//! Inversions of oriented graphs: invertibility tests, decycling families,
//! exact search on small instances, instance generators and kernelization.

pub mod error;
pub mod f2;
pub mod fas;
pub mod graph;
pub mod invertibility;
pub mod oracle;
pub mod decycler;
pub mod generators;
pub mod io;
pub mod kernel;

pub use error::{InvError, Result};
pub use graph::{
    apply_family, invert, is_acyclic, push, topological_order, InversionFamily, OrientedGraph,
    SizeMode, Tournament, Vertex,
};
