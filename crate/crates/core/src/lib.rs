//! Prodsimplicial cell complexes on directed graphs, with a focus on the
//! word graphs of double occurrence words.

pub mod budget;
pub mod cli;
pub mod complex;
pub mod constructions;
pub mod digraph;
pub mod dow;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod verify;
pub mod wordgraph;

pub use error::{Error, Result};
