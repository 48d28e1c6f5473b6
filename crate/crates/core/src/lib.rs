pub mod cli;
pub mod complex;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod operators;
pub mod reduction;
pub mod specseq;
pub mod spectra;

pub use error::{Error, Result};
