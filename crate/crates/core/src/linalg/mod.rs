//! Exact integer elimination and symmetric eigensolvers.

pub mod eigen;
pub mod exact;
