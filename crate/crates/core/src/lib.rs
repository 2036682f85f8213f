//! Exact grove connection probabilities on annulus graphs with one outer
//! node, and closed-form loop-erased random walk intensities on the square,
//! triangular and hexagonal lattices.

pub mod error;
pub mod exactnum;

pub use error::{Error, Result};
pub mod combinat;
pub mod annular;
pub mod latticegreen;
pub mod cutgraph;
pub mod lerwintensity;
pub mod oracle;
