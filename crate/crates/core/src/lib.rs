//! Exact-arithmetic constructions and checks for complex transversals, halfspace depth,
//! Tverberg-type partitions and the cohomological computations behind them.

pub mod cohomology;
pub mod complex;
pub mod depth;
pub mod error;
pub mod fh_index;
pub mod gadgets;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod polytope;
pub mod scalar;
pub mod transversal;
pub mod tverberg;

pub use error::{Error, Result};
pub use scalar::Q;
