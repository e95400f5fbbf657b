//! Exact lattice, code and orbifold computations.

pub mod codes;
pub mod construction;
pub mod error;
pub mod exact;
pub mod isometry;
pub mod lattice;
pub mod leech;
pub mod orbifold;
pub mod roots;
pub mod suites;
pub mod triality;

pub use error::{Error, Result};
