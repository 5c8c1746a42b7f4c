//! Ideal triangulations of punctured surfaces and polygons with tropical and
//! classical edge coordinates.

pub mod error;
pub mod hyperbolic;
pub mod io;
pub mod lamination;
pub mod measures;
pub mod oracle;
pub mod simplify;
pub mod tri;

pub use error::{Error, Result};
pub use tri::{EdgeId, Mode, QuadNeighborhood, Triangulation};
