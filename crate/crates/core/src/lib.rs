pub mod campaign;
pub mod caratheodory;
pub mod error;
pub mod generate;
pub mod geomkernel;
pub mod homology;
pub mod scomplex;
pub mod tverberg;
pub mod vset;

pub use error::{Error, Result};
pub use geomkernel::{PointConfig, Rat};
pub use vset::VSet;
