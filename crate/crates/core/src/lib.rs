pub mod congruence;
pub mod error;
pub mod hyp;
pub mod jet;
pub mod quad;
pub mod sequence;
pub mod trace;

pub use error::{Error, Result};
