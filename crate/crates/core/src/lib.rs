pub mod arith;
pub mod asymptotic;
pub mod bounds;
pub mod error;
pub mod expsums;
pub mod hp;
pub mod qseries;
pub use error::{Error, Result};
