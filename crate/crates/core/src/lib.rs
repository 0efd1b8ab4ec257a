pub mod contfrac;
pub mod decimal;
pub mod error;
pub mod heights;
pub mod numerics;
pub mod padovan;
pub mod reduction;
pub mod repdigit;
pub mod search;

pub use error::{Error, Result};
