pub mod ensemble;
pub mod error;
pub mod hermat;
pub mod means;
pub mod quad;
pub mod registry;
pub mod scalar;

pub use error::{Error, Result};
