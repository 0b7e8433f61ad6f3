pub mod classify;
pub mod cli;
pub mod error;
pub mod involutions;
pub mod kernel;
pub mod model;
pub mod series;
pub mod uniform_g0;
pub mod uniform_g1;

pub use error::{Error, ErrorClass, Result};
