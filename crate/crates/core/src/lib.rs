pub mod ainfcat;
pub mod cli;
pub mod amod;
pub mod error;
pub mod fixtures;
pub mod grlin;
pub mod twcx;
pub mod twist;

pub use error::{Error, Result};
