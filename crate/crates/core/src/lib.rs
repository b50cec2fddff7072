pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod graphs;
pub mod metrics;
pub mod report;
pub mod spacefile;
pub mod verify;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
