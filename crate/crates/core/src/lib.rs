pub mod cli;
pub mod error;
pub mod exactfield;
pub mod grouplab;
pub mod skewseries;
pub mod spanlab;

pub use error::{Error, Result};
