//! File formats, result emission and the command line for `sentinel-core`.

pub mod config;
pub mod error;
pub mod graph_file;
pub mod legacy;
pub mod output;
pub mod trace_csv;

pub use error::{CliError, Result};
