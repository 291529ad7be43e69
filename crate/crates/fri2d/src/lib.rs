//! Experiment drivers, file formats and the `fri2d` command line for sampling
//! and recovering 2-D pulse streams with [`fri2d_core`].

#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;

pub mod error;
pub mod experiments;
pub mod export;
pub mod io;

pub use error::{CliError, Result};
