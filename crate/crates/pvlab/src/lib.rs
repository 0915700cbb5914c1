//! Experiment engine, file formats and command-line interface on top of
//! [`pvlab_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod io;
pub mod validate;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
