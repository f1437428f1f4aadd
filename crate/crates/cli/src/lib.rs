//! Command-line driver for the fractal-screen BEM: run configuration,
//! solution files, a solution cache, CSV output and the refinement studies.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod config;
pub mod error;
pub mod io;
pub mod output;
pub mod study;

pub use config::{Geometry, MeshSpec, QuadSpec, RunConfig, WaveNumberSpec};
pub use error::CliError;
