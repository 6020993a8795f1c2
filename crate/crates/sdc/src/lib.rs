//! File formats, Monte-Carlo experiments and the `sdc` command line for
//! the [[30,6,5]] symplectic double code. The algorithms live in
//! `sdc-core`; this crate adds IO, parallelism and reporting.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod formats;

pub use sdc_core as core;
