//! File formats, run configuration and the `fockpsi` command line front-end.

pub mod cli;
pub mod config;
pub mod formats;
pub mod parse;
