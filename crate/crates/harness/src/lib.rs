//! Experiment runner and command-line front end for `streamdfs`.

pub mod cli;
pub mod experiment;
pub mod rows;
