//! Command-line front end for the copmix library: dataset simulation,
//! chain fitting, posterior summarization and density-grid export.

pub mod commands;
pub mod config;
pub mod drawsfile;
pub mod error;
pub mod ingest;
pub mod report;
