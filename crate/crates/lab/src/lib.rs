//! Batch front end for `hurwitz-core`: job configuration, JSON/CSV reports,
//! the on-disk correlator cache and the `qrlab` subcommands.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;
