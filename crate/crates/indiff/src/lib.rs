//! Command-line front end, configuration files, reports and the Monte-Carlo
//! oracle for `indiff-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod oracle;
pub mod report;
