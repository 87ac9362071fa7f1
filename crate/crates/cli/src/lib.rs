//! Command-line front end for linear ranking function synthesis: loop files
//! in, verdicts, ranking functions and parameter spaces out.

pub mod bench;
pub mod commands;
pub mod gen;
pub mod report;
