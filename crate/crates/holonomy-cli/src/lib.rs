//! Command-line front end for the holonomy library: JSON/CSV reports,
//! file-based matrix input, and a randomized inequality fuzzer.

pub mod commands;
pub mod fuzz;
pub mod io;
pub mod report;
