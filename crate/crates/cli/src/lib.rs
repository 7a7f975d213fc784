//! Library side of the `predreg` command-line tool: input parsing, report
//! encodings and the subcommand drivers. `main.rs` only wires these to clap.

pub mod commands;
pub mod grid;
pub mod report;
pub mod series;
