//! Library surface of the `acpose` command-line tool: argument definitions,
//! file formats and the subcommand implementations. The binary in `main.rs`
//! is a thin wrapper so integration tests can exercise everything here.

pub mod cli;
pub mod commands;
pub mod format;
