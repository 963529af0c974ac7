//! Library side of the `mwsense` command-line tool: configuration, output
//! formatting and the subcommands themselves.

pub mod commands;
pub mod config;
pub mod output;
