//! Document format and subcommands behind the `ftori` binary.

pub mod commands;
pub mod document;
