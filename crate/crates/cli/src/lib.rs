//! Library side of the `fibzeta` command-line tool, split out so the
//! commands can be driven from tests without spawning a process.

pub mod commands;
pub mod grid;
pub mod literal;
pub mod settings;
