//! Definition language and commands for the `gspan` tool.

pub mod commands;
pub mod document;
