//! Files, commands and tooling around the `stripack` library.

pub mod bench;
pub mod commands;
pub mod format;
pub mod generate;
pub mod render;
