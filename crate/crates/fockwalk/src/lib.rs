//! File formats and the command layer behind the `fockwalk` binary.
//!
//! Every subcommand produces a [`table::Table`]: CSV with a header row and
//! 16 significant digits, and a JSON mirror carrying the same rows plus the
//! [`manifest::RunManifest`] of the run. Manifests are also appended, one per
//! line, to a JSONL log.

pub mod commands;
pub mod config;
pub mod grid;
pub mod manifest;
pub mod table;

pub use grid::Grid;
pub use table::{Cell, Table};
