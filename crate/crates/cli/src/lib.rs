//! Parameter sweeps, figure presets and oracle verification on top of
//! `secsel-core`.
//!
//! The `secsel` binary is a thin wrapper over [`app::run`]. Sweep points and
//! Monte Carlo batches run on the rayon pool; every output is assembled in a
//! fixed order so files are byte-stable for a given seed.

pub mod app;
pub mod config;
mod error;
pub mod output;
pub mod parallel;
pub mod presets;
pub mod sweep;
pub mod verify;

pub use error::CliError;
