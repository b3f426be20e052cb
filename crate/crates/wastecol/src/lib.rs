//! File formats, reports and the command-line front end for
//! [`wastecol_core`].
//!
//! * [`instance`] reads the published `time.txt` / `waste.txt` pairs.
//! * [`solution`] reads and writes JSON solution files and refuses stale ones.
//! * [`config`] maps TOML files onto [`wastecol_core::ga::GaConfig`].
//! * [`history`] writes per-generation CSV.
//! * [`render`] draws SVG route maps.
//! * [`report`] holds the benchmark and tuning harnesses.
//! * [`cli`] is the `wastecol` command.

pub mod cli;
pub mod config;
pub mod error;
pub mod history;
pub mod instance;
pub mod render;
pub mod report;
pub mod solution;

pub use error::{Error, Result};
