//! Configuration parsing, single-point evaluation, sweep presets and CSV
//! emission on top of the `magnomech` library.

pub mod check;
pub mod config;
pub mod preset;
pub mod report;
pub mod sweep;
