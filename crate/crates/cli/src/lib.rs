//! File formats, configuration, and command implementations behind the
//! `lesc` binary. Everything IO-shaped lives here; the algorithms live in
//! `lesc-core`.

pub mod commands;
pub mod config;
pub mod formats;
pub mod manifest;
