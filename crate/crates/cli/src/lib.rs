//! Command-line front end: scenario configs, the `optimize`, `evaluate`,
//! `rank`, `count-placements` and `render` commands, and their file formats.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod layout;
pub mod render;
pub mod report;

pub use config::{load_config, parse_config, ScenarioConfig, Weights};
pub use error::CliError;
pub use layout::{load_layout, LayoutFile};
