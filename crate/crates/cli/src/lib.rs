//! Command-line front end: configs, reports, CSV and OBJ output.

pub mod commands;
pub mod config;
pub mod json;
pub mod output;

pub use commands::{parse_base, run_check, run_info, run_realize, RunOptions};
pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Io(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Degenerate(_) => commands::EXIT_DEGENERATE,
        }
    }
}
