//! Library surface of the `rotor` binary, exposed so integration tests
//! can drive complete runs in-process.

pub mod config;
pub mod error;
pub mod execute;

use std::path::Path;

pub use config::{
    parse_config_str, parse_position, resolve, AgentBlock, ConfigFile, ImageSource, Overrides,
    ResolvedAgent, RunConfig,
};
pub use error::CliError;
pub use execute::{
    echoed_config, execute, render_report, ExecOutcome, BASELINE_RNG, CONFIG_ECHO_HEADER,
};

/// Reads and resolves a config file. Image paths inside the file are
/// interpreted relative to the file's directory.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::config(format!("{}: {err}", path.display())))?;
    let file = parse_config_str(&text)?;
    let base = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    resolve(file, base, overrides)
}
