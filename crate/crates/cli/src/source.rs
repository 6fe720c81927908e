use nonholo::config::Config;
use nonholo::sim::{figure, FIGURES};

use crate::args::Source;
use crate::error::CliError;

/// Config from a figure name, a file, or `fallback` when neither is given.
pub fn load(source: &Source, fallback: Option<&str>) -> Result<Config, CliError> {
    if let Some(path) = &source.config {
        return Ok(Config::load(path)?);
    }
    let name = source
        .figure
        .as_deref()
        .or(fallback)
        .ok_or_else(|| CliError::usage("--figure", "give a figure name or --config <file>"))?;
    let sc = figure(name).ok_or_else(|| {
        CliError::usage(
            "--figure",
            format!("unknown figure `{name}`, expected one of {}", FIGURES.join(", ")),
        )
    })?;
    Ok(Config::from_scenario(&sc))
}
