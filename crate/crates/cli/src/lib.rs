//! Experiment orchestration for the kiae library: config files, the
//! three-variant comparison runner, artifact emission, and SVG scatter
//! plots.

pub mod config;
pub mod experiment;
pub mod logging;
pub mod plot;

pub use config::{parse_config, ConfigError, DataSource, ExperimentSpec, GammaSpec, Variant};
pub use experiment::{run_experiment, ExperimentOutcome, ResultRow};
pub use plot::emit_scatter;

use std::fmt;
use std::path::PathBuf;

/// Umbrella error for the runner and the binary.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Data(kiae::data::DataError),
    Knowledge(kiae::knowledge::KnowledgeError),
    Model(kiae::model::ModelError),
    Eval(kiae::eval::EvalError),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Data(e) => write!(f, "{e}"),
            CliError::Knowledge(e) => write!(f, "{e}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Eval(e) => write!(f, "{e}"),
            CliError::Io { path, source } => {
                write!(f, "I/O error on {}: {source}", path.display())
            }
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<kiae::data::DataError> for CliError {
    fn from(e: kiae::data::DataError) -> Self {
        CliError::Data(e)
    }
}

impl From<kiae::knowledge::KnowledgeError> for CliError {
    fn from(e: kiae::knowledge::KnowledgeError) -> Self {
        CliError::Knowledge(e)
    }
}

impl From<kiae::model::ModelError> for CliError {
    fn from(e: kiae::model::ModelError) -> Self {
        CliError::Model(e)
    }
}

impl From<kiae::eval::EvalError> for CliError {
    fn from(e: kiae::eval::EvalError) -> Self {
        CliError::Eval(e)
    }
}
