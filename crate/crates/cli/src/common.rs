use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::Args as ClapArgs;
use secondlang::config::{self, Config, Mode};
use secondlang::decision::{Engine, EngineError, MODEL_FILE};
use secondlang::LanguageCode;

/// Malformed configuration, arguments or input files.
pub const EXIT_CONFIG: u8 = 2;
/// A model or dictionary is missing or unreadable.
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            error: error.into(),
        }
    }

    pub fn resource(error: impl Into<anyhow::Error>) -> Self {
        CliError {
            code: EXIT_RESOURCE,
            error: error.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: 1,
            error: e.into(),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Flags shared by every command that loads an engine.
#[derive(Debug, Clone, ClapArgs)]
pub struct EngineArgs {
    /// Configuration directory holding similar.conf and dictionaries.conf.
    #[arg(long, env = config::CONFIG_ENV, default_value = "config")]
    pub config: PathBuf,
    /// Model file; defaults to model.nglm inside the configuration directory.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Override the configured error threshold (0 to 1).
    #[arg(long)]
    pub threshold: Option<f64>,
}

impl EngineArgs {
    pub fn model_path(&self) -> PathBuf {
        self.model
            .clone()
            .unwrap_or_else(|| self.config.join(MODEL_FILE))
    }

    pub fn load_config(&self) -> CliResult<Config> {
        let mut config = config::load_config(&self.config).map_err(|e| {
            if e.is_missing_resource() {
                CliError::resource(e)
            } else {
                CliError::config(e)
            }
        })?;
        if let Some(t) = self.threshold {
            if !(0.0..=1.0).contains(&t) {
                return Err(CliError::config(anyhow!(
                    "--threshold {t} is outside [0, 1]"
                )));
            }
            config.settings.error_threshold = t;
        }
        Ok(config)
    }

    /// Loads the model and just the dictionaries `target` needs.
    pub fn load_engine(&self, target: &LanguageCode) -> CliResult<(Config, Engine)> {
        let config = self.load_config()?;
        let mut langs = config.similar.similar_languages(target);
        if langs.len() == 1 {
            langs.clear();
        }
        let engine =
            Engine::load(&config, &self.model_path(), Some(&langs)).map_err(engine_error)?;
        engine
            .validate_target(target)
            .map_err(|e| CliError::resource(EngineError::from(e)))?;
        Ok((config, engine))
    }
}

pub fn engine_error(e: EngineError) -> CliError {
    match &e {
        EngineError::Config(c) if !c.is_missing_resource() => CliError::config(e),
        _ => CliError::resource(e),
    }
}

pub fn parse_code(s: &str) -> Result<LanguageCode, String> {
    s.parse()
        .map_err(|e: secondlang::lang::InvalidLanguageCode| e.to_string())
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::config(anyhow!("cannot read {}: {e}", path.display())))
}
