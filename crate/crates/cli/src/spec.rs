//! Experiment description: a TOML file whose values can be overridden on
//! the command line.

use std::path::{Path, PathBuf};

use evosynth_core::{CorpusParams, EnsembleConfig, EvolutionConfig, TaskKind};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Where the language model comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum LlmMode {
    Off,
    Mock(PathBuf),
    Live,
}

impl std::str::FromStr for LlmMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(LlmMode::Off),
            "live" => Ok(LlmMode::Live),
            _ => match s.strip_prefix("mock:") {
                Some(path) if !path.is_empty() => Ok(LlmMode::Mock(path.into())),
                _ => Err(format!("unknown llm mode `{s}`; expected off, mock:<script> or live")),
            },
        }
    }
}

impl TryFrom<String> for LlmMode {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<LlmMode> for String {
    fn from(m: LlmMode) -> String {
        match m {
            LlmMode::Off => "off".into(),
            LlmMode::Live => "live".into(),
            LlmMode::Mock(p) => format!("mock:{}", p.display()),
        }
    }
}

/// Everything a `run` or `ensemble` invocation needs. Serialized into the
/// manifest in resolved form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub task: Option<TaskKind>,
    /// Existing corpus file.
    pub corpus: Option<PathBuf>,
    /// Generate a corpus with this seed instead of loading one.
    pub corpus_seed: Option<u64>,
    pub train: usize,
    pub test: usize,
    pub corpus_params: CorpusParams,
    pub repeat: usize,
    pub llm: LlmMode,
    pub out: PathBuf,
    pub evolution: EvolutionConfig,
    pub ensemble: EnsembleOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleOptions {
    pub n_runs: usize,
    pub seeds: Vec<u64>,
    pub final_seed: Option<u64>,
    pub llm_in_final: bool,
    pub parallel_runs: bool,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        let d = EnsembleConfig::default();
        Self {
            n_runs: d.n_runs,
            seeds: d.seeds,
            final_seed: d.final_seed,
            llm_in_final: d.llm_in_final,
            parallel_runs: d.parallel_runs,
        }
    }
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            task: None,
            corpus: None,
            corpus_seed: None,
            train: 100,
            test: 100,
            corpus_params: CorpusParams::default(),
            repeat: 10,
            llm: LlmMode::Off,
            out: PathBuf::from("results"),
            evolution: EvolutionConfig::default(),
            ensemble: EnsembleOptions::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.corpus.is_none() && self.corpus_seed.is_none() {
            return Err(CliError::Usage(
                "no corpus given: pass --corpus <file> or --corpus-seed <n>".into(),
            ));
        }
        if self.corpus.is_some() && self.corpus_seed.is_some() {
            return Err(CliError::Usage("--corpus and --corpus-seed are mutually exclusive".into()));
        }
        if self.corpus_seed.is_some() && self.task.is_none() {
            return Err(CliError::Usage("generating a corpus needs --task".into()));
        }
        if self.repeat == 0 {
            return Err(CliError::Usage("--repeat must be at least 1".into()));
        }
        self.evolution
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }

    pub fn ensemble_config(&self) -> EnsembleConfig {
        EnsembleConfig {
            base: self.evolution.clone(),
            n_runs: self.ensemble.n_runs,
            seeds: self.ensemble.seeds.clone(),
            final_seed: self.ensemble.final_seed,
            llm_in_final: self.ensemble.llm_in_final,
            parallel_runs: self.ensemble.parallel_runs,
        }
    }
}
