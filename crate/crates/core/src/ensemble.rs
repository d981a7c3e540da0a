//! Repeated runs whose elites seed one final run.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::evolution::{evolve, EvolutionConfig, EvolutionError, RunReport};
use crate::guidance::Guide;
use crate::program::ProgramTree;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("invalid ensemble config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub base: EvolutionConfig,
    pub n_runs: usize,
    /// One seed per run; empty means `base.seed + i` for run `i`.
    pub seeds: Vec<u64>,
    /// Seed for the final run; `None` means one past the largest run seed.
    pub final_seed: Option<u64>,
    /// Also hand the language-model seeds to the final run.
    pub llm_in_final: bool,
    /// Run the independent runs on separate threads. Ignored when a
    /// language model is attached.
    pub parallel_runs: bool,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            base: EvolutionConfig::default(),
            n_runs: 10,
            seeds: Vec::new(),
            final_seed: None,
            llm_in_final: false,
            parallel_runs: false,
        }
    }
}

impl EnsembleConfig {
    pub fn run_seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            (0..self.n_runs as u64).map(|i| self.base.seed.wrapping_add(i)).collect()
        } else {
            self.seeds.clone()
        }
    }

    pub fn final_run_seed(&self) -> u64 {
        self.final_seed
            .unwrap_or_else(|| self.run_seeds().into_iter().max().unwrap_or(0).wrapping_add(1))
    }

    pub fn validate(&self) -> Result<(), EnsembleError> {
        if self.n_runs == 0 {
            return Err(EnsembleError::InvalidConfig("n_runs must be at least 1".into()));
        }
        let seeds = self.run_seeds();
        if seeds.len() != self.n_runs {
            return Err(EnsembleError::InvalidConfig(format!(
                "{} seeds given for {} runs",
                seeds.len(),
                self.n_runs
            )));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seeds.len() {
            return Err(EnsembleError::InvalidConfig("run seeds must be distinct".into()));
        }
        self.base.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleReport {
    pub runs: Vec<RunReport>,
    pub final_run: RunReport,
    /// Over `runs` only.
    pub summary: Summary,
}

impl EnsembleReport {
    /// Elites harvested from the independent runs, in run order.
    pub fn harvested(&self) -> Vec<ProgramTree> {
        self.runs.iter().map(|r| r.elite.tree().clone()).collect()
    }
}

/// Runs `n_runs` independent searches, then one more seeded with their
/// elites. Every run uses the same corpus.
pub fn ensemble_run(
    cfg: &EnsembleConfig,
    corpus: &Corpus,
    mut llm: Option<&mut Guide<'_>>,
) -> Result<EnsembleReport, EnsembleError> {
    cfg.validate()?;
    let configs: Vec<EvolutionConfig> = cfg
        .run_seeds()
        .into_iter()
        .map(|seed| EvolutionConfig {
            seed,
            ..cfg.base.clone()
        })
        .collect();
    let runs: Vec<RunReport> = match llm.as_deref_mut() {
        None if cfg.parallel_runs => configs
            .par_iter()
            .map(|c| evolve(c, corpus, &[], None))
            .collect::<Result<_, _>>()?,
        None => configs
            .iter()
            .map(|c| evolve(c, corpus, &[], None))
            .collect::<Result<_, _>>()?,
        Some(guide) => configs
            .iter()
            .map(|c| evolve(c, corpus, &[], Some(&mut *guide)))
            .collect::<Result<_, _>>()?,
    };
    let final_llm = if cfg.llm_in_final { llm } else { None };
    finish_ensemble(cfg, corpus, runs, final_llm)
}

/// Runs only the final seeded run over already finished per-run reports.
/// `runs` must come from `cfg`'s run seeds for the result to match
/// [`ensemble_run`].
pub fn finish_ensemble(
    cfg: &EnsembleConfig,
    corpus: &Corpus,
    runs: Vec<RunReport>,
    final_llm: Option<&mut Guide<'_>>,
) -> Result<EnsembleReport, EnsembleError> {
    cfg.validate()?;
    let elites: Vec<ProgramTree> = runs.iter().map(|r| r.elite.tree().clone()).collect();
    let final_cfg = EvolutionConfig {
        seed: cfg.final_run_seed(),
        ..cfg.base.clone()
    };
    let final_run = evolve(&final_cfg, corpus, &elites, final_llm)?;
    let summary = aggregate(&runs);
    Ok(EnsembleReport {
        runs,
        final_run,
        summary,
    })
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> MeanStd {
        assert!(!values.is_empty(), "statistics of an empty sample");
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        MeanStd {
            mean,
            std: var.sqrt(),
        }
    }

    /// `0.700 (0.10)`: mean to `decimals`, std to two places.
    pub fn render(&self, decimals: usize) -> String {
        format!("{:.*} ({:.2})", decimals, self.mean, self.std)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub train: MeanStd,
    /// `None` when some run had no test split.
    pub test: Option<MeanStd>,
    pub length: MeanStd,
    pub height: MeanStd,
}

impl Summary {
    /// Table cells: train, test, length, height.
    pub fn cells(&self) -> [String; 4] {
        [
            self.train.render(3),
            self.test.map(|t| t.render(3)).unwrap_or_else(|| "-".into()),
            self.length.render(2),
            self.height.render(2),
        ]
    }
}

pub fn aggregate(reports: &[RunReport]) -> Summary {
    assert!(!reports.is_empty(), "aggregate needs at least one report");
    let train: Vec<f64> = reports.iter().map(|r| r.train_accuracy).collect();
    let test: Option<Vec<f64>> = reports.iter().map(|r| r.test_accuracy).collect();
    let length: Vec<f64> = reports.iter().map(|r| r.elite.length() as f64).collect();
    let height: Vec<f64> = reports.iter().map(|r| r.elite.height() as f64).collect();
    Summary {
        runs: reports.len(),
        train: MeanStd::of(&train),
        test: test.map(|t| MeanStd::of(&t)),
        length: MeanStd::of(&length),
        height: MeanStd::of(&height),
    }
}
