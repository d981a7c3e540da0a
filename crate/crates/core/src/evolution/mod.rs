//! Generational evolutionary search over typed program trees.

mod engine;
mod individual;
mod selection;

pub use engine::{evolve, evolve_observed};
pub use individual::{Individual, Origin};
pub use selection::{
    better, elite, elite_index, length_bound_filter, length_bound_indices, sus_indices, sus_select,
    transform_fitness,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::guidance::{GuidanceSettings, GuideStats};
use crate::interpreter::RunBudget;
use crate::program::ProgramError;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),
    #[error("corpus has no training instances")]
    EmptyTrainSplit,
    #[error("seed program {index} is invalid: {source}")]
    InvalidSeed {
        index: usize,
        #[source]
        source: ProgramError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub n_generations: usize,
    /// Chance that a selected individual is mutated.
    pub mut_prob: f64,
    /// Chance that a consecutive pair is crossed over.
    pub xover_prob: f64,
    /// Allowed length above the best-fitness-shortest individual.
    pub length_slack: usize,
    /// Exponent scale of the selection weight transform.
    pub fitness_scale: f64,
    pub budget: RunBudget,
    pub seed: u64,
    pub init_min_height: usize,
    pub init_max_height: usize,
    /// Height limit of subtrees grown by mutation.
    pub mutation_max_height: usize,
    /// Evaluation threads.
    pub workers: usize,
    /// Fitness memo entries kept before the memo is cleared.
    pub memo_capacity: usize,
    pub llm: Option<GuidanceSettings>,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 300,
            n_generations: 1500,
            mut_prob: 0.5,
            xover_prob: 0.5,
            length_slack: 25,
            fitness_scale: 50.0,
            budget: RunBudget::default(),
            seed: 0,
            init_min_height: 1,
            init_max_height: 4,
            mutation_max_height: 4,
            workers: 1,
            memo_capacity: 500_000,
            llm: None,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolutionError> {
        let bad = |m: String| Err(EvolutionError::InvalidConfig(m));
        if self.population_size < 2 {
            return bad(format!("population_size must be at least 2, got {}", self.population_size));
        }
        for (name, p) in [("mut_prob", self.mut_prob), ("xover_prob", self.xover_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must be in [0, 1], got {p}"));
            }
        }
        if !(0.0..=700.0).contains(&self.fitness_scale) {
            return bad(format!("fitness_scale must be in [0, 700], got {}", self.fitness_scale));
        }
        if self.init_min_height > self.init_max_height {
            return bad("init_min_height exceeds init_max_height".into());
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.budget.iterations == 0 {
            return bad("budget must allow at least one iteration".into());
        }
        if let Some(llm) = &self.llm {
            llm.validate().map_err(|e| EvolutionError::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }
}

/// Snapshot taken after each evaluation step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Train fitness of the best individual found so far.
    pub best_fitness: f64,
    pub best_length: usize,
    pub best_height: usize,
    pub mean_fitness: f64,
    /// Population size before the length bound.
    pub population: usize,
    /// Population size after the length bound; equals `population` for the
    /// final snapshot, which is not filtered.
    pub filtered: usize,
    /// Programs actually run (memo misses) in this step.
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub seed: u64,
    pub generations: Vec<GenerationStats>,
    pub elite: Individual,
    /// Canonical text of the elite.
    pub elite_program: String,
    pub train_accuracy: f64,
    /// Elite accuracy on the test split; `None` when the split is empty.
    pub test_accuracy: Option<f64>,
    pub wall_ms: u64,
    /// Caller seeds and language-model seeds placed in the first population.
    pub seeded: usize,
    pub llm_seeded: usize,
    pub guide: Option<GuideStats>,
    pub total_evaluations: u64,
}

impl RunReport {
    /// Everything except wall time; two runs with equal outcomes are
    /// indistinguishable by their results.
    pub fn same_outcome(&self, other: &RunReport) -> bool {
        self.seed == other.seed
            && self.generations == other.generations
            && self.elite == other.elite
            && self.train_accuracy.to_bits() == other.train_accuracy.to_bits()
            && self.test_accuracy.map(f64::to_bits) == other.test_accuracy.map(f64::to_bits)
            && self.seeded == other.seeded
            && self.llm_seeded == other.llm_seeded
            && self.guide == other.guide
            && self.total_evaluations == other.total_evaluations
    }
}
