use serde::{Deserialize, Serialize};

use crate::program::{FlatProgram, PrimitiveSet, ProgramTree};

/// How an individual entered the population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Random,
    LlmSeed,
    LlmMutation,
    Mutation,
    Crossover,
    Elite,
    /// Caller-supplied seed program, e.g. an elite from an earlier run.
    Seed,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Random => "random",
            Origin::LlmSeed => "llm_seed",
            Origin::LlmMutation => "llm_mutation",
            Origin::Mutation => "mutation",
            Origin::Crossover => "crossover",
            Origin::Elite => "elite",
            Origin::Seed => "seed",
        }
    }
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A candidate program with its compiled form and cached train fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    tree: ProgramTree,
    flat: FlatProgram,
    fitness: Option<f64>,
    height: usize,
    origin: Origin,
}

impl Individual {
    pub fn new(tree: ProgramTree, pset: &PrimitiveSet, origin: Origin) -> Self {
        debug_assert!(tree.validate(pset).is_ok(), "kind-incorrect tree {tree:?}");
        let flat = FlatProgram::flatten(&tree, pset);
        let height = tree.height(pset);
        Self {
            tree,
            flat,
            fitness: None,
            height,
            origin,
        }
    }

    pub fn tree(&self) -> &ProgramTree {
        &self.tree
    }

    pub fn flat(&self) -> &FlatProgram {
        &self.flat
    }

    /// Swaps in a new tree, which drops the cached fitness.
    pub fn set_tree(&mut self, tree: ProgramTree, pset: &PrimitiveSet, origin: Origin) {
        *self = Self::new(tree, pset, origin);
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    /// Panics when the fitness has not been computed yet.
    pub fn cached_fitness(&self) -> f64 {
        self.fitness.expect("fitness not evaluated")
    }

    pub fn set_fitness(&mut self, f: f64) {
        debug_assert!((0.0..=1.0).contains(&f));
        self.fitness = Some(f);
    }

    /// Number of primitives.
    pub fn length(&self) -> usize {
        self.tree.len()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub(crate) fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }
}
