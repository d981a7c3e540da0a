//! Program execution. `machine` is the fast flat stack machine, `reference`
//! a direct recursive evaluator with the same semantics that serves as its
//! test oracle, and `fitness` scores programs and whole populations.
//!
//! One run executes the root `RunBudget::iterations` times against the same
//! state. Cursor moves clamp at list bounds, a loop runs its body only for
//! counts in `1..=30` and at most three loops may be active at once, and any
//! violation halts the run with `Status::Error`.

mod fitness;
mod machine;
mod reference;
mod state;

pub use fitness::{
    accuracy, evaluate_population, fitness, instance_accuracies, reference_fitness, Evaluator,
};
pub use machine::{run_program, Machine};
pub use reference::reference_run;
pub use state::{init_state, MachineState, Status, MAX_LOOP_COUNT, MAX_LOOP_NESTING};

use serde::{Deserialize, Serialize};

use crate::corpus::Value;

/// Number of times the root is executed per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunBudget {
    pub iterations: u32,
}

impl Default for RunBudget {
    fn default() -> Self {
        Self { iterations: 200 }
    }
}

impl RunBudget {
    pub fn new(iterations: u32) -> Self {
        assert!(iterations >= 1, "a run needs at least one iteration");
        Self { iterations }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub output: Vec<Value>,
    pub status: Status,
    /// Stack entries (flat machine) or node visits (reference) processed.
    pub steps: u64,
}
