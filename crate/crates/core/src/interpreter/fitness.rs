use std::borrow::Borrow;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use super::machine::Machine;
use super::reference::reference_run;
use super::state::{init_state, Status};
use super::{RunBudget, RunResult};
use crate::corpus::{Instance, Value};
use crate::program::{FlatProgram, ProgramTree};

fn positional_accuracy(output: &[Value], status: Status, expected: &[Value]) -> f64 {
    assert_eq!(
        output.len(),
        expected.len(),
        "output buffer length must equal the expected output length"
    );
    if status == Status::Error {
        return 0.0;
    }
    if expected.is_empty() {
        return 1.0;
    }
    let hits = output.iter().zip(expected).filter(|(a, b)| a == b).count();
    hits as f64 / expected.len() as f64
}

/// Fraction of positions where the output matches `expected`; an errored
/// run scores 0.
pub fn accuracy(result: &RunResult, expected: &[Value]) -> f64 {
    positional_accuracy(&result.output, result.status, expected)
}

fn run_instance(machine: &mut Machine, flat: &FlatProgram, instance: &Instance, budget: RunBudget) -> f64 {
    let mut state = init_state(instance);
    machine.run(flat, &mut state, budget);
    positional_accuracy(&state.testing_output, state.status, &instance.testing.output)
}

fn mean_accuracy(machine: &mut Machine, flat: &FlatProgram, instances: &[Instance], budget: RunBudget) -> f64 {
    assert!(!instances.is_empty(), "fitness needs at least one instance");
    let total: f64 = instances
        .iter()
        .map(|inst| run_instance(machine, flat, inst, budget))
        .sum();
    total / instances.len() as f64
}

/// Accuracy on each instance's testing pair, in instance order.
pub fn instance_accuracies(flat: &FlatProgram, instances: &[Instance], budget: RunBudget) -> Vec<f64> {
    let mut machine = Machine::new();
    instances
        .iter()
        .map(|inst| run_instance(&mut machine, flat, inst, budget))
        .collect()
}

/// Mean testing-pair accuracy over `instances`.
pub fn fitness(flat: &FlatProgram, instances: &[Instance], budget: RunBudget) -> f64 {
    mean_accuracy(&mut Machine::new(), flat, instances, budget)
}

/// `fitness` computed with the recursive reference evaluator. Accumulates
/// in the same order, so results match the flat machine bit for bit.
pub fn reference_fitness(tree: &ProgramTree, instances: &[Instance], budget: RunBudget) -> f64 {
    assert!(!instances.is_empty(), "fitness needs at least one instance");
    let total: f64 = instances
        .iter()
        .map(|inst| {
            let mut state = init_state(inst);
            let r = reference_run(tree, &mut state, budget);
            positional_accuracy(&r.output, r.status, &inst.testing.output)
        })
        .sum();
    total / instances.len() as f64
}

/// Scores populations on a fixed-size worker pool. Results land at fixed
/// indices and each program is scored by a single worker, so the output is
/// identical for any worker count.
pub struct Evaluator {
    pool: ThreadPool,
    workers: usize,
    budget: RunBudget,
}

impl Evaluator {
    pub fn new(workers: usize, budget: RunBudget) -> Self {
        assert!(workers >= 1, "need at least one worker");
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("evosynth-eval-{i}"))
            .build()
            .expect("thread pool");
        Self {
            pool,
            workers,
            budget,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn budget(&self) -> RunBudget {
        self.budget
    }

    pub fn evaluate<F>(&self, flats: &[F], instances: &[Instance]) -> Vec<f64>
    where
        F: Borrow<FlatProgram> + Sync,
    {
        let budget = self.budget;
        if self.workers == 1 {
            let mut machine = Machine::new();
            return flats
                .iter()
                .map(|f| mean_accuracy(&mut machine, f.borrow(), instances, budget))
                .collect();
        }
        self.pool.install(|| {
            flats
                .par_iter()
                .with_min_len(8)
                .map_init(Machine::new, |machine, f| {
                    mean_accuracy(machine, f.borrow(), instances, budget)
                })
                .collect()
        })
    }
}

/// `fitness` for every program, computed on `workers` threads.
pub fn evaluate_population(
    flats: &[FlatProgram],
    instances: &[Instance],
    budget: RunBudget,
    workers: usize,
) -> Vec<f64> {
    Evaluator::new(workers, budget).evaluate(flats, instances)
}
