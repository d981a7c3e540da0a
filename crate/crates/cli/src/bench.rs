use std::time::Instant;

use clap::Args;
use evosynth_core::interpreter::reference_fitness;
use evosynth_core::program::random_program;
use evosynth_core::{default_primitive_set, generate_corpus, Evaluator, FlatProgram, RunBudget, TaskKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

#[derive(Args)]
pub struct BenchArgs {
    /// Random programs to score.
    #[arg(long, default_value_t = 1000)]
    pub pop: usize,
    /// Worker counts to time the flat machine with.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub workers: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value = "sorted")]
    pub task: evosynth_core::TaskKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub iterations: u32,
    /// Skip the reference evaluator.
    #[arg(long)]
    pub no_reference: bool,
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    if args.pop == 0 {
        println!("population 0: nothing to measure");
        return Ok(());
    }
    if args.instances == 0 || args.iterations == 0 || args.workers.contains(&0) {
        return Err(CliError::Usage(
            "--instances, --iterations and every --workers value must be at least 1".into(),
        ));
    }
    let task: TaskKind = args.task;
    let pset = default_primitive_set();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let trees: Vec<_> = (0..args.pop).map(|_| random_program(&pset, &mut rng, 1, 4)).collect();
    let flats: Vec<FlatProgram> = trees.iter().map(|t| FlatProgram::flatten(t, &pset)).collect();
    let corpus = generate_corpus(task, args.instances, 1, args.seed);
    let instances = &corpus.train_instances;
    let budget = RunBudget::new(args.iterations);
    println!(
        "{} random programs, {} {} instances, {} passes",
        args.pop, args.instances, task, args.iterations
    );

    let mut baseline: Option<(f64, Vec<f64>)> = None;
    let mut identical = true;
    for &w in &args.workers {
        let evaluator = Evaluator::new(w, budget);
        let start = Instant::now();
        let scores = evaluator.evaluate(&flats, instances);
        let secs = start.elapsed().as_secs_f64();
        let mut line = format!(
            "flat workers={w}: {secs:.3} s, {:.0} programs/s",
            args.pop as f64 / secs
        );
        match &baseline {
            None => baseline = Some((secs, scores)),
            Some((base_secs, base)) => {
                line.push_str(&format!(", {:.2}x vs workers={}", base_secs / secs, args.workers[0]));
                identical &= base.iter().zip(&scores).all(|(a, b)| a.to_bits() == b.to_bits());
            }
        }
        println!("{line}");
    }
    let (flat_secs, flat_scores) = baseline.expect("at least one worker count");
    if args.workers.len() > 1 {
        println!(
            "fitness identical across worker counts: {}",
            if identical { "yes" } else { "NO" }
        );
    }
    if !args.no_reference {
        let start = Instant::now();
        let reference: Vec<f64> = trees
            .iter()
            .map(|t| reference_fitness(t, instances, budget))
            .collect();
        let secs = start.elapsed().as_secs_f64();
        println!("reference workers=1: {secs:.3} s, {:.0} programs/s", args.pop as f64 / secs);
        let same = reference.iter().zip(&flat_scores).all(|(a, b)| a.to_bits() == b.to_bits());
        println!("flat vs reference fitness identical: {}", if same { "yes" } else { "NO" });
        if args.workers[0] == 1 {
            println!("speed ratio flat/reference at 1 worker: {:.2}x", secs / flat_secs);
        }
    }
    Ok(())
}
