use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::selection::{better, elite, length_bound_filter, sus_select};
use super::{EvolutionConfig, EvolutionError, GenerationStats, Individual, Origin, RunReport};
use crate::corpus::{Corpus, Instance};
use crate::guidance::{FailingExample, Guide};
use crate::interpreter::{fitness, init_state, run_program, Evaluator, RunBudget};
use crate::program::{
    crossover_subtrees, default_primitive_set, mutate_subtree, random_program, serialize_program,
    PrimitiveSet, ProgramTree,
};

/// Train fitness by program, shared across generations of one run.
struct Memo {
    map: HashMap<Vec<u8>, f64>,
    capacity: usize,
}

/// Fills in every missing fitness. Returns the number of programs run.
fn evaluate(pop: &mut [Individual], train: &[Instance], evaluator: &Evaluator, memo: &mut Memo) -> usize {
    for ind in pop.iter_mut().filter(|ind| ind.fitness().is_none()) {
        if let Some(&f) = memo.map.get(ind.tree().nodes()) {
            ind.set_fitness(f);
        }
    }
    let mut batch: Vec<usize> = Vec::new();
    let mut seen: HashSet<&[u8]> = HashSet::new();
    for (i, ind) in pop.iter().enumerate() {
        if ind.fitness().is_none() && seen.insert(ind.tree().nodes()) {
            batch.push(i);
        }
    }
    drop(seen);
    let flats: Vec<_> = batch.iter().map(|&i| pop[i].flat()).collect();
    let scores = evaluator.evaluate(&flats, train);
    if memo.map.len() + batch.len() > memo.capacity {
        memo.map.clear();
    }
    for (&i, f) in batch.iter().zip(scores) {
        memo.map.insert(pop[i].tree().nodes().to_vec(), f);
    }
    for ind in pop.iter_mut().filter(|ind| ind.fitness().is_none()) {
        let f = memo.map[ind.tree().nodes()];
        ind.set_fitness(f);
    }
    batch.len()
}

fn failing_examples<'a>(
    ind: &Individual,
    train: &'a [Instance],
    budget: RunBudget,
    k: usize,
) -> Vec<FailingExample<'a>> {
    let mut runs: Vec<(f64, usize, Vec<i32>)> = train
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let result = run_program(ind.flat(), &mut init_state(inst), budget);
            let acc = crate::interpreter::accuracy(&result, &inst.testing.output);
            (acc, i, result.output)
        })
        .filter(|(acc, _, _)| *acc < 1.0)
        .collect();
    runs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    runs.into_iter()
        .take(k)
        .map(|(accuracy, i, produced)| FailingExample {
            instance: &train[i],
            produced,
            accuracy,
        })
        .collect()
}

fn llm_mutations(
    guide: &mut Guide<'_>,
    pset: &PrimitiveSet,
    targets: &[Individual],
    train: &[Instance],
    budget: RunBudget,
) -> Vec<Individual> {
    let k = guide.settings().failing_examples;
    let mut out = Vec::new();
    for target in targets {
        let failing = failing_examples(target, train, budget, k);
        if let Some(tree) = guide.mutate(pset, target.tree(), target.cached_fitness(), &failing) {
            out.push(Individual::new(tree, pset, Origin::LlmMutation));
        }
    }
    out
}

/// Runs the evolutionary search and reports the elite.
pub fn evolve(
    config: &EvolutionConfig,
    corpus: &Corpus,
    seeds: &[ProgramTree],
    llm: Option<&mut Guide<'_>>,
) -> Result<RunReport, EvolutionError> {
    evolve_observed(config, corpus, seeds, llm, &mut |_| {})
}

/// [`evolve`] with a callback after each evaluation step.
pub fn evolve_observed(
    config: &EvolutionConfig,
    corpus: &Corpus,
    seeds: &[ProgramTree],
    mut llm: Option<&mut Guide<'_>>,
    observer: &mut dyn FnMut(&GenerationStats),
) -> Result<RunReport, EvolutionError> {
    config.validate()?;
    let train = &corpus.train_instances;
    if train.is_empty() {
        return Err(EvolutionError::EmptyTrainSplit);
    }
    let pset = default_primitive_set();
    for (index, seed) in seeds.iter().enumerate() {
        seed.validate(&pset)
            .map_err(|source| EvolutionError::InvalidSeed { index, source })?;
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let evaluator = Evaluator::new(config.workers, config.budget);
    let mut memo = Memo {
        map: HashMap::new(),
        capacity: config.memo_capacity.max(1),
    };

    let mut pop: Vec<Individual> = (0..config.population_size)
        .map(|_| {
            let tree = random_program(&pset, &mut rng, config.init_min_height, config.init_max_height);
            Individual::new(tree, &pset, Origin::Random)
        })
        .collect();
    pop.extend(seeds.iter().map(|t| Individual::new(t.clone(), &pset, Origin::Seed)));
    let llm_seeds: Vec<ProgramTree> = llm.as_ref().map(|g| g.seeds().to_vec()).unwrap_or_default();
    for tree in &llm_seeds {
        // language-model output is re-checked even though the guide parsed it
        if tree.validate(&pset).is_ok() {
            pop.push(Individual::new(tree.clone(), &pset, Origin::LlmSeed));
        }
    }
    let llm_seeded = pop.len() - config.population_size - seeds.len();

    let mut best: Option<Individual> = None;
    let mut generations = Vec::with_capacity(config.n_generations + 1);
    let mut total_evaluations = 0u64;
    for generation in 0..=config.n_generations {
        // (a) evaluate
        let evaluations = evaluate(&mut pop, train, &evaluator, &mut memo);
        total_evaluations += evaluations as u64;
        let top = &pop[elite(&pop)];
        let replace = match &best {
            None => true,
            Some(b) => better(top.cached_fitness(), top.length(), b.cached_fitness(), b.length()),
        };
        if replace {
            best = Some(top.clone());
        }
        let global = best.as_ref().expect("elite after evaluation");
        let population = pop.len();
        let mean_fitness = pop.iter().map(Individual::cached_fitness).sum::<f64>() / population as f64;
        let last = generation == config.n_generations;

        // (b) length bound
        if !last {
            pop = length_bound_filter(pop, config.length_slack);
        }
        let stats = GenerationStats {
            generation,
            best_fitness: global.cached_fitness(),
            best_length: global.length(),
            best_height: global.height(),
            mean_fitness,
            population,
            filtered: pop.len(),
            evaluations,
        };
        observer(&stats);
        generations.push(stats);
        if last {
            break;
        }
        let global = global.clone();

        // targets for guided mutation are drawn from the scored pool
        let llm_targets: Vec<Individual> = match llm.as_deref() {
            None => Vec::new(),
            Some(guide) => {
                let cap = guide.settings().mutation_cap_for(config.population_size).min(pop.len());
                let mut targets = vec![global.clone()];
                let picked = sample(&mut rng, pop.len(), cap);
                targets.extend(picked.into_iter().map(|i| pop[i].clone()));
                targets
            }
        };

        // (c) selection
        let mut next = sus_select(&pop, config.population_size, config.fitness_scale, &mut rng);

        // (d) mutation
        for ind in next.iter_mut() {
            if rng.gen_bool(config.mut_prob) {
                let tree = mutate_subtree(ind.tree(), &pset, &mut rng, config.mutation_max_height);
                ind.set_tree(tree, &pset, Origin::Mutation);
            }
        }

        // (e) crossover of consecutive pairs
        for pair in next.chunks_exact_mut(2) {
            if rng.gen_bool(config.xover_prob) {
                let (a, b) = crossover_subtrees(pair[0].tree(), pair[1].tree(), &pset, &mut rng);
                pair[0].set_tree(a, &pset, Origin::Crossover);
                pair[1].set_tree(b, &pset, Origin::Crossover);
            }
        }

        // (f) guided mutation, appended to the pool
        if let Some(guide) = llm.as_deref_mut() {
            next.extend(llm_mutations(guide, &pset, &llm_targets, train, config.budget));
        }

        // (g) elitism
        next.push(global.with_origin(Origin::Elite));
        pop = next;
    }

    let elite = best.expect("at least one evaluation step");
    let test_accuracy = (!corpus.test_instances.is_empty())
        .then(|| fitness(elite.flat(), &corpus.test_instances, config.budget));
    Ok(RunReport {
        seed: config.seed,
        generations,
        elite_program: serialize_program(elite.tree(), &pset),
        train_accuracy: elite.cached_fitness(),
        test_accuracy,
        elite,
        wall_ms: started.elapsed().as_millis() as u64,
        seeded: seeds.len(),
        llm_seeded,
        guide: llm.map(|g| g.stats()),
        total_evaluations,
    })
}
