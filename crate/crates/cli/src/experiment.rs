use std::path::PathBuf;

use evosynth_core::ensemble::aggregate;
use evosynth_core::guidance::{prompts::PROMPT_VERSION, GuideStats};
use evosynth_core::{
    default_primitive_set, ensemble_run, evolve_observed, generate_corpus_with, load_corpus, ChatClient,
    Corpus, CorpusParams, EvolutionConfig, GenerationStats, GuidanceSettings, Guide, LiveClient, MockClient,
    RunReport,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{aggregate_row, run_row, OutputDir};
use crate::spec::{ExperimentSpec, LlmMode};

#[derive(Serialize)]
struct CorpusInfo {
    task: String,
    seed: u64,
    train: usize,
    test: usize,
    /// Path it was loaded from; absent when generated.
    path: Option<PathBuf>,
    params: Option<CorpusParams>,
}

#[derive(Serialize)]
struct RunInfo {
    label: String,
    seed: u64,
    train_accuracy: f64,
    test_accuracy: Option<f64>,
    length: usize,
    height: usize,
    origin_of_elite: String,
    elite_program: String,
    seeded: usize,
    llm_seeded: usize,
    guide: Option<GuideStats>,
    evaluations: u64,
    wall_ms: u64,
}

impl RunInfo {
    fn new(label: &str, r: &RunReport) -> Self {
        Self {
            label: label.to_string(),
            seed: r.seed,
            train_accuracy: r.train_accuracy,
            test_accuracy: r.test_accuracy,
            length: r.elite.length(),
            height: r.elite.height(),
            origin_of_elite: r.elite.origin().name().into(),
            elite_program: r.elite_program.clone(),
            seeded: r.seeded,
            llm_seeded: r.llm_seeded,
            guide: r.guide,
            evaluations: r.total_evaluations,
            wall_ms: r.wall_ms,
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    prompt_version: &'static str,
    command: &'static str,
    argv: Vec<String>,
    spec: &'a ExperimentSpec,
    corpus: CorpusInfo,
    runs: Vec<RunInfo>,
    final_run: Option<RunInfo>,
}

fn manifest<'a>(command: &'static str, spec: &'a ExperimentSpec, corpus: &Corpus) -> Manifest<'a> {
    Manifest {
        tool: "evosynth",
        version: env!("CARGO_PKG_VERSION"),
        prompt_version: PROMPT_VERSION,
        command,
        argv: std::env::args().collect(),
        spec,
        corpus: CorpusInfo {
            task: corpus.task.name().into(),
            seed: corpus.seed,
            train: corpus.train_instances.len(),
            test: corpus.test_instances.len(),
            path: spec.corpus.clone(),
            params: spec.corpus_seed.map(|_| spec.corpus_params.clone()),
        },
        runs: Vec::new(),
        final_run: None,
    }
}

fn load_or_generate(spec: &ExperimentSpec) -> Result<Corpus, CliError> {
    let corpus = match (&spec.corpus, spec.corpus_seed) {
        (Some(path), _) => load_corpus(path)?,
        (None, Some(seed)) => {
            let task = spec.task.expect("validated: task present");
            generate_corpus_with(task, spec.train, spec.test, seed, &spec.corpus_params)?
        }
        (None, None) => unreachable!("validated: corpus source present"),
    };
    if let Some(task) = spec.task {
        if task != corpus.task {
            return Err(CliError::Usage(format!(
                "--task {task} does not match the corpus task {}",
                corpus.task
            )));
        }
    }
    Ok(corpus)
}

fn make_client(mode: &LlmMode, settings: &GuidanceSettings) -> Result<Option<Box<dyn ChatClient>>, CliError> {
    Ok(match mode {
        LlmMode::Off => None,
        LlmMode::Mock(path) => Some(Box::new(MockClient::from_file(path)?)),
        LlmMode::Live => Some(Box::new(LiveClient::from_env(settings.live.clone())?)),
    })
}

fn prepare<'c>(
    client: &'c mut Option<Box<dyn ChatClient>>,
    settings: &GuidanceSettings,
    corpus: &Corpus,
) -> Option<Guide<'c>> {
    let client = client.as_deref_mut()?;
    let pset = default_primitive_set();
    match Guide::prepare(client, settings.clone(), &corpus.train_instances, &pset) {
        Ok(guide) => Some(guide),
        Err(e) => {
            eprintln!("warning: {e}; continuing without language-model guidance");
            None
        }
    }
}

fn progress(verbose: bool, label: String) -> impl FnMut(&GenerationStats) {
    move |g: &GenerationStats| {
        if verbose {
            eprintln!(
                "{label} gen {:>5}: best {:.3} len {} height {} mean {:.3} pop {}",
                g.generation, g.best_fitness, g.best_length, g.best_height, g.mean_fitness, g.population
            );
        }
    }
}

fn describe(label: &str, r: &RunReport) -> String {
    let test = r
        .test_accuracy
        .map(|t| format!("{t:.3}"))
        .unwrap_or_else(|| "-".into());
    let mut line = format!(
        "{label}: train {:.3} test {test} length {} height {} origin {} ({} ms)",
        r.train_accuracy,
        r.elite.length(),
        r.elite.height(),
        r.elite.origin(),
        r.wall_ms
    );
    if r.llm_seeded > 0 {
        line.push_str(&format!(", {} llm_seed individuals in the first population", r.llm_seeded));
    }
    line
}

pub fn run(spec: &ExperimentSpec, verbose: bool) -> Result<(), CliError> {
    let corpus = load_or_generate(spec)?;
    let out = OutputDir::create(&spec.out)?;
    let settings = spec.evolution.llm.clone().unwrap_or_default();
    let mut client = make_client(&spec.llm, &settings)?;
    let mut reports = Vec::with_capacity(spec.repeat);
    let mut rows = Vec::new();
    let mut manifest = manifest("run", spec, &corpus);
    let pop = spec.evolution.population_size;
    for i in 0..spec.repeat {
        let label = format!("run_{i:02}");
        let cfg = EvolutionConfig {
            seed: spec.evolution.seed.wrapping_add(i as u64),
            ..spec.evolution.clone()
        };
        let mut guide = prepare(&mut client, &settings, &corpus);
        let report = evolve_observed(&cfg, &corpus, &[], guide.as_mut(), &mut progress(verbose, label.clone()))?;
        drop(guide);
        println!("{}", describe(&label, &report));
        out.write_run(&label, &report)?;
        rows.push(run_row(corpus.task, pop, &i.to_string(), &report));
        manifest.runs.push(RunInfo::new(&label, &report));
        reports.push(report);
    }
    let summary = aggregate(&reports);
    let agg = aggregate_row(corpus.task, pop, &summary, &reports);
    println!(
        "{} {}: train {} test {} length {} height {}",
        corpus.task, pop, agg[3], agg[4], agg[5], agg[6]
    );
    rows.push(agg);
    out.write_csv("results.csv", &rows)?;
    out.write_json("summary.json", &summary)?;
    out.write_json("manifest.json", &manifest)?;
    println!("results in {}", spec.out.display());
    Ok(())
}

pub fn ensemble(spec: &ExperimentSpec, verbose: bool) -> Result<(), CliError> {
    let corpus = load_or_generate(spec)?;
    let out = OutputDir::create(&spec.out)?;
    let settings = spec.evolution.llm.clone().unwrap_or_default();
    let mut client = make_client(&spec.llm, &settings)?;
    let mut guide = prepare(&mut client, &settings, &corpus);
    if verbose {
        eprintln!("running {} independent runs and one seeded run", spec.ensemble.n_runs);
    }
    let cfg = spec.ensemble_config();
    let report = ensemble_run(&cfg, &corpus, guide.as_mut())?;
    let pop = spec.evolution.population_size;
    let mut manifest = manifest("ensemble", spec, &corpus);
    let mut rows = Vec::new();
    for (i, r) in report.runs.iter().enumerate() {
        let label = format!("run_{i:02}");
        println!("{}", describe(&label, r));
        out.write_run(&label, r)?;
        rows.push(run_row(corpus.task, pop, &i.to_string(), r));
        manifest.runs.push(RunInfo::new(&label, r));
    }
    rows.push(aggregate_row(corpus.task, pop, &report.summary, &report.runs));
    println!("{}", describe("final*", &report.final_run));
    out.write_run("final", &report.final_run)?;
    rows.push(run_row(corpus.task, pop, "*", &report.final_run));
    manifest.final_run = Some(RunInfo::new("final", &report.final_run));
    out.write_csv("results.csv", &rows)?;
    out.write_json("summary.json", &report.summary)?;
    out.write_json("manifest.json", &manifest)?;
    println!("results in {}", spec.out.display());
    Ok(())
}
