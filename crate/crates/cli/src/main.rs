mod bench;
mod error;
mod experiment;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evosynth_core::{
    default_primitive_set, fitness, generate_corpus_with, load_corpus, parse_program, save_corpus,
    CorpusParams, FlatProgram, ProgramError, RunBudget, TaskKind,
};

use error::CliError;
use spec::{ExperimentSpec, LlmMode};

#[derive(Parser)]
#[command(name = "evosynth", version, about = "Evolve list-transformation programs from examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus utilities.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Repeated independent runs with per-run and aggregate results.
    Run(ExperimentArgs),
    /// Independent runs whose elites seed one final run.
    Ensemble(EnsembleArgs),
    /// Score a program file on a corpus.
    Eval(EvalArgs),
    /// Throughput of the flat machine against the reference evaluator.
    Bench(bench::BenchArgs),
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Generate a corpus file.
    Gen(CorpusGenArgs),
}

#[derive(Args)]
struct CorpusGenArgs {
    #[arg(long)]
    task: TaskKind,
    #[arg(long, default_value_t = 100)]
    train: usize,
    #[arg(long, default_value_t = 100)]
    test: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    min_len: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Mix identity instances into the inverse task.
    #[arg(long)]
    inverse_identity: bool,
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    task: Option<TaskKind>,
    /// Corpus file to load.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Generate the corpus from this seed instead.
    #[arg(long)]
    corpus_seed: Option<u64>,
    #[arg(long)]
    train: Option<usize>,
    #[arg(long)]
    test: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    repeat: Option<usize>,
    /// Seed of the first run; run i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    mut_prob: Option<f64>,
    #[arg(long)]
    xover_prob: Option<f64>,
    #[arg(long)]
    slack: Option<usize>,
    #[arg(long)]
    scale: Option<f64>,
    /// Passes per program run.
    #[arg(long)]
    iterations: Option<u32>,
    /// off, mock:<script> or live.
    #[arg(long)]
    llm: Option<LlmMode>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print one line per generation.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args, Clone)]
struct EnsembleArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Independent runs before the final one.
    #[arg(long)]
    runs: Option<usize>,
    /// Also give the language-model seeds to the final run.
    #[arg(long)]
    llm_in_final: bool,
    /// Run the independent runs on separate threads.
    #[arg(long)]
    parallel_runs: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// File holding one program.
    program: PathBuf,
    corpus: PathBuf,
    #[arg(long, default_value_t = 200)]
    iterations: u32,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentSpec, CliError> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::load(path)?,
            None => ExperimentSpec::default(),
        };
        macro_rules! set {
            ($field:expr, $flag:expr) => {
                if let Some(v) = $flag.clone() {
                    $field = v;
                }
            };
        }
        if self.task.is_some() {
            spec.task = self.task;
        }
        if self.corpus.is_some() {
            spec.corpus = self.corpus.clone();
            spec.corpus_seed = None;
        }
        if self.corpus_seed.is_some() {
            spec.corpus_seed = self.corpus_seed;
            spec.corpus = None;
        }
        set!(spec.train, self.train);
        set!(spec.test, self.test);
        set!(spec.repeat, self.repeat);
        set!(spec.llm, self.llm);
        set!(spec.out, self.out);
        let e = &mut spec.evolution;
        set!(e.population_size, self.pop);
        set!(e.n_generations, self.gens);
        set!(e.seed, self.seed);
        set!(e.workers, self.workers);
        set!(e.mut_prob, self.mut_prob);
        set!(e.xover_prob, self.xover_prob);
        set!(e.length_slack, self.slack);
        set!(e.fitness_scale, self.scale);
        if let Some(it) = self.iterations {
            if it == 0 {
                return Err(CliError::Usage("--iterations must be at least 1".into()));
            }
            e.budget = RunBudget::new(it);
        }
        if spec.llm != LlmMode::Off && e.llm.is_none() {
            e.llm = Some(Default::default());
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn corpus_gen(args: &CorpusGenArgs) -> Result<(), CliError> {
    let defaults = CorpusParams::default();
    let params = CorpusParams {
        min_len: args.min_len.unwrap_or(defaults.min_len),
        max_len: args.max_len.unwrap_or(defaults.max_len),
        inverse_identity: args.inverse_identity,
        ..defaults
    };
    let corpus = generate_corpus_with(args.task, args.train, args.test, args.seed, &params)?;
    save_corpus(&corpus, &args.out)?;
    println!(
        "wrote {} ({} train, {} test instances, task {}, seed {})",
        args.out.display(),
        corpus.train_instances.len(),
        corpus.test_instances.len(),
        corpus.task,
        corpus.seed
    );
    Ok(())
}

fn line_column(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    (line, column)
}

fn error_pos(e: &ProgramError) -> Option<usize> {
    match e {
        ProgramError::UnknownPrimitive { pos, .. }
        | ProgramError::Arity { pos, .. }
        | ProgramError::KindMismatch { pos, .. }
        | ProgramError::Unbalanced { pos }
        | ProgramError::Unexpected { pos, .. } => Some(*pos),
        ProgramError::Malformed(_) => None,
    }
}

fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let pset = default_primitive_set();
    let text = std::fs::read_to_string(&args.program).map_err(|e| CliError::io(&args.program, e))?;
    let tree = parse_program(&text, &pset).map_err(|e| {
        let (line, column) = line_column(&text, error_pos(&e).unwrap_or(0));
        CliError::Program {
            path: args.program.clone(),
            line,
            column,
            message: e.to_string(),
        }
    })?;
    if args.iterations == 0 {
        return Err(CliError::Usage("--iterations must be at least 1".into()));
    }
    let corpus = load_corpus(&args.corpus)?;
    let budget = RunBudget::new(args.iterations);
    let flat = FlatProgram::flatten(&tree, &pset);
    let score = |instances: &[evosynth_core::Instance]| {
        if instances.is_empty() {
            "-".to_string()
        } else {
            format!("{:.3}", fitness(&flat, instances, budget))
        }
    };
    println!("program: {}", evosynth_core::serialize_program(&tree, &pset));
    println!("task: {}", corpus.task);
    println!("length: {}", tree.len());
    println!("height: {}", tree.height(&pset));
    println!("train accuracy: {}", score(&corpus.train_instances));
    println!("test accuracy: {}", score(&corpus.test_instances));
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Corpus {
            command: CorpusCommand::Gen(args),
        } => corpus_gen(&args),
        Command::Run(args) => {
            let spec = args.resolve()?;
            experiment::run(&spec, args.verbose)
        }
        Command::Ensemble(args) => {
            let mut spec = args.experiment.resolve()?;
            if let Some(n) = args.runs {
                spec.ensemble.n_runs = n;
            }
            spec.ensemble.llm_in_final |= args.llm_in_final;
            spec.ensemble.parallel_runs |= args.parallel_runs;
            experiment::ensemble(&spec, args.experiment.verbose)
        }
        Command::Eval(args) => eval(&args),
        Command::Bench(args) => bench::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
