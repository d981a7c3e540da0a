//! Evolutionary program synthesis for list-transformation puzzles, with
//! optional language-model guidance.
//!
//! Programs are typed trees over a fixed set of list primitives. They are
//! compiled to flat arrays and run by a stack machine, scored on generated
//! task corpora, and improved by a generational search.

pub mod corpus;
pub mod ensemble;
pub mod evolution;
pub mod guidance;
pub mod interpreter;
pub mod program;

pub use corpus::{
    generate_corpus, generate_corpus_with, load_corpus, save_corpus, Corpus, CorpusError,
    CorpusParams, Example, Instance, TaskKind, Value, Variant,
};
pub use ensemble::{aggregate, ensemble_run, finish_ensemble, EnsembleConfig, EnsembleError, EnsembleReport, MeanStd, Summary};
pub use evolution::{
    evolve, evolve_observed, EvolutionConfig, EvolutionError, GenerationStats, Individual, Origin,
    RunReport,
};
pub use guidance::{
    ChatClient, ChatMessage, ClientError, GuidanceError, GuidanceSettings, Guide, LiveClient, LiveConfig,
    MockClient,
};
pub use interpreter::{
    evaluate_population, fitness, init_state, reference_run, run_program, Evaluator, RunBudget, RunResult,
    Status,
};
pub use program::{
    default_primitive_set, known_solution, parse_program, serialize_program, FlatProgram, PrimitiveSet,
    ProgramError, ProgramTree, ValueKind,
};
