//! Language-model guidance: task descriptions, seed programs and guided
//! mutation. Model output is untrusted; every returned tree has been parsed
//! and kind-checked against the primitive set.

mod client;
mod extract;
mod live;
pub mod prompts;

pub use client::{ChatClient, ChatMessage, ClientError, MockClient, Role};
pub use extract::extract_programs;
pub use live::{LiveClient, LiveConfig, API_KEY_ENV};
pub use prompts::FailingExample;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Instance;
use crate::program::{PrimitiveSet, ProgramTree};

#[derive(Debug, Error)]
pub enum GuidanceError {
    #[error("guidance unavailable: {0}")]
    Unavailable(String),
    #[error("guided mutation failed after {attempts} attempts")]
    GuidedMutationFailed { attempts: u32 },
    #[error("invalid guidance settings: {0}")]
    InvalidSettings(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GuidanceSettings {
    /// Candidate explanations requested before the analyzer call.
    pub n_descriptions: usize,
    /// Seed programs wanted; also the most that are returned.
    pub min_seeds: usize,
    /// Attempts per guided mutation.
    pub mutation_retries: u32,
    /// Hard cap on calls in the seed loop.
    pub seed_call_cap: usize,
    /// Tries per description or analyzer request.
    pub request_retries: u32,
    /// Lowest-accuracy train instances shown in a mutation prompt.
    pub failing_examples: usize,
    /// Train instances rendered into description and seed prompts.
    pub prompt_instances: usize,
    /// Non-elite individuals sent for guided mutation per generation;
    /// `None` means `max(1, population_size / 100)`.
    pub mutation_cap: Option<usize>,
    pub live: LiveConfig,
}

impl Default for GuidanceSettings {
    fn default() -> Self {
        Self {
            n_descriptions: 5,
            min_seeds: 30,
            mutation_retries: 3,
            seed_call_cap: 20,
            request_retries: 3,
            failing_examples: 3,
            prompt_instances: 5,
            mutation_cap: None,
            live: LiveConfig::default(),
        }
    }
}

impl GuidanceSettings {
    pub fn validate(&self) -> Result<(), GuidanceError> {
        let counts = [
            ("n_descriptions", self.n_descriptions),
            ("min_seeds", self.min_seeds),
            ("mutation_retries", self.mutation_retries as usize),
            ("seed_call_cap", self.seed_call_cap),
            ("request_retries", self.request_retries as usize),
            ("prompt_instances", self.prompt_instances),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(GuidanceError::InvalidSettings(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn mutation_cap_for(&self, population_size: usize) -> usize {
        self.mutation_cap.unwrap_or((population_size / 100).max(1))
    }
}

fn request(
    client: &mut dyn ChatClient,
    messages: &[ChatMessage],
    retries: u32,
) -> Result<String, GuidanceError> {
    let mut last = None;
    for _ in 0..retries {
        match client.send(messages) {
            Ok(reply) => return Ok(reply),
            Err(e) => last = Some(e),
        }
    }
    Err(GuidanceError::Unavailable(
        last.map(|e| e.to_string()).unwrap_or_else(|| "no attempts made".into()),
    ))
}

fn check_examples(examples: &[Instance]) -> Result<(), GuidanceError> {
    if examples.is_empty() {
        return Err(GuidanceError::Unavailable("no examples to show".into()));
    }
    Ok(())
}

/// One candidate explanation of the task shown by `examples`.
pub fn generate_description(
    client: &mut dyn ChatClient,
    examples: &[Instance],
    settings: &GuidanceSettings,
) -> Result<String, GuidanceError> {
    check_examples(examples)?;
    request(client, &prompts::description_prompt(examples), settings.request_retries)
}

/// `n_descriptions` candidate explanations merged by one analyzer call.
pub fn describe_task(
    client: &mut dyn ChatClient,
    examples: &[Instance],
    settings: &GuidanceSettings,
) -> Result<String, GuidanceError> {
    let candidates = (0..settings.n_descriptions)
        .map(|_| generate_description(client, examples, settings))
        .collect::<Result<Vec<_>, _>>()?;
    request(
        client,
        &prompts::analyzer_prompt(&candidates, examples),
        settings.request_retries,
    )
}

/// Prompts for programs until `min_seeds` valid trees are collected or the
/// call cap is hit. Returns at most `min_seeds` trees.
pub fn generate_seed_individuals(
    client: &mut dyn ChatClient,
    description: &str,
    pset: &PrimitiveSet,
    examples: &[Instance],
    settings: &GuidanceSettings,
) -> Result<Vec<ProgramTree>, GuidanceError> {
    if description.trim().is_empty() {
        return Err(GuidanceError::Unavailable("empty task description".into()));
    }
    let messages = prompts::seed_prompt(description, pset, examples);
    let mut seeds = Vec::new();
    let mut last_error = None;
    for _ in 0..settings.seed_call_cap {
        if seeds.len() >= settings.min_seeds {
            break;
        }
        match client.send(&messages) {
            Ok(reply) => seeds.extend(extract_programs(&reply, pset)),
            Err(e) => last_error = Some(e),
        }
    }
    if seeds.is_empty() {
        let why = match last_error {
            Some(e) => format!("no valid seed programs; last error: {e}"),
            None => "no valid seed programs in any reply".into(),
        };
        return Err(GuidanceError::Unavailable(why));
    }
    seeds.truncate(settings.min_seeds);
    Ok(seeds)
}

/// Asks for an improved or shorter version of `program`. The first reply
/// holding a valid program wins; transport errors and unusable replies
/// each use up one attempt.
pub fn guided_mutation(
    client: &mut dyn ChatClient,
    description: &str,
    pset: &PrimitiveSet,
    program: &ProgramTree,
    score: f64,
    failing: &[FailingExample<'_>],
    settings: &GuidanceSettings,
) -> Result<ProgramTree, GuidanceError> {
    let text = crate::program::serialize_program(program, pset);
    let messages = prompts::mutation_prompt(description, pset, &text, score, failing);
    for _ in 0..settings.mutation_retries {
        if let Ok(reply) = client.send(&messages) {
            if let Some(tree) = extract_programs(&reply, pset).into_iter().next() {
                return Ok(tree);
            }
        }
    }
    Err(GuidanceError::GuidedMutationFailed {
        attempts: settings.mutation_retries,
    })
}

/// Counters kept by a [`Guide`] over one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuideStats {
    pub mutations_requested: usize,
    pub mutations_failed: usize,
}

/// What the evolution loop needs from a language model: a client, the task
/// description, and the seed programs produced up front.
pub struct Guide<'c> {
    client: &'c mut dyn ChatClient,
    settings: GuidanceSettings,
    description: String,
    seeds: Vec<ProgramTree>,
    stats: GuideStats,
}

impl<'c> Guide<'c> {
    pub fn new(
        client: &'c mut dyn ChatClient,
        settings: GuidanceSettings,
        description: String,
        seeds: Vec<ProgramTree>,
    ) -> Self {
        Self {
            client,
            settings,
            description,
            seeds,
            stats: GuideStats::default(),
        }
    }

    /// Describes the task from the first `prompt_instances` train instances
    /// and generates seed programs. Never looks at the test split.
    pub fn prepare(
        client: &'c mut dyn ChatClient,
        settings: GuidanceSettings,
        train: &[Instance],
        pset: &PrimitiveSet,
    ) -> Result<Self, GuidanceError> {
        settings.validate()?;
        let shown = &train[..train.len().min(settings.prompt_instances)];
        let description = describe_task(client, shown, &settings)?;
        let seeds = generate_seed_individuals(client, &description, pset, shown, &settings)?;
        Ok(Self::new(client, settings, description, seeds))
    }

    pub fn settings(&self) -> &GuidanceSettings {
        &self.settings
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn seeds(&self) -> &[ProgramTree] {
        &self.seeds
    }

    pub fn stats(&self) -> GuideStats {
        self.stats
    }

    /// Guided mutation; `None` when every attempt failed.
    pub fn mutate(
        &mut self,
        pset: &PrimitiveSet,
        program: &ProgramTree,
        score: f64,
        failing: &[FailingExample<'_>],
    ) -> Option<ProgramTree> {
        self.stats.mutations_requested += 1;
        let out = guided_mutation(
            &mut *self.client,
            &self.description,
            pset,
            program,
            score,
            failing,
            &self.settings,
        )
        .ok();
        if out.is_none() {
            self.stats.mutations_failed += 1;
        }
        out
    }
}
