//! The four list-transformation tasks, their instance generator and the
//! on-disk corpus format.
//!
//! A corpus file is JSON with a fixed key order and one instance per line,
//! so regenerated corpora diff cleanly:
//!
//! ```text
//! {
//!   "task": "sorted",
//!   "seed": 42,
//!   "train_instances": [
//!     {"variant":"descending","training":[{"input":[5,4,3],"output":[5,4,3]}],"testing":{"input":[1,3],"output":[3,1]}},
//!     ...
//!   ],
//!   "test_instances": [
//!     ...
//!   ]
//! }
//! ```

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Element type of every list in the corpus.
pub type Value = i32;

/// Largest element a corpus list may hold.
pub const MAX_ELEMENT: Value = 9;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error in {split}[{index}]: {message}")]
    Validation {
        split: &'static str,
        index: usize,
        message: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Count,
    MaxMin,
    Inverse,
    Sorted,
}

impl TaskKind {
    pub const ALL: [TaskKind; 4] = [
        TaskKind::Count,
        TaskKind::MaxMin,
        TaskKind::Inverse,
        TaskKind::Sorted,
    ];

    /// Every variant that is legal for this task.
    pub fn variants(self) -> &'static [Variant] {
        match self {
            TaskKind::Count => &[Variant::None],
            TaskKind::MaxMin => &[Variant::Max, Variant::Min],
            TaskKind::Inverse => &[Variant::Inverted, Variant::Identity],
            TaskKind::Sorted => &[Variant::Ascending, Variant::Descending],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Count => "count",
            TaskKind::MaxMin => "max_min",
            TaskKind::Inverse => "inverse",
            TaskKind::Sorted => "sorted",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "count" => Ok(TaskKind::Count),
            "max_min" | "maxmin" => Ok(TaskKind::MaxMin),
            "inverse" => Ok(TaskKind::Inverse),
            "sorted" | "sort" => Ok(TaskKind::Sorted),
            other => Err(CorpusError::InvalidArgument(format!("unknown task `{other}`"))),
        }
    }
}

/// The hidden per-instance choice a program has to infer from the training
/// pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    None,
    Max,
    Min,
    Inverted,
    Identity,
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub input: Vec<Value>,
    pub output: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub variant: Variant,
    pub training: Vec<Example>,
    pub testing: Example,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub task: TaskKind,
    pub seed: u64,
    pub train_instances: Vec<Instance>,
    pub test_instances: Vec<Instance>,
}

/// Knobs of the instance generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusParams {
    pub min_len: usize,
    pub max_len: usize,
    pub min_training: usize,
    pub max_training: usize,
    /// Also draw the `identity` variant for the inverse task. Off by default:
    /// the reference inverse program reverses unconditionally.
    pub inverse_identity: bool,
}

impl Default for CorpusParams {
    fn default() -> Self {
        Self {
            min_len: 1,
            max_len: 10,
            min_training: 2,
            max_training: 5,
            inverse_identity: false,
        }
    }
}

impl CorpusParams {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.min_len == 0 || self.min_len > self.max_len {
            return Err(CorpusError::InvalidArgument(format!(
                "list length range [{}, {}] is empty or includes 0",
                self.min_len, self.max_len
            )));
        }
        if self.max_len > 30 {
            return Err(CorpusError::InvalidArgument(
                "lists longer than 30 cannot be traversed by a single loop".into(),
            ));
        }
        if self.min_training == 0 || self.min_training > self.max_training {
            return Err(CorpusError::InvalidArgument(format!(
                "training example range [{}, {}] is empty or includes 0",
                self.min_training, self.max_training
            )));
        }
        Ok(())
    }

    /// Variants the generator draws from for `task`.
    pub fn active_variants(&self, task: TaskKind) -> &'static [Variant] {
        match task {
            TaskKind::Inverse if !self.inverse_identity => &[Variant::Inverted],
            _ => task.variants(),
        }
    }

    fn len_range(&self, task: TaskKind) -> (usize, usize) {
        match task {
            // keep the answer inside the element range
            TaskKind::Count => (self.min_len.min(9), self.max_len.min(9)),
            _ => (self.min_len, self.max_len),
        }
    }
}

/// The output a task variant produces for `input`.
pub fn ground_truth(
    task: TaskKind,
    variant: Variant,
    input: &[Value],
) -> Result<Vec<Value>, CorpusError> {
    if input.is_empty() {
        return Err(CorpusError::InvalidArgument("input list is empty".into()));
    }
    if let Some(v) = input.iter().find(|v| !(0..=MAX_ELEMENT).contains(*v)) {
        return Err(CorpusError::InvalidArgument(format!(
            "element {v} outside [0, {MAX_ELEMENT}]"
        )));
    }
    let out = match (task, variant) {
        (TaskKind::Count, Variant::None) => vec![input.len() as Value],
        (TaskKind::MaxMin, Variant::Max) => vec![*input.iter().max().unwrap()],
        (TaskKind::MaxMin, Variant::Min) => vec![*input.iter().min().unwrap()],
        (TaskKind::Inverse, Variant::Inverted) => input.iter().rev().copied().collect(),
        (TaskKind::Inverse, Variant::Identity) => input.to_vec(),
        (TaskKind::Sorted, Variant::Ascending) => {
            let mut v = input.to_vec();
            v.sort_unstable();
            v
        }
        (TaskKind::Sorted, Variant::Descending) => {
            let mut v = input.to_vec();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        }
        (task, variant) => {
            return Err(CorpusError::InvalidArgument(format!(
                "variant {variant:?} is not defined for task {task}"
            )))
        }
    };
    Ok(out)
}

fn random_list<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (usize, usize)) -> Vec<Value> {
    let len = rng.gen_range(lo..=hi);
    (0..len).map(|_| rng.gen_range(0..=MAX_ELEMENT)).collect()
}

/// Draws one instance. Training examples are resampled until each one, on
/// its own, tells the instance's variant apart from the other active ones.
pub fn generate_instance<R: Rng + ?Sized>(
    task: TaskKind,
    rng: &mut R,
    params: &CorpusParams,
) -> Instance {
    let variants = params.active_variants(task);
    let variant = variants[rng.gen_range(0..variants.len())];
    let lens = params.len_range(task);
    let n_training = rng.gen_range(params.min_training..=params.max_training);

    let make = |input: Vec<Value>| {
        let output = ground_truth(task, variant, &input).expect("generator respects ranges");
        Example { input, output }
    };

    let mut training = Vec::with_capacity(n_training);
    while training.len() < n_training {
        let input = random_list(rng, lens);
        let example = make(input);
        let informative = variants.iter().filter(|v| **v != variant).all(|other| {
            ground_truth(task, *other, &example.input).unwrap() != example.output
        });
        if informative {
            training.push(example);
        }
    }
    let testing = make(random_list(rng, lens));
    Instance {
        variant,
        training,
        testing,
    }
}

pub fn generate_corpus(task: TaskKind, n_train: usize, n_test: usize, seed: u64) -> Corpus {
    generate_corpus_with(task, n_train, n_test, seed, &CorpusParams::default())
        .expect("default parameters are valid")
}

pub fn generate_corpus_with(
    task: TaskKind,
    n_train: usize,
    n_test: usize,
    seed: u64,
    params: &CorpusParams,
) -> Result<Corpus, CorpusError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let train_instances = (0..n_train)
        .map(|_| generate_instance(task, &mut rng, params))
        .collect();
    let test_instances = (0..n_test)
        .map(|_| generate_instance(task, &mut rng, params))
        .collect();
    Ok(Corpus {
        task,
        seed,
        train_instances,
        test_instances,
    })
}

impl Corpus {
    /// Checks element ranges and that every pair matches its instance's
    /// ground truth.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let splits = [
            ("train_instances", &self.train_instances),
            ("test_instances", &self.test_instances),
        ];
        for (split, instances) in splits {
            for (index, instance) in instances.iter().enumerate() {
                let fail = |message: String| CorpusError::Validation {
                    split,
                    index,
                    message,
                };
                if !self.task.variants().contains(&instance.variant) {
                    return Err(fail(format!(
                        "variant {:?} is not defined for task {}",
                        instance.variant, self.task
                    )));
                }
                if instance.training.is_empty() {
                    return Err(fail("instance has no training pairs".into()));
                }
                for example in instance.training.iter().chain(Some(&instance.testing)) {
                    let bad = example
                        .input
                        .iter()
                        .chain(&example.output)
                        .find(|v| !(0..=MAX_ELEMENT).contains(*v));
                    if let Some(v) = bad {
                        return Err(fail(format!("element {v} outside [0, {MAX_ELEMENT}]")));
                    }
                    let expected = ground_truth(self.task, instance.variant, &example.input)
                        .map_err(|e| fail(e.to_string()))?;
                    if expected != example.output {
                        return Err(fail(format!(
                            "output {:?} does not match {:?} for input {:?}",
                            example.output, expected, example.input
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Renders the canonical text form.
    pub fn to_text(&self) -> String {
        fn split(out: &mut String, key: &str, instances: &[Instance]) {
            out.push_str(&format!("  \"{key}\": ["));
            for (i, instance) in instances.iter().enumerate() {
                out.push_str(if i == 0 { "\n    " } else { ",\n    " });
                out.push_str(&serde_json::to_string(instance).expect("instance serializes"));
            }
            if !instances.is_empty() {
                out.push_str("\n  ");
            }
            out.push(']');
        }
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"task\": \"{}\",\n", self.task.name()));
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        split(&mut out, "train_instances", &self.train_instances);
        out.push_str(",\n");
        split(&mut out, "test_instances", &self.test_instances);
        out.push_str("\n}\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Corpus, CorpusError> {
        let corpus: Corpus = serde_json::from_str(text).map_err(|e| CorpusError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        corpus.validate()?;
        Ok(corpus)
    }
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    fs::write(path, corpus.to_text()).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Corpus::from_text(&text)
}
