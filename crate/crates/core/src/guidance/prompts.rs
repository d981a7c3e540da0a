//! Prompt templates. Wording is ours; bump [`PROMPT_VERSION`] whenever a
//! template changes so recorded runs stay attributable.

use std::fmt::Write;

use crate::corpus::{Example, Instance, Value};
use crate::program::{Primitive, PrimitiveSet};

use super::client::ChatMessage;

pub const PROMPT_VERSION: &str = "2";

const SYSTEM: &str = "You are an expert at inferring list transformations from examples \
and at writing programs in a small typed domain-specific language.";

/// `[8, 5, 3]`
pub fn render_list(values: &[Value]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn render_pair(out: &mut String, pair: &Example) {
    let _ = writeln!(out, "Input: {}", render_list(&pair.input));
    let _ = writeln!(out, "Output: {}", render_list(&pair.output));
}

/// One instance in the plain-text layout used throughout the prompts:
/// numbered training examples followed by the testing pair.
pub fn render_instance(instance: &Instance) -> String {
    let mut out = String::from("Training\n");
    for (i, pair) in instance.training.iter().enumerate() {
        let _ = write!(out, "\nExample {}\n\n", i + 1);
        render_pair(&mut out, pair);
    }
    out.push_str("\nTesting\n\n");
    render_pair(&mut out, &instance.testing);
    out
}

pub fn render_instances(instances: &[Instance]) -> String {
    let blocks: Vec<String> = instances
        .iter()
        .enumerate()
        .map(|(i, inst)| format!("### Instance {}\n\n{}", i + 1, render_instance(inst)))
        .collect();
    blocks.join("\n")
}

/// Name, signature and one-line semantics of every primitive in `pset`.
pub fn primitive_docs(pset: &PrimitiveSet) -> String {
    let mut out = String::new();
    for sig in pset.signatures() {
        let doc = Primitive::from_opcode(sig.opcode)
            .filter(|p| p.name() == sig.name)
            .map(Primitive::doc)
            .unwrap_or("");
        let _ = writeln!(out, "- {}: {}", sig.render(), doc);
    }
    out
}

const LANGUAGE_RULES: &str = "Programs are nested calls such as \
`prog2(testing_output_write(testing_input_max()), testing_output_move_right())`. \
Leaves are written with empty parentheses. Argument kinds must match the signatures; \
WInteger and RInteger values may fill Integer slots. The root must be an Operation. \
The whole program runs 200 times in a row on each instance and keeps its cursors \
and the output list between runs. The output list starts as a copy of the testing input.";

pub fn description_prompt(examples: &[Instance]) -> Vec<ChatMessage> {
    vec![
        ChatMessage::system(SYSTEM),
        ChatMessage::user(format!(
            "Each instance below shows training input/output pairs and a testing pair \
produced by the same hidden rule. Different instances may use different variants of the \
rule; the training pairs of an instance reveal which variant applies to its testing pair.\n\n\
{}\nExplain in a few sentences what the transformation is and how to tell the variants apart.",
            render_instances(examples)
        )),
    ]
}

pub fn analyzer_prompt(descriptions: &[String], examples: &[Instance]) -> Vec<ChatMessage> {
    let mut candidates = String::new();
    for (i, d) in descriptions.iter().enumerate() {
        let _ = writeln!(candidates, "Explanation {}:\n{}\n", i + 1, d.trim());
    }
    vec![
        ChatMessage::system(SYSTEM),
        ChatMessage::user(format!(
            "Several explanations were proposed for the task shown by these examples.\n\n\
{}\n{candidates}Using the explanations and the examples, write one final, precise \
description of what happens from input to output.",
            render_instances(examples)
        )),
    ]
}

pub fn seed_prompt(description: &str, pset: &PrimitiveSet, examples: &[Instance]) -> Vec<ChatMessage> {
    vec![
        ChatMessage::system(SYSTEM),
        ChatMessage::user(format!(
            "Task description:\n{}\n\nExamples:\n\n{}\nAvailable primitives:\n{}\n{LANGUAGE_RULES}\n\n\
Write several different programs that might solve the task. Put each program on its \
own line with no commentary.",
            description.trim(),
            render_instances(examples),
            primitive_docs(pset)
        )),
    ]
}

/// An instance the current program gets wrong, with what it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct FailingExample<'a> {
    pub instance: &'a Instance,
    pub produced: Vec<Value>,
    pub accuracy: f64,
}

pub fn mutation_prompt(
    description: &str,
    pset: &PrimitiveSet,
    program: &str,
    score: f64,
    failing: &[FailingExample<'_>],
) -> Vec<ChatMessage> {
    let mut shown = String::new();
    for f in failing {
        let _ = writeln!(
            shown,
            "{}Program output: {}\nAccuracy: {:.3}\n",
            render_instance(f.instance),
            render_list(&f.produced),
            f.accuracy
        );
    }
    vec![
        ChatMessage::system(SYSTEM),
        ChatMessage::user(format!(
            "Task description:\n{}\n\nAvailable primitives:\n{}\n{LANGUAGE_RULES}\n\n\
Current best program (accuracy {score:.3}):\n{program}\n\nExamples where it fails:\n\n{shown}\
Write one new program that either improves on the accuracy of this program or is \
shorter with the same accuracy. Reply with the program only.",
            description.trim(),
            primitive_docs(pset),
        )),
    ]
}
