//! The typed list DSL: primitive signatures, prefix-encoded program trees,
//! random generation, subtree mutation/crossover, the call-expression text
//! format and the flat array form the interpreter runs.

mod flat;
mod generate;
mod kind;
mod ops;
mod primitive;
mod solutions;
mod text;
mod tree;

pub use flat::{FlatNode, FlatProgram, MAX_ARITY};
pub use generate::{random_program, random_subtree, LEAF_PROBABILITY};
pub use kind::ValueKind;
pub use ops::{crossover_subtrees, mutate_subtree, mutate_at};
pub use solutions::known_solution;
pub use primitive::{default_primitive_set, Primitive, PrimitiveSet, PrimitiveSignature};
pub use text::{parse_program, serialize_program};
pub use tree::ProgramTree;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("unknown primitive `{name}` at byte {pos}")]
    UnknownPrimitive { name: String, pos: usize },
    #[error("`{name}` at byte {pos} takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        pos: usize,
        expected: usize,
        found: usize,
    },
    #[error("`{name}` at byte {pos} returns {found:?} where {expected:?} is expected")]
    KindMismatch {
        name: String,
        pos: usize,
        expected: ValueKind,
        found: ValueKind,
    },
    #[error("unbalanced parentheses at byte {pos}")]
    Unbalanced { pos: usize },
    #[error("unexpected {found} at byte {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
}
