use serde::{Deserialize, Serialize};

/// Value kinds of the DSL. `WInteger` values come from the training pairs,
/// `RInteger` values from the testing pair; both are `Integer`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueKind {
    Operation,
    COperation,
    Integer,
    WInteger,
    RInteger,
    Boolean,
}

impl ValueKind {
    pub const ALL: [ValueKind; 6] = [
        ValueKind::Operation,
        ValueKind::COperation,
        ValueKind::Integer,
        ValueKind::WInteger,
        ValueKind::RInteger,
        ValueKind::Boolean,
    ];

    /// Whether a value of kind `actual` may fill a slot of kind `self`.
    pub fn accepts(self, actual: ValueKind) -> bool {
        self == actual
            || (self == ValueKind::Integer
                && matches!(actual, ValueKind::WInteger | ValueKind::RInteger))
    }
}
