use std::collections::HashMap;

use super::kind::ValueKind::{self, *};
use super::ProgramError;

/// Every primitive of the default set. The discriminant is the opcode the
/// interpreter dispatches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Primitive {
    Get0 = 0,
    Prog2,
    Prog3,
    Comparison,
    Loop,
    NoOp,
    TestingInputRead,
    TestingOutputRead,
    TestingInputMin,
    TestingInputMax,
    GetTestingLengthInputX,
    TestingOutputWrite,
    TestingInputMoveLeft,
    TestingInputMoveRight,
    TestingOutputMoveLeft,
    TestingOutputMoveRight,
    TestingResetInputPosition,
    TestingResetOutputPosition,
    SwapTestingOutputNext,
    InputRead,
    OutputRead,
    InputMax,
    InputMin,
    OutputMax,
    OutputMin,
    InputMoveLeft,
    InputMoveRight,
    OutputMoveLeft,
    OutputMoveRight,
    TrainingNextExample,
    TrainingReset,
    BiggerThanW,
    BiggerThanR,
    EqualR,
    BiggerThanTestingOutputNext,
    BiggerThanOutputNext,
    BiggerThanInputNext,
}

impl Primitive {
    pub const ALL: [Primitive; 37] = [
        Primitive::Get0,
        Primitive::Prog2,
        Primitive::Prog3,
        Primitive::Comparison,
        Primitive::Loop,
        Primitive::NoOp,
        Primitive::TestingInputRead,
        Primitive::TestingOutputRead,
        Primitive::TestingInputMin,
        Primitive::TestingInputMax,
        Primitive::GetTestingLengthInputX,
        Primitive::TestingOutputWrite,
        Primitive::TestingInputMoveLeft,
        Primitive::TestingInputMoveRight,
        Primitive::TestingOutputMoveLeft,
        Primitive::TestingOutputMoveRight,
        Primitive::TestingResetInputPosition,
        Primitive::TestingResetOutputPosition,
        Primitive::SwapTestingOutputNext,
        Primitive::InputRead,
        Primitive::OutputRead,
        Primitive::InputMax,
        Primitive::InputMin,
        Primitive::OutputMax,
        Primitive::OutputMin,
        Primitive::InputMoveLeft,
        Primitive::InputMoveRight,
        Primitive::OutputMoveLeft,
        Primitive::OutputMoveRight,
        Primitive::TrainingNextExample,
        Primitive::TrainingReset,
        Primitive::BiggerThanW,
        Primitive::BiggerThanR,
        Primitive::EqualR,
        Primitive::BiggerThanTestingOutputNext,
        Primitive::BiggerThanOutputNext,
        Primitive::BiggerThanInputNext,
    ];

    #[inline]
    pub fn from_opcode(op: u8) -> Option<Primitive> {
        Self::ALL.get(op as usize).copied()
    }

    #[inline]
    pub fn opcode(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        self.spec().0
    }

    pub fn arg_kinds(self) -> &'static [ValueKind] {
        self.spec().1
    }

    pub fn return_kind(self) -> ValueKind {
        self.spec().2
    }

    pub fn arity(self) -> usize {
        self.arg_kinds().len()
    }

    /// One-line semantics, used in the primitive documentation shown to the
    /// language model.
    pub fn doc(self) -> &'static str {
        self.spec().3
    }

    fn spec(self) -> (&'static str, &'static [ValueKind], ValueKind, &'static str) {
        use Primitive as P;
        match self {
            P::Get0 => ("get0", &[], RInteger, "the constant 0"),
            P::Prog2 => ("prog2", &[Operation, Operation], Operation, "run both arguments in order"),
            P::Prog3 => (
                "prog3",
                &[Operation, Operation, Operation],
                Operation,
                "run the three arguments in order",
            ),
            P::Comparison => (
                "comparison",
                &[Boolean, Operation, Operation],
                Operation,
                "if the condition holds run the second argument, otherwise the third",
            ),
            P::Loop => (
                "loop",
                &[RInteger, Operation],
                Operation,
                "run the body n times; n must be in 1..=30 and at most 3 loops may nest",
            ),
            P::NoOp => ("no_op", &[], Operation, "do nothing"),
            P::TestingInputRead => (
                "testing_input_read",
                &[],
                RInteger,
                "element of the testing input at the testing input cursor",
            ),
            P::TestingOutputRead => (
                "testing_output_read",
                &[],
                RInteger,
                "element of the testing output at the testing output cursor",
            ),
            P::TestingInputMin => ("testing_input_min", &[], RInteger, "minimum of the testing input"),
            P::TestingInputMax => ("testing_input_max", &[], RInteger, "maximum of the testing input"),
            P::GetTestingLengthInputX => (
                "get_testing_length_input_x",
                &[],
                RInteger,
                "number of elements of the testing input",
            ),
            P::TestingOutputWrite => (
                "testing_output_write",
                &[RInteger],
                Operation,
                "write the value at the testing output cursor",
            ),
            P::TestingInputMoveLeft => (
                "testing_input_move_left",
                &[],
                Operation,
                "move the testing input cursor one step left (stops at the first element)",
            ),
            P::TestingInputMoveRight => (
                "testing_input_move_right",
                &[],
                Operation,
                "move the testing input cursor one step right (stops at the last element)",
            ),
            P::TestingOutputMoveLeft => (
                "testing_output_move_left",
                &[],
                Operation,
                "move the testing output cursor one step left (stops at the first element)",
            ),
            P::TestingOutputMoveRight => (
                "testing_output_move_right",
                &[],
                Operation,
                "move the testing output cursor one step right (stops at the last element)",
            ),
            P::TestingResetInputPosition => (
                "testing_reset_input_position",
                &[],
                Operation,
                "move the testing input cursor to the first element",
            ),
            P::TestingResetOutputPosition => (
                "testing_reset_output_position",
                &[],
                Operation,
                "move the testing output cursor to the first element",
            ),
            P::SwapTestingOutputNext => (
                "swap_testing_output_next",
                &[],
                Operation,
                "swap the testing output element at the cursor with the next one",
            ),
            P::InputRead => (
                "input_read",
                &[],
                WInteger,
                "element of the current training input at the training input cursor",
            ),
            P::OutputRead => (
                "output_read",
                &[],
                WInteger,
                "element of the current training output at the training output cursor",
            ),
            P::InputMax => ("input_max", &[], WInteger, "maximum of the current training input"),
            P::InputMin => ("input_min", &[], WInteger, "minimum of the current training input"),
            P::OutputMax => ("output_max", &[], WInteger, "maximum of the current training output"),
            P::OutputMin => ("output_min", &[], WInteger, "minimum of the current training output"),
            P::InputMoveLeft => (
                "input_move_left",
                &[],
                Operation,
                "move the training input cursor one step left",
            ),
            P::InputMoveRight => (
                "input_move_right",
                &[],
                Operation,
                "move the training input cursor one step right",
            ),
            P::OutputMoveLeft => (
                "output_move_left",
                &[],
                Operation,
                "move the training output cursor one step left",
            ),
            P::OutputMoveRight => (
                "output_move_right",
                &[],
                Operation,
                "move the training output cursor one step right",
            ),
            P::TrainingNextExample => (
                "training_next_example",
                &[],
                Operation,
                "switch to the next training pair (wrapping) and reset its cursors",
            ),
            P::TrainingReset => (
                "training_reset",
                &[],
                Operation,
                "switch back to the first training pair and reset its cursors",
            ),
            P::BiggerThanW => (
                "bigger_thanW",
                &[WInteger, WInteger],
                Boolean,
                "true if the first training value is greater than the second",
            ),
            P::BiggerThanR => (
                "bigger_thanR",
                &[RInteger, RInteger],
                Boolean,
                "true if the first testing value is greater than the second",
            ),
            P::EqualR => (
                "equalR",
                &[RInteger, RInteger],
                Boolean,
                "true if the two testing values are equal",
            ),
            P::BiggerThanTestingOutputNext => (
                "bigger_than_testing_output_next",
                &[],
                Boolean,
                "true if the testing output element at the cursor is greater than the next one",
            ),
            P::BiggerThanOutputNext => (
                "bigger_than_output_next",
                &[],
                Boolean,
                "true if the training output element at the cursor is greater than the next one",
            ),
            P::BiggerThanInputNext => (
                "bigger_than_input_next",
                &[],
                Boolean,
                "true if the training input element at the cursor is greater than the next one",
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveSignature {
    pub name: String,
    pub arg_kinds: Vec<ValueKind>,
    pub return_kind: ValueKind,
    pub opcode: u8,
}

impl PrimitiveSignature {
    pub fn is_leaf(&self) -> bool {
        self.arg_kinds.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.arg_kinds.len()
    }

    /// `name(Kind, Kind) -> Kind`
    pub fn render(&self) -> String {
        let args: Vec<String> = self.arg_kinds.iter().map(|k| format!("{k:?}")).collect();
        format!("{}({}) -> {:?}", self.name, args.join(", "), self.return_kind)
    }
}

/// A set of typed primitives. Node labels in a `ProgramTree` are opcodes
/// into this set.
#[derive(Debug, Clone)]
pub struct PrimitiveSet {
    signatures: Vec<PrimitiveSignature>,
    by_name: HashMap<String, u8>,
    root_kind: ValueKind,
    // indexed by slot kind: opcodes whose return kind the slot accepts
    leaves: HashMap<ValueKind, Vec<u8>>,
    branches: HashMap<ValueKind, Vec<u8>>,
}

impl PrimitiveSet {
    pub fn new(
        signatures: Vec<PrimitiveSignature>,
        root_kind: ValueKind,
    ) -> Result<Self, ProgramError> {
        let mut by_name = HashMap::new();
        for (i, sig) in signatures.iter().enumerate() {
            if sig.opcode as usize != i {
                return Err(ProgramError::Malformed(format!(
                    "opcode of `{}` is {}, expected dense opcode {i}",
                    sig.name, sig.opcode
                )));
            }
            if by_name.insert(sig.name.clone(), sig.opcode).is_some() {
                return Err(ProgramError::Malformed(format!(
                    "duplicate primitive name `{}`",
                    sig.name
                )));
            }
        }
        let mut leaves: HashMap<ValueKind, Vec<u8>> = HashMap::new();
        let mut branches: HashMap<ValueKind, Vec<u8>> = HashMap::new();
        for slot in ValueKind::ALL {
            for sig in &signatures {
                if slot.accepts(sig.return_kind) {
                    let bucket = if sig.is_leaf() { &mut leaves } else { &mut branches };
                    bucket.entry(slot).or_default().push(sig.opcode);
                }
            }
        }
        let pset = Self {
            signatures,
            by_name,
            root_kind,
            leaves,
            branches,
        };
        pset.check_terminating()?;
        Ok(pset)
    }

    /// Every kind reachable from the root must have a leaf producer, so
    /// random generation can always stop at the height bound.
    fn check_terminating(&self) -> Result<(), ProgramError> {
        let mut seen = vec![self.root_kind];
        let mut queue = vec![self.root_kind];
        while let Some(kind) = queue.pop() {
            if self.leaves_for(kind).is_empty() {
                return Err(ProgramError::Malformed(format!(
                    "kind {kind:?} is reachable but has no leaf producer"
                )));
            }
            for &op in self.branches_for(kind) {
                for &arg in &self.signatures[op as usize].arg_kinds {
                    if !seen.contains(&arg) {
                        seen.push(arg);
                        queue.push(arg);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn root_kind(&self) -> ValueKind {
        self.root_kind
    }

    pub fn signatures(&self) -> &[PrimitiveSignature] {
        &self.signatures
    }

    pub fn get(&self, opcode: u8) -> Option<&PrimitiveSignature> {
        self.signatures.get(opcode as usize)
    }

    pub fn signature(&self, opcode: u8) -> &PrimitiveSignature {
        &self.signatures[opcode as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<&PrimitiveSignature> {
        self.by_name.get(name).map(|&op| self.signature(op))
    }

    pub fn leaves_for(&self, slot: ValueKind) -> &[u8] {
        self.leaves.get(&slot).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn branches_for(&self, slot: ValueKind) -> &[u8] {
        self.branches.get(&slot).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// The fixed primitive table the interpreter implements.
pub fn default_primitive_set() -> PrimitiveSet {
    let signatures = Primitive::ALL
        .iter()
        .map(|p| PrimitiveSignature {
            name: p.name().to_string(),
            arg_kinds: p.arg_kinds().to_vec(),
            return_kind: p.return_kind(),
            opcode: p.opcode(),
        })
        .collect();
    PrimitiveSet::new(signatures, Operation).expect("default primitive set is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_signatures() {
        let pset = default_primitive_set();
        let write = pset.lookup("testing_output_write").unwrap();
        assert_eq!(write.arg_kinds, vec![RInteger]);
        assert_eq!(write.return_kind, Operation);
        let min = pset.lookup("testing_input_min").unwrap();
        assert!(min.arg_kinds.is_empty());
        assert_eq!(min.return_kind, RInteger);
        let cmp = pset.lookup("comparison").unwrap();
        assert_eq!(cmp.arg_kinds, vec![Boolean, Operation, Operation]);
        assert_eq!(cmp.return_kind, Operation);
        assert_eq!(pset.lookup("get0").unwrap().opcode, 0);
    }

    #[test]
    fn opcodes_dense_and_names_unique() {
        let pset = default_primitive_set();
        for (i, sig) in pset.signatures().iter().enumerate() {
            assert_eq!(sig.opcode as usize, i);
            assert_eq!(Primitive::from_opcode(sig.opcode).unwrap().name(), sig.name);
        }
        assert!(Primitive::from_opcode(pset.len() as u8).is_none());
    }

    #[test]
    fn no_primitive_produces_coperation() {
        let pset = default_primitive_set();
        assert!(pset.signatures().iter().all(|s| s.return_kind != COperation));
    }

    #[test]
    fn duplicate_and_dead_end_sets_rejected() {
        let sig = |name: &str, args: Vec<ValueKind>, ret, opcode| PrimitiveSignature {
            name: name.into(),
            arg_kinds: args,
            return_kind: ret,
            opcode,
        };
        let dup = vec![sig("a", vec![], Operation, 0), sig("a", vec![], Operation, 1)];
        assert!(PrimitiveSet::new(dup, Operation).is_err());
        let dead = vec![
            sig("a", vec![], Operation, 0),
            sig("w", vec![Boolean], Operation, 1),
        ];
        assert!(PrimitiveSet::new(dead, Operation).is_err());
        let sparse = vec![sig("a", vec![], Operation, 3)];
        assert!(PrimitiveSet::new(sparse, Operation).is_err());
    }

    #[test]
    fn render_signature() {
        let pset = default_primitive_set();
        assert_eq!(
            pset.lookup("loop").unwrap().render(),
            "loop(RInteger, Operation) -> Operation"
        );
    }
}
