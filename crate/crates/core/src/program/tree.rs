use super::kind::ValueKind;
use super::primitive::PrimitiveSet;
use super::ProgramError;

/// A program tree stored as its prefix (preorder) sequence of opcodes.
/// Every subtree is a contiguous slice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProgramTree {
    nodes: Vec<u8>,
}

impl ProgramTree {
    /// Builds a tree from a preorder opcode sequence, checking shape and
    /// kinds against `pset`.
    pub fn from_prefix(nodes: Vec<u8>, pset: &PrimitiveSet) -> Result<Self, ProgramError> {
        let tree = Self { nodes };
        tree.validate(pset)?;
        Ok(tree)
    }

    pub(crate) fn from_prefix_unchecked(nodes: Vec<u8>) -> Self {
        Self { nodes }
    }

    pub fn nodes(&self) -> &[u8] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<u8> {
        self.nodes
    }

    /// Number of primitives.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> u8 {
        self.nodes[0]
    }

    /// Longest root-to-leaf path, counted in edges.
    pub fn height(&self, pset: &PrimitiveSet) -> usize {
        // postorder over the reversed prefix: children heights sit on the stack
        let mut stack: Vec<usize> = Vec::new();
        for &op in self.nodes.iter().rev() {
            let arity = pset.signature(op).arity();
            let mut h = 0;
            for _ in 0..arity {
                h = h.max(stack.pop().expect("well-formed prefix") + 1);
            }
            stack.push(h);
        }
        stack.pop().unwrap_or(0)
    }

    /// Exclusive end index of the subtree rooted at `start`.
    pub fn subtree_end(&self, start: usize, pset: &PrimitiveSet) -> usize {
        let mut pending = 1usize;
        let mut i = start;
        while pending > 0 {
            pending = pending - 1 + pset.signature(self.nodes[i]).arity();
            i += 1;
        }
        i
    }

    /// Kind of the slot each node fills: the root slot is the set's root
    /// kind, other nodes fill their parent's argument slot.
    pub fn slot_kinds(&self, pset: &PrimitiveSet) -> Vec<ValueKind> {
        let mut slots = Vec::with_capacity(self.nodes.len());
        // stack of argument kinds still to be filled, top = next
        let mut expected: Vec<ValueKind> = vec![pset.root_kind()];
        for &op in &self.nodes {
            let slot = expected.pop().expect("well-formed prefix");
            slots.push(slot);
            expected.extend(pset.signature(op).arg_kinds.iter().rev());
        }
        slots
    }

    /// Checks that the prefix sequence forms exactly one tree and that every
    /// edge is kind-correct.
    pub fn validate(&self, pset: &PrimitiveSet) -> Result<(), ProgramError> {
        if self.nodes.is_empty() {
            return Err(ProgramError::Malformed("empty program".into()));
        }
        let mut expected: Vec<ValueKind> = vec![pset.root_kind()];
        for (i, &op) in self.nodes.iter().enumerate() {
            let sig = pset
                .get(op)
                .ok_or_else(|| ProgramError::Malformed(format!("unknown opcode {op} at node {i}")))?;
            let slot = expected.pop().ok_or_else(|| {
                ProgramError::Malformed(format!("trailing nodes after complete tree at node {i}"))
            })?;
            if !slot.accepts(sig.return_kind) {
                return Err(ProgramError::KindMismatch {
                    name: sig.name.clone(),
                    pos: i,
                    expected: slot,
                    found: sig.return_kind,
                });
            }
            expected.extend(sig.arg_kinds.iter().rev());
        }
        if !expected.is_empty() {
            return Err(ProgramError::Malformed(format!(
                "{} argument(s) missing at end of program",
                expected.len()
            )));
        }
        Ok(())
    }

    /// Copy of `self` with `self[start..end]` replaced by `replacement`.
    pub fn splice(&self, start: usize, end: usize, replacement: &[u8]) -> ProgramTree {
        let mut nodes = Vec::with_capacity(self.nodes.len() - (end - start) + replacement.len());
        nodes.extend_from_slice(&self.nodes[..start]);
        nodes.extend_from_slice(replacement);
        nodes.extend_from_slice(&self.nodes[end..]);
        ProgramTree { nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{default_primitive_set, parse_program};

    #[test]
    fn length_and_height() {
        let pset = default_primitive_set();
        let count = parse_program("testing_output_write(get_testing_length_input_x())", &pset).unwrap();
        assert_eq!(count.len(), 2);
        assert_eq!(count.height(&pset), 1);
        let leaf = parse_program("no_op()", &pset).unwrap();
        assert_eq!(leaf.height(&pset), 0);
        let nested = parse_program(
            "prog2(no_op(), prog2(no_op(), testing_output_write(get0())))",
            &pset,
        )
        .unwrap();
        assert_eq!(nested.height(&pset), 3);
        assert_eq!(nested.subtree_end(0, &pset), nested.len());
        assert_eq!(nested.subtree_end(1, &pset), 2);
        assert_eq!(nested.subtree_end(2, &pset), 6);
    }

    #[test]
    fn slot_kinds_follow_signatures() {
        let pset = default_primitive_set();
        let t = parse_program(
            "comparison(bigger_thanW(input_max(), output_read()), testing_output_write(testing_input_min()), no_op())",
            &pset,
        )
        .unwrap();
        use ValueKind::*;
        assert_eq!(
            t.slot_kinds(&pset),
            vec![Operation, Boolean, WInteger, WInteger, Operation, RInteger, Operation]
        );
    }

    #[test]
    fn validate_catches_shape_errors() {
        let pset = default_primitive_set();
        let write = pset.lookup("testing_output_write").unwrap().opcode;
        let noop = pset.lookup("no_op").unwrap().opcode;
        assert!(ProgramTree::from_prefix(vec![write], &pset).is_err());
        assert!(ProgramTree::from_prefix(vec![noop, noop], &pset).is_err());
        assert!(ProgramTree::from_prefix(vec![write, noop], &pset).is_err());
        assert!(ProgramTree::from_prefix(vec![200], &pset).is_err());
        assert!(ProgramTree::from_prefix(vec![], &pset).is_err());
    }
}
