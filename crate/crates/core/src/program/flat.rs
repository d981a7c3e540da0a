use super::primitive::PrimitiveSet;
use super::tree::ProgramTree;
use super::ProgramError;

/// Largest argument count of any primitive.
pub const MAX_ARITY: usize = 3;

/// One node of a flat program: an opcode and the indices of its arguments
/// in the same node array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlatNode {
    pub opcode: u8,
    pub arity: u8,
    pub args: [u32; MAX_ARITY],
}

impl FlatNode {
    #[inline]
    pub fn args(&self) -> &[u32] {
        &self.args[..self.arity as usize]
    }
}

/// A program compiled to a contiguous node array in preorder; the root is
/// node 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatProgram {
    nodes: Vec<FlatNode>,
}

impl FlatProgram {
    pub fn flatten(tree: &ProgramTree, pset: &PrimitiveSet) -> FlatProgram {
        let prefix = tree.nodes();
        let mut nodes = Vec::with_capacity(prefix.len());
        // argument slots of open nodes still waiting for a child: (parent, slot)
        let mut pending: Vec<(usize, usize)> = Vec::new();
        for (i, &op) in prefix.iter().enumerate() {
            if let Some((parent, slot)) = pending.pop() {
                let parent: &mut FlatNode = &mut nodes[parent];
                parent.args[slot] = i as u32;
            }
            let arity = pset.signature(op).arity();
            assert!(arity <= MAX_ARITY, "primitive arity above {MAX_ARITY}");
            nodes.push(FlatNode {
                opcode: op,
                arity: arity as u8,
                args: [0; MAX_ARITY],
            });
            pending.extend((0..arity).rev().map(|slot| (i, slot)));
        }
        FlatProgram { nodes }
    }

    /// Builds a flat program from raw nodes. Argument indices must point
    /// strictly forward and in bounds, which rules out cycles. Opcodes are
    /// not checked; the interpreter reports unknown ones at run time.
    pub fn from_nodes(nodes: Vec<FlatNode>) -> Result<FlatProgram, ProgramError> {
        if nodes.is_empty() {
            return Err(ProgramError::Malformed("empty flat program".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.arity as usize > MAX_ARITY {
                return Err(ProgramError::Malformed(format!("node {i} has arity {}", node.arity)));
            }
            for &arg in node.args() {
                if arg as usize <= i || arg as usize >= nodes.len() {
                    return Err(ProgramError::Malformed(format!(
                        "node {i} points to invalid argument index {arg}"
                    )));
                }
            }
        }
        Ok(FlatProgram { nodes })
    }

    pub fn nodes(&self) -> &[FlatNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root_index(&self) -> usize {
        0
    }

    /// Rebuilds the prefix tree by walking argument pointers from the root.
    pub fn reconstruct(&self, pset: &PrimitiveSet) -> Result<ProgramTree, ProgramError> {
        let mut prefix = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0u32];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i as usize];
            prefix.push(node.opcode);
            stack.extend(node.args().iter().rev());
        }
        ProgramTree::from_prefix(prefix, pset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{default_primitive_set, parse_program, random_program};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn count_program_layout() {
        let pset = default_primitive_set();
        let t = parse_program("testing_output_write(get_testing_length_input_x())", &pset).unwrap();
        let f = FlatProgram::flatten(&t, &pset);
        assert_eq!(f.len(), 2);
        assert_eq!(f.nodes()[0].args(), &[1]);
        assert!(f.nodes()[1].args().is_empty());
    }

    #[test]
    fn leaf_program() {
        let pset = default_primitive_set();
        let t = parse_program("no_op()", &pset).unwrap();
        let f = FlatProgram::flatten(&t, &pset);
        assert_eq!(f.len(), 1);
        assert!(f.nodes()[0].args().is_empty());
    }

    #[test]
    fn preorder_argument_indices() {
        let pset = default_primitive_set();
        let t = parse_program(
            "prog2(loop(get_testing_length_input_x(), testing_input_move_right()), no_op())",
            &pset,
        )
        .unwrap();
        let f = FlatProgram::flatten(&t, &pset);
        assert_eq!(f.nodes()[0].args(), &[1, 4]);
        assert_eq!(f.nodes()[1].args(), &[2, 3]);
    }

    #[test]
    fn reconstruct_fuzz() {
        let pset = default_primitive_set();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let t = random_program(&pset, &mut rng, 1, 6);
            let f = FlatProgram::flatten(&t, &pset);
            assert_eq!(f.len(), t.len());
            assert_eq!(f.reconstruct(&pset).unwrap(), t);
        }
    }

    #[test]
    fn from_nodes_rejects_back_edges() {
        let node = |opcode, args: &[u32]| {
            let mut a = [0; MAX_ARITY];
            a[..args.len()].copy_from_slice(args);
            FlatNode {
                opcode,
                arity: args.len() as u8,
                args: a,
            }
        };
        assert!(FlatProgram::from_nodes(vec![node(1, &[0, 1])]).is_err());
        assert!(FlatProgram::from_nodes(vec![node(11, &[5]), node(0, &[])]).is_err());
        assert!(FlatProgram::from_nodes(vec![node(11, &[1]), node(0, &[])]).is_ok());
        assert!(FlatProgram::from_nodes(vec![]).is_err());
    }
}
