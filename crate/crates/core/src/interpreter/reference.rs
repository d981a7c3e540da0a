//! Direct recursive evaluation over an owned expression tree. Slow, and
//! deliberately free of the flat machine's stack, registers and pass
//! skipping, so the two can be checked against each other.

use super::state::{MachineState, Status};
use super::{RunBudget, RunResult};
use crate::corpus::Value;
use crate::program::{Primitive, ProgramTree};

struct Expr {
    prim: Primitive,
    args: Vec<Expr>,
}

impl Expr {
    fn build(nodes: &[u8], pos: &mut usize) -> Expr {
        let prim = Primitive::from_opcode(nodes[*pos]).expect("tree uses the default primitive set");
        *pos += 1;
        let args = (0..prim.arity()).map(|_| Expr::build(nodes, pos)).collect();
        Expr { prim, args }
    }
}

struct Halt;

struct Eval<'s, 'a> {
    st: &'s mut MachineState<'a>,
    visits: u64,
}

impl Eval<'_, '_> {
    fn int(&mut self, e: &Expr) -> Value {
        self.visits += 1;
        self.st.read_int(e.prim)
    }

    fn boolean(&mut self, e: &Expr) -> bool {
        self.visits += 1;
        match e.prim {
            Primitive::BiggerThanW | Primitive::BiggerThanR => {
                let a = self.int(&e.args[0]);
                let b = self.int(&e.args[1]);
                a > b
            }
            Primitive::EqualR => {
                let a = self.int(&e.args[0]);
                let b = self.int(&e.args[1]);
                a == b
            }
            p => self.st.read_bool(p),
        }
    }

    fn exec(&mut self, e: &Expr) -> Result<(), Halt> {
        self.visits += 1;
        match e.prim {
            Primitive::Prog2 | Primitive::Prog3 => {
                for arg in &e.args {
                    self.exec(arg)?;
                }
            }
            Primitive::Comparison => {
                if self.boolean(&e.args[0]) {
                    self.exec(&e.args[1])?;
                } else {
                    self.exec(&e.args[2])?;
                }
            }
            Primitive::Loop => {
                let count = self.int(&e.args[0]);
                if !self.st.loop_admitted(count) {
                    self.st.status = Status::Error;
                    return Err(Halt);
                }
                self.st.inner_loop += 1;
                for _ in 0..count {
                    self.exec(&e.args[1])?;
                }
                self.st.inner_loop -= 1;
            }
            Primitive::TestingOutputWrite => {
                let v = self.int(&e.args[0]);
                self.st.write(v);
            }
            p => self.st.apply(p),
        }
        Ok(())
    }
}

/// Runs every one of the `budget.iterations` passes recursively.
pub fn reference_run(tree: &ProgramTree, state: &mut MachineState<'_>, budget: RunBudget) -> RunResult {
    let expr = Expr::build(tree.nodes(), &mut 0);
    let mut eval = Eval {
        st: state,
        visits: 0,
    };
    for _ in 0..budget.iterations {
        if eval.exec(&expr).is_err() {
            break;
        }
    }
    let steps = eval.visits;
    RunResult {
        output: state.testing_output.clone(),
        status: state.status,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Example, Instance, Variant};
    use crate::interpreter::init_state;
    use crate::program::{default_primitive_set, parse_program};

    #[test]
    fn no_op_leaves_output_unchanged() {
        let inst = Instance {
            variant: Variant::Inverted,
            training: vec![Example {
                input: vec![1, 2],
                output: vec![2, 1],
            }],
            testing: Example {
                input: vec![4, 5, 6],
                output: vec![6, 5, 4],
            },
        };
        let pset = default_primitive_set();
        let tree = parse_program("no_op()", &pset).unwrap();
        let r = reference_run(&tree, &mut init_state(&inst), RunBudget::default());
        assert_eq!(r.output, vec![4, 5, 6]);
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.steps, 200);
    }
}
