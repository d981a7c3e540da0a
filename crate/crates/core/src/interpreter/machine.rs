//! The flat stack machine.
//!
//! Each pass pushes the root on an explicit work stack and pops entries
//! until it is empty. An entry is a node index plus a case id: either the
//! node's own opcode, or one of the continuation cases below that finish a
//! primitive once its arguments have been computed into the registers.
//!
//! Registers: `r0` holds the last integer value, `r1` the saved left operand
//! of a binary comparison, `r2` the last boolean.

use super::state::{MachineState, Status};
use super::{RunBudget, RunResult};
use crate::program::{FlatProgram, Primitive};

/// Write `r0` at the testing output cursor.
const WRITE: u8 = 200;
/// `r1 = r0`
const SAVE_LEFT: u8 = 201;
/// `r2 = r1 > r0`
const GREATER: u8 = 202;
/// `r2 = r1 == r0`
const EQUAL: u8 = 203;
/// Push the then- or else-branch of a comparison node depending on `r2`.
const BRANCH: u8 = 204;
/// Admit a loop whose count is in `r0` and push its body that many times.
const LOOP_ADMIT: u8 = 205;
/// Leave a loop body: restores the nesting depth.
const LOOP_EXIT: u8 = 206;
/// Execute the node's own opcode.
const OWN: u8 = 255;
/// Stands in for an out-of-range opcode; no primitive has this id.
const INVALID: u8 = 254;

#[derive(Debug, Clone, Copy)]
struct Entry {
    node: u32,
    case: u8,
}

/// Reusable scratch space for running flat programs. Keeps the work stack
/// and the end-of-pass history used to skip repeated passes.
#[derive(Debug, Default)]
pub struct Machine {
    stack: Vec<Entry>,
    history: Vec<i32>,
    hashes: Vec<u64>,
}

#[inline]
fn fnv(values: &[i32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &v in values {
        h ^= v as u32 as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Machine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `flat` for `budget.iterations` passes against `state`, leaving
    /// the final output in the state. Returns the number of stack entries
    /// processed.
    ///
    /// A pass is a pure function of the end-of-pass state (cursors and
    /// output buffer; registers never carry over and the nesting depth is
    /// back to zero). Once that state repeats, the remaining passes would
    /// cycle, so the state the last pass would have produced is restored
    /// from history instead of being recomputed.
    pub fn run(&mut self, flat: &FlatProgram, state: &mut MachineState<'_>, budget: RunBudget) -> u64 {
        let nodes = flat.nodes();
        let total = budget.iterations as usize;
        let stride = 5 + state.testing_output.len();
        self.history.clear();
        self.hashes.clear();
        self.snapshot(state);

        let mut steps = 0u64;
        for pass in 1..=total {
            steps += self.pass(nodes, state);
            if state.status == Status::Error {
                break;
            }
            let hash = self.snapshot(state);
            let latest = &self.history[pass * stride..];
            let earlier = self.hashes[..pass].iter().enumerate().rev().find(|(j, h)| {
                **h == hash && self.history[j * stride..(j + 1) * stride] == *latest
            });
            if let Some((j, _)) = earlier {
                let period = pass - j;
                let target = j + (total - j) % period;
                if target != pass {
                    let snap = self.history[target * stride..(target + 1) * stride].to_vec();
                    restore(state, &snap);
                }
                break;
            }
        }
        steps
    }

    fn snapshot(&mut self, state: &MachineState<'_>) -> u64 {
        let start = self.history.len();
        self.history.extend([
            state.input_cursor as i32,
            state.output_cursor as i32,
            state.example as i32,
            state.train_input_cursor as i32,
            state.train_output_cursor as i32,
        ]);
        self.history.extend_from_slice(&state.testing_output);
        let hash = fnv(&self.history[start..]);
        self.hashes.push(hash);
        hash
    }

    fn pass(&mut self, nodes: &[crate::program::FlatNode], st: &mut MachineState<'_>) -> u64 {
        let stack = &mut self.stack;
        stack.clear();
        stack.push(Entry { node: 0, case: OWN });
        let mut steps = 0u64;
        while let Some(Entry { node, case }) = stack.pop() {
            steps += 1;
            let n = &nodes[node as usize];
            let push_arg = |stack: &mut Vec<Entry>, k: usize| {
                stack.push(Entry {
                    node: n.args[k],
                    case: OWN,
                });
            };
            let case = match case {
                // opcodes that collide with continuation ids are invalid
                OWN if n.opcode >= WRITE => INVALID,
                OWN => n.opcode,
                c => c,
            };
            match case {
                WRITE => st.write(st.registers[0]),
                SAVE_LEFT => st.registers[1] = st.registers[0],
                GREATER => st.registers[2] = (st.registers[1] > st.registers[0]) as i32,
                EQUAL => st.registers[2] = (st.registers[1] == st.registers[0]) as i32,
                BRANCH => push_arg(stack, if st.registers[2] != 0 { 1 } else { 2 }),
                LOOP_ADMIT => {
                    let count = st.registers[0];
                    if !st.loop_admitted(count) {
                        st.status = Status::Error;
                        return steps;
                    }
                    st.inner_loop += 1;
                    stack.push(Entry {
                        node,
                        case: LOOP_EXIT,
                    });
                    for _ in 0..count {
                        push_arg(stack, 1);
                    }
                }
                LOOP_EXIT => st.inner_loop -= 1,
                op => {
                    let Some(p) = Primitive::from_opcode(op) else {
                        st.status = Status::Error;
                        return steps;
                    };
                    use Primitive as P;
                    match p {
                        P::Prog2 => {
                            push_arg(stack, 1);
                            push_arg(stack, 0);
                        }
                        P::Prog3 => {
                            push_arg(stack, 2);
                            push_arg(stack, 1);
                            push_arg(stack, 0);
                        }
                        P::Comparison => {
                            stack.push(Entry { node, case: BRANCH });
                            push_arg(stack, 0);
                        }
                        P::Loop => {
                            stack.push(Entry {
                                node,
                                case: LOOP_ADMIT,
                            });
                            push_arg(stack, 0);
                        }
                        P::TestingOutputWrite => {
                            stack.push(Entry { node, case: WRITE });
                            push_arg(stack, 0);
                        }
                        P::BiggerThanW | P::BiggerThanR | P::EqualR => {
                            let finish = if p == P::EqualR { EQUAL } else { GREATER };
                            stack.push(Entry { node, case: finish });
                            push_arg(stack, 1);
                            stack.push(Entry {
                                node,
                                case: SAVE_LEFT,
                            });
                            push_arg(stack, 0);
                        }
                        P::Get0
                        | P::TestingInputRead
                        | P::TestingOutputRead
                        | P::TestingInputMin
                        | P::TestingInputMax
                        | P::GetTestingLengthInputX
                        | P::InputRead
                        | P::OutputRead
                        | P::InputMax
                        | P::InputMin
                        | P::OutputMax
                        | P::OutputMin => st.registers[0] = st.read_int(p),
                        P::BiggerThanTestingOutputNext
                        | P::BiggerThanOutputNext
                        | P::BiggerThanInputNext => st.registers[2] = st.read_bool(p) as i32,
                        P::NoOp
                        | P::TestingInputMoveLeft
                        | P::TestingInputMoveRight
                        | P::TestingOutputMoveLeft
                        | P::TestingOutputMoveRight
                        | P::TestingResetInputPosition
                        | P::TestingResetOutputPosition
                        | P::SwapTestingOutputNext
                        | P::InputMoveLeft
                        | P::InputMoveRight
                        | P::OutputMoveLeft
                        | P::OutputMoveRight
                        | P::TrainingNextExample
                        | P::TrainingReset => st.apply(p),
                    }
                }
            }
        }
        steps
    }
}

fn restore(state: &mut MachineState<'_>, snap: &[i32]) {
    state.input_cursor = snap[0] as usize;
    state.output_cursor = snap[1] as usize;
    state.example = snap[2] as usize;
    state.train_input_cursor = snap[3] as usize;
    state.train_output_cursor = snap[4] as usize;
    state.testing_output.copy_from_slice(&snap[5..]);
}

/// Runs `flat` on `state` with a fresh scratch machine.
pub fn run_program(flat: &FlatProgram, state: &mut MachineState<'_>, budget: RunBudget) -> RunResult {
    let steps = Machine::new().run(flat, state, budget);
    RunResult {
        output: state.testing_output.clone(),
        status: state.status,
        steps,
    }
}
