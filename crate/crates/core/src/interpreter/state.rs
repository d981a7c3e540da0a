use crate::corpus::{Example, Instance, Value};
use crate::program::Primitive;

/// Largest loop count a loop accepts.
pub const MAX_LOOP_COUNT: Value = 30;
/// Largest number of simultaneously active loops.
pub const MAX_LOOP_NESTING: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ok,
    Error,
}

/// Runtime state of one program on one instance.
#[derive(Debug, Clone)]
pub struct MachineState<'a> {
    pub(crate) testing_input: &'a [Value],
    testing_min: Value,
    testing_max: Value,
    pub(crate) testing_output: Vec<Value>,
    pub(crate) input_cursor: usize,
    pub(crate) output_cursor: usize,
    pub(crate) training: &'a [Example],
    pub(crate) example: usize,
    pub(crate) train_input_cursor: usize,
    pub(crate) train_output_cursor: usize,
    pub(crate) registers: [Value; 3],
    pub(crate) inner_loop: u8,
    pub(crate) status: Status,
}

/// Fresh state for `instance`: the output buffer has the expected output's
/// length and starts as a copy of the testing input (truncated or padded
/// with zeros); all cursors and registers are zero.
pub fn init_state(instance: &Instance) -> MachineState<'_> {
    let input = &instance.testing.input;
    let len = instance.testing.output.len();
    let testing_output = (0..len).map(|i| input.get(i).copied().unwrap_or(0)).collect();
    MachineState {
        testing_input: input,
        testing_min: input.iter().copied().min().unwrap_or(0),
        testing_max: input.iter().copied().max().unwrap_or(0),
        testing_output,
        input_cursor: 0,
        output_cursor: 0,
        training: &instance.training,
        example: 0,
        train_input_cursor: 0,
        train_output_cursor: 0,
        registers: [0; 3],
        inner_loop: 0,
        status: Status::Ok,
    }
}

#[inline]
fn at(list: &[Value], i: usize) -> Value {
    list.get(i).copied().unwrap_or(0)
}

#[inline]
fn step_right(cursor: &mut usize, len: usize) {
    if *cursor + 1 < len {
        *cursor += 1;
    }
}

#[inline]
fn step_left(cursor: &mut usize) {
    *cursor = cursor.saturating_sub(1);
}

#[inline]
fn bigger_than_next(list: &[Value], cursor: usize) -> bool {
    cursor + 1 < list.len() && list[cursor] > list[cursor + 1]
}

impl<'a> MachineState<'a> {
    pub fn output(&self) -> &[Value] {
        &self.testing_output
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn inner_loop(&self) -> u8 {
        self.inner_loop
    }

    pub fn registers(&self) -> [Value; 3] {
        self.registers
    }

    /// (testing input, testing output, example, training input, training output)
    pub fn cursors(&self) -> [usize; 5] {
        [
            self.input_cursor,
            self.output_cursor,
            self.example,
            self.train_input_cursor,
            self.train_output_cursor,
        ]
    }

    #[inline]
    fn train_input(&self) -> &'a [Value] {
        self.training
            .get(self.example)
            .map(|e| e.input.as_slice())
            .unwrap_or(&[])
    }

    #[inline]
    fn train_output(&self) -> &'a [Value] {
        self.training
            .get(self.example)
            .map(|e| e.output.as_slice())
            .unwrap_or(&[])
    }

    /// Value of an integer leaf.
    #[inline]
    pub(crate) fn read_int(&self, p: Primitive) -> Value {
        use Primitive as P;
        match p {
            P::Get0 => 0,
            P::TestingInputRead => at(self.testing_input, self.input_cursor),
            P::TestingOutputRead => at(&self.testing_output, self.output_cursor),
            P::TestingInputMin => self.testing_min,
            P::TestingInputMax => self.testing_max,
            P::GetTestingLengthInputX => self.testing_input.len() as Value,
            P::InputRead => at(self.train_input(), self.train_input_cursor),
            P::OutputRead => at(self.train_output(), self.train_output_cursor),
            P::InputMax => self.train_input().iter().copied().max().unwrap_or(0),
            P::InputMin => self.train_input().iter().copied().min().unwrap_or(0),
            P::OutputMax => self.train_output().iter().copied().max().unwrap_or(0),
            P::OutputMin => self.train_output().iter().copied().min().unwrap_or(0),
            _ => unreachable!("{p:?} is not an integer leaf"),
        }
    }

    /// Value of a boolean leaf.
    #[inline]
    pub(crate) fn read_bool(&self, p: Primitive) -> bool {
        use Primitive as P;
        match p {
            P::BiggerThanTestingOutputNext => bigger_than_next(&self.testing_output, self.output_cursor),
            P::BiggerThanOutputNext => bigger_than_next(self.train_output(), self.train_output_cursor),
            P::BiggerThanInputNext => bigger_than_next(self.train_input(), self.train_input_cursor),
            _ => unreachable!("{p:?} is not a boolean leaf"),
        }
    }

    /// Side effect of an operation leaf.
    #[inline]
    pub(crate) fn apply(&mut self, p: Primitive) {
        use Primitive as P;
        match p {
            P::NoOp => {}
            P::TestingInputMoveLeft => step_left(&mut self.input_cursor),
            P::TestingInputMoveRight => step_right(&mut self.input_cursor, self.testing_input.len()),
            P::TestingOutputMoveLeft => step_left(&mut self.output_cursor),
            P::TestingOutputMoveRight => {
                step_right(&mut self.output_cursor, self.testing_output.len())
            }
            P::TestingResetInputPosition => self.input_cursor = 0,
            P::TestingResetOutputPosition => self.output_cursor = 0,
            P::SwapTestingOutputNext => {
                let c = self.output_cursor;
                if c + 1 < self.testing_output.len() {
                    self.testing_output.swap(c, c + 1);
                }
            }
            P::InputMoveLeft => step_left(&mut self.train_input_cursor),
            P::InputMoveRight => {
                let len = self.train_input().len();
                step_right(&mut self.train_input_cursor, len)
            }
            P::OutputMoveLeft => step_left(&mut self.train_output_cursor),
            P::OutputMoveRight => {
                let len = self.train_output().len();
                step_right(&mut self.train_output_cursor, len)
            }
            P::TrainingNextExample => {
                self.example = if self.example + 1 < self.training.len() {
                    self.example + 1
                } else {
                    0
                };
                self.train_input_cursor = 0;
                self.train_output_cursor = 0;
            }
            P::TrainingReset => {
                self.example = 0;
                self.train_input_cursor = 0;
                self.train_output_cursor = 0;
            }
            _ => unreachable!("{p:?} is not an operation leaf"),
        }
    }

    #[inline]
    pub(crate) fn write(&mut self, value: Value) {
        if let Some(slot) = self.testing_output.get_mut(self.output_cursor) {
            *slot = value;
        }
    }

    /// Whether a loop with `count` repetitions may start now.
    #[inline]
    pub(crate) fn loop_admitted(&self, count: Value) -> bool {
        self.inner_loop < MAX_LOOP_NESTING && count > 0 && count <= MAX_LOOP_COUNT
    }
}
