use crate::corpus::TaskKind;

const COUNT: &str = "testing_output_write(get_testing_length_input_x())";

const MAX_MIN: &str = "comparison(
    bigger_thanW(input_max(), output_read()),
    testing_output_write(testing_input_min()),
    testing_output_write(testing_input_max())
)";

const INVERSE: &str = "prog2(
    loop(
        get_testing_length_input_x(),
        testing_input_move_right()
    ),
    loop(
        get_testing_length_input_x(),
        prog2(
            testing_output_write(testing_input_read()),
            prog2(
                testing_input_move_left(),
                testing_output_move_right()
            )
        )
    )
)";

const SORTED: &str = "prog2(
    testing_reset_output_position(), 
    loop(
        get_testing_length_input_x(), 
        prog2(
            prog2(
                comparison(
                    bigger_than_testing_output_next(),
                    swap_testing_output_next(),
                    testing_input_move_right()
                ),
                comparison(
                    bigger_than_output_next(),
                    swap_testing_output_next(),
                    output_move_right()
                )
            ),
            testing_output_move_right()
        )
    )
)";

/// A hand-checked program that solves `task` exactly, in its original
/// multi-line layout.
pub fn known_solution(task: TaskKind) -> &'static str {
    match task {
        TaskKind::Count => COUNT,
        TaskKind::MaxMin => MAX_MIN,
        TaskKind::Inverse => INVERSE,
        TaskKind::Sorted => SORTED,
    }
}
