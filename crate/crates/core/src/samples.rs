//! Small reference codes used throughout the docs and tests.

use crate::code::Code;

/// The `(4, 5, 2)` code that is a 3-AACC under soft tracing.
pub fn example_code() -> Code {
    Code::from_rows(
        2,
        &[
            vec![0, 0, 0, 1, 0],
            vec![1, 1, 0, 0, 0],
            vec![1, 0, 1, 0, 0],
            vec![0, 0, 1, 1, 0],
        ],
    )
    .expect("valid code")
}

/// Outer `(2, 6, 3)` code of the concatenation example.
pub fn outer_code_b() -> Code {
    Code::from_rows(3, &[vec![0, 0, 1, 1, 2, 2], vec![0, 1, 1, 2, 2, 0]]).expect("valid code")
}

/// Inner `(2, 3, 2)` code of the concatenation example.
pub fn inner_code_d() -> Code {
    Code::from_rows(2, &[vec![0, 1, 0], vec![0, 0, 1]]).expect("valid code")
}

/// The `(4, 6, 2)` code obtained by concatenating [`outer_code_b`] with [`inner_code_d`].
pub fn concatenated_bd() -> Code {
    Code::from_rows(
        2,
        &[
            vec![0, 0, 1, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 1],
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 1, 0],
        ],
    )
    .expect("valid code")
}
