//! Closed-form transfer matrices over the Laurent polynomial ring, frozen
//! entry by entry. Both sides of each comparison are pushed through the
//! canonical printer, so the check is an exact string-normalized match.

use isopair::honeycomb::{CellKind, TriangleNetwork};
use isopair::laurent::Laurent;
use isopair::matrix::Matrix;
use isopair::transfer::{d_matrix_algebraic, left_turn_matrix, right_turn_matrix};

fn assert_matches(got: &Matrix<Laurent>, want: &[&[&str]], what: &str) {
    assert_eq!(got.n(), want.len(), "{}: wrong size", what);
    for (i, row) in want.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let expected = Laurent::parse(entry)
                .unwrap_or_else(|e| panic!("{}: entry ({},{}) does not parse: {}", what, i, j, e));
            assert_eq!(
                got[(i, j)].to_string(),
                expected.to_string(),
                "{}: entry ({},{}) differs",
                what,
                i,
                j
            );
        }
    }
}

#[test]
fn left_turn_matrix_of_the_size_three_lower_cell() {
    let t = TriangleNetwork::<Laurent>::symbolic(CellKind::Lower, 3).unwrap();
    let l = left_turn_matrix(&t);
    assert_matches(
        &l,
        &[
            &["a11", "0", "0"],
            &["b11*a21", "a22*a21", "0"],
            &[
                "b11*b21*a31",
                "a22*b21*a31 + b22*a32*a31",
                "a33*a32*a31",
            ],
        ],
        "left-turn matrix, lower cell, n = 3",
    );
}

#[test]
fn right_turn_matrix_of_the_size_four_upper_cell() {
    let t = TriangleNetwork::<Laurent>::symbolic(CellKind::Upper, 4).unwrap();
    let r = right_turn_matrix(&t);
    assert_matches(
        &r,
        &[
            &["a00*a01*a02", "0", "0", "0"],
            &[
                "a00*a01*b02 + a00*b01*a11 + b00*a10*a11",
                "a10*a11",
                "0",
                "0",
            ],
            &[
                "a00*b01*b11 + b00*a10*b11 + b00*b10*a20",
                "b10*a20 + a10*b11",
                "a20",
                "0",
            ],
            &["b00*b10*b20", "b10*b20", "b20", "1"],
        ],
        "right-turn matrix, upper cell, n = 4",
    );
}

#[test]
fn signed_path_matrix_of_the_size_three_lower_cell() {
    let t = TriangleNetwork::<Laurent>::symbolic(CellKind::Lower, 3).unwrap();
    let d = d_matrix_algebraic(&t).unwrap();
    assert_matches(
        &d,
        &[
            &["0", "0", "a31^-1*b31"],
            &[
                "0",
                "-a21^-1*b21*a32^-1*b32",
                "a31^-1*a32^-1*b32",
            ],
            &[
                "a11^-1*b11*a22^-1*b22*a33^-1*b33",
                "-a21^-1*a22^-1*b22*a33^-1*b33 - a21^-1*b21*a32^-1*a33^-1*b33",
                "a31^-1*a32^-1*a33^-1*b33",
            ],
        ],
        "signed path matrix, lower cell, n = 3",
    );
}
