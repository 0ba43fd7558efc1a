//! The ratio of a glued pair is conjugate to the product of the two signed
//! path matrices, in both orders and through both turn matrices:
//! A⁻¹B = L⁻¹(D′D)L = R⁻¹(DD′)R and BA⁻¹ = R′(D′D)R′⁻¹ = L′(DD′)L′⁻¹.

use std::collections::BTreeMap;
use std::fmt::Debug;

use isopair::honeycomb::{CellKind, TriangleNetwork};
use isopair::laurent::Laurent;
use isopair::matrix::Matrix;
use isopair::ring::Ring;
use isopair::scalar::Scalar;
use isopair::transfer::{
    assemble_a, assemble_b, d_matrix_algebraic, left_turn_matrix, right_turn_matrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    let mut p: i64 = 0;
    while p == 0 {
        p = rng.gen_range(-20..=20);
    }
    Scalar::from_ratio(p, rng.gen_range(1..=20))
}

fn random_cell(rng: &mut ChaCha8Rng, kind: CellKind, n: usize) -> TriangleNetwork<Scalar> {
    let unit = TriangleNetwork::<Scalar>::unit(kind, n).unwrap();
    let weights: BTreeMap<(usize, usize), (Scalar, Scalar)> = unit
        .weights
        .keys()
        .map(|&v| (v, (rational(rng), rational(rng))))
        .collect();
    TriangleNetwork::new(kind, n, weights).unwrap()
}

fn check_identities<T: Ring + PartialEq + Debug>(
    lower: &TriangleNetwork<T>,
    upper: &TriangleNetwork<T>,
    label: &str,
) {
    let a = assemble_a(lower, upper).unwrap();
    let b = assemble_b(lower, upper).unwrap();
    let d = d_matrix_algebraic(lower).unwrap();
    let dp = d_matrix_algebraic(upper).unwrap();
    let dpd = dp.mat_mul(&d).unwrap();
    let ddp = d.mat_mul(&dp).unwrap();
    let l = left_turn_matrix(lower);
    let r = right_turn_matrix(lower);
    let lp = left_turn_matrix(upper);
    let rp = right_turn_matrix(upper);
    let conj = |m: &Matrix<T>, x: &Matrix<T>| {
        m.inverse().unwrap().mat_mul(x).unwrap().mat_mul(m).unwrap()
    };
    let conj_rev = |m: &Matrix<T>, x: &Matrix<T>| {
        m.mat_mul(x).unwrap().mat_mul(&m.inverse().unwrap()).unwrap()
    };
    let ab = a.inverse().unwrap().mat_mul(&b).unwrap();
    let ba = b.mat_mul(&a.inverse().unwrap()).unwrap();
    assert_eq!(
        ab,
        conj(&l, &dpd),
        "{}: A^-1 B via the lower left-turn matrix",
        label
    );
    assert_eq!(
        ab,
        conj(&r, &ddp),
        "{}: A^-1 B via the lower right-turn matrix",
        label
    );
    assert_eq!(
        ba,
        conj_rev(&rp, &dpd),
        "{}: B A^-1 via the upper right-turn matrix",
        label
    );
    assert_eq!(
        ba,
        conj_rev(&lp, &ddp),
        "{}: B A^-1 via the upper left-turn matrix",
        label
    );
}

#[test]
fn identities_hold_symbolically() {
    for n in 1..=3 {
        let lower = TriangleNetwork::<Laurent>::symbolic_prefixed(CellKind::Lower, n, "a", "b")
            .unwrap();
        let upper = TriangleNetwork::<Laurent>::symbolic_prefixed(CellKind::Upper, n, "c", "d")
            .unwrap();
        check_identities(&lower, &upper, &format!("symbolic n = {}", n));
    }
}

#[test]
fn identities_hold_on_seeded_rational_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for n in 1..=4 {
        for trial in 0..25 {
            let lower = random_cell(&mut rng, CellKind::Lower, n);
            let upper = random_cell(&mut rng, CellKind::Upper, n);
            check_identities(&lower, &upper, &format!("n = {} trial {}", n, trial));
        }
    }
}
