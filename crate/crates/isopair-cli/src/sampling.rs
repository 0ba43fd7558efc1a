//! Deterministic random inputs for the verification suites.
//!
//! Every trial gets its own stream cipher seeded from (user seed, suite
//! name, cell size, trial index), so trials are independent of execution
//! order and identical runs produce identical inputs. Exact trials draw
//! rationals with numerator and denominator bounded by 20; float trials
//! keep magnitudes inside [1/2, 2] so absolute tolerances stay meaningful
//! after long products.

use isopair::facecoords::{EigenData, FreeBlock};
use isopair::honeycomb::{black_labels, CellKind, TriangleNetwork};
use isopair::ring::Ring;
use isopair::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

pub fn trial_rng(seed: u64, suite: &str, n: usize, trial: usize) -> ChaCha8Rng {
    let mut h = splitmix(seed) ^ fnv1a(suite.as_bytes());
    h = splitmix(h ^ n as u64);
    h = splitmix(h ^ trial as u64);
    ChaCha8Rng::seed_from_u64(h)
}

/// A nonzero rational with |p|, |q| bounded by 20. Float mode additionally
/// keeps |p/q| in [1/2, 2] and converts to a floating scalar.
pub fn rational(rng: &mut ChaCha8Rng, mode: Mode) -> Scalar {
    match mode {
        Mode::Exact => {
            let mut p = 0i64;
            while p == 0 {
                p = rng.gen_range(-20..=20);
            }
            let q = rng.gen_range(1..=20);
            Scalar::from_ratio(p, q)
        }
        Mode::Float => {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let p = rng.gen_range(10..=20) as f64;
            let q = rng.gen_range(10..=20) as f64;
            Scalar::from_f64(sign * p / q, 0.0)
        }
    }
}

pub fn positive_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_ratio(rng.gen_range(1..=20), rng.gen_range(1..=20))
}

/// A triangular cell with random nonzero weight pairs.
pub fn triangle(
    rng: &mut ChaCha8Rng,
    mode: Mode,
    kind: CellKind,
    n: usize,
) -> TriangleNetwork<Scalar> {
    let weights = black_labels(kind, n)
        .into_iter()
        .map(|v| (v, (rational(rng, mode), rational(rng, mode))))
        .collect();
    TriangleNetwork::new(kind, n, weights).expect("random weights are nonzero")
}

fn close_gamma(alpha: &[Scalar], beta: &[Scalar], head: &mut Vec<Scalar>) {
    // The product constraint prod(alpha * gamma / beta) = 1 pins the last
    // entry; everything is nonzero so the closing value is too.
    let mut prod = Scalar::one();
    for a in alpha {
        prod = prod.mul(a);
    }
    for g in head.iter() {
        prod = prod.mul(g);
    }
    for b in beta {
        prod = prod.mul(&b.try_inverse().expect("nonzero"));
    }
    head.push(prod.try_inverse().expect("nonzero"));
}

/// Consistent eigenvalue data: α, β and all but one γ are free draws; the
/// last γ closes the product constraint.
pub fn eigen_data(rng: &mut ChaCha8Rng, mode: Mode, n: usize) -> EigenData {
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
        (0..n).map(|_| rational(rng, mode)).collect()
    };
    let alpha = draw(rng);
    let beta = draw(rng);
    let mut gamma: Vec<Scalar> = (0..n - 1).map(|_| rational(rng, mode)).collect();
    close_gamma(&alpha, &beta, &mut gamma);
    EigenData::new(alpha, beta, gamma).expect("closed data is consistent")
}

/// Positive-real eigenvalue data, with γ either all positive or all
/// negative. The closing entry inherits the right sign: drawing n−1
/// negative entries makes the closing product negative exactly when n is
/// even, which is the only case a negative γ is asked for.
pub fn signed_eigen_data(rng: &mut ChaCha8Rng, n: usize, negative_gamma: bool) -> EigenData {
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
        (0..n).map(|_| positive_rational(rng)).collect()
    };
    let alpha = draw(rng);
    let beta = draw(rng);
    let mut gamma: Vec<Scalar> = (0..n - 1)
        .map(|_| {
            let v = positive_rational(rng);
            if negative_gamma {
                v.neg()
            } else {
                v
            }
        })
        .collect();
    close_gamma(&alpha, &beta, &mut gamma);
    let data = EigenData::new(alpha, beta, gamma).expect("closed data is consistent");
    for g in &data.gamma {
        let ok = if negative_gamma {
            g.is_negative_real()
        } else {
            g.is_positive_real()
        };
        assert!(ok, "gamma sign drifted during closing: {}", g);
    }
    data
}

pub fn free_block(rng: &mut ChaCha8Rng, mode: Mode, n: usize) -> FreeBlock {
    let y = (0..n.saturating_sub(2))
        .map(|_| (0..n - 1).map(|_| rational(rng, mode)).collect())
        .collect();
    FreeBlock::new(n, y).expect("random block entries are nonzero")
}

pub fn positive_free_block(rng: &mut ChaCha8Rng, n: usize) -> FreeBlock {
    let y = (0..n.saturating_sub(2))
        .map(|_| (0..n - 1).map(|_| positive_rational(rng)).collect())
        .collect();
    FreeBlock::new(n, y).expect("random block entries are nonzero")
}
