//! Invariant flags and simultaneous triangularization.
//!
//! A pair of diagonalizable matrices (A, B) whose invariant flags sit in
//! generic position can be conjugated by a single matrix M so that M⁻¹AM
//! is lower triangular and M⁻¹BM is upper triangular, with the diagonals
//! in any requested eigenvalue order. The k-th column of M spans the line
//! f_{n+1-k} ∩ g_k cut out by the two flags. All computations are exact;
//! float-mode inputs are rejected rather than thresholded.

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum ConjugationError {
    #[error("expected {expected} eigenvalues in the order, got {got}")]
    WrongOrderLength { expected: usize, got: usize },
    #[error(
        "eigenvalue {value} requested {requested} times but its eigenspace has dimension {available}"
    )]
    DefectiveOrMissing {
        value: String,
        requested: usize,
        available: usize,
    },
    #[error("invariant flags are not transverse; the pair has no generic triangularization")]
    NotTransverse,
    #[error("flag basis vectors are linearly dependent")]
    DependentBasis,
    #[error("matrix computation failed: {0}")]
    Matrix(#[from] MatrixError),
}

/// A complete flag presented by an ordered basis: the i-th subspace is the
/// span of the first i vectors.
#[derive(Debug, Clone)]
pub struct Flag {
    pub n: usize,
    pub basis: Vec<Vec<Scalar>>,
}

impl Flag {
    pub fn new(basis: Vec<Vec<Scalar>>) -> Result<Flag, ConjugationError> {
        let n = basis.len();
        for v in &basis {
            assert_eq!(v.len(), n, "flag basis vector has wrong length");
        }
        if Matrix::column_rank(n, &basis)? != n {
            return Err(ConjugationError::DependentBasis);
        }
        Ok(Flag { n, basis })
    }

    /// The coordinate flag spanned by e_1, e_1..e_2, and so on.
    pub fn standard(n: usize) -> Flag {
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|r| {
                        if r == i {
                            Scalar::one_exact()
                        } else {
                            Scalar::zero_exact()
                        }
                    })
                    .collect()
            })
            .collect();
        Flag { n, basis }
    }

    /// Basis of the i-th subspace.
    pub fn prefix(&self, i: usize) -> &[Vec<Scalar>] {
        &self.basis[..i]
    }
}

/// A complete flag preserved by `a`, built from exact eigenvectors in the
/// requested eigenvalue order. Repeated values consume successive vectors
/// of the same eigenspace; if an eigenspace is too small for the requested
/// multiplicity (defective matrix, or a value that is not an eigenvalue at
/// all) the call fails.
pub fn invariant_flag(
    a: &Matrix<Scalar>,
    eigen_order: &[Scalar],
) -> Result<Flag, ConjugationError> {
    let n = a.n();
    if eigen_order.len() != n {
        return Err(ConjugationError::WrongOrderLength {
            expected: n,
            got: eigen_order.len(),
        });
    }
    // One kernel computation per distinct eigenvalue, consumed left to right.
    let mut spaces: Vec<(Scalar, Vec<Vec<Scalar>>, usize)> = Vec::new();
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for lam in eigen_order {
        let idx = match spaces.iter().position(|(v, _, _)| v == lam) {
            Some(i) => i,
            None => {
                let shifted = Matrix::from_fn(n, |i, j| {
                    if i == j {
                        a[(i, j)].sub(lam)
                    } else {
                        a[(i, j)].clone()
                    }
                });
                spaces.push((lam.clone(), shifted.kernel()?, 0));
                spaces.len() - 1
            }
        };
        let (_, ker, used) = &mut spaces[idx];
        if *used >= ker.len() {
            return Err(ConjugationError::DefectiveOrMissing {
                value: format!("{}", lam),
                requested: eigen_order.iter().filter(|x| *x == lam).count(),
                available: ker.len(),
            });
        }
        basis.push(ker[*used].clone());
        *used += 1;
    }
    Flag::new(basis)
}

/// Whether dim(f_i ∩ g_j) = max(0, i + j − n) for every i, j: the generic
/// relative position of two complete flags, decided by exact ranks.
pub fn transversal(f: &Flag, g: &Flag) -> Result<bool, ConjugationError> {
    assert_eq!(f.n, g.n, "flags must live in the same dimension");
    let n = f.n;
    for i in 1..=n {
        for j in 1..=n {
            let mut cols = f.prefix(i).to_vec();
            cols.extend_from_slice(g.prefix(j));
            let rank = Matrix::column_rank(n, &cols)?;
            if i + j - rank != (i + j).saturating_sub(n) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A nonzero vector spanning f_i ∩ g_j; the caller guarantees the
/// intersection is a line.
fn flag_intersection(f: &Flag, i: usize, g: &Flag, j: usize) -> Result<Vec<Scalar>, ConjugationError> {
    let n = f.n;
    let mut cols = f.prefix(i).to_vec();
    cols.extend_from_slice(g.prefix(j));
    let null = Matrix::nullspace_of_columns(n, &cols)?;
    assert_eq!(
        null.len(),
        1,
        "transverse flags meet in a line at complementary indices"
    );
    // A relation Σ x_r v_r + Σ y_s w_s = 0 puts Σ x_r v_r in both spans;
    // it is nonzero because each flag basis is independent.
    let c = &null[0];
    let u: Vec<Scalar> = (0..n)
        .map(|r| {
            let mut acc = Scalar::zero_exact();
            for (t, v) in f.prefix(i).iter().enumerate() {
                acc = acc.add(&c[t].mul(&v[r]));
            }
            acc
        })
        .collect();
    assert!(u.iter().any(|x| !x.is_zero()), "intersection vector vanished");
    Ok(u)
}

/// Conjugate a pair (a, b) into lower/upper triangular form with prescribed
/// diagonals. Returns (M, M⁻¹aM, M⁻¹bM) where column k of M spans
/// f_{n+1-k} ∩ g_k, f is the a-invariant flag listing `alpha_order`
/// reversed, and g is the b-invariant flag listing `beta_order`. The
/// triangular outputs carry diag exactly equal to the requested orders.
pub fn triangularize_pair(
    a: &Matrix<Scalar>,
    b: &Matrix<Scalar>,
    alpha_order: &[Scalar],
    beta_order: &[Scalar],
) -> Result<(Matrix<Scalar>, Matrix<Scalar>, Matrix<Scalar>), ConjugationError> {
    let n = a.n();
    assert_eq!(b.n(), n, "pair must share a size");
    let mut rev_alpha = alpha_order.to_vec();
    rev_alpha.reverse();
    let f = invariant_flag(a, &rev_alpha)?;
    let g = invariant_flag(b, beta_order)?;
    if !transversal(&f, &g)? {
        return Err(ConjugationError::NotTransverse);
    }
    let mut columns = Vec::new();
    for k in 1..=n {
        columns.push(flag_intersection(&f, n + 1 - k, &g, k)?);
    }
    let m = Matrix::from_fn(n, |i, j| columns[j][i].clone());
    let mi = m.inverse()?;
    let ap = mi.mat_mul(a)?.mat_mul(&m)?;
    let bp = mi.mat_mul(b)?.mat_mul(&m)?;
    assert!(ap.is_lower_triangular(), "conjugated A must be lower triangular");
    assert!(bp.is_upper_triangular(), "conjugated B must be upper triangular");
    assert_eq!(ap.diagonal(), alpha_order, "diagonal of A' follows the requested order");
    assert_eq!(bp.diagonal(), beta_order, "diagonal of B' follows the requested order");
    Ok((m, ap, bp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(vals: &[i64]) -> Vec<Scalar> {
        vals.iter().map(|&v| Scalar::from_int(v)).collect()
    }

    fn int_matrix(rows: Vec<Vec<i64>>) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Scalar::from_int).collect())
                .collect(),
        )
        .unwrap()
    }

    fn diag(vals: &[i64]) -> Matrix<Scalar> {
        let n = vals.len();
        Matrix::from_fn(n, |i, j| {
            if i == j {
                Scalar::from_int(vals[i])
            } else {
                Scalar::zero_exact()
            }
        })
    }

    #[test]
    fn diagonal_matrix_gives_coordinate_flags() {
        let a = diag(&[2, 3, 5]);
        let f = invariant_flag(&a, &ints(&[2, 3, 5])).unwrap();
        assert_eq!(f.basis, Flag::standard(3).basis);
        let r = invariant_flag(&a, &ints(&[5, 3, 2])).unwrap();
        let mut rev = Flag::standard(3).basis;
        rev.reverse();
        assert_eq!(r.basis, rev);
    }

    #[test]
    fn conjugated_matrix_flag_is_invariant() {
        let p = int_matrix(vec![vec![1, 2, 0], vec![0, 1, 3], vec![1, 1, 1]]);
        let a = p
            .mat_mul(&diag(&[2, 3, 5]))
            .unwrap()
            .mat_mul(&p.inverse().unwrap())
            .unwrap();
        let f = invariant_flag(&a, &ints(&[3, 5, 2])).unwrap();
        for i in 1..=3 {
            // Rank must not grow when the images A·v_1..A·v_i are appended.
            let mut cols = f.prefix(i).to_vec();
            for v in f.prefix(i) {
                let img: Vec<Scalar> = (0..3)
                    .map(|r| {
                        let mut acc = Scalar::zero_exact();
                        for c in 0..3 {
                            acc = acc.add(&a[(r, c)].mul(&v[c]));
                        }
                        acc
                    })
                    .collect();
                cols.push(img);
            }
            assert_eq!(
                Matrix::column_rank(3, &cols).unwrap(),
                i,
                "subspace {} not invariant",
                i
            );
        }
    }

    #[test]
    fn defective_and_missing_eigenvalues_are_rejected() {
        let jordan = int_matrix(vec![vec![2, 1], vec![0, 2]]);
        match invariant_flag(&jordan, &ints(&[2, 2])) {
            Err(ConjugationError::DefectiveOrMissing {
                requested,
                available,
                ..
            }) => {
                assert_eq!((requested, available), (2, 1));
            }
            other => panic!("expected a defective rejection, got {:?}", other),
        }
        assert!(matches!(
            invariant_flag(&diag(&[2, 3]), &ints(&[2, 5])),
            Err(ConjugationError::DefectiveOrMissing { .. })
        ));
    }

    #[test]
    fn repeated_eigenvalues_consume_eigenspace_vectors() {
        let a = diag(&[2, 2, 3]);
        let f = invariant_flag(&a, &ints(&[2, 3, 2])).unwrap();
        assert_eq!(f.basis.len(), 3);
    }

    #[test]
    fn transversality_matches_the_rank_formula() {
        let f = Flag::standard(3);
        let mut rev = Flag::standard(3).basis;
        rev.reverse();
        let g = Flag::new(rev).unwrap();
        assert!(transversal(&f, &g).unwrap());
        assert!(!transversal(&f, &f).unwrap(), "a flag is never transverse to itself");
    }

    #[test]
    fn triangular_inputs_give_a_diagonal_change_of_basis() {
        let a = int_matrix(vec![vec![2, 0], vec![1, 3]]);
        let b = int_matrix(vec![vec![5, 4], vec![0, 7]]);
        let (m, ap, bp) = triangularize_pair(&a, &b, &ints(&[2, 3]), &ints(&[5, 7])).unwrap();
        assert!(m[(0, 1)].is_zero() && m[(1, 0)].is_zero(), "M should be diagonal");
        assert_eq!(ap.diagonal(), ints(&[2, 3]));
        assert_eq!(bp.diagonal(), ints(&[5, 7]));
    }

    #[test]
    fn random_conjugate_of_a_triangular_pair_is_recovered() {
        let a0 = int_matrix(vec![vec![2, 0], vec![-3, 3]]);
        let b0 = int_matrix(vec![vec![5, 4], vec![0, 7]]);
        let p = int_matrix(vec![vec![1, 2], vec![3, 5]]);
        let pi = p.inverse().unwrap();
        let a = p.mat_mul(&a0).unwrap().mat_mul(&pi).unwrap();
        let b = p.mat_mul(&b0).unwrap().mat_mul(&pi).unwrap();

        let (m, ap, bp) = triangularize_pair(&a, &b, &ints(&[2, 3]), &ints(&[5, 7])).unwrap();
        assert_eq!(ap.diagonal(), ints(&[2, 3]));
        assert_eq!(bp.diagonal(), ints(&[5, 7]));

        // Rescaling the columns of M cannot change the diagonals.
        let delta = diag(&[4, 9]);
        let md = m.mat_mul(&delta).unwrap();
        let mdi = md.inverse().unwrap();
        let ap2 = mdi.mat_mul(&a).unwrap().mat_mul(&md).unwrap();
        assert_eq!(ap2.diagonal(), ap.diagonal());
    }

    #[test]
    fn coincident_flags_are_rejected() {
        // With the alpha order reversed internally, both invariant flags
        // come out as (e2, e1): coincident, hence not transverse.
        let a = int_matrix(vec![vec![2, 0], vec![0, 3]]);
        assert!(matches!(
            triangularize_pair(&a, &a, &ints(&[2, 3]), &ints(&[3, 2])),
            Err(ConjugationError::NotTransverse)
        ));
        // The same matrix twice with matching orders asks for opposite
        // flags, which are transverse; the pair then triangularizes.
        let (_, ap, bp) = triangularize_pair(&a, &a, &ints(&[2, 3]), &ints(&[2, 3])).unwrap();
        assert_eq!(ap.diagonal(), ints(&[2, 3]));
        assert_eq!(bp.diagonal(), ints(&[2, 3]));
    }
}
