//! Integer and rational matrix utilities used for the lattice side of the
//! construction: exponent matrices, cycle bases, and homology-adapted bases.
//!
//! Everything here is exact: `BigInt` / `BigRational` entries, Gaussian or
//! Smith-style eliminations, no floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix (not necessarily square).
#[derive(Debug, Clone, PartialEq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    e: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            e: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            e: rows.into_iter().flatten().map(BigInt::from).collect(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigRational::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        qmat_rank(&self.to_rational())
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square unimodular matrix (det = +-1), exact integer.
    /// Returns `None` when the matrix is not square-unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMat> {
        if self.rows != self.cols {
            return None;
        }
        let inv = qmat_inverse(&self.to_rational())?;
        let mut out = IntMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &inv[i][j];
                if !v.denom().is_one() {
                    return None;
                }
                out[(i, j)] = v.numer().clone();
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.e.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.e.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.e[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.e[i * self.cols + j]
    }
}

/// Smith decomposition of `a` restricted to what the homology splitting
/// needs: unimodular `p` (and its inverse `q = p^-1`) with
/// `p * a * r = diag(d)` for some unimodular column transform `r` that is not
/// returned. The columns of `q` adapted-base the row space: the lattice
/// spanned by the columns of `a` equals the span of `d[i] * q.col(i)`.
#[derive(Debug, Clone)]
pub struct SmithBasis {
    pub d: Vec<BigInt>,
    pub p: IntMat,
    pub q: IntMat,
}

pub fn smith_basis(a: &IntMat) -> SmithBasis {
    let mut m = a.clone();
    let mut p = IntMat::identity(a.rows);
    let mut q = IntMat::identity(a.rows);
    // Row op on m is mirrored on p; its inverse is applied to q as a column
    // op so that q stays equal to p^-1 throughout.
    let rows = a.rows;
    let cols = a.cols;
    let mut t = 0;
    while t < rows && t < cols {
        // Find a nonzero pivot of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[(i, j)].is_zero()
                    && pivot.map_or(true, |(pi, pj)| {
                        m[(i, j)].magnitude() < m[(pi, pj)].magnitude()
                    })
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap_rows(t, pi);
        p.swap_rows(t, pi);
        q.swap_cols(t, pi);
        m.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            // Clear the pivot column with integer row reductions.
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let k = -div_round(&m[(i, t)], &m[(t, t)]);
                if !k.is_zero() {
                    m.add_row(i, t, &k);
                    p.add_row(i, t, &k);
                    let nk = -&k;
                    q.add_col(t, i, &nk);
                }
                if !m[(i, t)].is_zero() {
                    // Remainder smaller than pivot: promote it.
                    m.swap_rows(t, i);
                    p.swap_rows(t, i);
                    q.swap_cols(t, i);
                    dirty = true;
                }
            }
            // Clear the pivot row with column reductions (no transform kept).
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let k = -div_round(&m[(t, j)], &m[(t, t)]);
                if !k.is_zero() {
                    m.add_col(j, t, &k);
                }
                if !m[(t, j)].is_zero() {
                    m.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&m[(i, j)] % &m[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        m.add_row(t, i, &one);
                        p.add_row(t, i, &one);
                        let neg = -BigInt::one();
                        q.add_col(i, t, &neg);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
            p.negate_row(t);
            q.negate_col(t);
        }
        t += 1;
    }
    let d = (0..t).map(|i| m[(i, i)].clone()).collect();
    SmithBasis { d, p, q }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Round-to-nearest quotient: |a - q*b| <= |b|/2 regardless of signs.
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if r.magnitude() * 2u32 > *b.magnitude() {
        q + BigInt::one()
    } else {
        q
    }
}

// ---------------------------------------------------------------------------
// Exact rational elimination helpers.
// ---------------------------------------------------------------------------

fn rref_q(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn qmat_rank(a: &[Vec<BigRational>]) -> usize {
    let mut rows = a.to_vec();
    rref_q(&mut rows).len()
}

/// Solve `a x = b` for a consistent (possibly overdetermined) system with
/// full column rank; returns `None` when inconsistent. Free columns, if any,
/// are set to zero.
pub fn qmat_solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    assert_eq!(b.len(), nrows);
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref_q(&mut aug);
    if pivots.contains(&ncols) {
        return None; // pivot in the rhs column: inconsistent
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    Some(x)
}

pub fn qmat_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            r
        })
        .collect();
    let pivots = rref_q(&mut aug);
    if pivots.len() != n {
        return None;
    }
    Some(
        (0..n)
            .map(|i| aug[i][n..].to_vec())
            .collect(),
    )
}

/// Basis of the right kernel of `a`, one vector per free column.
pub fn qmat_nullspace(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    let pivots = rref_q(&mut rows);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}
