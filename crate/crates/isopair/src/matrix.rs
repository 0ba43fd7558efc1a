//! Square matrices over a generic ring, with the exact linear algebra the
//! construction needs: multiplication, inversion with a zero-pivot witness,
//! characteristic polynomials, triangular spectra, and a numeric root finder
//! for float-mode spectra. Also defines the JSON wire format for matrices and
//! multiset comparison of spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::ring::Ring;
use crate::scalar::{format_rational, parse_rational, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix rows must form an n x n grid")]
    NotSquare,
    #[error("size mismatch: left is {left} x {left}, right is {right} x {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("matrix is singular: no usable pivot in column {col} (0-based)")]
    Singular { col: usize },
    #[error("matrix is not triangular, spectrum is not its diagonal")]
    NotTriangular,
    #[error("root finder did not converge")]
    NonConvergence,
    #[error("operation requires exact-mode entries")]
    ExactModeRequired,
    #[error("bad matrix JSON: {0}")]
    BadJson(String),
}

/// A dense square matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::NotSquare);
        }
        Ok(Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].clone()).collect())
            .collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn mat_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.n != rhs.n {
            return Err(MatrixError::SizeMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        Ok(Matrix::from_fn(self.n, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.n {
                acc = acc.add(&self[(i, k)].mul(&rhs[(k, j)]));
            }
            acc
        }))
    }

    /// Gauss-Jordan inverse. Pivots are searched downward for an invertible
    /// entry; a column without one reports `Singular` with the column index.
    /// (Over a field that means genuinely singular; over the Laurent ring it
    /// can also mean a non-monomial pivot, which the triangular matrices used
    /// here never produce.)
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv: Matrix<T> = Matrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| a[(r, col)].try_inverse().is_some())
                .ok_or(MatrixError::Singular { col })?;
            if pivot_row != col {
                for j in 0..n {
                    a.entries.swap(pivot_row * n + j, col * n + j);
                    inv.entries.swap(pivot_row * n + j, col * n + j);
                }
            }
            let pinv = a[(col, col)].try_inverse().expect("pivot chosen invertible");
            for j in 0..n {
                a[(col, j)] = a[(col, j)].mul(&pinv);
                inv[(col, j)] = inv[(col, j)].mul(&pinv);
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].sub(&factor.mul(&a[(col, j)]));
                    inv[(r, j)] = inv[(r, j)].sub(&factor.mul(&inv[(col, j)]));
                }
            }
        }
        Ok(inv)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)].is_zero()))
    }

    /// Zero strictly above the antidiagonal: entry (i, j) = 0 when
    /// i + j < n - 1 (0-based).
    pub fn is_lower_antitriangular(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i + j >= self.n - 1 || self[(i, j)].is_zero()))
    }

    /// Zero strictly below the antidiagonal: entry (i, j) = 0 when
    /// i + j > n - 1 (0-based).
    pub fn is_upper_antitriangular(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i + j <= self.n - 1 || self[(i, j)].is_zero()))
    }

    /// Diagonal of a triangular matrix, i.e. its spectrum with multiplicity.
    pub fn triangular_spectrum(&self) -> Result<Vec<T>, MatrixError> {
        if self.is_lower_triangular() || self.is_upper_triangular() {
            Ok(self.diagonal())
        } else {
            Err(MatrixError::NotTriangular)
        }
    }

    /// Monic characteristic polynomial coefficients `[1, c1, ..., cn]` for
    /// `x^n + c1 x^(n-1) + ... + cn`, by the trace recursion
    /// (Faddeev-LeVerrier). Needs the ring to contain the rationals, which
    /// both scalar modes and Laurent polynomials do.
    pub fn char_poly(&self) -> Vec<T> {
        let n = self.n;
        let mut coeffs = vec![T::one()];
        let mut m = Matrix::<T>::zeros(n);
        for k in 1..=n {
            // m <- a * (m + c_{k-1} I)
            let ck = coeffs.last().unwrap().clone();
            let shifted = Matrix::from_fn(n, |i, j| {
                if i == j {
                    m[(i, j)].add(&ck)
                } else {
                    m[(i, j)].clone()
                }
            });
            m = self.mat_mul(&shifted).expect("same size");
            let mut tr = T::zero();
            for i in 0..n {
                tr = tr.add(&m[(i, i)]);
            }
            let inv_k = T::from_i64(k as i64)
                .try_inverse()
                .expect("ring must contain rationals");
            coeffs.push(tr.mul(&inv_k).neg());
        }
        coeffs
    }

    pub fn det(&self) -> T {
        let cp = self.char_poly();
        let cn = cp.last().expect("char poly has n+1 coefficients").clone();
        if self.n % 2 == 0 {
            cn
        } else {
            cn.neg()
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.n + j]
    }
}

impl<T: Ring> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Scalar-specific: numeric spectra, exact kernels, JSON wire format.
// ---------------------------------------------------------------------------

impl Matrix<Scalar> {
    pub fn all_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }

    pub fn to_float(&self) -> Matrix<Scalar> {
        self.map(|e| {
            let z = e.to_complex64();
            Scalar::from_f64(z.re, z.im)
        })
    }

    /// All eigenvalues as float-mode scalars, via the characteristic
    /// polynomial and a simultaneous (Durand-Kerner) root iteration.
    /// Internal tolerance 1e-12 on the iteration step; residuals are checked
    /// at 1e-8 before accepting, otherwise `NonConvergence` is reported.
    pub fn numeric_spectrum(&self) -> Result<Vec<Scalar>, MatrixError> {
        let cp: Vec<Complex64> = self
            .map(|e| Scalar::Float(e.to_complex64()))
            .char_poly()
            .iter()
            .map(|c| c.to_complex64())
            .collect();
        let roots = durand_kerner(&cp)?;
        Ok(roots.into_iter().map(Scalar::Float).collect())
    }

    /// Reduced row echelon form (exact mode only). Returns the rref matrix as
    /// rows (possibly fewer than n after dropping zero rows is NOT done; all
    /// rows kept) together with the pivot column of each pivot row.
    fn rref(rows: &mut [Vec<Scalar>]) -> Result<Vec<usize>, MatrixError> {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r][c]
                .try_inverse()
                .ok_or(MatrixError::ExactModeRequired)?;
            for x in rows[r].iter_mut() {
                *x = x.mul(&inv);
            }
            for i in 0..nrows {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..ncols {
                        let t = f.mul(&rows[r][j]);
                        rows[i][j] = rows[i][j].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == nrows {
                break;
            }
        }
        Ok(pivots)
    }

    /// Rank of an arbitrary list of length-`dim` column vectors, exact.
    pub fn column_rank(dim: usize, cols: &[Vec<Scalar>]) -> Result<usize, MatrixError> {
        for c in cols {
            assert_eq!(c.len(), dim, "column has wrong length");
            if c.iter().any(|x| !x.is_exact()) {
                return Err(MatrixError::ExactModeRequired);
            }
        }
        // Work on the transpose: rows = given vectors.
        let mut rows: Vec<Vec<Scalar>> = cols.to_vec();
        let pivots = Matrix::rref(&mut rows)?;
        Ok(pivots.len())
    }

    /// Basis of the kernel of `self` (exact mode only), in the canonical form
    /// produced by back-substitution over the rref: one vector per free
    /// column, deterministic.
    pub fn kernel(&self) -> Result<Vec<Vec<Scalar>>, MatrixError> {
        let cols: Vec<Vec<Scalar>> = (0..self.n)
            .map(|c| (0..self.n).map(|r| self[(r, c)].clone()).collect())
            .collect();
        Matrix::nullspace_of_columns(self.n, &cols)
    }

    /// Kernel of the `dim × cols.len()` matrix with the given columns:
    /// coefficient vectors x with Σ x_c · cols[c] = 0, exact mode only.
    /// Canonical basis, one vector per free column of the rref.
    pub fn nullspace_of_columns(
        dim: usize,
        cols: &[Vec<Scalar>],
    ) -> Result<Vec<Vec<Scalar>>, MatrixError> {
        let m = cols.len();
        for c in cols {
            assert_eq!(c.len(), dim, "column has wrong length");
            if c.iter().any(|x| !x.is_exact()) {
                return Err(MatrixError::ExactModeRequired);
            }
        }
        let mut rows: Vec<Vec<Scalar>> = (0..dim)
            .map(|r| (0..m).map(|c| cols[c][r].clone()).collect())
            .collect();
        let pivots = Matrix::rref(&mut rows)?;
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..m).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![Scalar::zero_exact(); m];
            v[free] = Scalar::one_exact();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[r][free].neg();
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

/// Simultaneous root iteration for a monic polynomial given by coefficients
/// `[1, c1, ..., cn]`.
fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>, MatrixError> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    // Scale-aware seed radius keeps widely spread roots reachable.
    let scale = coeffs
        .iter()
        .skip(1)
        .map(|c| c.norm())
        .fold(1.0_f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| seed.powu(j as u32 + 1) * (1.0 + scale))
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step = 0.0_f64;
        for j in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for m in 0..n {
                if m != j {
                    denom *= z[j] - z[m];
                }
            }
            if denom.norm() == 0.0 {
                // Coincident iterates: nudge and continue.
                z[j] += Complex64::new(1e-6, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(z[j]) / denom;
            z[j] -= step;
            let rel = step.norm() / z[j].norm().max(1.0);
            max_step = max_step.max(rel);
        }
        if max_step < 1e-12 {
            converged = true;
            break;
        }
    }
    let residual_ok = z
        .iter()
        .all(|&r| eval(r).norm() <= 1e-8 * (1.0 + r.norm().powi(coeffs.len() as i32)));
    if converged || residual_ok {
        Ok(z)
    } else {
        Err(MatrixError::NonConvergence)
    }
}

// ---------------------------------------------------------------------------
// Multisets of scalars.
// ---------------------------------------------------------------------------

/// A multiset of scalars. Exact multisets compare by exact value counts;
/// anything involving floats compares by greedy matching within a tolerance.
#[derive(Debug, Clone)]
pub struct Multiset {
    pub items: Vec<Scalar>,
}

impl Multiset {
    pub fn new(items: Vec<Scalar>) -> Self {
        Multiset { items }
    }

    pub fn eq_exact(&self, other: &Multiset) -> bool {
        if self.items.len() != other.items.len() {
            return false;
        }
        let mut used = vec![false; other.items.len()];
        'outer: for a in &self.items {
            for (j, b) in other.items.iter().enumerate() {
                if !used[j] && a == b {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    pub fn eq_with_tol(&self, other: &Multiset, tol: f64) -> bool {
        let all_exact = self.items.iter().chain(&other.items).all(|s| s.is_exact());
        if all_exact {
            return self.eq_exact(other);
        }
        if self.items.len() != other.items.len() {
            return false;
        }
        let mut used = vec![false; other.items.len()];
        'outer: for a in &self.items {
            let mut best: Option<(usize, f64)> = None;
            for (j, b) in other.items.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let d = a.dist(b);
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            if let Some((j, d)) = best {
                if d <= tol {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Canonical sorted rendering, for witnesses and reports.
    pub fn to_sorted_strings(&self) -> Vec<String> {
        let mut items = self.items.clone();
        items.sort_by(|a, b| a.sort_key_cmp(b));
        items.iter().map(|s| s.to_string()).collect()
    }
}

// ---------------------------------------------------------------------------
// JSON wire format.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EntryDto {
    re: serde_json::Value,
    im: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct MatrixDto {
    n: usize,
    mode: String,
    entries: Vec<Vec<EntryDto>>,
}

impl Matrix<Scalar> {
    /// Serialize as `{"n", "mode": "exact"|"float", "entries": [[{re, im}]]}`
    /// with rationals as strings in exact mode and numbers in float mode.
    pub fn to_json(&self) -> serde_json::Value {
        let exact = self.all_exact();
        let entries: Vec<Vec<EntryDto>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match &self[(i, j)] {
                        Scalar::Exact(z) if exact => EntryDto {
                            re: serde_json::Value::String(format_rational(&z.re)),
                            im: serde_json::Value::String(format_rational(&z.im)),
                        },
                        s => {
                            let z = s.to_complex64();
                            EntryDto {
                                re: serde_json::json!(z.re),
                                im: serde_json::json!(z.im),
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        serde_json::to_value(MatrixDto {
            n: self.n,
            mode: if exact { "exact" } else { "float" }.to_string(),
            entries,
        })
        .expect("matrix DTO serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Matrix<Scalar>, MatrixError> {
        let dto: MatrixDto =
            serde_json::from_value(v.clone()).map_err(|e| MatrixError::BadJson(e.to_string()))?;
        if dto.entries.len() != dto.n || dto.entries.iter().any(|r| r.len() != dto.n) {
            return Err(MatrixError::BadJson(format!(
                "entries must be {0} x {0}",
                dto.n
            )));
        }
        let parse_part = |v: &serde_json::Value, exact: bool| -> Result<ScalarPart, MatrixError> {
            match (v, exact) {
                (serde_json::Value::String(s), true) => parse_rational(s)
                    .map(ScalarPart::Exact)
                    .map_err(|e| MatrixError::BadJson(e.to_string())),
                (serde_json::Value::Number(x), false) => x
                    .as_f64()
                    .map(ScalarPart::Float)
                    .ok_or_else(|| MatrixError::BadJson("non-finite number".into())),
                _ => Err(MatrixError::BadJson(
                    "entry type does not match declared mode".into(),
                )),
            }
        };
        let exact = match dto.mode.as_str() {
            "exact" => true,
            "float" => false,
            m => return Err(MatrixError::BadJson(format!("unknown mode {m:?}"))),
        };
        let mut rows = Vec::with_capacity(dto.n);
        for row in &dto.entries {
            let mut out = Vec::with_capacity(dto.n);
            for e in row {
                let re = parse_part(&e.re, exact)?;
                let im = parse_part(&e.im, exact)?;
                out.push(match (re, im) {
                    (ScalarPart::Exact(re), ScalarPart::Exact(im)) => {
                        Scalar::from_rational_pair(re, im)
                    }
                    (ScalarPart::Float(re), ScalarPart::Float(im)) => Scalar::from_f64(re, im),
                    _ => unreachable!("mode checked per part"),
                });
            }
            rows.push(out);
        }
        Matrix::from_rows(rows)
    }
}

enum ScalarPart {
    Exact(num_rational::BigRational),
    Float(f64),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[(i64, i64)]]) -> Matrix<Scalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| Scalar::from_ratio(p, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn multiply() {
        let a = m(&[&[(5, 1), (4, 1)], &[(0, 1), (7, 1)]]);
        let b = m(&[&[(1, 2), (0, 1)], &[(1, 2), (1, 3)]]);
        let c = a.mat_mul(&b).unwrap();
        assert_eq!(c, m(&[&[(9, 2), (4, 3)], &[(7, 2), (7, 3)]]));
    }

    #[test]
    fn inverse_and_singular_witness() {
        let a = m(&[&[(2, 1), (0, 1)], &[(-3, 1), (3, 1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[(1, 2), (0, 1)], &[(1, 2), (1, 3)]]));
        assert_eq!(
            a.mat_mul(&inv).unwrap(),
            Matrix::<Scalar>::identity(2),
            "a * a^-1 = I"
        );

        let s = m(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]);
        assert_eq!(s.inverse(), Err(MatrixError::Singular { col: 1 }));
    }

    #[test]
    fn char_poly_and_det() {
        // [[2,1],[1,2]]: x^2 - 4x + 3, det 3.
        let a = m(&[&[(2, 1), (1, 1)], &[(1, 1), (2, 1)]]);
        let cp = a.char_poly();
        assert_eq!(
            cp,
            vec![
                Scalar::from_int(1),
                Scalar::from_int(-4),
                Scalar::from_int(3)
            ]
        );
        assert_eq!(a.det(), Scalar::from_int(3));
        // 3x3 with known det -13: [[1,2,0],[3,1,4],[0,2,1]]
        let b = m(&[
            &[(1, 1), (2, 1), (0, 1)],
            &[(3, 1), (1, 1), (4, 1)],
            &[(0, 1), (2, 1), (1, 1)],
        ]);
        assert_eq!(b.det(), Scalar::from_int(-13));
    }

    #[test]
    fn triangular_predicates() {
        let lower = m(&[&[(1, 1), (0, 1)], &[(5, 1), (2, 1)]]);
        assert!(lower.is_lower_triangular());
        assert!(!lower.is_upper_triangular());
        assert_eq!(
            lower.triangular_spectrum().unwrap(),
            vec![Scalar::from_int(1), Scalar::from_int(2)]
        );
        let full = m(&[&[(1, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        assert_eq!(full.triangular_spectrum(), Err(MatrixError::NotTriangular));

        // Lower antitriangular: zero strictly above the antidiagonal.
        let anti = m(&[
            &[(0, 1), (0, 1), (1, 1)],
            &[(0, 1), (2, 1), (3, 1)],
            &[(4, 1), (5, 1), (6, 1)],
        ]);
        assert!(anti.is_lower_antitriangular());
        assert!(!anti.is_upper_antitriangular());
        assert!(anti.transpose().is_lower_antitriangular());
        let anti_up = m(&[
            &[(1, 1), (2, 1), (3, 1)],
            &[(4, 1), (5, 1), (0, 1)],
            &[(6, 1), (0, 1), (0, 1)],
        ]);
        assert!(anti_up.is_upper_antitriangular());
    }

    #[test]
    fn numeric_spectrum_matches_known_roots() {
        // diag(1, 35/6) hidden under conjugation-free triangular form.
        let a = m(&[&[(1, 1), (0, 1)], &[(12, 5), (35, 6)]]);
        let spec = a.numeric_spectrum().unwrap();
        let got = Multiset::new(spec);
        let want = Multiset::new(vec![
            Scalar::from_f64(1.0, 0.0),
            Scalar::from_f64(35.0 / 6.0, 0.0),
        ]);
        assert!(got.eq_with_tol(&want, 1e-8));
    }

    #[test]
    fn kernel_exact() {
        // Rank-1 matrix; kernel is 2-dimensional.
        let a = m(&[
            &[(1, 1), (2, 1), (3, 1)],
            &[(2, 1), (4, 1), (6, 1)],
            &[(-1, 1), (-2, 1), (-3, 1)],
        ]);
        let k = a.kernel().unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            for i in 0..3 {
                let mut acc = Scalar::zero_exact();
                for j in 0..3 {
                    acc = acc.add(&a[(i, j)].mul(&v[j]));
                }
                assert!(acc.is_zero(), "kernel vector annihilated");
            }
        }
        assert_eq!(
            Matrix::column_rank(3, &a.rows().into_iter().collect::<Vec<_>>()).unwrap(),
            1
        );
    }

    #[test]
    fn multiset_semantics() {
        let a = Multiset::new(vec![Scalar::from_int(1), Scalar::from_int(1)]);
        let b = Multiset::new(vec![Scalar::from_int(1), Scalar::from_int(2)]);
        assert!(!a.eq_exact(&b));
        let c = Multiset::new(vec![
            Scalar::from_f64(1.0 + 1e-10, 0.0),
            Scalar::from_f64(2.0, 0.0),
        ]);
        assert!(c.eq_with_tol(&b, 1e-8));
        assert!(!c.eq_with_tol(&b, 1e-12));
    }

    #[test]
    fn json_round_trip_exact_and_float() {
        let a = m(&[&[(1, 2), (0, 1)], &[(-3, 1), (7, 5)]]);
        let j = a.to_json();
        assert_eq!(j["mode"], "exact");
        assert_eq!(j["entries"][0][0]["re"], "1/2");
        let back = Matrix::from_json(&j).unwrap();
        assert_eq!(a, back);

        let f = a.to_float();
        let jf = f.to_json();
        assert_eq!(jf["mode"], "float");
        let backf = Matrix::from_json(&jf).unwrap();
        assert_eq!(f, backf);

        // Mode/entry mismatch is rejected.
        let mut bad = jf.clone();
        bad["mode"] = serde_json::json!("exact");
        assert!(Matrix::from_json(&bad).is_err());
    }

    #[test]
    fn laurent_matrix_inverse() {
        use crate::laurent::Laurent;
        // Lower triangular with monomial diagonal inverts over Laurent.
        let l = Matrix::from_rows(vec![
            vec![Laurent::var("a"), Laurent::new_zero()],
            vec![Laurent::parse("a + b").unwrap(), Laurent::var("b")],
        ])
        .unwrap();
        let inv = l.inverse().unwrap();
        assert_eq!(
            l.mat_mul(&inv).unwrap(),
            Matrix::<Laurent>::identity(2),
            "l * l^-1 = I over the Laurent ring"
        );
    }
}
