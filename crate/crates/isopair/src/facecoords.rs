//! Face-weight coordinates on the torus network.
//!
//! The n² face weights of G_n, together with two homology monodromies
//! X_x and X_y, pin down a connection up to gauge. Their row, column and
//! antidiagonal products are ratios of the prescribed eigenvalue lists, so
//! inverting those monomial relations turns eigenvalue data plus a free
//! (n−2)×(n−1) block into a full face grid, and from there into an actual
//! matrix pair (A, B) with diag(A) = α, diag(B) = β and spectrum(BA⁻¹) = γ.
//!
//! Calibration of the product identities against the zig-zag weights
//! (0-based grid, 1-based cyclic eigenvalue indices):
//!   row i      : ∏_j X[i][j]          = α_{i+2} / α_{i+1}
//!   column j   : ∏_i X[i][j]          = β_{1−j} / β_{−j}
//!   diagonal s : ∏_{i+j≡s} X[i][j]    = γ_{n−s} / γ_{n−s−1}
//!   midline    : ∏_{i+j<n−1} X[i][j]  = (−1)^{n+1} β₁ / (α₁ γ₁)
//! with X_x = α₁ and X_y = β₁. The (−1)^{n+1} matches the sign relating
//! steep zig-zag weights to the eigenvalues of BA⁻¹.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::honeycomb::{
    glue_torus, CellKind, HoneycombError, TorusNetwork, TriangleNetwork, BLACK_NE, BLACK_SE,
    BLACK_W,
};
use crate::intmat::IntMat;
use crate::laurent::Laurent;
use crate::matrix::{Matrix, MatrixError};
use crate::report::Report;
use crate::ribbon::{cycle_vector, Connection, EdgeId};
use crate::ring::Ring;
use crate::scalar::{parse_rational, Scalar};
use crate::transfer::{assemble_a, assemble_b, TransferError};

#[derive(Debug, Error)]
pub enum FaceError {
    #[error("alpha, beta, gamma must be nonempty lists of equal length")]
    BadEigenShape,
    #[error("zero entry in {0}")]
    ZeroEntry(&'static str),
    #[error("eigenvalue consistency violated: prod(alpha*gamma/beta) = {0}, want 1")]
    Inconsistent(String),
    #[error("free block for n={n} must be {rows} rows of {cols} entries")]
    BadBlockShape { n: usize, rows: usize, cols: usize },
    #[error("face grid must be {0}x{0} nonzero entries with nonzero x, y weights")]
    BadGridShape(usize),
    #[error("face weights must multiply to 1, got {0}")]
    ProductNotOne(String),
    #[error("face coordinates are defined for n >= 2")]
    TooSmall,
    #[error("surface g={g}, k={k} is not hyperbolic (needs 2-2g-k < 0)")]
    BadSurface { g: usize, k: usize },
    #[error("sign hypothesis violated: {0}")]
    SignHypothesis(String),
    #[error("bad input: {0}")]
    Parse(String),
    #[error("internal convention error: {0}")]
    Internal(&'static str),
    #[error(transparent)]
    Honeycomb(#[from] HoneycombError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
}

/// Prescribed spectra: diag(A), diag(B), and the eigenvalues of BA⁻¹, all
/// nonzero, subject to the multiplicative constraint
/// ∏ α_i γ_i / β_i = 1 (det(B) = det(A)·det(BA⁻¹)).
#[derive(Debug, Clone)]
pub struct EigenData {
    pub n: usize,
    pub alpha: Vec<Scalar>,
    pub beta: Vec<Scalar>,
    pub gamma: Vec<Scalar>,
}

impl EigenData {
    pub fn new(
        alpha: Vec<Scalar>,
        beta: Vec<Scalar>,
        gamma: Vec<Scalar>,
    ) -> Result<EigenData, FaceError> {
        let n = alpha.len();
        if n == 0 || beta.len() != n || gamma.len() != n {
            return Err(FaceError::BadEigenShape);
        }
        for (list, what) in [(&alpha, "alpha"), (&beta, "beta"), (&gamma, "gamma")] {
            if list.iter().any(|s| s.is_zero()) {
                return Err(FaceError::ZeroEntry(what));
            }
        }
        let e = EigenData { n, alpha, beta, gamma };
        let prod = e.consistency_product()?;
        let ok = if prod.is_exact() {
            prod == Scalar::one()
        } else {
            prod.dist(&Scalar::one()) <= 1e-9
        };
        if !ok {
            return Err(FaceError::Inconsistent(format!("{}", prod)));
        }
        Ok(e)
    }

    /// ∏ α_i γ_i / β_i; equals 1 for valid data.
    pub fn consistency_product(&self) -> Result<Scalar, FaceError> {
        let mut prod = Scalar::one();
        for i in 0..self.n {
            let bi = self.beta[i]
                .try_inverse()
                .ok_or(FaceError::ZeroEntry("beta"))?;
            prod = prod.mul(&self.alpha[i]).mul(&self.gamma[i]).mul(&bi);
        }
        Ok(prod)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[Scalar]| -> Vec<String> { v.iter().map(|s| format!("{}", s)).collect() };
        json!({
            "n": self.n,
            "alpha": strs(&self.alpha),
            "beta": strs(&self.beta),
            "gamma": strs(&self.gamma),
        })
    }

    /// Parse {"n": …, "alpha": ["2", "-3/4", …], …} with rational entries.
    pub fn from_json(v: &serde_json::Value) -> Result<EigenData, FaceError> {
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| FaceError::Parse("missing integer field n".into()))?
            as usize;
        let list = |key: &str| -> Result<Vec<Scalar>, FaceError> {
            v[key]
                .as_array()
                .ok_or_else(|| FaceError::Parse(format!("missing list field {}", key)))?
                .iter()
                .map(|s| {
                    let text = s
                        .as_str()
                        .ok_or_else(|| FaceError::Parse(format!("{} entries must be strings", key)))?;
                    let r = parse_rational(text).map_err(|e| FaceError::Parse(format!("{}", e)))?;
                    Ok(Scalar::from_rational(r))
                })
                .collect()
        };
        let e = EigenData::new(list("alpha")?, list("beta")?, list("gamma")?)?;
        if e.n != n {
            return Err(FaceError::Parse(format!(
                "n = {} does not match list length {}",
                n, e.n
            )));
        }
        Ok(e)
    }
}

/// The free top-left block of the face grid: (n−2) rows × (n−1) columns of
/// nonzero scalars. Empty for n ≤ 2.
#[derive(Debug, Clone)]
pub struct FreeBlock {
    pub n: usize,
    pub y: Vec<Vec<Scalar>>,
}

impl FreeBlock {
    pub fn new(n: usize, y: Vec<Vec<Scalar>>) -> Result<FreeBlock, FaceError> {
        let rows = n.saturating_sub(2);
        let cols = n.saturating_sub(1);
        if y.len() != rows || y.iter().any(|r| r.len() != cols) {
            return Err(FaceError::BadBlockShape { n, rows, cols });
        }
        if y.iter().flatten().any(|s| s.is_zero()) {
            return Err(FaceError::ZeroEntry("free block"));
        }
        Ok(FreeBlock { n, y })
    }

    pub fn unit(n: usize) -> FreeBlock {
        let rows = n.saturating_sub(2);
        let cols = n.saturating_sub(1);
        FreeBlock {
            n,
            y: vec![vec![Scalar::one(); cols]; rows],
        }
    }

    /// Number of free parameters, (n−1)(n−2).
    pub fn len(&self) -> usize {
        self.y.iter().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "y": self
                .y
                .iter()
                .map(|r| r.iter().map(|s| format!("{}", s)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FreeBlock, FaceError> {
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| FaceError::Parse("missing integer field n".into()))? as usize;
        let rows = v["y"]
            .as_array()
            .ok_or_else(|| FaceError::Parse("missing list field y".into()))?;
        let mut y = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| FaceError::Parse("y rows must be lists".into()))?;
            let mut out = Vec::new();
            for s in row {
                let text = s
                    .as_str()
                    .ok_or_else(|| FaceError::Parse("y entries must be strings".into()))?;
                let r = parse_rational(text).map_err(|e| FaceError::Parse(format!("{}", e)))?;
                out.push(Scalar::from_rational(r));
            }
            y.push(out);
        }
        FreeBlock::new(n, y)
    }
}

/// The full coordinate chart: the n×n face grid plus the two homology
/// monodromies. Face weights multiply to 1.
#[derive(Debug, Clone)]
pub struct FaceCoordinates {
    pub n: usize,
    pub x: Vec<Vec<Scalar>>,
    pub x_x: Scalar,
    pub x_y: Scalar,
}

impl FaceCoordinates {
    pub fn new(x: Vec<Vec<Scalar>>, x_x: Scalar, x_y: Scalar) -> Result<FaceCoordinates, FaceError> {
        let n = x.len();
        if n == 0 || x.iter().any(|r| r.len() != n) {
            return Err(FaceError::BadGridShape(n));
        }
        if x.iter().flatten().any(|s| s.is_zero()) || x_x.is_zero() || x_y.is_zero() {
            return Err(FaceError::BadGridShape(n));
        }
        let mut prod = Scalar::one();
        for v in x.iter().flatten() {
            prod = prod.mul(v);
        }
        let ok = if prod.is_exact() {
            prod == Scalar::one()
        } else {
            prod.dist(&Scalar::one()) <= 1e-8
        };
        if !ok {
            return Err(FaceError::ProductNotOne(format!("{}", prod)));
        }
        Ok(FaceCoordinates { n, x, x_x, x_y })
    }
}

/// 1-based cyclic index into a length-n list, as a 0-based offset.
fn cyc(n: usize, m: i64) -> usize {
    (m - 1).rem_euclid(n as i64) as usize
}

/// The monomial solve shared by the numeric and symbolic paths. Fills the
/// face grid from the free block using each row, column and diagonal
/// constraint exactly once; returns the grid together with the three
/// leftover (redundant) constraints as (product, target, label) triples for
/// the caller to verify when the inputs satisfy the consistency relation.
#[allow(clippy::type_complexity)]
fn solve_grid<T: Ring>(
    n: usize,
    alpha: &[T],
    beta: &[T],
    gamma: &[T],
    y: &[Vec<T>],
) -> Result<(Vec<Vec<T>>, Vec<(T, T, &'static str)>), FaceError> {
    if n < 2 {
        return Err(FaceError::TooSmall);
    }
    let div = |p: &T, q: &T| -> Result<T, FaceError> {
        Ok(p.mul(&q.try_inverse().ok_or(FaceError::ZeroEntry("ratio denominator"))?))
    };
    let row_target = |i: usize| div(&alpha[cyc(n, i as i64 + 2)], &alpha[cyc(n, i as i64 + 1)]);
    let col_target = |j: usize| div(&beta[cyc(n, 1 - j as i64)], &beta[cyc(n, -(j as i64))]);
    let diag_target =
        |s: usize| div(&gamma[cyc(n, (n - s) as i64)], &gamma[cyc(n, n as i64 - s as i64 - 1)]);

    let mut x: Vec<Vec<Option<T>>> = vec![vec![None; n]; n];
    for i in 0..n - 2 {
        for j in 0..n - 1 {
            if y[i][j].is_zero() {
                return Err(FaceError::ZeroEntry("free block"));
            }
            x[i][j] = Some(y[i][j].clone());
        }
    }
    let got = |x: &[Vec<Option<T>>], i: usize, j: usize| -> T {
        x[i][j].clone().expect("cell solved before use")
    };

    // Last column of the free rows, from the row products.
    for i in 0..n - 2 {
        let mut prod = T::one();
        for j in 0..n - 1 {
            prod = prod.mul(&got(&x, i, j));
        }
        x[i][n - 1] = Some(div(&row_target(i)?, &prod)?);
    }

    // First entry of row n−2 from the midline product over i+j < n−1.
    let sign = if n % 2 == 1 { T::one() } else { T::one().neg() };
    let mid_target = sign.mul(&div(&beta[0], &alpha[0].mul(&gamma[0]))?);
    let mut known = T::one();
    for i in 0..n - 2 {
        for j in 0..n - 1 - i {
            known = known.mul(&got(&x, i, j));
        }
    }
    x[n - 2][0] = Some(div(&mid_target, &known)?);

    // Alternate down the last two rows: column product gives the bottom
    // entry, then the diagonal through it gives the next row-(n−2) entry.
    for t in 1..=n - 1 {
        let j = t - 1;
        let mut prod = T::one();
        for i in 0..n - 1 {
            prod = prod.mul(&got(&x, i, j));
        }
        x[n - 1][j] = Some(div(&col_target(j)?, &prod)?);
        if t <= n - 2 {
            let s = (n - 2 + t) % n;
            let mut prod = T::one();
            for i in 0..n {
                for jj in 0..n {
                    if (i + jj) % n == s && !(i == n - 2 && jj == t) {
                        prod = prod.mul(&got(&x, i, jj));
                    }
                }
            }
            x[n - 2][t] = Some(div(&diag_target(s)?, &prod)?);
        }
    }

    // The two remaining corners close over a row and a column product.
    {
        let mut prod = T::one();
        for j in 0..n - 1 {
            prod = prod.mul(&got(&x, n - 2, j));
        }
        x[n - 2][n - 1] = Some(div(&row_target(n - 2)?, &prod)?);
    }
    {
        let mut prod = T::one();
        for i in 0..n - 1 {
            prod = prod.mul(&got(&x, i, n - 1));
        }
        x[n - 1][n - 1] = Some(div(&col_target(n - 1)?, &prod)?);
    }

    let grid: Vec<Vec<T>> = x
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.expect("grid fully solved")).collect())
        .collect();

    // Unused constraints: the last row product and the two diagonals
    // through the corners of row n−2. They follow from the consistency
    // relation on the eigenvalue lists.
    let mut redundant = Vec::new();
    let mut prod = T::one();
    for j in 0..n {
        prod = prod.mul(&grid[n - 1][j]);
    }
    redundant.push((prod, row_target(n - 1)?, "closing row product"));
    for s in [(n - 2) % n, (2 * n - 3) % n] {
        let mut prod = T::one();
        for i in 0..n {
            for j in 0..n {
                if (i + j) % n == s {
                    prod = prod.mul(&grid[i][j]);
                }
            }
        }
        redundant.push((prod, diag_target(s)?, "closing diagonal product"));
    }
    Ok((grid, redundant))
}

/// Solve the face grid for the given eigenvalue data and free block. The
/// three constraints not consumed by the solve are re-checked here: exact
/// equality in exact mode, 1e-8 otherwise.
pub fn solve_face_weights(e: &EigenData, y: &FreeBlock) -> Result<FaceCoordinates, FaceError> {
    if y.n != e.n {
        return Err(FaceError::BadBlockShape {
            n: e.n,
            rows: e.n.saturating_sub(2),
            cols: e.n.saturating_sub(1),
        });
    }
    let (grid, redundant) = solve_grid(e.n, &e.alpha, &e.beta, &e.gamma, &y.y)?;
    for (got, want, label) in &redundant {
        let ok = if got.is_exact() && want.is_exact() {
            got == want
        } else {
            got.dist(want) <= 1e-8
        };
        assert!(
            ok,
            "{} must close for consistent eigenvalue data: {} vs {}",
            label, got, want
        );
    }
    FaceCoordinates::new(grid, e.alpha[0].clone(), e.beta[0].clone())
}

/// Rebuild edge weights realizing the given face and homology monodromies,
/// with every horizontal edge fixed to 1 (the gauge choice). The cycle
/// space of G_n splits over a spanning tree into chord coordinates; the
/// face cycles (one dropped) plus the two homology cycles form a
/// unimodular basis, so the chord weights are integer-exponent monomials in
/// the targets. The output is re-checked by recomputing every monodromy.
pub fn connection_from_face_weights(
    fc: &FaceCoordinates,
) -> Result<(TorusNetwork<Scalar>, Connection<Scalar>), FaceError> {
    let n = fc.n;
    if n < 2 {
        return Err(FaceError::TooSmall);
    }
    let unit = glue_torus(
        &TriangleNetwork::<Scalar>::unit(CellKind::Lower, n)?,
        &TriangleNetwork::<Scalar>::unit(CellKind::Upper, n)?,
    )?;
    let g = &unit.graph;

    // Spanning tree: all horizontal edges (a perfect matching), extended
    // by a/b edges in grid order.
    let mut uf: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(uf: &mut Vec<usize>, v: usize) -> usize {
        let mut r = v;
        while uf[r] != r {
            r = uf[r];
        }
        let mut c = v;
        while uf[c] != r {
            let next = uf[c];
            uf[c] = r;
            c = next;
        }
        r
    }
    let mut in_tree = vec![false; g.edge_count()];
    let join = |uf: &mut Vec<usize>, e: EdgeId| -> bool {
        let d = 2 * e;
        let (a, b) = (g.dart_vertex(d), g.dart_head(d));
        let (ra, rb) = (find(uf, a), find(uf, b));
        if ra == rb {
            false
        } else {
            uf[ra] = rb;
            true
        }
    };
    for (&_, &v) in &unit.grid {
        let e = g.edge_of(g.dart_at(v, BLACK_W));
        let joined = join(&mut uf, e);
        assert!(joined, "horizontal edges form a matching");
        in_tree[e] = true;
    }
    let mut chords: Vec<EdgeId> = Vec::new();
    for (&_, &v) in &unit.grid {
        for slot in [BLACK_NE, BLACK_SE] {
            let e = g.edge_of(g.dart_at(v, slot));
            if join(&mut uf, e) {
                in_tree[e] = true;
            } else {
                chords.push(e);
            }
        }
    }
    assert_eq!(chords.len(), n * n + 1, "cycle rank of the torus network");

    // Cycle basis rows in chord coordinates, with their target monodromies.
    let project = |walk: &[crate::ribbon::DartId]| -> Vec<i64> {
        let full = cycle_vector(g, walk);
        chords.iter().map(|&e| full[e]).collect()
    };
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut targets: Vec<Scalar> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (i, j) == (n - 1, n - 1) {
                continue; // dependent: all face cycles sum to zero
            }
            rows.push(project(&unit.face_orbit[&(i, j)]));
            targets.push(fc.x[i][j].clone());
        }
    }
    rows.push(project(&unit.gamma_x));
    targets.push(fc.x_x.clone());
    rows.push(project(&unit.gamma_y));
    targets.push(fc.x_y.clone());

    let c = IntMat::from_rows(rows);
    let cinv = c
        .inverse_unimodular()
        .ok_or(FaceError::Internal("face and homology cycles must form a unimodular chord basis"))?;
    let mut chord_weight: BTreeMap<EdgeId, Scalar> = BTreeMap::new();
    for (ci, &e) in chords.iter().enumerate() {
        let mut w = Scalar::one();
        for (k, t) in targets.iter().enumerate() {
            let exp = i64::try_from(&cinv[(ci, k)]).expect("chord exponents stay small");
            if exp != 0 {
                w = w.mul(&t.powi(exp).ok_or(FaceError::ZeroEntry("face weight"))?);
            }
        }
        chord_weight.insert(e, w);
    }

    // Collect (a, b) weights per black vertex and rebuild the two cells.
    let mut lower_w = BTreeMap::new();
    let mut upper_w = BTreeMap::new();
    for (&(r, cpos), &v) in &unit.grid {
        let pick = |slot: usize| -> Scalar {
            let e = g.edge_of(g.dart_at(v, slot));
            if in_tree[e] {
                Scalar::one()
            } else {
                chord_weight[&e].clone()
            }
        };
        let pair = (pick(BLACK_NE), pick(BLACK_SE));
        if cpos <= r {
            lower_w.insert((r, cpos), pair);
        } else {
            upper_w.insert((r - 1, n - cpos), pair);
        }
    }
    let net = glue_torus(
        &TriangleNetwork::new(CellKind::Lower, n, lower_w)?,
        &TriangleNetwork::new(CellKind::Upper, n, upper_w)?,
    )?;

    // Postcondition: every prescribed monodromy is reproduced.
    let close = |got: &Scalar, want: &Scalar| -> bool {
        if got.is_exact() && want.is_exact() {
            got == want
        } else {
            got.dist(want) <= 1e-8
        }
    };
    for i in 0..n {
        for j in 0..n {
            let got = net.face_weight(i, j);
            assert!(
                close(&got, &fc.x[i][j]),
                "face ({}, {}) monodromy {} != requested {}",
                i,
                j,
                got,
                fc.x[i][j]
            );
        }
    }
    assert!(close(&net.x_weight(), &fc.x_x), "horizontal homology monodromy mismatch");
    assert!(close(&net.y_weight(), &fc.x_y), "vertical homology monodromy mismatch");

    let conn = net.connection.clone();
    Ok((net, conn))
}

/// The parameterization: eigenvalue data plus a free block to an actual
/// pair (A, B) with diag(A) = α, diag(B) = β (ordered) and
/// spectrum(BA⁻¹) = γ. For n = 1 the pair is scalar and needs no solve.
pub fn psi(e: &EigenData, y: &FreeBlock) -> Result<(Matrix<Scalar>, Matrix<Scalar>), FaceError> {
    if e.n == 1 {
        let a = Matrix::from_fn(1, |_, _| e.alpha[0].clone());
        let b = Matrix::from_fn(1, |_, _| e.beta[0].clone());
        return Ok((a, b));
    }
    let fc = solve_face_weights(e, y)?;
    let (net, _) = connection_from_face_weights(&fc)?;
    let a = assemble_a(&net.lower_net, &net.upper_net)?;
    let b = assemble_b(&net.lower_net, &net.upper_net)?;
    Ok((a, b))
}

/// A face-grid entry as a signed monomial: sign · ∏ v^e over the input
/// symbols alpha1…, beta1…, gamma1…, y_0_0….
#[derive(Debug, Clone)]
pub struct MonomialEntry {
    pub sign: i8,
    pub exponents: BTreeMap<String, i64>,
}

impl MonomialEntry {
    pub fn eval(&self, env: &BTreeMap<String, Scalar>) -> Result<Scalar, FaceError> {
        let mut acc = Scalar::from_int(self.sign as i64);
        for (v, &e) in &self.exponents {
            let base = env
                .get(v)
                .ok_or_else(|| FaceError::Parse(format!("missing value for {}", v)))?;
            acc = acc.mul(&base.powi(e).ok_or(FaceError::ZeroEntry("monomial base"))?);
        }
        Ok(acc)
    }
}

/// Replay the solve symbolically: the n×n table of face-grid entries as
/// signed coefficient-1 Laurent monomials in the inputs. Free-block cells
/// come out as their own symbols.
pub fn laurent_exponents(n: usize) -> Result<Vec<Vec<MonomialEntry>>, FaceError> {
    let vars = |stem: &str| -> Vec<Laurent> {
        (1..=n).map(|i| Laurent::var(&format!("{}{}", stem, i))).collect()
    };
    let alpha = vars("alpha");
    let beta = vars("beta");
    let gamma = vars("gamma");
    let y: Vec<Vec<Laurent>> = (0..n.saturating_sub(2))
        .map(|i| {
            (0..n - 1)
                .map(|j| Laurent::var(&format!("y_{}_{}", i, j)))
                .collect()
        })
        .collect();
    // Redundant constraints are not symbolic identities (they need the
    // consistency relation), so only the grid is used here.
    let (grid, _) = solve_grid(n, &alpha, &beta, &gamma, &y)?;
    let table = grid
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|entry| {
                    let (coeff, mono) = entry
                        .as_single_term()
                        .expect("face-grid solve is monomial");
                    let one = num_rational::BigRational::from_integer(1.into());
                    let sign = if *coeff == one {
                        1
                    } else if *coeff == -one.clone() {
                        -1
                    } else {
                        panic!("face-grid monomial has coefficient {}, want ±1", coeff)
                    };
                    MonomialEntry {
                        sign,
                        exponents: mono.clone(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(table)
}

/// Positivity of the chart: for odd n with positive α, β, γ (or even n
/// with positive α, β and negative γ) and a positive free block, every
/// face weight is a positive real and the produced pair is real.
pub fn check_positivity(e: &EigenData, y: &FreeBlock) -> Result<Report, FaceError> {
    let pos = |v: &[Scalar]| v.iter().all(|s| s.is_positive_real());
    let neg = |v: &[Scalar]| v.iter().all(|s| s.is_negative_real());
    let y_pos = y.y.iter().flatten().all(|s| s.is_positive_real());
    let hypothesis = if e.n % 2 == 1 {
        pos(&e.alpha) && pos(&e.beta) && pos(&e.gamma) && y_pos
    } else {
        pos(&e.alpha) && pos(&e.beta) && neg(&e.gamma) && y_pos
    };
    if !hypothesis {
        return Err(FaceError::SignHypothesis(format!(
            "n={} needs positive alpha, beta, free block and {} gamma",
            e.n,
            if e.n % 2 == 1 { "positive" } else { "negative" }
        )));
    }

    let mut report = Report::new();
    let fc = solve_face_weights(e, y)?;
    let mut offenders = Vec::new();
    for (i, row) in fc.x.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_positive_real() {
                offenders.push(json!({"face": [i, j], "value": format!("{}", v)}));
            }
        }
    }
    report.push(
        "eq1",
        offenders.is_empty(),
        format!("all {} face weights positive at n={}", e.n * e.n, e.n),
        if offenders.is_empty() {
            serde_json::Value::Null
        } else {
            json!(offenders)
        },
    );

    let (a, b) = psi(e, y)?;
    let real = |m: &Matrix<Scalar>| {
        m.rows()
            .iter()
            .flatten()
            .all(|v| v.is_real())
    };
    let pair_real = real(&a) && real(&b);
    report.push(
        "eq1-real-pair",
        pair_real,
        format!("parameterized pair is real at n={}", e.n),
        if pair_real {
            serde_json::Value::Null
        } else {
            json!({"a": a.to_json(), "b": b.to_json()})
        },
    );
    Ok(report)
}

/// Parameter count of the moduli of pairs over a genus-g surface with k
/// punctures: n²(2g−2+k) − kn + 2. Requires a hyperbolic (g, k).
pub fn dimension(g: usize, k: usize, n: usize) -> Result<i64, FaceError> {
    if 2 * g + k <= 2 {
        return Err(FaceError::BadSurface { g, k });
    }
    let (gi, ki, ni) = (g as i64, k as i64, n as i64);
    Ok(ni * ni * (2 * gi - 2 + ki) - ki * ni + 2)
}
