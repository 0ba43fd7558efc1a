//! Triangulated surfaces with bipartite duals, their conjugate ribbon
//! structure, and honeycomb expansions of the dual graph.
//!
//! A genus-g surface with k punctures is triangulated symmetrically about a
//! horizontal axis so every puncture has even degree; the dual graph is then
//! bipartite and carries two ribbon structures: the embedded one, and the
//! conjugate one obtained by reversing the rotation at the black class. The
//! conjugate structure embeds the dual into a second surface, and replacing
//! each black triangle by a size-n lower honeycomb cell and each white one
//! by an upper cell produces the graph whose zig-zag monodromies encode the
//! prescribed eigenvalues. The exponent matrix of those monodromies over the
//! face and homology coordinates has rank kn−1, leaving
//! n²(2g−2+k) − kn + 2 free parameters.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::honeycomb::{
    instantiate_cell, sides_ccw, CellKind, HoneycombError, TriangleNetwork,
};
use crate::intmat::{qmat_nullspace, smith_basis, IntMat};
use crate::report::Report;
use crate::ribbon::{
    cycle_vector, Color, EdgeId, RibbonBuilder, RibbonError, RibbonGraph,
};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("surface g={g}, k={k} is not hyperbolic (needs 2-2g-k < 0, k >= 1)")]
    NotHyperbolic { g: usize, k: usize },
    #[error("expected {expected} triangles for this surface, got {got}")]
    WrongTriangleCount { expected: usize, got: usize },
    #[error("bad gluing: {0}")]
    BadGluing(String),
    #[error("bad puncture labels: {0}")]
    BadLabel(String),
    #[error("puncture {puncture} has odd degree {degree}")]
    OddDegree { puncture: usize, degree: usize },
    #[error("dual graph of the triangulation is not bipartite")]
    NonBipartiteDual,
    #[error("triangulation is not connected")]
    Disconnected,
    #[error("internal convention error: {0}")]
    Internal(&'static str),
    #[error("bad input: {0}")]
    Parse(String),
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error(transparent)]
    Honeycomb(#[from] HoneycombError),
}

/// Reversal permutation on triangle sides: walking the sides of a reflected
/// or conjugated triangle counterclockwise visits them in this order.
fn flip(s: usize) -> usize {
    [0, 2, 1][s]
}

/// A triangulation of a closed genus-g surface with its vertices at the k
/// punctures. Triangle corners are listed counterclockwise and labeled by
/// puncture; side s runs from corner s to corner s+1, and `glue` pairs the
/// 3T sides into 3T/2 edges. Validation guarantees T = 4g+2k−4, one corner
/// orbit of even degree per puncture, a connected bipartite dual graph, and
/// the right Euler characteristic.
#[derive(Debug, Clone)]
pub struct SurfaceTriangulation {
    pub g: usize,
    pub k: usize,
    pub corners: Vec<[usize; 3]>,
    pub glue: BTreeMap<(usize, usize), (usize, usize)>,
    /// Dual 2-coloring; `true` marks the class hosting lower honeycomb
    /// cells, whose rotation the conjugate structure reverses.
    pub shade: Vec<bool>,
}

impl SurfaceTriangulation {
    pub fn new(
        g: usize,
        k: usize,
        corners: Vec<[usize; 3]>,
        glue: BTreeMap<(usize, usize), (usize, usize)>,
    ) -> Result<SurfaceTriangulation, SurfaceError> {
        if 2 * g + k <= 2 || k == 0 {
            return Err(SurfaceError::NotHyperbolic { g, k });
        }
        let t_count = corners.len();
        let expected = 4 * g + 2 * k - 4;
        if t_count != expected {
            return Err(SurfaceError::WrongTriangleCount {
                expected,
                got: t_count,
            });
        }

        // Side pairing: a fixed-point-free involution on all 3T sides.
        if glue.len() != 3 * t_count {
            return Err(SurfaceError::BadGluing(format!(
                "need all {} sides glued, got {}",
                3 * t_count,
                glue.len()
            )));
        }
        for (&(t, s), &(t2, s2)) in &glue {
            if t >= t_count || s >= 3 || t2 >= t_count || s2 >= 3 {
                return Err(SurfaceError::BadGluing(format!(
                    "side ({}, {}) -> ({}, {}) out of range",
                    t, s, t2, s2
                )));
            }
            if (t, s) == (t2, s2) {
                return Err(SurfaceError::BadGluing(format!(
                    "side ({}, {}) glued to itself",
                    t, s
                )));
            }
            if glue.get(&(t2, s2)) != Some(&(t, s)) {
                return Err(SurfaceError::BadGluing(format!(
                    "gluing not involutive at ({}, {})",
                    t, s
                )));
            }
        }

        // Corner orbits around the punctures: gluing side (t,s) to (t',s')
        // matches corner s with corner s'+1 and corner s+1 with corner s'.
        let mut uf: Vec<usize> = (0..3 * t_count).collect();
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
        let union = |uf: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(uf, a), find(uf, b));
            if ra != rb {
                uf[ra] = rb;
            }
        };
        for (&(t, s), &(t2, s2)) in &glue {
            union(&mut uf, 3 * t + s, 3 * t2 + (s2 + 1) % 3);
            union(&mut uf, 3 * t + (s + 1) % 3, 3 * t2 + s2);
        }
        let mut orbits: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for t in 0..t_count {
            for c in 0..3 {
                let root = find(&mut uf, 3 * t + c);
                let label = corners[t][c];
                if label >= k {
                    return Err(SurfaceError::BadLabel(format!(
                        "corner label {} out of range for k = {}",
                        label, k
                    )));
                }
                let entry = orbits.entry(root).or_insert((label, 0));
                if entry.0 != label {
                    return Err(SurfaceError::BadLabel(format!(
                        "corner orbit mixes punctures {} and {}",
                        entry.0, label
                    )));
                }
                entry.1 += 1;
            }
        }
        if orbits.len() != k {
            return Err(SurfaceError::BadLabel(format!(
                "triangulation has {} vertices, wanted {} punctures",
                orbits.len(),
                k
            )));
        }
        let mut seen = vec![false; k];
        for &(label, degree) in orbits.values() {
            if seen[label] {
                return Err(SurfaceError::BadLabel(format!(
                    "puncture {} appears as two distinct vertices",
                    label
                )));
            }
            seen[label] = true;
            if degree % 2 != 0 {
                return Err(SurfaceError::OddDegree {
                    puncture: label,
                    degree,
                });
            }
        }
        debug_assert_eq!(
            k as i64 - (3 * t_count as i64) / 2 + t_count as i64,
            2 - 2 * g as i64,
            "Euler characteristic must match the genus"
        );

        // Dual 2-coloring by breadth-first search across the gluings.
        let mut shade: Vec<Option<bool>> = vec![None; t_count];
        shade[0] = Some(true);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            let mine = shade[t].unwrap();
            for s in 0..3 {
                let (t2, _) = glue[&(t, s)];
                match shade[t2] {
                    None => {
                        shade[t2] = Some(!mine);
                        queue.push_back(t2);
                    }
                    Some(other) => {
                        if other == mine {
                            return Err(SurfaceError::NonBipartiteDual);
                        }
                    }
                }
            }
        }
        if shade.iter().any(|c| c.is_none()) {
            return Err(SurfaceError::Disconnected);
        }

        Ok(SurfaceTriangulation {
            g,
            k,
            corners,
            glue,
            shade: shade.into_iter().map(|c| c.unwrap()).collect(),
        })
    }

    /// Number of triangles, 4g + 2k − 4.
    pub fn t(&self) -> usize {
        self.corners.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gluings: Vec<[usize; 4]> = self
            .glue
            .iter()
            .filter(|(&a, &b)| a < b)
            .map(|(&(t, s), &(t2, s2))| [t, s, t2, s2])
            .collect();
        json!({
            "g": self.g,
            "k": self.k,
            "triangles": self.corners,
            "gluings": gluings,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SurfaceTriangulation, SurfaceError> {
        let num = |key: &str| -> Result<usize, SurfaceError> {
            v[key]
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| SurfaceError::Parse(format!("missing integer field {}", key)))
        };
        let (g, k) = (num("g")?, num("k")?);
        let tris = v["triangles"]
            .as_array()
            .ok_or_else(|| SurfaceError::Parse("missing list field triangles".into()))?;
        let mut corners = Vec::new();
        for tri in tris {
            let tri = tri
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| SurfaceError::Parse("triangles must be corner triples".into()))?;
            let mut c = [0usize; 3];
            for (i, x) in tri.iter().enumerate() {
                c[i] = x
                    .as_u64()
                    .ok_or_else(|| SurfaceError::Parse("corner labels must be integers".into()))?
                    as usize;
            }
            corners.push(c);
        }
        let pairs = v["gluings"]
            .as_array()
            .ok_or_else(|| SurfaceError::Parse("missing list field gluings".into()))?;
        let mut glue = BTreeMap::new();
        for p in pairs {
            let p = p
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| SurfaceError::Parse("gluings must be [t, s, t2, s2]".into()))?;
            let q: Vec<usize> = p
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|v| v as usize)
                        .ok_or_else(|| SurfaceError::Parse("gluing entries must be integers".into()))
                })
                .collect::<Result<_, _>>()?;
            glue.insert((q[0], q[1]), (q[2], q[3]));
            glue.insert((q[2], q[3]), (q[0], q[1]));
        }
        SurfaceTriangulation::new(g, k, corners, glue)
    }
}

/// Plane bookkeeping for the mirror-symmetric builder: point ids on the
/// closed upper half, their mirrors, and which consecutive pairs form the
/// symmetry axis.
struct HalfPlane {
    g: usize,
    k: usize,
    /// Boundary points of the upper region, counterclockwise.
    upper_count: usize,
}

impl HalfPlane {
    /// Mirror of an upper point: axis points are fixed, arc points get
    /// fresh ids after the upper range.
    fn mirror(&self, p: usize) -> usize {
        if self.g == 0 || p <= self.k {
            p
        } else {
            self.upper_count + (p - self.k - 1)
        }
    }

    fn label(&self, p: usize) -> usize {
        if self.g == 0 {
            p
        } else if (1..self.k).contains(&p) {
            p - 1
        } else {
            self.k - 1
        }
    }

    fn is_axis_pair(&self, a: usize, b: usize) -> bool {
        let (lo, hi) = (a.min(b), a.max(b));
        if self.g == 0 {
            (hi == lo + 1 && hi < self.k) || (lo == 0 && hi == self.k - 1)
        } else {
            hi == lo + 1 && hi <= self.k
        }
    }
}

/// Fan triangulation of the cyclic polygon `c` from the vertex at position
/// `apex`: one counterclockwise triangle per boundary edge not incident to
/// the apex.
fn fan(c: &[usize], apex: usize) -> Vec<[usize; 3]> {
    let m = c.len();
    (1..m - 1)
        .map(|step| {
            let a = (apex + step) % m;
            [c[apex], c[a], c[(a + 1) % m]]
        })
        .collect()
}

/// Build the mirror-symmetric triangulation of the genus-g surface with k
/// punctures: the equator fan double on the sphere, and on the 4g-gon with
/// opposite sides identified a fan from the top vertex when k is odd or an
/// ear-assisted fan from an axis puncture when k is even (plain fans give a
/// non-bipartite dual in that case).
pub fn build_triangulation(g: usize, k: usize) -> Result<SurfaceTriangulation, SurfaceError> {
    if 2 * g + k <= 2 || k == 0 {
        return Err(SurfaceError::NotHyperbolic { g, k });
    }

    let hp = HalfPlane {
        g,
        k,
        upper_count: if g == 0 { k } else { 2 * g + k },
    };

    // Upper boundary, counterclockwise. Sphere: the equator k-gon. Higher
    // genus: left axis end V_2g, the k−1 axis punctures, right end V_0,
    // then the polygon arc V_1 … V_{2g−1}; ids follow that order.
    let upper: Vec<[usize; 3]> = if g == 0 {
        let c: Vec<usize> = (0..k).collect();
        fan(&c, 0)
    } else {
        let b: Vec<usize> = (0..2 * g + k).collect();
        if k % 2 == 1 {
            fan(&b, k + g)
        } else if g == 1 {
            let mut tris = vec![[b[k], b[k + 1], b[0]]];
            let reduced: Vec<usize> = b[..=k].to_vec();
            tris.extend(fan(&reduced, 1));
            tris
        } else {
            let mut tris = vec![
                [b[k + g - 1], b[k + g], b[k + g + 1]],
                [b[k - 1], b[k], b[k + 1]],
            ];
            let reduced: Vec<usize> = b
                .iter()
                .copied()
                .filter(|&p| p != k + g && p != k)
                .collect();
            tris.extend(fan(&reduced, k - 1));
            tris
        }
    };
    let upper_len = upper.len();

    // Lower half: mirror every triangle and reverse it to stay
    // counterclockwise.
    let lower: Vec<[usize; 3]> = upper
        .iter()
        .map(|&[a, b, c]| [hp.mirror(c), hp.mirror(b), hp.mirror(a)])
        .collect();
    let all: Vec<[usize; 3]> = upper.iter().copied().chain(lower).collect();

    // Match sides into gluings. Axis edges pair across the mirror, interior
    // diagonals pair within their half, and for g >= 1 the polygon arc
    // sides pair by the opposite-side translation: upper side j against the
    // mirror of upper side 2g−1−j.
    let mut buckets: BTreeMap<(u8, (usize, usize)), Vec<(usize, usize)>> = BTreeMap::new();
    for (t, tri) in all.iter().enumerate() {
        for s in 0..3 {
            let (a, b) = (tri[s], tri[(s + 1) % 3]);
            let pair = (a.min(b), a.max(b));
            let tag = if hp.is_axis_pair(a, b) {
                0
            } else if t < upper_len {
                1
            } else {
                2
            };
            buckets.entry((tag, pair)).or_default().push((t, s));
        }
    }
    let mut glue = BTreeMap::new();
    let join = |glue: &mut BTreeMap<(usize, usize), (usize, usize)>,
                    a: (usize, usize),
                    b: (usize, usize)| {
        glue.insert(a, b);
        glue.insert(b, a);
    };
    if g >= 1 {
        let arc_point = |j: usize| if j == 0 { k } else if j == 2 * g { 0 } else { k + j };
        for j in 0..2 * g {
            let (a, b) = (arc_point(j), arc_point(j + 1));
            let up_key = (1, (a.min(b), a.max(b)));
            let jj = 2 * g - 1 - j;
            let (c, d) = (hp.mirror(arc_point(jj)), hp.mirror(arc_point(jj + 1)));
            let down_key = (2, (c.min(d), c.max(d)));
            let up = buckets.remove(&up_key).unwrap_or_default();
            let down = buckets.remove(&down_key).unwrap_or_default();
            if up.len() != 1 || down.len() != 1 {
                return Err(SurfaceError::Internal(
                    "each polygon arc side must appear in exactly one triangle",
                ));
            }
            join(&mut glue, up[0], down[0]);
        }
    }
    for ((_, pair), sides) in buckets {
        if sides.len() != 2 {
            return Err(SurfaceError::BadGluing(format!(
                "edge {:?} appears {} times",
                pair,
                sides.len()
            )));
        }
        join(&mut glue, sides[0], sides[1]);
    }

    let corners: Vec<[usize; 3]> = all
        .iter()
        .map(|&[a, b, c]| [hp.label(a), hp.label(b), hp.label(c)])
        .collect();
    SurfaceTriangulation::new(g, k, corners, glue)
}

/// Dual graph as a ribbon graph: one trivalent vertex per triangle with
/// slots in side order. With `conjugated` the rotation at the shaded class
/// is reversed, giving the embedding into the conjugate surface.
pub fn dual_ribbon(
    tri: &SurfaceTriangulation,
    conjugated: bool,
) -> Result<RibbonGraph, SurfaceError> {
    let mut builder = RibbonBuilder::new();
    for t in 0..tri.t() {
        let color = if tri.shade[t] { Color::Black } else { Color::White };
        builder.add_vertex(color, 3);
    }
    let slot = |t: usize, s: usize| {
        if conjugated && tri.shade[t] {
            flip(s)
        } else {
            s
        }
    };
    for (&(t, s), &(t2, s2)) in &tri.glue {
        if (t, s) < (t2, s2) {
            builder.connect((t, slot(t, s)), (t2, slot(t2, s2)))?;
        }
    }
    Ok(builder.finish()?)
}

/// Genus and boundary count of the conjugate surface, via the face census
/// of the conjugated dual. The Euler characteristics agree:
/// 2−2g−k = 2−2g′−k′. Also checks that the conjugated dual has exactly k
/// zig-zag paths (one per puncture).
pub fn conjugate_surface_invariants(
    tri: &SurfaceTriangulation,
) -> Result<(usize, usize), SurfaceError> {
    let sigma_dual = dual_ribbon(tri, false)?;
    assert_eq!(
        sigma_dual.faces().len(),
        tri.k,
        "embedded dual must have one face per puncture"
    );
    let conj = dual_ribbon(tri, true)?;
    let k_prime = conj.faces().len();
    assert_eq!(
        conj.zigzags().len(),
        tri.k,
        "conjugated dual must have one zig-zag path per puncture"
    );
    let t = tri.t() as i64;
    let chi = t - 3 * t / 2 + k_prime as i64;
    let two_g = 2 - chi;
    assert!(
        two_g >= 0 && two_g % 2 == 0,
        "conjugate Euler characteristic {} must be even and at most 2",
        chi
    );
    let g_prime = (two_g / 2) as usize;
    assert_eq!(
        2 - 2 * (tri.g as i64) - (tri.k as i64),
        2 - 2 * (g_prime as i64) - (k_prime as i64),
        "conjugation preserves the Euler characteristic"
    );
    Ok((g_prime, k_prime))
}

/// The honeycomb expansion of the conjugated dual: a size-n lower cell in
/// each shaded triangle, an upper cell in each other, glued stub-to-stub
/// across the triangulation edges.
#[derive(Debug)]
pub struct SurfaceGraph {
    pub g: usize,
    pub k: usize,
    pub n: usize,
    pub t_count: usize,
    pub genus_conj: usize,
    pub boundary_conj: usize,
    pub graph: RibbonGraph,
    /// Triangulation edge behind each seam edge of the expansion.
    pub seam_group: BTreeMap<EdgeId, usize>,
}

pub fn build_surface_gn(
    tri: &SurfaceTriangulation,
    n: usize,
) -> Result<SurfaceGraph, SurfaceError> {
    if n == 0 {
        return Err(SurfaceError::Parse("cell size n must be positive".into()));
    }
    let (g_prime, k_prime) = conjugate_surface_invariants(tri)?;
    let t_count = tri.t();

    let mut builder = RibbonBuilder::new();
    let mut weights: Vec<Scalar> = Vec::new();
    let mut cells = Vec::with_capacity(t_count);
    for t in 0..t_count {
        let kind = if tri.shade[t] { CellKind::Lower } else { CellKind::Upper };
        let net = TriangleNetwork::<Scalar>::unit(kind, n)?;
        cells.push(instantiate_cell(&mut builder, &net, &mut weights));
    }

    // Triangle side s hosts one cell side; the shaded class walks its sides
    // in reversed order because the conjugate structure flips it.
    let cell_side = |t: usize, s: usize| {
        if tri.shade[t] {
            sides_ccw(CellKind::Lower)[flip(s)]
        } else {
            sides_ccw(CellKind::Upper)[s]
        }
    };

    let mut seam_group = BTreeMap::new();
    for (edge_index, (&(t, s), &(t2, s2))) in
        tri.glue.iter().filter(|(&a, &b)| a < b).enumerate()
    {
        let stubs_a = cells[t].stubs_ccw(cell_side(t, s));
        let stubs_b = cells[t2].stubs_ccw(cell_side(t2, s2));
        for m in 0..n {
            let a = &stubs_a[m];
            let b = &stubs_b[n - 1 - m];
            let e = builder.connect((a.vertex, a.slot), (b.vertex, b.slot))?;
            seam_group.insert(e, edge_index);
        }
    }

    let graph = builder.finish()?;
    assert!(graph.is_connected(), "expansion must stay connected");
    assert_eq!(graph.vertex_count(), t_count * n * n, "vertex census");
    assert_eq!(graph.edge_count(), 3 * t_count * n * n / 2, "edge census");
    let faces = graph.faces().len();
    assert_eq!(
        faces,
        (n * n - 1) * t_count / 2 + k_prime,
        "face census must match the conjugate boundary count"
    );

    Ok(SurfaceGraph {
        g: tri.g,
        k: tri.k,
        n,
        t_count,
        genus_conj: g_prime,
        boundary_conj: k_prime,
        graph,
        seam_group,
    })
}

/// Lexicographically smallest rotation of a cyclic word.
fn min_rotation(word: &[usize]) -> Vec<usize> {
    if word.is_empty() {
        return Vec::new();
    }
    (0..word.len())
        .map(|r| {
            let mut w = word.to_vec();
            w.rotate_left(r);
            w
        })
        .min()
        .unwrap()
}

impl SurfaceGraph {
    /// Zig-zag orbit indices grouped into bands of parallel paths: two
    /// paths are parallel when they cross the same cyclic sequence of
    /// triangulation edges. Each puncture contributes one band of n paths.
    pub fn bands(&self) -> Vec<Vec<usize>> {
        let zigzags = self.graph.zigzags();
        let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, orbit) in zigzags.iter().enumerate() {
            let crossings: Vec<usize> = orbit
                .iter()
                .filter_map(|&d| self.seam_group.get(&self.graph.edge_of(d)).copied())
                .collect();
            groups.entry(min_rotation(&crossings)).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// Monodromy exponents of every zig-zag path over the connection
/// coordinates: all faces of the expansion plus 2g′ homology cycles of its
/// closed surface. Rows are grouped band by band; the homology block keeps
/// integer entries because the face lattice is primitive in the cycle
/// lattice.
#[derive(Debug)]
pub struct ExponentMatrix {
    pub g: usize,
    pub k: usize,
    pub n: usize,
    pub rows: IntMat,
    pub bands: Vec<Vec<usize>>,
    pub face_count: usize,
    pub homology_count: usize,
    pub cycle_dim: usize,
}

pub fn eigenvalue_exponent_matrix(gn: &SurfaceGraph) -> Result<ExponentMatrix, SurfaceError> {
    let graph = &gn.graph;
    let faces = graph.faces();
    let f_count = faces.len();

    // Spanning tree; the chords index the cycle space.
    let mut visited = vec![false; graph.vertex_count()];
    let mut in_tree = vec![false; graph.edge_count()];
    visited[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for slot in 0..3 {
            let d = graph.dart_at(v, slot);
            let w = graph.dart_head(d);
            if !visited[w] {
                visited[w] = true;
                in_tree[graph.edge_of(d)] = true;
                queue.push_back(w);
            }
        }
    }
    let chords: Vec<EdgeId> = (0..graph.edge_count()).filter(|&e| !in_tree[e]).collect();
    let cycle_dim = chords.len();
    assert_eq!(
        cycle_dim,
        graph.edge_count() - graph.vertex_count() + 1,
        "chord count is the cycle rank"
    );

    let project = |walk: &[crate::ribbon::DartId]| -> Vec<i64> {
        let full = cycle_vector(graph, walk);
        chords.iter().map(|&e| full[e]).collect()
    };

    // Basis of the cycle lattice: all faces but the last, completed by a
    // Smith-adapted homology complement.
    let face_vectors: Vec<Vec<i64>> = faces.iter().map(|orbit| project(orbit)).collect();
    let h_count = 2 * gn.genus_conj;
    assert_eq!(
        cycle_dim,
        f_count - 1 + h_count,
        "cycle space splits into faces and homology"
    );
    let mut cols: Vec<Vec<i64>> = face_vectors[..f_count - 1].to_vec();
    if h_count > 0 {
        let mut a = IntMat::zeros(cycle_dim, f_count - 1);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                a[(i, j)] = x.into();
            }
        }
        let sb = smith_basis(&a);
        let nonzero: Vec<&num_bigint::BigInt> =
            sb.d.iter().filter(|d| !num_traits::Zero::is_zero(*d)).collect();
        if nonzero.len() != f_count - 1 {
            return Err(SurfaceError::Internal("face cycles must be independent"));
        }
        if !nonzero.iter().all(|d| num_traits::One::is_one(*d)) {
            return Err(SurfaceError::Internal(
                "face lattice must be primitive in the cycle lattice",
            ));
        }
        for j in f_count - 1..cycle_dim {
            let col = sb.q.col(j);
            cols.push(
                col.iter()
                    .map(|x| i64::try_from(x).expect("homology basis entries stay small"))
                    .collect(),
            );
        }
    }
    let mut basis = IntMat::zeros(cycle_dim, cycle_dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            basis[(i, j)] = x.into();
        }
    }
    let inv = basis
        .inverse_unimodular()
        .ok_or(SurfaceError::Internal("face + homology basis must be unimodular"))?;

    let zigzags = graph.zigzags();
    assert_eq!(
        zigzags.len(),
        gn.k * gn.n,
        "one zig-zag path per puncture and sheet"
    );
    let bands = gn.bands();
    assert_eq!(bands.len(), gn.k, "one band of parallel paths per puncture");
    for band in &bands {
        assert_eq!(band.len(), gn.n, "each band must hold n parallel paths");
    }

    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(gn.k * gn.n);
    for band in &bands {
        for &z in band {
            let v: Vec<num_bigint::BigInt> =
                project(&zigzags[z]).into_iter().map(Into::into).collect();
            let coords = inv.mul_vec(&v);
            let mut row = Vec::with_capacity(f_count + h_count);
            for c in &coords[..f_count - 1] {
                row.push(i64::try_from(c).expect("face exponents stay small"));
            }
            row.push(0); // the dropped face
            for c in &coords[f_count - 1..] {
                row.push(i64::try_from(c).expect("homology exponents stay small"));
            }
            rows.push(row);
        }
    }
    let band_rows: Vec<Vec<usize>> = {
        let mut start = 0;
        bands
            .iter()
            .map(|b| {
                let r = (start..start + b.len()).collect();
                start += b.len();
                r
            })
            .collect()
    };

    Ok(ExponentMatrix {
        g: gn.g,
        k: gn.k,
        n: gn.n,
        rows: IntMat::from_rows(rows),
        bands: band_rows,
        face_count: f_count,
        homology_count: h_count,
        cycle_dim,
    })
}

/// Check that the zig-zag monodromy equations are independent: exact rank
/// kn−1, the right number of leftover parameters, the product-of-all-
/// eigenvalues relation in the left kernel, and the cycle-space dimension
/// identity.
pub fn verify_independence(em: &ExponentMatrix) -> Report {
    let mut report = Report::new();
    let (k, n) = (em.k as i64, em.n as i64);
    let g = em.g as i64;

    let rank = em.rows.rank() as i64;
    let want_rank = k * n - 1;
    if rank == want_rank {
        report.push_ok(
            "zigzag-rank",
            format!("monodromy equations have rank {} = kn-1", rank),
        );
    } else {
        // A rank deficit means an unexpected relation between the paths;
        // surface a left-kernel witness.
        let rational = em.rows.to_rational();
        let transpose: Vec<Vec<num_rational::BigRational>> = (0..em.rows.cols)
            .map(|j| (0..em.rows.rows).map(|i| rational[i][j].clone()).collect())
            .collect();
        let kernel: Vec<Vec<String>> = qmat_nullspace(&transpose)
            .iter()
            .map(|v| v.iter().map(|x| format!("{}", x)).collect())
            .collect();
        report.push(
            "zigzag-rank",
            false,
            format!("rank {} but kn-1 = {}", rank, want_rank),
            json!({ "left_kernel": kernel }),
        );
    }

    let free = em.cycle_dim as i64 - want_rank;
    let want_free = n * n * (2 * g - 2 + k) - k * n + 2;
    report.push(
        "free-count",
        free == want_free,
        format!("{} free parameters, formula gives {}", free, want_free),
        serde_json::Value::Null,
    );

    let mut bad_columns = Vec::new();
    for j in 0..em.rows.cols {
        let sum: num_bigint::BigInt = em.rows.col(j).into_iter().sum();
        if !num_traits::Zero::is_zero(&sum) {
            bad_columns.push(json!({ "column": j, "sum": format!("{}", sum) }));
        }
    }
    report.push(
        "product-relation",
        bad_columns.is_empty(),
        "sum of all path rows vanishes: the eigenvalue product is forced to 1".into(),
        if bad_columns.is_empty() {
            serde_json::Value::Null
        } else {
            json!(bad_columns)
        },
    );

    let lhs = em.face_count as i64 + em.homology_count as i64 - 1;
    let rhs = n * n * (2 * g - 2 + k) + 1;
    report.push(
        "cycle-dimension",
        lhs == em.cycle_dim as i64 && lhs == rhs,
        format!(
            "faces + homology - 1 = {} matches cycle rank {} and n^2(2g-2+k)+1 = {}",
            lhs, em.cycle_dim, rhs
        ),
        serde_json::Value::Null,
    );

    report
}

/// Canonical form of a connected ribbon graph under color-preserving
/// isomorphism: the smallest breadth-first encoding over all starting
/// darts. Quadratic in the dart count, fine at the sizes used here.
pub fn canonical_signature(graph: &RibbonGraph) -> Vec<usize> {
    let dart_count = graph.dart_count();
    let rot = |d: usize| {
        let v = graph.dart_vertex(d);
        graph.dart_at(v, (graph.dart_slot(d) + 1) % 3)
    };
    let mut best: Option<Vec<usize>> = None;
    for start in 0..dart_count {
        let mut label = vec![usize::MAX; dart_count];
        let mut order = Vec::with_capacity(dart_count);
        label[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let d = order[head];
            head += 1;
            for next in [rot(d), graph.twin(d)] {
                if label[next] == usize::MAX {
                    label[next] = order.len();
                    order.push(next);
                }
            }
        }
        let mut sig = Vec::with_capacity(3 * dart_count);
        for &d in &order {
            sig.push(label[rot(d)]);
            sig.push(label[graph.twin(d)]);
            sig.push(match graph.color(graph.dart_vertex(d)) {
                Color::Black => 0,
                Color::White => 1,
            });
        }
        if best.as_ref().map_or(true, |b| sig < *b) {
            best = Some(sig);
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::honeycomb::glue_torus;

    fn tri(g: usize, k: usize) -> SurfaceTriangulation {
        build_triangulation(g, k).expect("builder must handle valid (g, k)")
    }

    #[test]
    fn triangle_counts_match_the_surface() {
        assert_eq!(tri(0, 3).t(), 2);
        assert_eq!(tri(1, 1).t(), 2);
        assert_eq!(tri(3, 5).t(), 4 * 3 + 2 * 5 - 4);
        assert!(matches!(
            build_triangulation(0, 2),
            Err(SurfaceError::NotHyperbolic { .. })
        ));
        assert!(matches!(
            build_triangulation(1, 0),
            Err(SurfaceError::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn builder_covers_a_grid_of_surfaces() {
        for g in 0..=4 {
            for k in 1..=8 {
                if 2 * g + k <= 2 {
                    continue;
                }
                if g == 0 && k < 3 {
                    continue;
                }
                let t = tri(g, k);
                assert_eq!(t.t(), 4 * g + 2 * k - 4, "triangle count at ({}, {})", g, k);
            }
        }
    }

    #[test]
    fn validation_rejects_tampered_gluings() {
        let good = tri(2, 3);
        // Break the involution.
        let mut glue = good.glue.clone();
        let (&a, &b) = glue.iter().next().unwrap();
        glue.insert(b, a);
        glue.insert(a, (a.0, (a.1 + 1) % 3));
        assert!(SurfaceTriangulation::new(2, 3, good.corners.clone(), glue).is_err());

        // Relabel one corner: orbits now mix punctures.
        let mut corners = good.corners.clone();
        corners[0][0] = (corners[0][0] + 1) % 3;
        assert!(matches!(
            SurfaceTriangulation::new(2, 3, corners, good.glue.clone()),
            Err(SurfaceError::BadLabel(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let t = tri(1, 2);
        let back = SurfaceTriangulation::from_json(&t.to_json()).unwrap();
        assert_eq!(back.corners, t.corners);
        assert_eq!(back.glue, t.glue);
    }

    #[test]
    fn conjugate_invariants_swap_the_three_holed_sphere_and_torus() {
        assert_eq!(conjugate_surface_invariants(&tri(0, 3)).unwrap(), (1, 1));
        assert_eq!(conjugate_surface_invariants(&tri(1, 1)).unwrap(), (0, 3));
        for (g, k) in [(1, 2), (2, 3), (3, 5)] {
            let t = tri(g, k);
            let (gp, kp) = conjugate_surface_invariants(&t).unwrap();
            assert_eq!(
                2 - 2 * (g as i64) - (k as i64),
                2 - 2 * (gp as i64) - (kp as i64),
                "Euler identity at ({}, {})",
                g,
                k
            );
            // k' counts the zig-zag orbits of the embedded dual.
            let dual = dual_ribbon(&t, false).unwrap();
            assert_eq!(dual.zigzags().len(), kp, "zig-zag census at ({}, {})", g, k);
        }
    }

    #[test]
    fn sphere_expansion_is_the_torus_network() {
        let t = tri(0, 3);
        for n in 1..=3 {
            let gn = build_surface_gn(&t, n).unwrap();
            let torus = glue_torus(
                &TriangleNetwork::<Scalar>::unit(CellKind::Lower, n).unwrap(),
                &TriangleNetwork::<Scalar>::unit(CellKind::Upper, n).unwrap(),
            )
            .unwrap();
            assert_eq!(
                canonical_signature(&gn.graph),
                canonical_signature(&torus.graph),
                "expansion of the two-triangle sphere at n = {}",
                n
            );
        }
    }

    #[test]
    fn size_one_expansion_is_the_conjugated_dual() {
        for (g, k) in [(0, 3), (1, 1), (1, 2), (2, 3)] {
            let t = tri(g, k);
            let gn = build_surface_gn(&t, 1).unwrap();
            let conj = dual_ribbon(&t, true).unwrap();
            assert_eq!(
                canonical_signature(&gn.graph),
                canonical_signature(&conj),
                "n = 1 expansion at ({}, {})",
                g,
                k
            );
        }
    }

    #[test]
    fn face_census_and_bands() {
        for (g, k) in [(0, 3), (1, 1), (1, 2), (2, 3), (3, 5)] {
            let t = tri(g, k);
            for n in 1..=4 {
                let gn = build_surface_gn(&t, n).unwrap();
                // Face census asserted inside the builder; check the bands.
                let bands = gn.bands();
                assert_eq!(bands.len(), k, "bands at ({}, {}), n = {}", g, k, n);
                for band in bands {
                    assert_eq!(band.len(), n, "band size at ({}, {}), n = {}", g, k, n);
                }
            }
        }
    }

    #[test]
    fn exponent_matrix_shape_and_rank_on_the_sphere() {
        let t = tri(0, 3);
        for (n, want_rank, want_free) in [(2usize, 5i64, 0i64), (3, 8, 2), (4, 11, 6)] {
            let gn = build_surface_gn(&t, n).unwrap();
            let em = eigenvalue_exponent_matrix(&gn).unwrap();
            assert_eq!(em.rows.rows, 3 * n, "row count at n = {}", n);
            assert_eq!(
                em.rows.cols,
                em.face_count + em.homology_count,
                "column count at n = {}",
                n
            );
            if n == 2 {
                assert_eq!(em.rows.cols, 6, "4 faces + 2 homology cycles");
            }
            assert_eq!(em.rows.rank() as i64, want_rank, "rank at n = {}", n);
            assert_eq!(
                em.cycle_dim as i64 - want_rank,
                want_free,
                "free count at n = {}",
                n
            );
            let report = verify_independence(&em);
            assert!(report.ok(), "{}", report.to_json());
        }
    }

    #[test]
    fn exponent_matrix_at_size_one_has_rank_k_minus_one() {
        for (g, k) in [(0, 4), (1, 1), (1, 2), (2, 3)] {
            let t = tri(g, k);
            let gn = build_surface_gn(&t, 1).unwrap();
            let em = eigenvalue_exponent_matrix(&gn).unwrap();
            assert_eq!(em.rows.rows, k, "one row per puncture at ({}, {})", g, k);
            assert_eq!(em.rows.rank(), k - 1, "peripheral rank at ({}, {})", g, k);
            let report = verify_independence(&em);
            assert!(report.ok(), "{}", report.to_json());
        }
    }

    #[test]
    fn independence_across_the_acceptance_surfaces() {
        for (g, k) in [(0, 3), (1, 1), (1, 2), (2, 3), (3, 5)] {
            let t = tri(g, k);
            for n in 1..=3 {
                let gn = build_surface_gn(&t, n).unwrap();
                let em = eigenvalue_exponent_matrix(&gn).unwrap();
                let report = verify_independence(&em);
                assert!(
                    report.ok(),
                    "({}, {}), n = {}: {}",
                    g,
                    k,
                    n,
                    report.to_json()
                );
            }
        }
    }

    #[test]
    fn parallel_paths_share_homology_and_differ_by_faces() {
        // Two parallel zig-zag paths are homologous, so their exponent rows
        // agree on the homology block; the difference is a face strip. On
        // the sphere expansion each consecutive strip has n faces, which is
        // the row-product shape of the eigenvalue ratio equations.
        let t = tri(0, 3);
        for n in [2usize, 3] {
            let gn = build_surface_gn(&t, n).unwrap();
            let em = eigenvalue_exponent_matrix(&gn).unwrap();
            for band in &em.bands {
                for w in band.windows(2) {
                    let (r1, r2) = (em.rows.row(w[0]), em.rows.row(w[1]));
                    for j in em.face_count..em.rows.cols {
                        assert_eq!(r1[j], r2[j], "homology block within a band");
                    }
                }
                let has_strip = band.iter().enumerate().any(|(i, &a)| {
                    band.iter().skip(i + 1).any(|&b| {
                        let (r1, r2) = (em.rows.row(a), em.rows.row(b));
                        let diff: Vec<num_bigint::BigInt> =
                            (0..em.face_count).map(|j| &r1[j] - &r2[j]).collect();
                        let nonzero: Vec<&num_bigint::BigInt> =
                            diff.iter().filter(|x| !num_traits::Zero::is_zero(*x)).collect();
                        nonzero.len() == n
                            && (nonzero.iter().all(|x| num_traits::One::is_one(*x))
                                || nonzero
                                    .iter()
                                    .all(|x| num_traits::One::is_one(&-(*x).clone())))
                    })
                });
                assert!(has_strip, "some pair differs by a strip of {} faces", n);
            }
        }
    }

    #[test]
    fn custom_triangulations_enter_through_json() {
        // The two-triangle sphere entered by hand: corners (0,1,2) twice
        // with the mirrored orientation, all three sides glued across.
        let v = json!({
            "g": 0,
            "k": 3,
            "triangles": [[0, 1, 2], [2, 1, 0]],
            "gluings": [[0, 0, 1, 1], [0, 1, 1, 0], [0, 2, 1, 2]],
        });
        let t = SurfaceTriangulation::from_json(&v).unwrap();
        assert_eq!(conjugate_surface_invariants(&t).unwrap(), (1, 1));
        let gn = build_surface_gn(&t, 2).unwrap();
        assert_eq!(gn.graph.vertex_count(), 8);
    }
}
