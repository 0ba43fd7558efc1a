//! Triangular honeycomb networks and their torus gluing.
//!
//! Two kinds of triangular cell tile our surfaces. A `Lower` cell has its
//! black vertices on the boundary (sides: left, top-right, bottom-right);
//! an `Upper` cell has white ones (sides: south-west, east, north-west).
//! Each black vertex `v` carries a weight pair `(a_v, b_v)`: its north-east
//! edge gets `a_v`, its south-east edge `b_v`, and every horizontal edge
//! weight 1. Gluing one cell of each kind along their three sides yields a
//! bipartite graph on the torus with `n^2` hexagonal faces; its transfer
//! matrices, zig-zag paths and face weights drive the rest of the crate.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::laurent::Laurent;
use crate::ribbon::{
    Color, Connection, DartId, RibbonBuilder, RibbonError, RibbonGraph, VertexId,
};
use crate::ring::Ring;

/// Slot positions around a black vertex, in counterclockwise order.
pub const BLACK_NE: usize = 0;
pub const BLACK_W: usize = 1;
pub const BLACK_SE: usize = 2;

/// Slot positions around a white vertex, in counterclockwise order.
pub const WHITE_E: usize = 0;
pub const WHITE_NW: usize = 1;
pub const WHITE_SW: usize = 2;

/// The two triangle orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellKind {
    Lower,
    Upper,
}

/// Direction type of an edge. North-east edges carry the `a` weight of
/// their black endpoint, south-east edges the `b` weight, horizontal edges
/// always weight 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    Horizontal,
    NorthEast,
    SouthEast,
}

/// Boundary sides of the two cell kinds; the first three belong to `Lower`
/// cells, the last three to `Upper` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellSide {
    Left,
    TopRight,
    BottomRight,
    SouthWest,
    East,
    NorthWest,
}

impl CellSide {
    /// The direction type of the edges crossing this side.
    pub fn edge_kind(self) -> EdgeKind {
        match self {
            CellSide::Left | CellSide::East => EdgeKind::Horizontal,
            CellSide::TopRight | CellSide::SouthWest => EdgeKind::NorthEast,
            CellSide::BottomRight | CellSide::NorthWest => EdgeKind::SouthEast,
        }
    }

    pub fn kind(self) -> CellKind {
        match self {
            CellSide::Left | CellSide::TopRight | CellSide::BottomRight => CellKind::Lower,
            _ => CellKind::Upper,
        }
    }
}

/// Sides of a cell in counterclockwise order around the triangle, as the
/// cell sits on its gluing surface. Starting side is the horizontal one.
pub fn sides_ccw(kind: CellKind) -> [CellSide; 3] {
    match kind {
        CellKind::Lower => [CellSide::Left, CellSide::BottomRight, CellSide::TopRight],
        CellKind::Upper => [CellSide::East, CellSide::NorthWest, CellSide::SouthWest],
    }
}

/// True when walking this side counterclockwise (in the order of
/// `sides_ccw`) meets the boundary stubs in increasing index order 1..n.
pub fn side_ccw_increasing(side: CellSide) -> bool {
    match side {
        CellSide::Left | CellSide::SouthWest | CellSide::NorthWest => true,
        CellSide::TopRight | CellSide::BottomRight | CellSide::East => false,
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum HoneycombError {
    #[error("triangle side length must be at least 1, got {0}")]
    BadSize(usize),
    #[error("weight table key {0:?} is not a black vertex of this cell")]
    UnknownLabel((usize, usize)),
    #[error("missing weight pair for black vertex {0:?}")]
    MissingLabel((usize, usize)),
    #[error("zero weight at black vertex {0:?}")]
    ZeroWeight((usize, usize)),
    #[error("cannot glue triangles of sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("glue_torus wants one cell of each kind")]
    KindMismatch,
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
}

/// Black vertex labels of a cell. `Lower` cells use matrix-style 1-based
/// coordinates (i, j) with j <= i <= n; `Upper` cells use 0-based (x, y)
/// with x + y <= n - 2.
pub fn black_labels(kind: CellKind, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    match kind {
        CellKind::Lower => {
            for i in 1..=n {
                for j in 1..=i {
                    out.push((i, j));
                }
            }
        }
        CellKind::Upper => {
            if n >= 2 {
                for x in 0..=n - 2 {
                    for y in 0..=n - 2 - x {
                        out.push((x, y));
                    }
                }
            }
        }
    }
    out
}

/// White vertex labels; the mirror census of `black_labels`.
pub fn white_labels(kind: CellKind, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    match kind {
        CellKind::Lower => {
            for i in 1..=n {
                for j in 1..i {
                    out.push((i, j));
                }
            }
        }
        CellKind::Upper => {
            for x in 0..=n - 1 {
                for y in 0..=n - 1 - x {
                    out.push((x, y));
                }
            }
        }
    }
    out
}

/// A triangular network: side length, kind, and one weight pair per black
/// vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleNetwork<T> {
    pub kind: CellKind,
    pub n: usize,
    pub weights: BTreeMap<(usize, usize), (T, T)>,
}

impl<T: Ring> TriangleNetwork<T> {
    pub fn new(
        kind: CellKind,
        n: usize,
        weights: BTreeMap<(usize, usize), (T, T)>,
    ) -> Result<Self, HoneycombError> {
        if n < 1 {
            return Err(HoneycombError::BadSize(n));
        }
        let labels = black_labels(kind, n);
        for label in &labels {
            match weights.get(label) {
                None => return Err(HoneycombError::MissingLabel(*label)),
                Some((a, b)) => {
                    if a.is_zero() || b.is_zero() {
                        return Err(HoneycombError::ZeroWeight(*label));
                    }
                }
            }
        }
        if weights.len() != labels.len() {
            let stray = weights
                .keys()
                .find(|k| !labels.contains(k))
                .copied()
                .unwrap_or((0, 0));
            return Err(HoneycombError::UnknownLabel(stray));
        }
        Ok(TriangleNetwork { kind, n, weights })
    }

    /// All weights 1.
    pub fn unit(kind: CellKind, n: usize) -> Result<Self, HoneycombError> {
        let weights = black_labels(kind, n)
            .into_iter()
            .map(|v| (v, (T::one(), T::one())))
            .collect();
        TriangleNetwork::new(kind, n, weights)
    }

    pub fn weight(&self, v: (usize, usize)) -> &(T, T) {
        &self.weights[&v]
    }

    pub fn black_count(&self) -> usize {
        black_labels(self.kind, self.n).len()
    }

    pub fn white_count(&self) -> usize {
        white_labels(self.kind, self.n).len()
    }
}

impl TriangleNetwork<Laurent> {
    /// Weights as fresh variables `a{i}{j}` / `b{i}{j}` matching the cell's
    /// own label scheme. (Single-digit indices only are unambiguous; fine
    /// for the sizes the symbolic route is used at.)
    pub fn symbolic(kind: CellKind, n: usize) -> Result<Self, HoneycombError> {
        Self::symbolic_prefixed(kind, n, "a", "b")
    }

    pub fn symbolic_prefixed(
        kind: CellKind,
        n: usize,
        a_prefix: &str,
        b_prefix: &str,
    ) -> Result<Self, HoneycombError> {
        let weights = black_labels(kind, n)
            .into_iter()
            .map(|(i, j)| {
                let a = Laurent::var(&format!("{}{}{}", a_prefix, i, j));
                let b = Laurent::var(&format!("{}{}{}", b_prefix, i, j));
                ((i, j), (a, b))
            })
            .collect();
        TriangleNetwork::new(kind, n, weights)
    }
}

/// One boundary stub: the open (vertex, slot) pair plus the weight the seam
/// edge through it must carry. Seam weights live on the black side, so on
/// `Upper` cells (white stubs) the stored weight is 1 and ignored by gluing.
#[derive(Debug, Clone)]
pub struct Stub<T> {
    pub vertex: VertexId,
    pub slot: usize,
    pub weight: T,
}

/// A cell wired into a shared ribbon builder: vertex ids per label and the
/// three boundary stub lists (index order 1..n each).
#[derive(Debug, Clone)]
pub struct CellInstance<T> {
    pub kind: CellKind,
    pub n: usize,
    pub black: BTreeMap<(usize, usize), VertexId>,
    pub white: BTreeMap<(usize, usize), VertexId>,
    pub stubs: BTreeMap<CellSide, Vec<Stub<T>>>,
}

impl<T: Clone> CellInstance<T> {
    /// Stubs of a side listed in the counterclockwise walking order used
    /// when gluing two cells (see `side_ccw_increasing`).
    pub fn stubs_ccw(&self, side: CellSide) -> Vec<Stub<T>> {
        let mut list = self.stubs[&side].clone();
        if !side_ccw_increasing(side) {
            list.reverse();
        }
        list
    }
}

/// Add all vertices and internal edges of `net` to `builder`, pushing one
/// weight per created edge onto `weights` (edge ids are sequential, so the
/// vector stays aligned). Returns the stub tables for later gluing.
pub fn instantiate_cell<T: Ring>(
    builder: &mut RibbonBuilder,
    net: &TriangleNetwork<T>,
    weights: &mut Vec<T>,
) -> CellInstance<T> {
    let n = net.n;
    let mut black = BTreeMap::new();
    let mut white = BTreeMap::new();
    for &v in black_labels(net.kind, n).iter() {
        black.insert(v, builder.add_vertex(Color::Black, 3));
    }
    for &v in white_labels(net.kind, n).iter() {
        white.insert(v, builder.add_vertex(Color::White, 3));
    }

    let mut connect = |bv: VertexId, bslot: usize, wv: VertexId, wslot: usize, w: T| {
        let e = builder
            .connect((bv, bslot), (wv, wslot))
            .expect("internal cell edge endpoints are distinct and free");
        debug_assert_eq!(e, weights.len(), "edge ids must stay aligned with weights");
        weights.push(w);
    };

    match net.kind {
        CellKind::Lower => {
            // Black (i,j): NE edge to white (i,j-1), horizontal to white
            // (i,j), SE edge to white (i+1,j); missing targets are stubs.
            for (&(i, j), &bv) in black.iter() {
                let (a, b) = net.weight((i, j)).clone();
                if j >= 2 {
                    connect(bv, BLACK_NE, white[&(i, j - 1)], WHITE_SW, a);
                }
                if j < i {
                    connect(bv, BLACK_W, white[&(i, j)], WHITE_E, T::one());
                }
                if i < n {
                    connect(bv, BLACK_SE, white[&(i + 1, j)], WHITE_NW, b);
                }
            }
        }
        CellKind::Upper => {
            // Black (x,y): NE to white (x,y+1), horizontal to white (x,y),
            // SE to white (x+1,y); all three targets always exist.
            for (&(x, y), &bv) in black.iter() {
                let (a, b) = net.weight((x, y)).clone();
                connect(bv, BLACK_NE, white[&(x, y + 1)], WHITE_SW, a);
                connect(bv, BLACK_W, white[&(x, y)], WHITE_E, T::one());
                connect(bv, BLACK_SE, white[&(x + 1, y)], WHITE_NW, b);
            }
        }
    }

    let mut stubs = BTreeMap::new();
    match net.kind {
        CellKind::Lower => {
            let mut left = Vec::new();
            let mut top_right = Vec::new();
            let mut bottom_right = Vec::new();
            for m in 1..=n {
                left.push(Stub {
                    vertex: black[&(m, m)],
                    slot: BLACK_W,
                    weight: T::one(),
                });
                top_right.push(Stub {
                    vertex: black[&(m, 1)],
                    slot: BLACK_NE,
                    weight: net.weight((m, 1)).0.clone(),
                });
                bottom_right.push(Stub {
                    vertex: black[&(n, m)],
                    slot: BLACK_SE,
                    weight: net.weight((n, m)).1.clone(),
                });
            }
            stubs.insert(CellSide::Left, left);
            stubs.insert(CellSide::TopRight, top_right);
            stubs.insert(CellSide::BottomRight, bottom_right);
        }
        CellKind::Upper => {
            let mut east = Vec::new();
            let mut south_west = Vec::new();
            let mut north_west = Vec::new();
            for m in 1..=n {
                east.push(Stub {
                    vertex: white[&(m - 1, n - m)],
                    slot: WHITE_E,
                    weight: T::one(),
                });
                south_west.push(Stub {
                    vertex: white[&(m - 1, 0)],
                    slot: WHITE_SW,
                    weight: T::one(),
                });
                north_west.push(Stub {
                    vertex: white[&(0, n - m)],
                    slot: WHITE_NW,
                    weight: T::one(),
                });
            }
            stubs.insert(CellSide::East, east);
            stubs.insert(CellSide::SouthWest, south_west);
            stubs.insert(CellSide::NorthWest, north_west);
        }
    }

    CellInstance {
        kind: net.kind,
        n,
        black,
        white,
        stubs,
    }
}

/// Which zig-zag family an orbit belongs to, by the black slot its forward
/// darts occupy: north-east paths ride NE edges, south-east paths ride
/// horizontal edges eastward, steep paths ride SE edges southward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ZigzagFamily {
    NorthEast,
    SouthEast,
    Steep,
}

/// One classified zig-zag orbit: family, 1-based index within the family,
/// the walk whose monodromy is reported, and that monodromy. South-east
/// orbits are reported along the reversed walk (their natural orientation
/// runs against the `b` edges).
#[derive(Debug, Clone)]
pub struct ZigzagClass<T> {
    pub family: ZigzagFamily,
    pub index: usize,
    pub walk: Vec<DartId>,
    pub weight: T,
}

/// The glued torus network for a pair of cells of equal size.
#[derive(Debug, Clone)]
pub struct TorusNetwork<T> {
    pub n: usize,
    pub graph: RibbonGraph,
    pub connection: Connection<T>,
    pub lower_net: TriangleNetwork<T>,
    pub upper_net: TriangleNetwork<T>,
    pub lower: CellInstance<T>,
    pub upper: CellInstance<T>,
    /// Torus position of every black vertex: row r, column c in 1..=n.
    /// Lower blacks sit at (i, j) with c <= r, upper blacks fill c > r.
    pub grid: BTreeMap<(usize, usize), VertexId>,
    pub grid_of: BTreeMap<VertexId, (usize, usize)>,
    /// Face orbit of grid cell (i, j), 0-based, rows increasing southward.
    pub face_orbit: BTreeMap<(usize, usize), Vec<DartId>>,
    /// Horizontal homology representative: the first north-east zig-zag.
    pub gamma_x: Vec<DartId>,
    /// Vertical homology representative: the first south-east zig-zag,
    /// walked in reverse.
    pub gamma_y: Vec<DartId>,
    /// Seam edges by (side, boundary index); each edge appears under both
    /// of its sides.
    pub seam: BTreeMap<(CellSide, usize), crate::ribbon::EdgeId>,
}

pub fn glue_torus<T: Ring>(
    lower_net: &TriangleNetwork<T>,
    upper_net: &TriangleNetwork<T>,
) -> Result<TorusNetwork<T>, HoneycombError> {
    if lower_net.kind != CellKind::Lower || upper_net.kind != CellKind::Upper {
        return Err(HoneycombError::KindMismatch);
    }
    if lower_net.n != upper_net.n {
        return Err(HoneycombError::SizeMismatch(lower_net.n, upper_net.n));
    }
    let n = lower_net.n;

    let mut builder = RibbonBuilder::new();
    let mut weights = Vec::new();
    let lower = instantiate_cell(&mut builder, lower_net, &mut weights);
    let upper = instantiate_cell(&mut builder, upper_net, &mut weights);

    // Matching boundary indices across each pair of opposite sides, no
    // twist. Seam weights come from the black (lower) side.
    let seams = [
        (CellSide::TopRight, CellSide::SouthWest),
        (CellSide::BottomRight, CellSide::NorthWest),
        (CellSide::Left, CellSide::East),
    ];
    let mut seam = BTreeMap::new();
    for (ls, us) in seams {
        for m in 0..n {
            let lo = &lower.stubs[&ls][m];
            let up = &upper.stubs[&us][m];
            let e = builder.connect((lo.vertex, lo.slot), (up.vertex, up.slot))?;
            debug_assert_eq!(e, weights.len());
            weights.push(lo.weight.clone());
            seam.insert((ls, m + 1), e);
            seam.insert((us, m + 1), e);
        }
    }

    let graph = builder.finish()?;
    let connection = Connection::new(&graph, weights)?;

    assert_eq!(
        graph.vertex_count(),
        2 * n * n,
        "torus network must have 2n^2 vertices"
    );
    assert_eq!(
        graph.edge_count(),
        3 * n * n,
        "torus network must have 3n^2 edges"
    );
    assert!(graph.is_connected(), "torus network must be connected");
    let faces = graph.faces();
    assert_eq!(faces.len(), n * n, "torus network must have n^2 faces");
    assert_eq!(graph.euler_characteristic(), 0, "gluing must close a torus");

    // Torus coordinates for every black vertex.
    let mut grid = BTreeMap::new();
    for (&(i, j), &v) in lower.black.iter() {
        grid.insert((i, j), v);
    }
    for (&(x, y), &v) in upper.black.iter() {
        grid.insert((x + 1, n - y), v);
    }
    assert_eq!(grid.len(), n * n, "black grid must cover the torus");
    let grid_of: BTreeMap<VertexId, (usize, usize)> =
        grid.iter().map(|(&rc, &v)| (v, rc)).collect();

    // Face grid: cell (i,j) is the hexagon east of the black vertex at row
    // i+1, column 1-j (mod n, 1-based); columns advance westward through
    // the black grid as j grows.
    let mut face_index = BTreeMap::new();
    for (f, orbit) in faces.iter().enumerate() {
        for &d in orbit {
            face_index.insert(d, f);
        }
    }
    let mut face_orbit = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            let r = i + 1;
            let c = (((1i64 - j as i64 - 1).rem_euclid(n as i64)) as usize) + 1;
            let v = grid[&(r, c)];
            let d = graph.dart_at(v, BLACK_SE);
            let f = face_index[&d];
            assert!(seen.insert(f), "face grid labels must be distinct");
            face_orbit.insert((i, j), faces[f].clone());
        }
    }

    // Homology representatives from the first zig-zag of each horizontal
    // family.
    let mut gamma_x = Vec::new();
    let mut gamma_y = Vec::new();
    for orbit in graph.zigzags() {
        let fwd = orbit
            .iter()
            .copied()
            .find(|&d| graph.is_forward(d))
            .expect("every zig-zag orbit alternates colors");
        let slot = graph.dart_slot(fwd);
        let (r, _c) = grid_of[&graph.dart_vertex(fwd)];
        if slot == BLACK_NE && r == 1 {
            gamma_x = orbit.clone();
        }
        if slot == BLACK_W {
            // Column index of a south-east orbit is the shared column of
            // its black vertices.
            let c = orbit
                .iter()
                .filter(|&&d| graph.is_forward(d))
                .map(|&d| grid_of[&graph.dart_vertex(d)].1)
                .min()
                .unwrap();
            if c == 1 {
                gamma_y = orbit.iter().rev().map(|&d| graph.twin(d)).collect();
            }
        }
    }
    assert!(!gamma_x.is_empty() && !gamma_y.is_empty());

    Ok(TorusNetwork {
        n,
        graph,
        connection,
        lower_net: lower_net.clone(),
        upper_net: upper_net.clone(),
        lower,
        upper,
        grid,
        grid_of,
        face_orbit,
        gamma_x,
        gamma_y,
        seam,
    })
}

impl<T: Ring> TorusNetwork<T> {
    /// Direction type of a seam edge, or None for a cell-internal edge.
    pub fn seam_kind(&self, e: crate::ribbon::EdgeId) -> Option<EdgeKind> {
        self.seam
            .iter()
            .find(|&(_, &se)| se == e)
            .map(|(&(side, _), _)| side.edge_kind())
    }

    /// Weight pair of the black vertex at torus position (r, c), 1-based.
    pub fn weight_at(&self, r: usize, c: usize) -> &(T, T) {
        if c <= r {
            self.lower_net.weight((r, c))
        } else {
            self.upper_net.weight((r - 1, self.n - c))
        }
    }

    /// Monodromy around the face at grid cell (i, j), 0-based.
    pub fn face_weight(&self, i: usize, j: usize) -> T {
        self.connection
            .monodromy(&self.graph, &self.face_orbit[&(i, j)])
            .expect("face weights are invertible products of cell weights")
    }

    pub fn face_grid(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.face_weight(i, j)).collect())
            .collect()
    }

    pub fn x_weight(&self) -> T {
        self.connection
            .monodromy(&self.graph, &self.gamma_x)
            .expect("weights are nonzero")
    }

    pub fn y_weight(&self) -> T {
        self.connection
            .monodromy(&self.graph, &self.gamma_y)
            .expect("weights are nonzero")
    }

    /// All 3n zig-zag orbits classified by family and index, sorted.
    pub fn zigzags_classified(&self) -> Vec<ZigzagClass<T>> {
        let mut out = Vec::new();
        for orbit in self.graph.zigzags() {
            let fwd: Vec<DartId> = orbit
                .iter()
                .copied()
                .filter(|&d| self.graph.is_forward(d))
                .collect();
            assert_eq!(
                fwd.len() * 2,
                orbit.len(),
                "zig-zag orbits alternate black and white darts"
            );
            let slot = self.graph.dart_slot(fwd[0]);
            assert!(
                fwd.iter().all(|&d| self.graph.dart_slot(d) == slot),
                "all forward darts of a zig-zag share their slot"
            );
            let positions: Vec<(usize, usize)> = fwd
                .iter()
                .map(|&d| self.grid_of[&self.graph.dart_vertex(d)])
                .collect();
            let n = self.n as i64;
            let (family, index, walk) = match slot {
                BLACK_NE => {
                    let r = positions[0].0;
                    assert!(positions.iter().all(|&(pr, _)| pr == r));
                    (ZigzagFamily::NorthEast, r, orbit.clone())
                }
                BLACK_W => {
                    let c = positions[0].1;
                    assert!(positions.iter().all(|&(_, pc)| pc == c));
                    let rev: Vec<DartId> =
                        orbit.iter().rev().map(|&d| self.graph.twin(d)).collect();
                    (ZigzagFamily::SouthEast, c, rev)
                }
                BLACK_SE => {
                    let d0 = (positions[0].0 as i64 - positions[0].1 as i64).rem_euclid(n);
                    assert!(positions.iter().all(|&(pr, pc)| {
                        (pr as i64 - pc as i64).rem_euclid(n) == d0
                    }));
                    (ZigzagFamily::Steep, d0 as usize + 1, orbit.clone())
                }
                _ => unreachable!("black vertices have three slots"),
            };
            let weight = self
                .connection
                .monodromy(&self.graph, &walk)
                .expect("zig-zag walks are closed");
            out.push(ZigzagClass {
                family,
                index,
                walk,
                weight,
            });
        }
        out.sort_by_key(|z| (z.family, z.index));
        assert_eq!(out.len(), 3 * self.n, "expected 3n zig-zag orbits");
        out
    }

    /// Weights of one family, indexed 1..n.
    pub fn family_weights(&self, family: ZigzagFamily) -> Vec<T> {
        self.zigzags_classified()
            .into_iter()
            .filter(|z| z.family == family)
            .map(|z| z.weight)
            .collect()
    }
}

impl<T: Ring + std::fmt::Display> TorusNetwork<T> {
    pub fn to_json(&self) -> serde_json::Value {
        let cell_json = |net: &TriangleNetwork<T>| {
            let weights: Vec<serde_json::Value> = net
                .weights
                .iter()
                .map(|(&(i, j), (a, b))| {
                    serde_json::json!({
                        "vertex": [i, j],
                        "a": a.to_string(),
                        "b": b.to_string(),
                    })
                })
                .collect();
            serde_json::json!({ "n": net.n, "weights": weights })
        };
        let faces: Vec<serde_json::Value> = self
            .face_orbit
            .iter()
            .map(|(&(i, j), orbit)| {
                let edges: Vec<usize> = orbit.iter().map(|&d| self.graph.edge_of(d)).collect();
                serde_json::json!({
                    "label": format!("X{}{}", i, j),
                    "weight": self.face_weight(i, j).to_string(),
                    "edges": edges,
                })
            })
            .collect();
        let cycle = |walk: &[DartId]| -> Vec<i64> {
            crate::ribbon::cycle_vector(&self.graph, walk)
        };
        serde_json::json!({
            "n": self.n,
            "lower_cell": cell_json(&self.lower_net),
            "upper_cell": cell_json(&self.upper_net),
            "graph": self.graph.to_json(),
            "faces": faces,
            "gamma_x": cycle(&self.gamma_x),
            "gamma_y": cycle(&self.gamma_y),
        })
    }

    /// DOT rendering with edge weight labels and zig-zag coloring.
    pub fn to_dot(&self) -> String {
        let base = self.graph.to_dot();
        // Splice weight labels into the edge lines emitted by the plain
        // renderer; edges appear in id order there.
        let mut out = String::new();
        let mut e = 0usize;
        for line in base.lines() {
            if line.contains(" -- ") {
                let label = format!(" // w = {}", self.connection.weight(e));
                out.push_str(line);
                out.push_str(&label);
                e += 1;
            } else {
                out.push_str(line);
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn unit_torus(n: usize) -> TorusNetwork<Scalar> {
        let lo = TriangleNetwork::<Scalar>::unit(CellKind::Lower, n).unwrap();
        let up = TriangleNetwork::<Scalar>::unit(CellKind::Upper, n).unwrap();
        glue_torus(&lo, &up).unwrap()
    }

    #[test]
    fn cell_censuses_match_size_four_picture() {
        assert_eq!(black_labels(CellKind::Lower, 4).len(), 10);
        assert_eq!(white_labels(CellKind::Lower, 4).len(), 6);
        assert_eq!(black_labels(CellKind::Upper, 4).len(), 6);
        assert_eq!(white_labels(CellKind::Upper, 4).len(), 10);
    }

    #[test]
    fn size_one_lower_cell_is_single_black_vertex() {
        let net = TriangleNetwork::<Scalar>::unit(CellKind::Lower, 1).unwrap();
        assert_eq!(net.black_count(), 1);
        assert_eq!(net.white_count(), 0);
        let mut b = RibbonBuilder::new();
        let mut w = Vec::new();
        let cell = instantiate_cell(&mut b, &net, &mut w);
        assert!(w.is_empty(), "no internal edges at size one");
        // All three slots dangle, one per side.
        for side in [CellSide::Left, CellSide::TopRight, CellSide::BottomRight] {
            assert_eq!(cell.stubs[&side].len(), 1);
        }
    }

    #[test]
    fn weight_validation_rejects_gaps_and_zeros() {
        let mut weights: BTreeMap<(usize, usize), (Scalar, Scalar)> = BTreeMap::new();
        weights.insert((1, 1), (Scalar::from_int(1), Scalar::from_int(1)));
        let err = TriangleNetwork::new(CellKind::Lower, 2, weights.clone()).unwrap_err();
        assert_eq!(err, HoneycombError::MissingLabel((2, 1)));

        for &v in black_labels(CellKind::Lower, 2).iter() {
            weights.insert(v, (Scalar::from_int(2), Scalar::from_int(3)));
        }
        weights.insert((2, 2), (Scalar::from_int(0), Scalar::from_int(3)));
        let err = TriangleNetwork::new(CellKind::Lower, 2, weights).unwrap_err();
        assert_eq!(err, HoneycombError::ZeroWeight((2, 2)));
    }

    #[test]
    fn smallest_torus_has_two_vertices_three_edges_one_face() {
        let net = unit_torus(1);
        assert_eq!(net.graph.vertex_count(), 2);
        assert_eq!(net.graph.edge_count(), 3);
        assert_eq!(net.graph.faces().len(), 1);
        assert_eq!(net.graph.genus(), 1);
    }

    #[test]
    fn size_two_torus_census() {
        let net = unit_torus(2);
        assert_eq!(net.graph.faces().len(), 4);
        // Cycle rank E - V + 1.
        assert_eq!(net.graph.edge_count() - net.graph.vertex_count() + 1, 5);
    }

    #[test]
    fn size_four_torus_has_sixteen_faces_and_twelve_zigzags() {
        let net = unit_torus(4);
        assert_eq!(net.graph.faces().len(), 16);
        assert_eq!(net.graph.zigzags().len(), 12);
    }

    #[test]
    fn zigzag_families_split_evenly_up_to_size_six() {
        for n in 1..=6 {
            let net = unit_torus(n);
            let classes = net.zigzags_classified();
            for family in [
                ZigzagFamily::NorthEast,
                ZigzagFamily::SouthEast,
                ZigzagFamily::Steep,
            ] {
                let of_family: Vec<usize> = classes
                    .iter()
                    .filter(|z| z.family == family)
                    .map(|z| z.index)
                    .collect();
                assert_eq!(
                    of_family,
                    (1..=n).collect::<Vec<_>>(),
                    "family {:?} must appear once per index at n={}",
                    family,
                    n
                );
            }
            assert_eq!(net.graph.euler_characteristic(), 0);
        }
    }

    /// Zig-zag monodromies against direct products over the black grid:
    /// north-east paths collect the `a` weights of one row, south-east
    /// paths (reversed) the `b` weights of one column, steep paths the
    /// ratios b/a along one wrapped diagonal.
    #[test]
    fn zigzag_weights_are_row_column_and_diagonal_products() {
        let n = 4;
        let prime = |k: usize| Scalar::from_int([2, 3, 5, 7, 11, 13, 17, 19][k % 8] as i64);
        let mut idx = 0;
        let mut mk = |kind: CellKind| {
            let weights = black_labels(kind, n)
                .into_iter()
                .map(|v| {
                    idx += 2;
                    (v, (prime(idx), prime(idx + 1)))
                })
                .collect();
            TriangleNetwork::<Scalar>::new(kind, n, weights).unwrap()
        };
        let lo = mk(CellKind::Lower);
        let up = mk(CellKind::Upper);
        let net = glue_torus(&lo, &up).unwrap();

        for z in net.zigzags_classified() {
            let mut want = Scalar::one();
            for r in 1..=n {
                for c in 1..=n {
                    let (a, b) = net.weight_at(r, c).clone();
                    match z.family {
                        ZigzagFamily::NorthEast if r == z.index => {
                            want = want.mul(&a);
                        }
                        ZigzagFamily::SouthEast if c == z.index => {
                            want = want.mul(&b);
                        }
                        ZigzagFamily::Steep
                            if (r as i64 - c as i64).rem_euclid(n as i64) as usize + 1
                                == z.index =>
                        {
                            want = want.mul(&b.mul(&a.try_inverse().unwrap()));
                        }
                        _ => {}
                    }
                }
            }
            assert_eq!(z.weight, want, "family {:?} index {}", z.family, z.index);
        }
    }

    #[test]
    fn face_and_homology_weights_multiply_to_zigzag_data() {
        // The product of all face weights is 1, and the two homology
        // weights are the first row / column products.
        let n = 3;
        let mut k = 0i64;
        let mut mk = |kind: CellKind| {
            let weights = black_labels(kind, n)
                .into_iter()
                .map(|v| {
                    k += 1;
                    (v, (Scalar::from_int(k + 1), Scalar::from_int(2 * k + 3)))
                })
                .collect();
            TriangleNetwork::<Scalar>::new(kind, n, weights).unwrap()
        };
        let net = glue_torus(&mk(CellKind::Lower), &mk(CellKind::Upper)).unwrap();

        let mut prod = Scalar::one();
        for i in 0..n {
            for j in 0..n {
                prod = prod.mul(&net.face_weight(i, j));
            }
        }
        assert_eq!(prod, Scalar::one(), "face weights multiply to 1");

        let zz = net.zigzags_classified();
        let ne1 = zz
            .iter()
            .find(|z| z.family == ZigzagFamily::NorthEast && z.index == 1)
            .unwrap();
        let se1 = zz
            .iter()
            .find(|z| z.family == ZigzagFamily::SouthEast && z.index == 1)
            .unwrap();
        assert_eq!(net.x_weight(), ne1.weight);
        assert_eq!(net.y_weight(), se1.weight);
    }

    #[test]
    fn torus_json_export_is_deterministic() {
        let a = unit_torus(2).to_json().to_string();
        let b = unit_torus(2).to_json().to_string();
        assert_eq!(a, b);
        assert!(a.contains("X00"));
    }

    #[test]
    fn glue_rejects_mismatched_sizes_and_kinds() {
        let lo2 = TriangleNetwork::<Scalar>::unit(CellKind::Lower, 2).unwrap();
        let up3 = TriangleNetwork::<Scalar>::unit(CellKind::Upper, 3).unwrap();
        assert_eq!(
            glue_torus(&lo2, &up3).unwrap_err(),
            HoneycombError::SizeMismatch(2, 3)
        );
        let lo2b = lo2.clone();
        assert_eq!(
            glue_torus(&lo2, &lo2b).map(|_| ()).unwrap_err(),
            HoneycombError::KindMismatch
        );
    }
}
