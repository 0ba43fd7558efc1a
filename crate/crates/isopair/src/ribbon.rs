//! Bipartite ribbon graphs: graphs with a cyclic order of edge-ends (darts)
//! at every vertex. The cyclic orders determine faces, an embedding surface,
//! and the zigzag walks that drive the whole construction. Edge weights live
//! in a [`Connection`], and gauge moves / monodromies act on it.
//!
//! Conventions:
//! - every edge joins a black vertex to a white vertex;
//! - edge `e` owns darts `2e` and `2e+1`, twins of each other;
//! - slot lists are counterclockwise;
//! - a dart is traversed away from its own vertex, and the forward direction
//!   of an edge is black to white.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

use crate::ring::Ring;

pub type VertexId = usize;
pub type DartId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RibbonError {
    #[error("vertex {0} does not exist")]
    NoSuchVertex(VertexId),
    #[error("slot {slot} out of range for vertex {vertex} of degree {degree}")]
    SlotOutOfRange {
        vertex: VertexId,
        slot: usize,
        degree: usize,
    },
    #[error("slot {slot} of vertex {vertex} is already connected")]
    SlotOccupied { vertex: VertexId, slot: usize },
    #[error("edges must join a black vertex to a white vertex")]
    SameColorEdge,
    #[error("slot {slot} of vertex {vertex} was never connected")]
    UnfilledSlot { vertex: VertexId, slot: usize },
    #[error("connection needs one weight per edge: got {got}, graph has {want}")]
    WeightCount { got: usize, want: usize },
    #[error("edge {0} has zero weight")]
    ZeroWeight(EdgeId),
    #[error("gauge factor must be nonzero")]
    ZeroGauge,
    #[error("weight of edge {0} is not invertible")]
    NonInvertibleWeight(EdgeId),
    #[error("dart sequence is not a contiguous closed walk (break after position {0})")]
    BrokenWalk(usize),
    #[error("bad graph JSON: {0}")]
    BadJson(String),
}

/// Immutable bipartite ribbon graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RibbonGraph {
    colors: Vec<Color>,
    slots: Vec<Vec<DartId>>,
    dart_pos: Vec<(VertexId, usize)>,
}

impl RibbonGraph {
    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.dart_pos.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.dart_pos.len()
    }

    pub fn color(&self, v: VertexId) -> Color {
        self.colors[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.slots[v].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.colors.len()
    }

    pub fn twin(&self, d: DartId) -> DartId {
        d ^ 1
    }

    pub fn edge_of(&self, d: DartId) -> EdgeId {
        d / 2
    }

    pub fn dart_vertex(&self, d: DartId) -> VertexId {
        self.dart_pos[d].0
    }

    pub fn dart_slot(&self, d: DartId) -> usize {
        self.dart_pos[d].1
    }

    pub fn dart_at(&self, v: VertexId, slot: usize) -> DartId {
        self.slots[v][slot]
    }

    /// The vertex a dart points to (the vertex of its twin).
    pub fn dart_head(&self, d: DartId) -> VertexId {
        self.dart_vertex(self.twin(d))
    }

    /// A dart is forward when it leaves a black vertex.
    pub fn is_forward(&self, d: DartId) -> bool {
        self.color(self.dart_vertex(d)) == Color::Black
    }

    pub fn next_ccw(&self, d: DartId) -> DartId {
        let (v, s) = self.dart_pos[d];
        let deg = self.slots[v].len();
        self.slots[v][(s + 1) % deg]
    }

    pub fn next_cw(&self, d: DartId) -> DartId {
        let (v, s) = self.dart_pos[d];
        let deg = self.slots[v].len();
        self.slots[v][(s + deg - 1) % deg]
    }

    /// Successor along the face left of the dart: step to the arrival vertex
    /// and turn clockwise once.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.next_cw(self.twin(d))
    }

    /// Successor along the zigzag through the dart: step to the arrival
    /// vertex, then turn counterclockwise at a white vertex and clockwise at
    /// a black one.
    pub fn zigzag_next(&self, d: DartId) -> DartId {
        let t = self.twin(d);
        match self.color(self.dart_vertex(t)) {
            Color::White => self.next_ccw(t),
            Color::Black => self.next_cw(t),
        }
    }

    fn orbits(&self, step: impl Fn(DartId) -> DartId) -> Vec<Vec<DartId>> {
        let mut seen = vec![false; self.dart_count()];
        let mut out = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = start;
            loop {
                debug_assert!(!seen[d], "orbit step must be a permutation");
                seen[d] = true;
                orbit.push(d);
                d = step(d);
                if d == start {
                    break;
                }
            }
            out.push(orbit);
        }
        out
    }

    /// All face orbits; each is rotated to start at its smallest dart and the
    /// list is sorted by that dart, so the output is canonical.
    pub fn faces(&self) -> Vec<Vec<DartId>> {
        self.orbits(|d| self.face_next(d))
    }

    /// All zigzag orbits, canonical like [`faces`](Self::faces).
    pub fn zigzags(&self) -> Vec<Vec<DartId>> {
        self.orbits(|d| self.zigzag_next(d))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.faces().len() as i64
    }

    /// Genus of the closed oriented surface the ribbon structure embeds in.
    pub fn genus(&self) -> usize {
        let chi = self.euler_characteristic();
        assert!(chi % 2 == 0, "Euler characteristic of a ribbon graph is even");
        ((2 - chi) / 2) as usize
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.slots[v] {
                let u = self.dart_head(d);
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.vertex_count()
    }

    /// Same graph with the cyclic order reversed at every black vertex. This
    /// exchanges the roles of faces and zigzags up to orientation.
    pub fn conjugate(&self) -> RibbonGraph {
        let mut slots = self.slots.clone();
        for (v, list) in slots.iter_mut().enumerate() {
            if self.colors[v] == Color::Black {
                list.reverse();
            }
        }
        let mut dart_pos = vec![(0, 0); self.dart_count()];
        for (v, list) in slots.iter().enumerate() {
            for (s, &d) in list.iter().enumerate() {
                dart_pos[d] = (v, s);
            }
        }
        RibbonGraph {
            colors: self.colors.clone(),
            slots,
            dart_pos,
        }
    }

    /// Label-independent encoding: two connected ribbon graphs are isomorphic
    /// (color- and orientation-preservingly) iff their canonical forms agree.
    /// BFS over darts with generators (twin, next_ccw), minimized over all
    /// start darts.
    pub fn canonical_form(&self) -> Vec<u64> {
        assert!(self.is_connected(), "canonical form needs a connected graph");
        let mut best: Option<Vec<u64>> = None;
        for start in 0..self.dart_count() {
            let enc = self.encode_from(start);
            if best.as_ref().map_or(true, |b| enc < *b) {
                best = Some(enc);
            }
        }
        best.unwrap_or_default()
    }

    fn encode_from(&self, start: DartId) -> Vec<u64> {
        let mut id = vec![usize::MAX; self.dart_count()];
        let mut order = Vec::with_capacity(self.dart_count());
        let mut queue = VecDeque::from([start]);
        id[start] = 0;
        order.push(start);
        while let Some(d) = queue.pop_front() {
            for nd in [self.twin(d), self.next_ccw(d)] {
                if id[nd] == usize::MAX {
                    id[nd] = order.len();
                    order.push(nd);
                    queue.push_back(nd);
                }
            }
        }
        let mut enc = Vec::with_capacity(order.len() * 3);
        for &d in &order {
            enc.push(id[self.twin(d)] as u64);
            enc.push(id[self.next_ccw(d)] as u64);
            enc.push(match self.color(self.dart_vertex(d)) {
                Color::Black => 0,
                Color::White => 1,
            });
        }
        enc
    }

    /// Graphviz rendering. Zigzag membership is shown by coloring each edge
    /// with the two zigzags through it (one per dart).
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 10] = [
            "red", "blue", "forestgreen", "orange", "purple", "brown", "cadetblue", "magenta",
            "darkslategray", "goldenrod",
        ];
        let zz = self.zigzags();
        let mut zz_of_dart = vec![0usize; self.dart_count()];
        for (zi, orbit) in zz.iter().enumerate() {
            for &d in orbit {
                zz_of_dart[d] = zi;
            }
        }
        let mut s = String::from("graph {\n");
        for v in self.vertices() {
            let (shape, fill) = match self.color(v) {
                Color::Black => ("circle", "black"),
                Color::White => ("circle", "white"),
            };
            s.push_str(&format!(
                "  v{v} [shape={shape}, style=filled, fillcolor={fill}, label=\"{v}\"];\n"
            ));
        }
        for e in 0..self.edge_count() {
            let (a, b) = (self.dart_vertex(2 * e), self.dart_vertex(2 * e + 1));
            let c1 = PALETTE[zz_of_dart[2 * e] % PALETTE.len()];
            let c2 = PALETTE[zz_of_dart[2 * e + 1] % PALETTE.len()];
            s.push_str(&format!("  v{a} -- v{b} [color=\"{c1}:{c2}\"];\n"));
        }
        s.push_str("}\n");
        s
    }

    /// JSON form: vertex colors plus one `[black, black_slot, white,
    /// white_slot]` row per edge, in edge order.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices()
            .map(|v| {
                serde_json::json!({
                    "id": v,
                    "color": match self.color(v) { Color::Black => "black", Color::White => "white" },
                    "degree": self.degree(v),
                })
            })
            .collect();
        let edges: Vec<[usize; 4]> = (0..self.edge_count())
            .map(|e| {
                let (mut db, mut dw) = (2 * e, 2 * e + 1);
                if !self.is_forward(db) {
                    std::mem::swap(&mut db, &mut dw);
                }
                [
                    self.dart_vertex(db),
                    self.dart_slot(db),
                    self.dart_vertex(dw),
                    self.dart_slot(dw),
                ]
            })
            .collect();
        serde_json::json!({ "vertices": vertices, "edges": edges })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RibbonGraph, RibbonError> {
        #[derive(Deserialize)]
        struct VDto {
            id: usize,
            color: Color,
            degree: usize,
        }
        #[derive(Deserialize)]
        struct GDto {
            vertices: Vec<VDto>,
            edges: Vec<[usize; 4]>,
        }
        let dto: GDto =
            serde_json::from_value(v.clone()).map_err(|e| RibbonError::BadJson(e.to_string()))?;
        let mut builder = RibbonBuilder::new();
        for (i, vd) in dto.vertices.iter().enumerate() {
            if vd.id != i {
                return Err(RibbonError::BadJson(format!(
                    "vertex ids must be 0..n in order, found {} at position {i}",
                    vd.id
                )));
            }
            builder.add_vertex(vd.color, vd.degree);
        }
        for &[b, bs, w, ws] in &dto.edges {
            builder.connect((b, bs), (w, ws))?;
        }
        builder.finish()
    }
}

/// Incremental construction with slot-level validation.
#[derive(Debug, Clone, Default)]
pub struct RibbonBuilder {
    colors: Vec<Color>,
    slots: Vec<Vec<Option<DartId>>>,
    dart_pos: Vec<(VertexId, usize)>,
}

impl RibbonBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, color: Color, degree: usize) -> VertexId {
        self.colors.push(color);
        self.slots.push(vec![None; degree]);
        self.colors.len() - 1
    }

    fn check_slot(&self, v: VertexId, s: usize) -> Result<(), RibbonError> {
        let slots = self.slots.get(v).ok_or(RibbonError::NoSuchVertex(v))?;
        if s >= slots.len() {
            return Err(RibbonError::SlotOutOfRange {
                vertex: v,
                slot: s,
                degree: slots.len(),
            });
        }
        if slots[s].is_some() {
            return Err(RibbonError::SlotOccupied { vertex: v, slot: s });
        }
        Ok(())
    }

    /// Join two free slots of opposite colors; returns the new edge id.
    pub fn connect(
        &mut self,
        (va, sa): (VertexId, usize),
        (vb, sb): (VertexId, usize),
    ) -> Result<EdgeId, RibbonError> {
        self.check_slot(va, sa)?;
        self.check_slot(vb, sb)?;
        if (va, sa) == (vb, sb) || self.colors[va] == self.colors[vb] {
            return Err(RibbonError::SameColorEdge);
        }
        let e = self.dart_pos.len() / 2;
        self.slots[va][sa] = Some(2 * e);
        self.slots[vb][sb] = Some(2 * e + 1);
        self.dart_pos.push((va, sa));
        self.dart_pos.push((vb, sb));
        Ok(e)
    }

    pub fn finish(self) -> Result<RibbonGraph, RibbonError> {
        let mut slots = Vec::with_capacity(self.slots.len());
        for (v, list) in self.slots.into_iter().enumerate() {
            let mut filled = Vec::with_capacity(list.len());
            for (s, d) in list.into_iter().enumerate() {
                filled.push(d.ok_or(RibbonError::UnfilledSlot { vertex: v, slot: s })?);
            }
            slots.push(filled);
        }
        Ok(RibbonGraph {
            colors: self.colors,
            slots,
            dart_pos: self.dart_pos,
        })
    }
}

/// Nonzero edge weights on a ribbon graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<T> {
    weights: Vec<T>,
}

impl<T: Ring> Connection<T> {
    pub fn new(graph: &RibbonGraph, weights: Vec<T>) -> Result<Self, RibbonError> {
        if weights.len() != graph.edge_count() {
            return Err(RibbonError::WeightCount {
                got: weights.len(),
                want: graph.edge_count(),
            });
        }
        if let Some(e) = weights.iter().position(|w| w.is_zero()) {
            return Err(RibbonError::ZeroWeight(e));
        }
        Ok(Connection { weights })
    }

    pub fn weight(&self, e: EdgeId) -> &T {
        &self.weights[e]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Multiply every edge at `v` by `t` (a gauge move: all closed-walk
    /// monodromies are unchanged because each walk enters and leaves `v`
    /// equally often with opposite directions).
    pub fn gauge_transform(
        &mut self,
        graph: &RibbonGraph,
        v: VertexId,
        t: &T,
    ) -> Result<(), RibbonError> {
        if t.is_zero() {
            return Err(RibbonError::ZeroGauge);
        }
        if v >= graph.vertex_count() {
            return Err(RibbonError::NoSuchVertex(v));
        }
        for s in 0..graph.degree(v) {
            let e = graph.edge_of(graph.dart_at(v, s));
            self.weights[e] = self.weights[e].mul(t);
        }
        Ok(())
    }

    /// Product of weights along a closed dart walk: forward darts contribute
    /// the weight, backward darts its inverse.
    pub fn monodromy(&self, graph: &RibbonGraph, walk: &[DartId]) -> Result<T, RibbonError> {
        for (i, &d) in walk.iter().enumerate() {
            let next = walk[(i + 1) % walk.len()];
            if graph.dart_head(d) != graph.dart_vertex(next) {
                return Err(RibbonError::BrokenWalk(i));
            }
        }
        let mut acc = T::one();
        for &d in walk {
            let e = graph.edge_of(d);
            if graph.is_forward(d) {
                acc = acc.mul(&self.weights[e]);
            } else {
                let inv = self.weights[e]
                    .try_inverse()
                    .ok_or(RibbonError::NonInvertibleWeight(e))?;
                acc = acc.mul(&inv);
            }
        }
        Ok(acc)
    }
}

/// Signed edge-crossing vector of a closed dart walk: +1 per forward
/// traversal of an edge, -1 per backward, summed. This is the walk's class in
/// the cycle lattice, in edge coordinates.
pub fn cycle_vector(graph: &RibbonGraph, walk: &[DartId]) -> Vec<i64> {
    let mut v = vec![0i64; graph.edge_count()];
    for &d in walk {
        let e = graph.edge_of(d);
        if graph.is_forward(d) {
            v[e] += 1;
        } else {
            v[e] -= 1;
        }
    }
    v
}

/// Deterministic map from every dart to the index of its zigzag orbit.
pub fn zigzag_index_map(graph: &RibbonGraph) -> (Vec<Vec<DartId>>, BTreeMap<DartId, usize>) {
    let zz = graph.zigzags();
    let mut map = BTreeMap::new();
    for (i, orbit) in zz.iter().enumerate() {
        for &d in orbit {
            map.insert(d, i);
        }
    }
    (zz, map)
}
