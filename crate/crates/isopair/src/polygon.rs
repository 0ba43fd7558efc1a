//! Convex lattice polygons realizing prescribed interior and boundary
//! lattice point counts.
//!
//! A pair (g, k) is realizable by a convex integer polygon exactly when
//! k ≥ 3 and k ≤ 2g+6, except that g = 0 puts no upper bound and g = 1
//! allows k ≤ 9. The constructions are a flat triangle for g = 0, two
//! extremal triangles per genus, and a family of half-plane cuts pivoting
//! around (0, 1) that peel boundary points off the long triangle one at a
//! time without touching its interior.

use num_integer::gcd;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolygonError {
    #[error("no convex lattice polygon has {g} interior and {k} boundary points")]
    OutOfRange { g: usize, k: usize },
    #[error("degenerate polygon: {0}")]
    Degenerate(String),
    #[error("vertex list is not strictly convex counterclockwise: {0}")]
    NotConvex(String),
    #[error("construction error: {0}")]
    Internal(String),
    #[error("bad input: {0}")]
    Parse(String),
}

/// A strictly convex polygon with integer vertices, counterclockwise,
/// rotated so the lexicographically smallest vertex comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolygon {
    pub vertices: Vec<(i64, i64)>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl LatticePolygon {
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<LatticePolygon, PolygonError> {
        if vertices.len() < 3 {
            return Err(PolygonError::Degenerate(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        let m = vertices.len();
        for i in 0..m {
            let (o, a, b) = (vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]);
            if cross(o, a, b) <= 0 {
                return Err(PolygonError::NotConvex(format!(
                    "turn at {:?} -> {:?} -> {:?} is not strictly left",
                    o, a, b
                )));
            }
        }
        let first = (0..m)
            .min_by_key(|&i| vertices[i])
            .expect("nonempty vertex list");
        let mut vertices = vertices;
        vertices.rotate_left(first);
        Ok(LatticePolygon { vertices })
    }

    /// Twice the area, from the shoelace formula; positive because the
    /// vertices run counterclockwise.
    pub fn area2(&self) -> i64 {
        let m = self.vertices.len();
        (0..m)
            .map(|i| {
                let (x1, y1) = self.vertices[i];
                let (x2, y2) = self.vertices[(i + 1) % m];
                x1 * y2 - x2 * y1
            })
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (interior, boundary) = lattice_census(self);
        json!({
            "vertices": self.vertices.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>(),
            "interior": interior,
            "boundary": boundary,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LatticePolygon, PolygonError> {
        let list = v["vertices"]
            .as_array()
            .ok_or_else(|| PolygonError::Parse("missing list field vertices".into()))?;
        let mut vertices = Vec::new();
        for p in list {
            let p = p
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| PolygonError::Parse("vertices must be [x, y] pairs".into()))?;
            let x = p[0]
                .as_i64()
                .ok_or_else(|| PolygonError::Parse("coordinates must be integers".into()))?;
            let y = p[1]
                .as_i64()
                .ok_or_else(|| PolygonError::Parse("coordinates must be integers".into()))?;
            vertices.push((x, y));
        }
        let polygon = LatticePolygon::new(vertices)?;
        let (interior, boundary) = lattice_census(&polygon);
        for (field, have) in [("interior", interior), ("boundary", boundary)] {
            if let Some(want) = v[field].as_u64() {
                if want as usize != have {
                    return Err(PolygonError::Parse(format!(
                        "{} count {} does not match the polygon ({})",
                        field, want, have
                    )));
                }
            }
        }
        Ok(polygon)
    }
}

/// Convex hull of a point set (monotone chain), dropping duplicates and
/// collinear boundary points.
fn hull(points: &[(i64, i64)]) -> Result<LatticePolygon, PolygonError> {
    let mut pts: Vec<(i64, i64)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(PolygonError::Degenerate("fewer than 3 distinct points".into()));
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    LatticePolygon::new(lower)
}

/// Interior and boundary lattice point counts: boundary from the gcds of
/// the edge vectors, interior from Pick's theorem.
pub fn lattice_census(p: &LatticePolygon) -> (usize, usize) {
    let m = p.vertices.len();
    let boundary: i64 = (0..m)
        .map(|i| {
            let (x1, y1) = p.vertices[i];
            let (x2, y2) = p.vertices[(i + 1) % m];
            gcd(x2 - x1, y2 - y1)
        })
        .sum();
    let area2 = p.area2();
    let twice_interior = area2 + 2 - boundary;
    assert!(
        twice_interior >= 0 && twice_interior % 2 == 0,
        "Pick's theorem must give a whole interior count, got 2I = {}",
        twice_interior
    );
    ((twice_interior / 2) as usize, boundary as usize)
}

/// Admissible boundary counts for a given interior count: the interval
/// [3, 2g+6], unbounded for g = 0 and capped at 9 for g = 1.
pub fn scott_range(g: usize) -> (usize, Option<usize>) {
    match g {
        0 => (3, None),
        1 => (3, Some(9)),
        _ => (3, Some(2 * g + 6)),
    }
}

/// Clip the polygon to the half-plane x + i·y ≥ i, whose boundary line
/// passes through (0, 1) and (i, 0). The construction only ever cuts
/// through lattice points; a fractional crossing is reported as an error.
fn cut_above(p: &LatticePolygon, i: i64) -> Result<LatticePolygon, PolygonError> {
    let h = |(x, y): (i64, i64)| x + i * y - i;
    let m = p.vertices.len();
    let mut kept: Vec<(i64, i64)> = Vec::new();
    for idx in 0..m {
        let u = p.vertices[idx];
        let v = p.vertices[(idx + 1) % m];
        let (hu, hv) = (h(u), h(v));
        if hu >= 0 {
            kept.push(u);
        }
        if (hu > 0 && hv < 0) || (hu < 0 && hv > 0) {
            let den = hu - hv;
            let nx = hu * (v.0 - u.0);
            let ny = hu * (v.1 - u.1);
            if nx % den != 0 || ny % den != 0 {
                return Err(PolygonError::Internal(format!(
                    "cut at i = {} crosses edge {:?} -> {:?} off the lattice",
                    i, u, v
                )));
            }
            kept.push((u.0 + nx / den, u.1 + ny / den));
        }
    }
    hull(&kept)
}

/// A convex lattice polygon with exactly g interior and k boundary points.
///
/// Flat triangle (0,0),(k−2,0),(0,1) for g = 0; triangles
/// (0,1),(0,2),(2g+1,0) at k = 3 and (0,0),(0,2),(2g+2,0) at k = 2g+6
/// (with (0,0),(3,0),(0,3) for the g = 1 maximum); in between, half-plane
/// cuts through (0,1),(i,0) shave one boundary point each off the long
/// triangle, leaving the interior alone. The cuts are applied one at a
/// time and the census is checked after every step.
pub fn polygon_for(g: usize, k: usize) -> Result<LatticePolygon, PolygonError> {
    let (lo, hi) = scott_range(g);
    if k < lo || hi.is_some_and(|h| k > h) {
        return Err(PolygonError::OutOfRange { g, k });
    }
    let gi = g as i64;
    if g == 0 {
        return LatticePolygon::new(vec![(0, 0), (k as i64 - 2, 0), (0, 1)]);
    }
    if k == 3 {
        return LatticePolygon::new(vec![(0, 1), (2 * gi + 1, 0), (0, 2)]);
    }
    if g == 1 && k == 9 {
        return LatticePolygon::new(vec![(0, 0), (3, 0), (0, 3)]);
    }
    let mut polygon = LatticePolygon::new(vec![(0, 0), (2 * gi + 2, 0), (0, 2)])?;
    let (mut interior, mut boundary) = lattice_census(&polygon);
    if boundary == k {
        return Ok(polygon);
    }
    for i in 1..=2 * gi + 2 {
        polygon = cut_above(&polygon, i)?;
        let (interior2, boundary2) = lattice_census(&polygon);
        if interior2 != interior || boundary2 >= boundary {
            return Err(PolygonError::Internal(format!(
                "cut at i = {} moved the census from ({}, {}) to ({}, {})",
                i, interior, boundary, interior2, boundary2
            )));
        }
        interior = interior2;
        boundary = boundary2;
        if boundary == k {
            return Ok(polygon);
        }
    }
    Err(PolygonError::Internal(format!(
        "cut family exhausted without reaching {} boundary points for g = {}",
        k, g
    )))
}
