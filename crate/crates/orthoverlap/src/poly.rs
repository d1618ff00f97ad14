//! Polygon types and validation.
//!
//! [`OrthoPolygon`] is the integer-coordinate, axis-aligned workhorse used by
//! the solvers. [`GeneralPolygon`] carries exact rational vertices and is only
//! needed by the hardness gadgets, whose reductions involve a few slanted
//! edges and sub-integer offsets.

use crate::error::{Error, Result};
use num::BigRational;
use num::Signed;
use std::collections::HashSet;

/// Inclusive bound on vertex coordinate magnitude accepted by validation.
/// Products of four such coordinates stay far inside i128, which the solver
/// kernels rely on.
pub const COORD_MAX: i64 = 1 << 20;

/// Integer lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }
}

/// Closed axis-aligned rectangle `[x0,x1] × [y0,y1]` with positive extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Rect {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Rect {
        debug_assert!(x0 < x1 && y0 < y1);
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }
}

/// A simple orthogonal polygon with counterclockwise integer vertices.
///
/// Invariants established by [`OrthoPolygon::new`]:
/// * at least 4 vertices, all coordinates within [`COORD_MAX`];
/// * consecutive edges alternate horizontal/vertical (no zero-length edges,
///   no collinear runs, no spikes);
/// * the boundary is simple: non-adjacent edges are disjoint, no vertex
///   repeats;
/// * vertices are in counterclockwise order and enclose positive area.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoPolygon {
    verts: Vec<Point>,
}

impl OrthoPolygon {
    pub fn new(raw: Vec<Point>) -> Result<OrthoPolygon> {
        let verts = clean_ring(raw)?;
        if verts.len() < 4 {
            return Err(Error::TooFewVertices);
        }
        for p in &verts {
            if p.x.abs() > COORD_MAX || p.y.abs() > COORD_MAX {
                return Err(Error::CoordinateOutOfRange);
            }
        }
        // Every edge axis-parallel, consecutive edges perpendicular.
        let n = verts.len();
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let horiz = a.y == b.y && a.x != b.x;
            let vert = a.x == b.x && a.y != b.y;
            if !(horiz || vert) {
                return Err(Error::NotClosedOrthogonal);
            }
            let c = verts[(i + 2) % n];
            let next_horiz = b.y == c.y;
            if horiz == next_horiz {
                // clean_ring removed collinear runs, so this is a slanted or
                // duplicated configuration that slipped through
                return Err(Error::NotClosedOrthogonal);
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for p in &verts {
            if !seen.insert(*p) {
                return Err(Error::SelfIntersecting);
            }
        }
        check_ortho_simple(&verts)?;
        let mut verts = verts;
        let a2 = shoelace2(&verts);
        if a2 == 0 {
            return Err(Error::DegenerateArea);
        }
        if a2 < 0 {
            verts.reverse();
        }
        Ok(OrthoPolygon { verts })
    }

    /// Axis-aligned rectangle as a polygon.
    pub fn rect(r: Rect) -> OrthoPolygon {
        OrthoPolygon::new(vec![
            Point::new(r.x0, r.y0),
            Point::new(r.x1, r.y0),
            Point::new(r.x1, r.y1),
            Point::new(r.x0, r.y1),
        ])
        .expect("rectangle is a valid polygon")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Directed boundary edges in order.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.verts.len();
        (0..n).map(move |i| (self.verts[i], self.verts[(i + 1) % n]))
    }

    /// Twice the enclosed area (always positive and even for orthogonal
    /// polygons on the integer lattice... actually always even because each
    /// vertical edge contributes `x * Δy` to the plain area).
    pub fn area(&self) -> i64 {
        let a2 = shoelace2(&self.verts);
        debug_assert!(a2 > 0 && a2 % 2 == 0);
        a2 / 2
    }

    pub fn bbox(&self) -> Rect {
        let mut it = self.verts.iter();
        let p0 = it.next().unwrap();
        let (mut x0, mut y0, mut x1, mut y1) = (p0.x, p0.y, p0.x, p0.y);
        for p in it {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        Rect { x0, y0, x1, y1 }
    }

    pub fn translate(&self, dx: i64, dy: i64) -> OrthoPolygon {
        OrthoPolygon {
            verts: self
                .verts
                .iter()
                .map(|p| Point::new(p.x + dx, p.y + dy))
                .collect(),
        }
    }

    /// True if `p` lies in the closed region (interior or boundary).
    pub fn contains(&self, p: Point) -> bool {
        for (a, b) in self.edges() {
            if a.y == b.y {
                if p.y == a.y && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) {
                    return true;
                }
            } else if p.x == a.x && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y) {
                return true;
            }
        }
        // Ray cast to +x: count vertical edges whose half-open y-span covers
        // p.y and which lie strictly right of p.
        let mut inside = false;
        for (a, b) in self.edges() {
            if a.x == b.x && a.x > p.x {
                let (lo, hi) = (a.y.min(b.y), a.y.max(b.y));
                if lo <= p.y && p.y < hi {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Remove adjacent duplicates and merge collinear same-direction runs.
/// A direction reversal between consecutive edges is a spike and rejected.
fn clean_ring(mut verts: Vec<Point>) -> Result<Vec<Point>> {
    verts.dedup();
    while verts.len() > 1 && verts.first() == verts.last() {
        verts.pop();
    }
    if verts.len() < 3 {
        return Err(Error::TooFewVertices);
    }
    let mut out: Vec<Point> = Vec::with_capacity(verts.len());
    let n = verts.len();
    for i in 0..n {
        let prev = verts[(i + n - 1) % n];
        let cur = verts[i];
        let next = verts[(i + 1) % n];
        let d1 = (cur.x - prev.x, cur.y - prev.y);
        let d2 = (next.x - cur.x, next.y - cur.y);
        let cross = d1.0 as i128 * d2.1 as i128 - d1.1 as i128 * d2.0 as i128;
        if cross == 0 {
            let dot = d1.0 as i128 * d2.0 as i128 + d1.1 as i128 * d2.1 as i128;
            if dot < 0 {
                return Err(Error::SelfIntersecting);
            }
            continue; // straight-through vertex: drop it
        }
        out.push(cur);
    }
    Ok(out)
}

fn shoelace2(verts: &[Point]) -> i64 {
    let n = verts.len();
    let mut s: i64 = 0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    s
}

/// Non-adjacent axis-parallel edges must be fully disjoint (closed segments).
fn check_ortho_simple(verts: &[Point]) -> Result<()> {
    let n = verts.len();
    let edge = |i: usize| (verts[i], verts[(i + 1) % n]);
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let i_h = a.y == b.y;
            let j_h = c.y == d.y;
            let hit = match (i_h, j_h) {
                (true, true) => {
                    a.y == c.y
                        && a.x.min(b.x) <= c.x.max(d.x)
                        && c.x.min(d.x) <= a.x.max(b.x)
                }
                (false, false) => {
                    a.x == c.x
                        && a.y.min(b.y) <= c.y.max(d.y)
                        && c.y.min(d.y) <= a.y.max(b.y)
                }
                (true, false) => {
                    c.x >= a.x.min(b.x)
                        && c.x <= a.x.max(b.x)
                        && a.y >= c.y.min(d.y)
                        && a.y <= c.y.max(d.y)
                }
                (false, true) => {
                    a.x >= c.x.min(d.x)
                        && a.x <= c.x.max(d.x)
                        && c.y >= a.y.min(b.y)
                        && c.y <= a.y.max(b.y)
                }
            };
            if hit {
                return Err(Error::SelfIntersecting);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// General (rational-coordinate) simple polygons
// ---------------------------------------------------------------------------

pub type RPoint = (BigRational, BigRational);

fn orient(a: &RPoint, b: &RPoint, c: &RPoint) -> i32 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    match v.signum() {
        s if s.is_positive() => 1,
        s if s.is_negative() => -1,
        _ => 0,
    }
}

/// `p` lies on closed segment `ab`; caller guarantees `orient(a,b,p) == 0`.
fn on_segment(a: &RPoint, b: &RPoint, p: &RPoint) -> bool {
    p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

/// Closed-segment intersection test, exact.
fn segments_touch(a: &RPoint, b: &RPoint, c: &RPoint, d: &RPoint) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// A simple polygon with exact rational vertices, counterclockwise.
///
/// Collinear straight-through vertices are merged on construction; spikes and
/// any other self-contact are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralPolygon {
    verts: Vec<RPoint>,
}

impl GeneralPolygon {
    pub fn new(raw: Vec<RPoint>) -> Result<GeneralPolygon> {
        let mut verts: Vec<RPoint> = Vec::with_capacity(raw.len());
        for p in raw {
            if verts.last() != Some(&p) {
                verts.push(p);
            }
        }
        while verts.len() > 1 && verts.first() == verts.last() {
            verts.pop();
        }
        if verts.len() < 3 {
            return Err(Error::TooFewVertices);
        }
        // merge collinear runs / reject spikes
        let n = verts.len();
        let mut kept: Vec<RPoint> = Vec::with_capacity(n);
        for i in 0..n {
            let prev = &verts[(i + n - 1) % n];
            let cur = &verts[i];
            let next = &verts[(i + 1) % n];
            if orient(prev, cur, next) == 0 {
                let dot = (&cur.0 - &prev.0) * (&next.0 - &cur.0)
                    + (&cur.1 - &prev.1) * (&next.1 - &cur.1);
                if dot.is_negative() {
                    return Err(Error::SelfIntersecting);
                }
                continue;
            }
            kept.push(cur.clone());
        }
        let verts = kept;
        if verts.len() < 3 {
            return Err(Error::DegenerateArea);
        }
        let n = verts.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if verts[i] == verts[j] {
                    return Err(Error::SelfIntersecting);
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (&verts[i], &verts[(i + 1) % n]);
                let (c, d) = (&verts[j], &verts[(j + 1) % n]);
                if segments_touch(a, b, c, d) {
                    return Err(Error::SelfIntersecting);
                }
            }
        }
        let mut verts = verts;
        let a2 = shoelace2_big(&verts);
        if a2.is_zero() {
            return Err(Error::DegenerateArea);
        }
        if a2.is_negative() {
            verts.reverse();
        }
        Ok(GeneralPolygon { verts })
    }

    pub fn from_ortho(p: &OrthoPolygon) -> GeneralPolygon {
        GeneralPolygon {
            verts: p
                .vertices()
                .iter()
                .map(|q| (BigRational::from_integer(q.x.into()), BigRational::from_integer(q.y.into())))
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[RPoint] {
        &self.verts
    }

    pub fn area(&self) -> BigRational {
        let two = BigRational::from_integer(2.into());
        shoelace2_big(&self.verts) / two
    }

    pub fn translate(&self, dx: &BigRational, dy: &BigRational) -> GeneralPolygon {
        GeneralPolygon {
            verts: self
                .verts
                .iter()
                .map(|(x, y)| (x + dx, y + dy))
                .collect(),
        }
    }
}

use num::Zero;

fn shoelace2_big(verts: &[RPoint]) -> BigRational {
    let n = verts.len();
    let mut s = BigRational::zero();
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        s += &a.0 * &b.1 - &b.0 * &a.1;
    }
    s
}
