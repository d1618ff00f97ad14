//! Extreme-point index over lifted integer points.
//!
//! Stores points `(u, v, w)` and answers directional queries `(d1, d2)`
//! with an index attaining `max_j (u_j*d1 + v_j*d2 + w_j)` together with
//! the exact maximum. Geometrically the query point `(d1, d2)` is located
//! in the maximization diagram — the projection of the upper envelope of
//! the planes `z = u x + v y + w` — so batched queries against the same
//! point set cost a logarithmic search instead of a scan.
//!
//! The representation is chosen per point set:
//!
//! * few points, or any exact-construction degeneracy: linear scan;
//! * all gradients `(u, v)` on one line: a 1D upper envelope over the
//!   lattice parameter;
//! * all points on one non-vertical plane: the normal fan of the 2D
//!   gradient hull, located via [`trapmap::SlabMap`];
//! * full-dimensional: the upper hull of the lifted set, its dual
//!   diagram, and the same slab map.
//!
//! Construction is lazy: the first few queries are answered by scanning,
//! and the diagram is only built once the query count justifies it.
//!
//! Everything is integer arithmetic; coordinate caps (`MAX_POINT_*`,
//! `MAX_QUERY_*`) keep every internal predicate within `i128`/`I256`
//! range, and any configuration the exact pipeline cannot represent falls
//! back to the scan, never to approximation.

pub mod hull3d;
pub mod trapmap;

use crate::error::{Error, Result};
use crate::wide::I256;
use hull3d::{convex_hull, HullFacet, HullPoint};
use std::collections::HashMap;
use trapmap::{assemble_segments, DualPt, RawEdge, SlabMap};

/// Strict bound on |u| of an indexed point.
pub const MAX_POINT_U: i128 = 1 << 48;
/// Strict bound on |v| of an indexed point.
pub const MAX_POINT_V: i128 = 1 << 60;
/// Strict bound on |w| of an indexed point.
pub const MAX_POINT_W: i128 = 1 << 90;
/// Strict bound on |d1| of a query direction.
pub const MAX_QUERY_X: i128 = 1 << 60;
/// Strict bound on |d2| of a query direction.
pub const MAX_QUERY_Y: i128 = 1 << 43;

/// Number of queries answered by scanning before the diagram is built.
const LAZY_BUILD_THRESHOLD: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftedPoint {
    pub u: i128,
    pub v: i128,
    pub w: i128,
}

impl LiftedPoint {
    pub fn new(u: i128, v: i128, w: i128) -> LiftedPoint {
        LiftedPoint { u, v, w }
    }

    #[inline]
    pub fn value_at(&self, d1: i128, d2: i128) -> i128 {
        self.u * d1 + self.v * d2 + self.w
    }
}

/// Upper envelope of lines `y = slope*x + intercept`, queried at integer x.
/// Returns the stored id of a line attaining the maximum; values are
/// recomputed by the caller from the original points, so the envelope only
/// ever compares, never evaluates.
pub struct Envelope {
    lines: Vec<(i128, i128, u32)>,
}

impl Envelope {
    pub fn build(mut lines: Vec<(i128, i128, u32)>) -> Envelope {
        debug_assert!(!lines.is_empty());
        lines.sort_unstable_by(|x, y| {
            x.0.cmp(&y.0)
                .then_with(|| y.1.cmp(&x.1))
                .then_with(|| x.2.cmp(&y.2))
        });
        lines.dedup_by(|later, first| later.0 == first.0);
        let mut hull: Vec<(i128, i128, u32)> = Vec::with_capacity(lines.len());
        for l in lines {
            while hull.len() >= 2 {
                let m = hull[hull.len() - 1];
                let f = hull[hull.len() - 2];
                // m is redundant when, at the crossing of f and l, it is
                // not strictly above: (s_m-s_f)(b_f-b_l) <= (b_f-b_m)(s_l-s_f)
                let lhs = I256::mul_i128(m.0 - f.0, f.1 - l.1);
                let rhs = I256::mul_i128(f.1 - m.1, l.0 - f.0);
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(l);
        }
        Envelope { lines: hull }
    }

    pub fn query(&self, x: i128) -> u32 {
        // piece j is optimal while x <= breakpoint(j, j+1); binary-search
        // the first piece whose breakpoint has not been passed
        let mut lo = 0usize;
        let mut hi = self.lines.len() - 1;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let db = self.lines[mid].1 - self.lines[mid + 1].1;
            let ds = self.lines[mid + 1].0 - self.lines[mid].0;
            if I256::from_i128(db) < I256::mul_i128(x, ds) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        self.lines[lo].2
    }
}

enum Repr {
    /// Not yet decided; queries scan until the lazy threshold.
    Pending,
    Scan,
    Env1D {
        dir: (i128, i128),
        env: Envelope,
    },
    Diagram {
        map: SlabMap,
        sky: Envelope,
    },
}

/// Point-set statistics for logs and benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpStats {
    pub variant: &'static str,
    pub input: usize,
    pub deduped: usize,
    pub fell_back: bool,
}

pub struct EPIndex {
    all: Vec<LiftedPoint>,
    /// deduplicated by gradient (u, v), keeping the maximum w
    pts: Vec<LiftedPoint>,
    /// deduplicated position -> original index
    ids: Vec<u32>,
    repr: Repr,
    queries: u64,
    fell_back: bool,
}

impl EPIndex {
    pub fn build(points: &[LiftedPoint]) -> Result<EPIndex> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for p in points {
            if p.u.abs() >= MAX_POINT_U || p.v.abs() >= MAX_POINT_V || p.w.abs() >= MAX_POINT_W {
                return Err(Error::CoordinateOutOfRange);
            }
        }
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        order.sort_unstable_by_key(|&i| {
            let p = &points[i as usize];
            (p.u, p.v, std::cmp::Reverse(p.w), i)
        });
        let mut pts: Vec<LiftedPoint> = Vec::new();
        let mut ids: Vec<u32> = Vec::new();
        for &i in &order {
            let p = points[i as usize];
            if let Some(last) = pts.last() {
                if last.u == p.u && last.v == p.v {
                    continue;
                }
            }
            pts.push(p);
            ids.push(i);
        }
        let mut idx = EPIndex {
            all: points.to_vec(),
            pts,
            ids,
            repr: Repr::Pending,
            queries: 0,
            fell_back: false,
        };
        if idx.pts.len() <= 8 {
            idx.repr = Repr::Scan;
        }
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn stats(&self) -> EpStats {
        let variant = match &self.repr {
            Repr::Pending => "pending",
            Repr::Scan => "scan",
            Repr::Env1D { .. } => "envelope",
            Repr::Diagram { .. } => "diagram",
        };
        EpStats {
            variant,
            input: self.all.len(),
            deduped: self.pts.len(),
            fell_back: self.fell_back,
        }
    }

    fn scan(&self, d1: i128, d2: i128) -> (usize, i128) {
        let mut best = 0usize;
        let mut best_v = self.all[0].value_at(d1, d2);
        for (i, p) in self.all.iter().enumerate().skip(1) {
            let v = p.value_at(d1, d2);
            if v > best_v {
                best = i;
                best_v = v;
            }
        }
        (best, best_v)
    }

    /// Decide and construct the final representation now. Idempotent; a
    /// failure of any exact construction degrades to the scan.
    pub fn build_now(&mut self) {
        if !matches!(self.repr, Repr::Pending) {
            return;
        }
        self.repr = match self.decide_repr() {
            Some(r) => r,
            None => {
                self.fell_back = true;
                Repr::Scan
            }
        };
        log::debug!(
            "ep index built: variant={} input={} deduped={}",
            self.stats().variant,
            self.all.len(),
            self.pts.len()
        );
    }

    fn decide_repr(&self) -> Option<Repr> {
        let pts = &self.pts;
        debug_assert!(pts.len() > 8);
        let g0 = (pts[0].u, pts[0].v);
        let spread = pts
            .iter()
            .position(|p| (p.u, p.v) != g0)
            .expect("deduplicated set with one gradient has length 1");
        let dir0 = (pts[spread].u - g0.0, pts[spread].v - g0.1);
        let off_line = pts.iter().position(|p| {
            let d = (p.u - g0.0, p.v - g0.1);
            dir0.0 * d.1 - dir0.1 * d.0 != 0
        });
        match off_line {
            None => self.build_env1d(),
            Some(k) => {
                if let Some(n) = self.plane_normal(spread, k) {
                    if self.all_on_plane(n) {
                        return self.build_fan_diagram(n);
                    }
                }
                self.build_hull_diagram()
            }
        }
    }

    fn build_env1d(&self) -> Option<Repr> {
        let pts = &self.pts;
        // lattice direction of the common gradient line
        let (mut lo, mut hi) = (0usize, 0usize);
        for (i, p) in pts.iter().enumerate() {
            if (p.u, p.v) < (pts[lo].u, pts[lo].v) {
                lo = i;
            }
            if (p.u, p.v) > (pts[hi].u, pts[hi].v) {
                hi = i;
            }
        }
        let (du, dv) = (pts[hi].u - pts[lo].u, pts[hi].v - pts[lo].v);
        let g = {
            let g = gcd_i128(du, dv);
            (du / g, dv / g)
        };
        let base = (pts[lo].u, pts[lo].v);
        let mut lines = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let t = if g.0 != 0 {
                (p.u - base.0) / g.0
            } else {
                (p.v - base.1) / g.1
            };
            // integer points on a line with primitive direction have
            // integral parameters
            debug_assert_eq!(base.0 + t * g.0, p.u);
            debug_assert_eq!(base.1 + t * g.1, p.v);
            lines.push((t, p.w, i as u32));
        }
        Some(Repr::Env1D {
            dir: g,
            env: Envelope::build(lines),
        })
    }

    /// Normal of the plane through pts[0], pts[i], pts[j], or None when the
    /// cross product leaves i128.
    fn plane_normal(&self, i: usize, j: usize) -> Option<(i128, i128, i128)> {
        let p0 = self.pts[0];
        let a = self.pts[i];
        let b = self.pts[j];
        let d1 = (a.u - p0.u, a.v - p0.v, a.w - p0.w);
        let d2 = (b.u - p0.u, b.v - p0.v, b.w - p0.w);
        let nu = d1.1.checked_mul(d2.2)?.checked_sub(d1.2.checked_mul(d2.1)?)?;
        let nv = d1.2.checked_mul(d2.0)?.checked_sub(d1.0.checked_mul(d2.2)?)?;
        let nw = d1.0.checked_mul(d2.1)?.checked_sub(d1.1.checked_mul(d2.0)?)?;
        Some((nu, nv, nw))
    }

    fn all_on_plane(&self, n: (i128, i128, i128)) -> bool {
        if n.2 == 0 {
            // vertical plane would mean collinear gradients, handled earlier
            return false;
        }
        let p0 = self.pts[0];
        self.pts.iter().all(|p| {
            I256::mul_i128(n.0, p.u - p0.u)
                .add(I256::mul_i128(n.1, p.v - p0.v))
                .add(I256::mul_i128(n.2, p.w - p0.w))
                .sign()
                == 0
        })
    }

    fn sky_envelope(&self) -> Envelope {
        let vmax = self.pts.iter().map(|p| p.v).max().unwrap();
        let lines: Vec<(i128, i128, u32)> = self
            .pts
            .iter()
            .enumerate()
            .filter(|(_, p)| p.v == vmax)
            .map(|(i, p)| (p.u, p.w, i as u32))
            .collect();
        Envelope::build(lines)
    }

    /// Coplanar case: the diagram is the normal fan of the 2D gradient
    /// hull, translated to the plane's dual point O.
    fn build_fan_diagram(&self, n: (i128, i128, i128)) -> Option<Repr> {
        let origin = DualPt::new(n.0, n.1, n.2);
        let grads: Vec<(i128, i128)> = self.pts.iter().map(|p| (p.u, p.v)).collect();
        let hull = hull2d(&grads);
        debug_assert!(hull.len() >= 3);
        let mut raw = Vec::with_capacity(hull.len());
        for k in 0..hull.len() {
            let i = hull[k];
            let j = hull[(k + 1) % hull.len()];
            let (gi, gj) = (grads[i as usize], grads[j as usize]);
            // outward normal of the ccw edge gi -> gj
            let ray = (gj.1 - gi.1, gi.0 - gj.0);
            let right_going = ray.0 > 0 || (ray.0 == 0 && ray.1 > 0);
            let (lo, hi) = if right_going {
                (Some(origin), None)
            } else {
                (None, Some(origin))
            };
            raw.push(RawEdge {
                du: self.pts[i as usize].u - self.pts[j as usize].u,
                dv: self.pts[i as usize].v - self.pts[j as usize].v,
                dw: self.pts[i as usize].w - self.pts[j as usize].w,
                lo,
                hi,
                i,
                j,
            });
        }
        let segs = assemble_segments(raw, &grads).ok()?;
        let map = SlabMap::build(segs).ok()?;
        Some(Repr::Diagram {
            map,
            sky: self.sky_envelope(),
        })
    }

    fn build_hull_diagram(&self) -> Option<Repr> {
        let hp: Vec<HullPoint> = self
            .pts
            .iter()
            .map(|p| HullPoint {
                u: p.u,
                v: p.v,
                w: p.w,
            })
            .collect();
        let facets = convex_hull(&hp).ok()?;
        let normals: Vec<Option<(i128, i128, i128)>> =
            facets.iter().map(|f| facet_normal(&hp, f)).collect();

        let mut edge_facets: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
        for (fi, f) in facets.iter().enumerate() {
            for (a, b) in [(f.a, f.b), (f.b, f.c), (f.c, f.a)] {
                let key = (a.min(b), a.max(b));
                match edge_facets.entry(key) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert((fi as u32, u32::MAX));
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        if e.get().1 != u32::MAX {
                            return None; // non-manifold edge
                        }
                        e.get_mut().1 = fi as u32;
                    }
                }
            }
        }

        let upper = |fi: u32| -> Option<bool> {
            let n = normals[fi as usize]?;
            Some(n.2 > 0)
        };
        let dual = |fi: u32| -> Option<DualPt> {
            let n = normals[fi as usize]?;
            Some(DualPt::new(n.0, n.1, n.2))
        };

        let grads: Vec<(i128, i128)> = self.pts.iter().map(|p| (p.u, p.v)).collect();
        let mut raw: Vec<RawEdge> = Vec::new();
        for (&(i, j), &(f1, f2)) in &edge_facets {
            if f2 == u32::MAX {
                return None; // open surface
            }
            let (up1, up2) = (upper(f1)?, upper(f2)?);
            let (du, dv, dw) = (
                self.pts[i as usize].u - self.pts[j as usize].u,
                self.pts[i as usize].v - self.pts[j as usize].v,
                self.pts[i as usize].w - self.pts[j as usize].w,
            );
            let make_ray = |ff: u32| -> Option<RawEdge> {
                let d = dual(ff)?;
                let f = &facets[ff as usize];
                let third = [f.a, f.b, f.c]
                    .into_iter()
                    .find(|&x| x != i && x != j)
                    .unwrap();
                let t = (dv, -du);
                let gi = grads[i as usize];
                let gc = grads[third as usize];
                let s = (gi.0 - gc.0) * t.0 + (gi.1 - gc.1) * t.1;
                if s == 0 {
                    return None; // facet vertices collinear: inconsistent
                }
                let ray = if s > 0 { t } else { (-t.0, -t.1) };
                let right_going = ray.0 > 0 || (ray.0 == 0 && ray.1 > 0);
                let (lo, hi) = if right_going {
                    (Some(d), None)
                } else {
                    (None, Some(d))
                };
                Some(RawEdge {
                    du,
                    dv,
                    dw,
                    lo,
                    hi,
                    i,
                    j,
                })
            };
            match (up1, up2) {
                (true, true) => {
                    let (d1p, d2p) = (dual(f1)?, dual(f2)?);
                    let (lo, hi) = match d1p.lex_cmp(&d2p) {
                        std::cmp::Ordering::Less => (d1p, d2p),
                        std::cmp::Ordering::Greater => (d2p, d1p),
                        std::cmp::Ordering::Equal => continue, // coplanar pair
                    };
                    raw.push(RawEdge {
                        du,
                        dv,
                        dw,
                        lo: Some(lo),
                        hi: Some(hi),
                        i,
                        j,
                    });
                }
                (true, false) => raw.push(make_ray(f1)?),
                (false, true) => raw.push(make_ray(f2)?),
                (false, false) => {}
            }
        }
        if raw.is_empty() {
            return None; // a bounded full-dimensional hull always has rays
        }
        let segs = assemble_segments(raw, &grads).ok()?;
        let map = SlabMap::build(segs).ok()?;
        Some(Repr::Diagram {
            map,
            sky: self.sky_envelope(),
        })
    }

    /// Return an index into the original point slice attaining the maximum
    /// of `u*d1 + v*d2 + w`, and that maximum.
    pub fn query(&mut self, d1: i128, d2: i128) -> (usize, i128) {
        debug_assert!(d1.abs() < MAX_QUERY_X && d2.abs() < MAX_QUERY_Y);
        self.queries += 1;
        if matches!(self.repr, Repr::Pending) {
            if self.queries <= LAZY_BUILD_THRESHOLD {
                return self.scan(d1, d2);
            }
            self.build_now();
        }
        let (idx, value) = match &self.repr {
            Repr::Pending => unreachable!(),
            Repr::Scan => self.scan(d1, d2),
            Repr::Env1D { dir, env, .. } => {
                let s = dir.0 * d1 + dir.1 * d2;
                let k = env.query(s) as usize;
                (
                    self.ids[k] as usize,
                    self.pts[k].value_at(d1, d2),
                )
            }
            Repr::Diagram { map, sky } => {
                let k = match map.locate(d1, d2) {
                    Some(label) => label as usize,
                    // empty sweep interval: the whole vertical line lies in
                    // one cell, resolved at y -> +infinity
                    None => sky.query(d1) as usize,
                };
                (self.ids[k] as usize, self.pts[k].value_at(d1, d2))
            }
        };
        if crate::shadow_checks_enabled() {
            let (_, sv) = self.scan(d1, d2);
            assert_eq!(value, sv, "ep index disagrees with scan at ({d1},{d2})");
        }
        (idx, value)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    debug_assert!(a > 0);
    a as i128
}

fn facet_normal(pts: &[HullPoint], f: &HullFacet) -> Option<(i128, i128, i128)> {
    let a = &pts[f.a as usize];
    let b = &pts[f.b as usize];
    let c = &pts[f.c as usize];
    let d1 = (b.u - a.u, b.v - a.v, b.w - a.w);
    let d2 = (c.u - a.u, c.v - a.v, c.w - a.w);
    let nu = d1.1.checked_mul(d2.2)?.checked_sub(d1.2.checked_mul(d2.1)?)?;
    let nv = d1.2.checked_mul(d2.0)?.checked_sub(d1.0.checked_mul(d2.2)?)?;
    let nw = d1.0.checked_mul(d2.1)?.checked_sub(d1.1.checked_mul(d2.0)?)?;
    Some((nu, nv, nw))
}

/// Indices of the strict convex hull of 2D points, counterclockwise.
fn hull2d(pts: &[(i128, i128)]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..pts.len() as u32).collect();
    order.sort_unstable_by_key(|&i| pts[i as usize]);
    order.dedup_by_key(|i| pts[*i as usize]);
    let cross = |o: u32, a: u32, b: u32| -> i128 {
        let (po, pa, pb) = (pts[o as usize], pts[a as usize], pts[b as usize]);
        (pa.0 - po.0) * (pb.1 - po.1) - (pa.1 - po.1) * (pb.0 - po.0)
    };
    let build = |it: &mut dyn Iterator<Item = u32>| -> Vec<u32> {
        let mut h: Vec<u32> = Vec::new();
        for p in it {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 0 {
                h.pop();
            }
            h.push(p);
        }
        h
    };
    let mut lower = build(&mut order.iter().copied());
    let mut upper = build(&mut order.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}
