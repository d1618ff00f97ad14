//! Exact randomized incremental 3D convex hull.
//!
//! Specialized for the lifted point sets of the extreme-point index: inputs
//! are distinct in their first two coordinates, full-dimensional (the caller
//! dispatches collinear/coplanar sets elsewhere), and bounded so that all
//! orientation determinants fit in 256 bits.
//!
//! Degeneracies (coplanar subsets) are handled with *strict* visibility:
//! a point is in conflict with a facet only if it lies strictly above the
//! facet plane. Two standard facts keep this exact without perturbation:
//!
//! * a point strictly outside a full-dimensional hull strictly sees at least
//!   one facet (it violates some supporting halfspace strictly), so skipping
//!   conflict-free points is sound;
//! * a cone facet over a horizon edge is a nonnegative combination of the
//!   two old facet planes meeting that edge, so a point strictly seeing the
//!   new facet strictly saw one of those two — conflict lists stay complete
//!   when propagated from exactly those neighbors.
//!
//! What strict visibility does *not* guarantee is a pinch-free horizon when
//! several facets are coplanar with the inserted point. Those configurations
//! are detected (duplicate horizon start vertex, adjacency collision, or a
//! non-cyclic walk) and reported as [`HullError::Degenerate`]; the caller
//! falls back to a linear scan.

use crate::wide::{sign_mul_add, I256};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullPoint {
    pub u: i128,
    pub v: i128,
    pub w: i128,
}

/// Oriented facet: the hull interior lies strictly below the plane through
/// `a`, `b`, `c` (negative orientation sign).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullFacet {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullError {
    /// Not full-dimensional, or a degenerate horizon was detected.
    Degenerate,
}

fn sub(p: &HullPoint, q: &HullPoint) -> (i128, i128, i128) {
    (p.u - q.u, p.v - q.v, p.w - q.w)
}

/// Sign of det[b-a, c-a, d-a], exact.
fn orient3d(a: &HullPoint, b: &HullPoint, c: &HullPoint, d: &HullPoint, narrow: bool) -> i32 {
    let d1 = sub(b, a);
    let d2 = sub(c, a);
    let d3 = sub(d, a);
    orient3d_delta(d1, d2, d3, narrow)
}

fn orient3d_delta(
    d1: (i128, i128, i128),
    d2: (i128, i128, i128),
    d3: (i128, i128, i128),
    narrow: bool,
) -> i32 {
    if narrow {
        // the builder certifies max|u| < 2^24 and max|v|*max|w| < 2^88, so
        // even with one row scaled by the interior trick every term stays
        // below 2^120 and the six-term sum below i128::MAX
        let m1 = d2.1 * d3.2 - d2.2 * d3.1;
        let m2 = d1.1 * d3.2 - d1.2 * d3.1;
        let m3 = d1.1 * d2.2 - d1.2 * d2.1;
        let det = d1.0 * m1 - d2.0 * m2 + d3.0 * m3;
        det.signum() as i32
    } else {
        // expand along the u column: u entries stay small enough for
        // mul_small, the v/w cofactors go through full 128x128 products
        debug_assert!(d1.0.unsigned_abs() < (1 << 62));
        debug_assert!(d2.0.unsigned_abs() < (1 << 62));
        debug_assert!(d3.0.unsigned_abs() < (1 << 62));
        let m1 = I256::mul_i128(d2.1, d3.2).sub(I256::mul_i128(d2.2, d3.1));
        let m2 = I256::mul_i128(d1.1, d3.2).sub(I256::mul_i128(d1.2, d3.1));
        let m3 = I256::mul_i128(d1.1, d2.2).sub(I256::mul_i128(d1.2, d2.1));
        let det = m1
            .mul_small(d1.0)
            .sub(m2.mul_small(d2.0))
            .add(m3.mul_small(d3.0));
        det.sign()
    }
}

struct Facet {
    a: u32,
    b: u32,
    c: u32,
    alive: bool,
    conflicts: Vec<u32>,
}

struct Builder<'a> {
    pts: &'a [HullPoint],
    narrow: bool,
    facets: Vec<Facet>,
    /// directed edge (a, b) -> facet id owning it
    edges: HashMap<(u32, u32), u32>,
    /// point -> facet ids it strictly sees (lazily pruned)
    pt_conflicts: Vec<Vec<u32>>,
    /// componentwise sum of the initial simplex; the interior reference
    /// point is this over 4
    interior4: HullPoint,
}

impl<'a> Builder<'a> {
    /// Orientation of facet plane (a,b,c) against the interior reference
    /// point: det[b-a, c-a, s/4 - a] scaled by 4.
    fn orient_vs_interior(&self, a: u32, b: u32, c: u32) -> i32 {
        let pa = &self.pts[a as usize];
        let pb = &self.pts[b as usize];
        let pc = &self.pts[c as usize];
        let d3 = (
            self.interior4.u - 4 * pa.u,
            self.interior4.v - 4 * pa.v,
            self.interior4.w - 4 * pa.w,
        );
        orient3d_delta(sub(pb, pa), sub(pc, pa), d3, self.narrow)
    }

    fn sees(&self, f: &Facet, p: u32) -> bool {
        let (a, b, c) = (f.a as usize, f.b as usize, f.c as usize);
        orient3d(
            &self.pts[a],
            &self.pts[b],
            &self.pts[c],
            &self.pts[p as usize],
            self.narrow,
        ) > 0
    }

    fn add_facet(&mut self, a: u32, b: u32, c: u32) -> Result<u32, HullError> {
        let id = self.facets.len() as u32;
        for e in [(a, b), (b, c), (c, a)] {
            if self.edges.insert(e, id).is_some() {
                // a directed edge claimed twice: pinched surface
                return Err(HullError::Degenerate);
            }
        }
        self.facets.push(Facet {
            a,
            b,
            c,
            alive: true,
            conflicts: Vec::new(),
        });
        Ok(id)
    }

    fn kill_facet(&mut self, id: u32) {
        let f = &mut self.facets[id as usize];
        f.alive = false;
        let (a, b, c) = (f.a, f.b, f.c);
        for e in [(a, b), (b, c), (c, a)] {
            if self.edges.get(&e) == Some(&id) {
                self.edges.remove(&e);
            }
        }
    }

    fn attach_conflict(&mut self, facet: u32, point: u32) {
        self.facets[facet as usize].conflicts.push(point);
        self.pt_conflicts[point as usize].push(facet);
    }
}

/// Compute the convex hull of `pts`. Requirements: at least 4 points,
/// pairwise distinct in `(u, v)`, not all coplanar. Facets are oriented with
/// the interior below.
pub fn convex_hull(pts: &[HullPoint]) -> Result<Vec<HullFacet>, HullError> {
    if pts.len() < 4 {
        return Err(HullError::Degenerate);
    }
    let narrow = {
        let umax = pts.iter().map(|p| p.u.unsigned_abs()).max().unwrap_or(0);
        let vmax = pts.iter().map(|p| p.v.unsigned_abs()).max().unwrap_or(0);
        let wmax = pts.iter().map(|p| p.w.unsigned_abs()).max().unwrap_or(0);
        umax < (1 << 24)
            && vmax
                .checked_mul(wmax)
                .map(|p| p < (1u128 << 88))
                .unwrap_or(false)
    };

    let mut order: Vec<u32> = (0..pts.len() as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    order.shuffle(&mut rng);

    // initial simplex: first point, first distinct, first non-collinear,
    // first non-coplanar — swapped to the front of the insertion order
    let pick = |order: &mut Vec<u32>, from: usize, ok: &dyn Fn(u32) -> bool| -> Option<usize> {
        (from..order.len()).find(|&i| ok(order[i])).map(|i| {
            order.swap(from, i);
            from
        })
    };
    let p0 = order[0];
    pick(&mut order, 1, &|q| pts[q as usize] != pts[p0 as usize])
        .ok_or(HullError::Degenerate)?;
    let p1 = order[1];
    pick(&mut order, 2, &|q| {
        let d1 = sub(&pts[p1 as usize], &pts[p0 as usize]);
        let d2 = sub(&pts[q as usize], &pts[p0 as usize]);
        // cross product nonzero <=> not collinear; the (u,v) part alone may
        // vanish for lifted points sharing a gradient line, and the products
        // need full width
        sign_mul_add(d1.1, d2.2, -d1.2, d2.1) != 0
            || sign_mul_add(d1.2, d2.0, -d1.0, d2.2) != 0
            || sign_mul_add(d1.0, d2.1, -d1.1, d2.0) != 0
    })
    .ok_or(HullError::Degenerate)?;
    let p2 = order[2];
    pick(&mut order, 3, &|q| {
        orient3d(
            &pts[p0 as usize],
            &pts[p1 as usize],
            &pts[p2 as usize],
            &pts[q as usize],
            narrow,
        ) != 0
    })
    .ok_or(HullError::Degenerate)?;
    let p3 = order[3];

    let interior4 = HullPoint {
        u: pts[p0 as usize].u + pts[p1 as usize].u + pts[p2 as usize].u + pts[p3 as usize].u,
        v: pts[p0 as usize].v + pts[p1 as usize].v + pts[p2 as usize].v + pts[p3 as usize].v,
        w: pts[p0 as usize].w + pts[p1 as usize].w + pts[p2 as usize].w + pts[p3 as usize].w,
    };

    let mut bld = Builder {
        pts,
        narrow,
        facets: Vec::with_capacity(4 * pts.len()),
        edges: HashMap::with_capacity(8 * pts.len()),
        pt_conflicts: vec![Vec::new(); pts.len()],
        interior4,
    };

    // the four faces of the initial simplex, oriented interior-below
    for (a, b, c) in [(p0, p1, p2), (p0, p1, p3), (p0, p2, p3), (p1, p2, p3)] {
        let s = bld.orient_vs_interior(a, b, c);
        debug_assert!(s != 0, "interior reference on a simplex face");
        let (a, b) = if s < 0 { (a, b) } else { (b, a) };
        bld.add_facet(a, b, c).map_err(|_| HullError::Degenerate)?;
    }

    // seed conflict lists
    for &q in order.iter().skip(4) {
        for fid in 0..bld.facets.len() as u32 {
            if bld.sees(&bld.facets[fid as usize], q) {
                bld.attach_conflict(fid, q);
            }
        }
    }

    // horizon entries: (a, b, outer facet, dying facet owning edge (a,b))
    let mut horizon: Vec<(u32, u32, u32, u32)> = Vec::new();
    let mut candidates: Vec<u32> = Vec::new();
    for idx in 4..order.len() {
        let p = order[idx];
        let visible: Vec<u32> = bld.pt_conflicts[p as usize]
            .iter()
            .copied()
            .filter(|&f| bld.facets[f as usize].alive)
            .collect();
        if visible.is_empty() {
            continue; // inside or on the current hull
        }
        let vis_set: std::collections::HashSet<u32> = visible.iter().copied().collect();

        horizon.clear();
        for &f in &visible {
            let fc = &bld.facets[f as usize];
            for (a, b) in [(fc.a, fc.b), (fc.b, fc.c), (fc.c, fc.a)] {
                match bld.edges.get(&(b, a)) {
                    Some(&g) if !vis_set.contains(&g) => horizon.push((a, b, g, f)),
                    Some(_) => {}
                    None => return Err(HullError::Degenerate),
                }
            }
        }
        if horizon.is_empty() {
            return Err(HullError::Degenerate);
        }
        // must form one simple cycle
        let mut next: HashMap<u32, u32> = HashMap::with_capacity(horizon.len());
        for &(a, b, _, _) in &horizon {
            if next.insert(a, b).is_some() {
                return Err(HullError::Degenerate); // pinch vertex
            }
        }
        let start = horizon[0].0;
        let mut walk = start;
        let mut steps = 0usize;
        loop {
            walk = *next.get(&walk).ok_or(HullError::Degenerate)?;
            steps += 1;
            if walk == start {
                break;
            }
            if steps > horizon.len() {
                return Err(HullError::Degenerate);
            }
        }
        if steps != horizon.len() {
            return Err(HullError::Degenerate); // multiple cycles
        }

        // retire the visible cone (their vertex/conflict data stays
        // readable for propagation), then build the fan around p
        for &f in &visible {
            bld.kill_facet(f);
        }
        for &(a, b, g, owner) in &horizon {
            let nf = bld.add_facet(a, b, p)?;
            if bld.orient_vs_interior(a, b, p) >= 0 {
                return Err(HullError::Degenerate);
            }
            // conflicts(new) ⊆ conflicts(dying owner of (a,b)) ∪ conflicts(g)
            candidates.clear();
            candidates.extend_from_slice(&bld.facets[owner as usize].conflicts);
            candidates.extend_from_slice(&bld.facets[g as usize].conflicts);
            candidates.sort_unstable();
            candidates.dedup();
            for &q in &candidates {
                if q == p {
                    continue;
                }
                if bld.sees(&bld.facets[nf as usize], q) {
                    bld.attach_conflict(nf, q);
                }
            }
        }
    }

    Ok(bld
        .facets
        .iter()
        .filter(|f| f.alive)
        .map(|f| HullFacet {
            a: f.a,
            b: f.b,
            c: f.c,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(u: i128, v: i128, w: i128) -> HullPoint {
        HullPoint { u, v, w }
    }

    /// every input point lies on or below every facet plane
    fn assert_valid(pts: &[HullPoint], facets: &[HullFacet]) {
        assert!(!facets.is_empty());
        for f in facets {
            for (i, p) in pts.iter().enumerate() {
                let s = orient3d(
                    &pts[f.a as usize],
                    &pts[f.b as usize],
                    &pts[f.c as usize],
                    p,
                    false,
                );
                assert!(
                    s <= 0,
                    "point {i} strictly above facet {f:?} (sign {s})"
                );
            }
        }
        // Euler check on the triangulated sphere: E = 3F/2, V - E + F = 2
        let mut verts: Vec<u32> = facets.iter().flat_map(|f| [f.a, f.b, f.c]).collect();
        verts.sort_unstable();
        verts.dedup();
        assert_eq!(facets.len() % 2, 0);
        let e = 3 * facets.len() / 2;
        assert_eq!(verts.len() + facets.len(), 2 + e, "Euler formula violated");
    }

    /// support function of hull vertices matches the whole set
    fn assert_extremes(pts: &[HullPoint], facets: &[HullFacet]) {
        let mut verts: Vec<u32> = facets.iter().flat_map(|f| [f.a, f.b, f.c]).collect();
        verts.sort_unstable();
        verts.dedup();
        let dirs = [
            (1i128, 0i128, 0i128),
            (-1, 0, 0),
            (0, 1, 0),
            (0, -1, 0),
            (0, 0, 1),
            (0, 0, -1),
            (3, -7, 2),
            (-5, 1, 9),
            (11, 13, -4),
        ];
        for d in dirs {
            let all = pts
                .iter()
                .map(|p| p.u * d.0 + p.v * d.1 + p.w * d.2)
                .max()
                .unwrap();
            let hull = verts
                .iter()
                .map(|&i| {
                    let p = &pts[i as usize];
                    p.u * d.0 + p.v * d.1 + p.w * d.2
                })
                .max()
                .unwrap();
            assert_eq!(all, hull, "direction {d:?}");
        }
    }

    #[test]
    fn tetrahedron() {
        let pts = vec![pt(0, 0, 0), pt(4, 0, 0), pt(0, 4, 0), pt(1, 1, 5)];
        let f = convex_hull(&pts).unwrap();
        assert_eq!(f.len(), 4);
        assert_valid(&pts, &f);
    }

    #[test]
    fn cube_with_interior_point() {
        let mut pts = Vec::new();
        for u in [0, 10] {
            for v in [0, 10] {
                for w in [0, 10] {
                    pts.push(pt(u, v, w));
                }
            }
        }
        // interior points must be absorbed silently; distinct (u,v) is not
        // required by convex_hull itself, only by the index layer, but keep
        // the cube corners distinct anyway
        let f = convex_hull(&pts).unwrap();
        assert_eq!(f.len(), 12);
        assert_valid(&pts, &f);
        assert_extremes(&pts, &f);
    }

    #[test]
    fn paraboloid_grid_is_degenerate_free() {
        // lifted grid w = u^2 + v^2: plenty of cocircular/coplanar subsets
        let mut pts = Vec::new();
        for u in -3..=3i128 {
            for v in -3..=3i128 {
                pts.push(pt(u, v, u * u + v * v));
            }
        }
        match convex_hull(&pts) {
            Ok(f) => {
                assert_valid(&pts, &f);
                assert_extremes(&pts, &f);
            }
            Err(HullError::Degenerate) => {
                // acceptable outcome for heavily coplanar data: the caller
                // falls back to scanning. This grid should build, though.
                panic!("paraboloid grid unexpectedly degenerate");
            }
        }
    }

    #[test]
    fn random_points_match_brute_force() {
        let mut seed = 0xdeadbeefu64;
        let mut rnd = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for trial in 0..30 {
            let n = 5 + (rnd() % 40) as usize;
            let mut pts = Vec::with_capacity(n);
            for _ in 0..n {
                pts.push(pt(
                    (rnd() % 2000) as i128 - 1000,
                    (rnd() % 2000) as i128 - 1000,
                    (rnd() % 2000) as i128 - 1000,
                ));
            }
            match convex_hull(&pts) {
                Ok(f) => {
                    assert_valid(&pts, &f);
                    assert_extremes(&pts, &f);
                }
                Err(HullError::Degenerate) => {
                    // tolerate only genuinely flat samples
                    let flat = is_coplanar(&pts);
                    assert!(flat, "trial {trial}: degenerate on full-dim input");
                }
            }
        }
    }

    #[test]
    fn coplanar_input_rejected() {
        let pts = vec![pt(0, 0, 1), pt(5, 0, 1), pt(0, 5, 1), pt(5, 5, 1), pt(2, 3, 1)];
        assert_eq!(convex_hull(&pts), Err(HullError::Degenerate));
    }

    #[test]
    fn wide_coordinates_use_wide_predicates() {
        let big = 1i128 << 80;
        let pts = vec![
            pt(0, 0, 0),
            pt(1 << 20, big, 3),
            pt(5, -big, big),
            pt(-(1 << 20), big / 3, -big),
            pt(7, 11, big / 7),
        ];
        let f = convex_hull(&pts).unwrap();
        assert_valid(&pts, &f);
        assert_extremes(&pts, &f);
    }

    fn is_coplanar(pts: &[HullPoint]) -> bool {
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                for c in b + 1..pts.len() {
                    for d in c + 1..pts.len() {
                        if orient3d(&pts[a], &pts[b], &pts[c], &pts[d], false) != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
