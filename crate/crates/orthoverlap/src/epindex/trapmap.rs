//! Point location in a maximization diagram.
//!
//! The diagram is a planar subdivision whose convex cells are the regions
//! where one lifted point attains the maximum. Its edges (segments and
//! rays) are swept in lexicographic (x, then y) order; a persistent treap
//! keyed by vertical order stores, for every sweep interval, the segments
//! crossing it. Queries binary-search the interval, then descend one treap
//! version comparing only exact integer signs.
//!
//! The lexicographic order doubles as an infinitesimal shear that removes
//! vertical-line ambiguities: for a line normalized so that `b > 0`, or
//! `b == 0 && a < 0`, a query point is above exactly when
//! `a*x + b*y + c > 0`, including the vertical case.
//!
//! All geometry is exact. Degenerate configurations that the diagram
//! construction should have removed (overlapping collinear edges,
//! T-junctions) surface as [`MapDegenerate`] so the caller can fall back
//! to a linear scan instead of trusting a broken structure.

use crate::wide::I256;
use std::cmp::Ordering;
use std::collections::HashMap;

/// Rational point `(xn/den, yn/den)` with `den > 0`; the dual of an upper
/// hull facet, i.e. a vertex of the diagram.
#[derive(Debug, Clone, Copy)]
pub struct DualPt {
    pub xn: i128,
    pub yn: i128,
    pub den: i128,
}

impl DualPt {
    pub fn new(xn: i128, yn: i128, den: i128) -> DualPt {
        debug_assert!(den != 0);
        if den < 0 {
            DualPt {
                xn: -xn,
                yn: -yn,
                den: -den,
            }
        } else {
            DualPt { xn, yn, den }
        }
    }

    /// Lexicographic comparison, exact via cross-multiplication.
    pub fn lex_cmp(&self, o: &DualPt) -> Ordering {
        let x = I256::mul_i128(self.xn, o.den).cmp(&I256::mul_i128(o.xn, self.den));
        if x != Ordering::Equal {
            return x;
        }
        I256::mul_i128(self.yn, o.den).cmp(&I256::mul_i128(o.yn, self.den))
    }

    fn floor_x(&self) -> i128 {
        self.xn.div_euclid(self.den)
    }
}

/// Line `a*x + b*y + c = 0`, primitive and sign-normalized so that the
/// "above" side is exactly `a*x + b*y + c > 0` under the sheared order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagLine {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl DiagLine {
    /// Build from raw coefficients; returns `None` when `a == b == 0`.
    pub fn normalized(a: i128, b: i128, c: i128) -> Option<DiagLine> {
        if a == 0 && b == 0 {
            return None;
        }
        let g = gcd3(a, b, c);
        let (mut a, mut b, mut c) = (a / g, b / g, c / g);
        if b < 0 || (b == 0 && a > 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Some(DiagLine { a, b, c })
    }

    /// Exact sign of `a*x + b*y + c` at an integer point; i128-safe for
    /// the coordinate caps enforced by the index layer.
    pub fn side_of_int(&self, x: i128, y: i128) -> i32 {
        (self.a * x + self.b * y + self.c).signum() as i32
    }

    /// Exact sign at a rational dual point.
    pub fn side_of_dual(&self, p: &DualPt) -> i32 {
        I256::mul_i128(self.a, p.xn)
            .add(I256::mul_i128(self.b, p.yn))
            .add(I256::mul_i128(self.c, p.den))
            .sign()
    }

    fn is_vertical(&self) -> bool {
        self.b == 0
    }
}

fn gcd2(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    let g = gcd2(gcd2(a, b), c);
    if g == 0 {
        1
    } else {
        g
    }
}

/// Diagram edge clipped to one elementary interval of its supporting line.
/// `lo`/`hi` are in lexicographic order; `None` means unbounded on that
/// side. `above`/`below` are cell labels (indices into the deduplicated
/// point set).
#[derive(Debug, Clone)]
pub struct DiagSeg {
    pub line: DiagLine,
    pub lo: Option<DualPt>,
    pub hi: Option<DualPt>,
    pub above: u32,
    pub below: u32,
}

/// Raw diagram edge as produced from a hull edge, before collinear groups
/// are merged: the supporting line is `(u_i - u_j) x + (v_i - v_j) y +
/// (w_i - w_j) = 0` and `i`, `j` are the two cell labels.
#[derive(Debug, Clone)]
pub struct RawEdge {
    pub du: i128,
    pub dv: i128,
    pub dw: i128,
    pub lo: Option<DualPt>,
    pub hi: Option<DualPt>,
    pub i: u32,
    pub j: u32,
}

/// Signals a configuration the exact sweep cannot order (overlapping
/// collinear edges, T-junctions, crossing edges): the caller falls back
/// to scanning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapDegenerate;

/// Merge raw edges into per-line elementary segments.
///
/// Collinear hull edges (from subdivided polytope edges) produce
/// overlapping duals with labels that only tie on the line itself; the
/// correct cell labels on each side are recomputed from the gradients:
/// among the candidate labels the one maximizing `u*a + v*b` owns the
/// upper side.
pub fn assemble_segments(
    edges: Vec<RawEdge>,
    grads: &[(i128, i128)],
) -> Result<Vec<DiagSeg>, MapDegenerate> {
    let mut groups: HashMap<DiagLine, Vec<RawEdge>> = HashMap::new();
    for e in edges {
        if let (Some(lo), Some(hi)) = (&e.lo, &e.hi) {
            if lo.lex_cmp(hi) == Ordering::Equal {
                continue; // zero-length: coplanar facet pair
            }
        }
        let line = DiagLine::normalized(e.du, e.dv, e.dw).ok_or(MapDegenerate)?;
        groups.entry(line).or_default().push(e);
    }

    let mut out = Vec::new();
    for (line, group) in groups {
        // boundary points along the line, lex-sorted and deduplicated
        let mut bounds: Vec<DualPt> = Vec::new();
        for e in &group {
            if let Some(p) = &e.lo {
                bounds.push(*p);
            }
            if let Some(p) = &e.hi {
                bounds.push(*p);
            }
        }
        bounds.sort_unstable_by(|p, q| p.lex_cmp(q));
        bounds.dedup_by(|p, q| p.lex_cmp(q) == Ordering::Equal);
        if bounds.is_empty() {
            // a diagram edge always has at least one finite endpoint
            return Err(MapDegenerate);
        }

        // elementary intervals: (-inf, b0], [b0, b1], ..., [bm, +inf)
        let covered = |lo: Option<&DualPt>, hi: Option<&DualPt>, e: &RawEdge| -> bool {
            let lo_ok = match (&e.lo, lo) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(el), Some(b)) => el.lex_cmp(b) != Ordering::Greater,
            };
            let hi_ok = match (&e.hi, hi) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(eh), Some(b)) => eh.lex_cmp(b) != Ordering::Less,
            };
            lo_ok && hi_ok
        };
        let mut emit = |lo: Option<DualPt>, hi: Option<DualPt>| -> Result<(), MapDegenerate> {
            let mut cand: Vec<u32> = Vec::new();
            for e in &group {
                if covered(lo.as_ref(), hi.as_ref(), e) {
                    cand.push(e.i);
                    cand.push(e.j);
                }
            }
            if cand.is_empty() {
                return Ok(()); // gap between disjoint collinear edges
            }
            cand.sort_unstable();
            cand.dedup();
            let score =
                |p: u32| -> i128 { grads[p as usize].0 * line.a + grads[p as usize].1 * line.b };
            let mut above = cand[0];
            let mut below = cand[0];
            for &p in &cand[1..] {
                match score(p).cmp(&score(above)) {
                    Ordering::Greater => above = p,
                    Ordering::Equal => return Err(MapDegenerate),
                    Ordering::Less => {}
                }
                match score(p).cmp(&score(below)) {
                    Ordering::Less => below = p,
                    Ordering::Equal => return Err(MapDegenerate),
                    Ordering::Greater => {}
                }
            }
            out.push(DiagSeg {
                line,
                lo,
                hi,
                above,
                below,
            });
            Ok(())
        };

        emit(None, Some(bounds[0]))?;
        for w in bounds.windows(2) {
            emit(Some(w[0]), Some(w[1]))?;
        }
        emit(Some(bounds[bounds.len() - 1]), None)?;
    }
    Ok(out)
}

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct TNode {
    seg: u32,
    left: u32,
    right: u32,
    prio: u64,
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Persistent point-location structure: one treap version per sweep
/// interval between consecutive diagram vertices.
pub struct SlabMap {
    segs: Vec<DiagSeg>,
    events: Vec<DualPt>,
    /// `roots[i]` covers lexicographic positions in `[events[i-1], events[i])`
    roots: Vec<u32>,
    arena: Vec<TNode>,
}

struct Sweep<'a> {
    segs: &'a [DiagSeg],
    arena: Vec<TNode>,
    x_far: i128,
}

impl<'a> Sweep<'a> {
    fn node(&mut self, seg: u32, left: u32, right: u32) -> u32 {
        let id = self.arena.len() as u32;
        self.arena.push(TNode {
            seg,
            left,
            right,
            prio: splitmix64(seg as u64),
        });
        id
    }

    fn copy(&mut self, n: u32, left: u32, right: u32) -> u32 {
        let seg = self.arena[n as usize].seg;
        let prio = self.arena[n as usize].prio;
        let id = self.arena.len() as u32;
        self.arena.push(TNode {
            seg,
            left,
            right,
            prio,
        });
        id
    }

    /// `Greater` means `s` lies above `t` throughout their co-residency.
    fn cmp_seg(&self, s: u32, t: u32) -> Result<Ordering, MapDegenerate> {
        let sv = &self.segs[s as usize];
        let tv = &self.segs[t as usize];
        match (&sv.lo, &tv.lo) {
            (Some(sp), Some(tp)) => match sp.lex_cmp(tp) {
                Ordering::Equal => directional(&sv.line, &tv.line),
                Ordering::Greater => match tv.line.side_of_dual(sp) {
                    1 => Ok(Ordering::Greater),
                    -1 => Ok(Ordering::Less),
                    _ => directional(&sv.line, &tv.line),
                },
                Ordering::Less => match sv.line.side_of_dual(tp) {
                    1 => Ok(Ordering::Less),
                    -1 => Ok(Ordering::Greater),
                    _ => directional(&sv.line, &tv.line),
                },
            },
            (None, Some(tp)) => match sv.line.side_of_dual(tp) {
                1 => Ok(Ordering::Less),
                -1 => Ok(Ordering::Greater),
                _ => directional(&sv.line, &tv.line),
            },
            (Some(sp), None) => match tv.line.side_of_dual(sp) {
                1 => Ok(Ordering::Greater),
                -1 => Ok(Ordering::Less),
                _ => directional(&sv.line, &tv.line),
            },
            (None, None) => {
                // a vertical left-infinite edge is a downward ray; every
                // query strictly left of its line counts as above it, so
                // it sits below all non-vertical ones, and of two such
                // rays the one further right sits lower
                match (sv.line.is_vertical(), tv.line.is_vertical()) {
                    (true, true) => {
                        // line x = c/|a| with a < 0: compare c_s vs c_t
                        let cs = I256::mul_i128(sv.line.c, tv.line.a.abs());
                        let ct = I256::mul_i128(tv.line.c, sv.line.a.abs());
                        match cs.cmp(&ct) {
                            Ordering::Equal => Err(MapDegenerate),
                            o => Ok(o.reverse()),
                        }
                    }
                    (true, false) => Ok(Ordering::Less),
                    (false, true) => Ok(Ordering::Greater),
                    (false, false) => {
                        let ns = I256::from_i128(-sv.line.c)
                            .sub(I256::mul_i128(sv.line.a, self.x_far));
                        let nt = I256::from_i128(-tv.line.c)
                            .sub(I256::mul_i128(tv.line.a, self.x_far));
                        match ns.mul_small(tv.line.b).cmp(&nt.mul_small(sv.line.b)) {
                            Ordering::Equal => Err(MapDegenerate),
                            o => Ok(o),
                        }
                    }
                }
            }
        }
    }

    fn split(&mut self, n: u32, s: u32) -> Result<(u32, u32), MapDegenerate> {
        if n == NIL {
            return Ok((NIL, NIL));
        }
        let (seg, left, right) = {
            let nd = &self.arena[n as usize];
            (nd.seg, nd.left, nd.right)
        };
        if self.cmp_seg(s, seg)? == Ordering::Greater {
            let (l, r) = self.split(right, s)?;
            let n2 = self.copy(n, left, l);
            Ok((n2, r))
        } else {
            let (l, r) = self.split(left, s)?;
            let n2 = self.copy(n, r, right);
            Ok((l, n2))
        }
    }

    fn insert(&mut self, root: u32, s: u32) -> Result<u32, MapDegenerate> {
        if root == NIL {
            return Ok(self.node(s, NIL, NIL));
        }
        let (seg, left, right, prio) = {
            let nd = &self.arena[root as usize];
            (nd.seg, nd.left, nd.right, nd.prio)
        };
        if splitmix64(s as u64) > prio {
            let (l, r) = self.split(root, s)?;
            return Ok(self.node(s, l, r));
        }
        if self.cmp_seg(s, seg)? == Ordering::Less {
            let l = self.insert(left, s)?;
            Ok(self.copy(root, l, right))
        } else {
            let r = self.insert(right, s)?;
            Ok(self.copy(root, left, r))
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (al, ar, ap) = {
            let n = &self.arena[a as usize];
            (n.left, n.right, n.prio)
        };
        let (bl, br, bp) = {
            let n = &self.arena[b as usize];
            (n.left, n.right, n.prio)
        };
        if ap > bp {
            let r = self.merge(ar, b);
            self.copy(a, al, r)
        } else {
            let l = self.merge(a, bl);
            self.copy(b, l, br)
        }
    }

    fn delete(&mut self, root: u32, s: u32) -> Result<u32, MapDegenerate> {
        if root == NIL {
            return Err(MapDegenerate); // not found: inconsistent sweep
        }
        let (seg, left, right) = {
            let nd = &self.arena[root as usize];
            (nd.seg, nd.left, nd.right)
        };
        if seg == s {
            return Ok(self.merge(left, right));
        }
        if self.cmp_seg(s, seg)? == Ordering::Less {
            let l = self.delete(left, s)?;
            Ok(self.copy(root, l, right))
        } else {
            let r = self.delete(right, s)?;
            Ok(self.copy(root, left, r))
        }
    }
}

/// Local order of two lines through a common point, just right of it in
/// the sheared sense: `Greater` when the first is above.
fn directional(s: &DiagLine, t: &DiagLine) -> Result<Ordering, MapDegenerate> {
    let cross = t.a * s.b - s.a * t.b;
    match cross.cmp(&0) {
        Ordering::Equal => Err(MapDegenerate), // same line: should be merged
        o => Ok(o),
    }
}

impl SlabMap {
    pub fn build(segs: Vec<DiagSeg>) -> Result<SlabMap, MapDegenerate> {
        let mut events: Vec<DualPt> = Vec::new();
        for s in &segs {
            if let Some(p) = &s.lo {
                events.push(*p);
            }
            if let Some(p) = &s.hi {
                events.push(*p);
            }
        }
        events.sort_unstable_by(|p, q| p.lex_cmp(q));
        events.dedup_by(|p, q| p.lex_cmp(q) == Ordering::Equal);

        let find_event = |p: &DualPt| -> usize {
            events
                .binary_search_by(|e| e.lex_cmp(p))
                .expect("endpoint missing from event list")
        };
        let mut ins: Vec<Vec<u32>> = vec![Vec::new(); events.len()];
        let mut del: Vec<Vec<u32>> = vec![Vec::new(); events.len()];
        let mut initial: Vec<u32> = Vec::new();
        for (i, s) in segs.iter().enumerate() {
            match &s.lo {
                Some(p) => ins[find_event(p)].push(i as u32),
                None => initial.push(i as u32),
            }
            if let Some(p) = &s.hi {
                del[find_event(p)].push(i as u32);
            }
        }

        let x_far = events.iter().map(|e| e.floor_x()).min().unwrap_or(0) - 1;
        let mut sweep = Sweep {
            segs: &segs,
            arena: Vec::with_capacity(4 * segs.len() + 16),
            x_far,
        };

        let mut root = NIL;
        for &s in &initial {
            root = sweep.insert(root, s)?;
        }
        let mut roots = Vec::with_capacity(events.len() + 1);
        roots.push(root);
        for (dels, inss) in del.iter().zip(&ins) {
            for &s in dels {
                root = sweep.delete(root, s)?;
            }
            for &s in inss {
                root = sweep.insert(root, s)?;
            }
            roots.push(root);
        }

        let Sweep { arena, .. } = sweep;
        Ok(SlabMap {
            segs,
            events,
            roots,
            arena,
        })
    }

    /// Cell label at the integer query point, or `None` when the treap for
    /// the query's interval is empty — then the whole vertical line at the
    /// query's x lies in a single cell and the caller resolves it from the
    /// y -> +inf envelope.
    pub fn locate(&self, x: i128, y: i128) -> Option<u32> {
        let slab = self.events.partition_point(|e| {
            // event <= (x, y) lexicographically
            match I256::from_i128(e.xn).cmp(&I256::mul_i128(x, e.den)) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => I256::from_i128(e.yn) <= I256::mul_i128(y, e.den),
            }
        });
        let mut n = self.roots[slab];
        let mut below: Option<&DiagSeg> = None;
        let mut above: Option<&DiagSeg> = None;
        while n != NIL {
            let nd = &self.arena[n as usize];
            let seg = &self.segs[nd.seg as usize];
            match seg.line.side_of_int(x, y) {
                0 => return Some(seg.above), // on the edge: labels tie
                1 => {
                    below = Some(seg);
                    n = nd.right;
                }
                _ => {
                    above = Some(seg);
                    n = nd.left;
                }
            }
        }
        match (below, above) {
            (Some(b), _) => Some(b.above),
            (None, Some(a)) => Some(a.below),
            (None, None) => None,
        }
    }

    pub fn seg_count(&self) -> usize {
        self.segs.len()
    }
}
