//! The three overlap solvers and their shared result types.
//!
//! All three maximize `area(P ∩ (Q + τ))` over translations `τ` and agree
//! exactly; they differ in how they traverse the candidate grid:
//!
//! * [`solve_bruteforce`] evaluates every grid vertex by summing
//!   rectangle-pair overlaps directly — the reference oracle.
//! * [`solve_baseline`] sweeps grid rows bottom-up, maintaining the active
//!   slab coefficients in a segment tree over grid columns, and reads every
//!   column at every row: `O((nm)^2 log nm)` tree work.
//! * [`solve_fast`] sweeps the same rows in *blocks* holding fewer than
//!   `t ≈ sqrt(18·nm)` slab events. Only block base rows touch the tree;
//!   all rows interior to a block are answered per column by one query
//!   against a small extreme-point index built from the block's slab prefix
//!   sums, giving `O((nm)^{3/2} log nm)` total work.
//!
//! The block identity: with base-row coefficients `q = (a,b,c,d)` at column
//! `x` and internal prefix sums `(sA_j, sB_j, sC_j, sD_j)` up to row `y_j`,
//! the overlap at `(x, y_j)` is
//!
//! ```text
//! q.value_at(x, y_1) + u_j·d1 + v_j·d2 + w_j
//! u_j = y_j − y_1      d1 = q.c + q.d·x
//! v_j = sB_j + sD_j·y_j    d2 = x
//! w_j = sA_j + sC_j·y_j
//! ```
//!
//! so maximizing over the block's rows is exactly an extreme-point query
//! in direction `(d1, d2)` over the lifted points `(u_j, v_j, w_j)`.

use crate::decomp::decompose;
use crate::epindex::{EPIndex, LiftedPoint};
use crate::error::Result;
use crate::kernel::{rect_overlap_at, CandidateGrid, SlabSet, TranslationSlab};
use crate::poly::{OrthoPolygon, Rect};
use crate::sweepq::{CoeffQuad, SlabTree};

/// Work counters for the asymptotic benchmarks: segment-tree node touches,
/// points fed to extreme-point index builds, and extreme-point queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpsCounters {
    pub tree_touches: u64,
    pub hull_points: u64,
    pub ep_queries: u64,
}

impl OpsCounters {
    pub fn ops_total(&self) -> u64 {
        self.tree_touches + self.hull_points + self.ep_queries
    }
}

/// Block accounting reported by [`solve_fast`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FastBlockStats {
    /// Number of row blocks processed.
    pub blocks: u64,
    /// Rows swept directly through the tree (the block base rows).
    pub heavy_rows: u64,
    /// Maximum number of slab events interior to any single block.
    pub max_internal_slabs: u64,
    /// The block size threshold `t` that was used.
    pub block_threshold: u64,
}

/// An exact maximizer of the overlap area and the work spent finding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapResult {
    pub tx: i64,
    pub ty: i64,
    pub area: i128,
    pub ops: OpsCounters,
    pub fast: Option<FastBlockStats>,
}

/// Exact overlap area of `p` and `q` translated by `(tx, ty)`.
pub fn evaluate_at(p: &OrthoPolygon, q: &OrthoPolygon, tx: i64, ty: i64) -> i128 {
    let pr = decompose(p);
    let qr = decompose(q);
    let mut area = 0i128;
    for rp in &pr {
        for rq in &qr {
            area += rect_overlap_at(rp, rq, tx, ty);
        }
    }
    area
}

/// Candidate grid plus the slab decomposition, with slabs resolved to grid
/// coordinates (column range, row index).
struct Prepared {
    slabs: Vec<TranslationSlab>,
    xs: Vec<i64>,
    ys: Vec<i64>,
    /// per slab: column range `[l, r)` in `xs`
    cols: Vec<(u32, u32)>,
    /// slab indices grouped by row of `ys`
    rows: Vec<Vec<u32>>,
}

fn prepare(pr: &[Rect], qr: &[Rect]) -> Prepared {
    let set = SlabSet::build(pr, qr);
    let grid = CandidateGrid::from_rects(pr, qr);
    let slabs = set.slabs().to_vec();
    let mut cols = Vec::with_capacity(slabs.len());
    let mut rows = vec![Vec::new(); grid.ys.len()];
    for (si, s) in slabs.iter().enumerate() {
        // slab breakpoints are grid coordinates by construction
        let l = grid.xs.binary_search(&s.x0).expect("slab x0 on grid") as u32;
        let r = grid.xs.binary_search(&s.x1).expect("slab x1 on grid") as u32;
        let ri = grid.ys.binary_search(&s.y).expect("slab y on grid");
        cols.push((l, r));
        rows[ri].push(si as u32);
    }
    Prepared {
        slabs,
        xs: grid.xs,
        ys: grid.ys,
        cols,
        rows,
    }
}

#[inline]
fn consider(best: &mut Option<(i128, i64, i64)>, v: i128, tx: i64, ty: i64) {
    if best.map_or(true, |(bv, _, _)| v > bv) {
        *best = Some((v, tx, ty));
    }
}

fn finish(
    p: &OrthoPolygon,
    q: &OrthoPolygon,
    best: Option<(i128, i64, i64)>,
    ops: OpsCounters,
    fast: Option<FastBlockStats>,
) -> OverlapResult {
    let (area, tx, ty) = best.expect("candidate grid is never empty");
    debug_assert_eq!(area, evaluate_at(p, q, tx, ty), "solver result re-check");
    OverlapResult {
        tx,
        ty,
        area,
        ops,
        fast,
    }
}

/// Evaluate every candidate grid vertex by direct rectangle-pair overlap.
/// Ties resolve to the smallest `ty`, then smallest `tx`.
pub fn solve_bruteforce(p: &OrthoPolygon, q: &OrthoPolygon) -> Result<OverlapResult> {
    let pr = decompose(p);
    let qr = decompose(q);
    let grid = CandidateGrid::from_rects(&pr, &qr);
    let mut best: Option<(i128, i64, i64)> = None;
    let mut active: Vec<(i128, &Rect, &Rect)> = Vec::with_capacity(pr.len() * qr.len());
    for &ty in &grid.ys {
        active.clear();
        for rp in &pr {
            for rq in &qr {
                let h = rp.y1.min(rq.y1 + ty) - rp.y0.max(rq.y0 + ty);
                if h > 0 {
                    active.push((h as i128, rp, rq));
                }
            }
        }
        for &tx in &grid.xs {
            let mut area = 0i128;
            for &(h, rp, rq) in &active {
                let w = rp.x1.min(rq.x1 + tx) - rp.x0.max(rq.x0 + tx);
                if w > 0 {
                    area += h * w as i128;
                }
            }
            consider(&mut best, area, tx, ty);
        }
    }
    Ok(finish(p, q, best, OpsCounters::default(), None))
}

/// Sweep all grid rows over the slab tree; `O((nm)^2 log nm)` tree work.
/// Ties resolve to the smallest `ty`, then smallest `tx`.
pub fn solve_baseline(p: &OrthoPolygon, q: &OrthoPolygon) -> Result<OverlapResult> {
    let pr = decompose(p);
    let qr = decompose(q);
    let prep = prepare(&pr, &qr);
    let mut tree = SlabTree::new(prep.xs.len());
    let mut best: Option<(i128, i64, i64)> = None;
    for (ri, &ty) in prep.ys.iter().enumerate() {
        for &si in &prep.rows[ri] {
            let (l, r) = prep.cols[si as usize];
            tree.range_add(
                l as usize,
                r as usize,
                &CoeffQuad::from_slab(&prep.slabs[si as usize]),
            );
        }
        for (ci, &tx) in prep.xs.iter().enumerate() {
            let quad = tree.point_sum(ci);
            consider(&mut best, quad.value_at(tx, ty), tx, ty);
        }
    }
    let ops = OpsCounters {
        tree_touches: tree.node_touches,
        ..OpsCounters::default()
    };
    Ok(finish(p, q, best, ops, None))
}

/// Blocked sweep with extreme-point indexes; `O((nm)^{3/2} log nm)`.
/// Returns an arbitrary exact maximizer.
pub fn solve_fast(p: &OrthoPolygon, q: &OrthoPolygon) -> Result<OverlapResult> {
    let pr = decompose(p);
    let qr = decompose(q);
    let prep = prepare(&pr, &qr);
    let slab_cap = 18 * pr.len() as u64 * qr.len() as u64;
    let t = isqrt_ceil(slab_cap).max(1);

    let mut tree = SlabTree::new(prep.xs.len());
    let mut ops = OpsCounters::default();
    let mut stats = FastBlockStats {
        block_threshold: t,
        ..FastBlockStats::default()
    };
    let mut best: Option<(i128, i64, i64)> = None;

    let mut row = 0usize;
    while row < prep.ys.len() {
        let base_y = prep.ys[row];
        for &si in &prep.rows[row] {
            let (l, r) = prep.cols[si as usize];
            tree.range_add(
                l as usize,
                r as usize,
                &CoeffQuad::from_slab(&prep.slabs[si as usize]),
            );
        }
        let quads: Vec<CoeffQuad> = (0..prep.xs.len()).map(|i| tree.point_sum(i)).collect();
        stats.blocks += 1;
        stats.heavy_rows += 1;
        for (ci, &tx) in prep.xs.iter().enumerate() {
            consider(&mut best, quads[ci].value_at(tx, base_y), tx, base_y);
        }

        // extend the block with rows whose combined event count stays < t
        let mut internal = 0usize;
        let mut mids: Vec<usize> = Vec::new();
        let mut next = row + 1;
        while next < prep.ys.len() && internal + prep.rows[next].len() < t as usize {
            internal += prep.rows[next].len();
            mids.push(next);
            next += 1;
        }
        debug_assert!((internal as u64) < t);
        stats.max_internal_slabs = stats.max_internal_slabs.max(internal as u64);

        if !mids.is_empty() {
            process_block(&prep, &quads, base_y, &mids, &mut best, &mut ops)?;
            // the tree skipped the interior rows; apply their events before
            // the next base row
            for &ri in &mids {
                for &si in &prep.rows[ri] {
                    let (l, r) = prep.cols[si as usize];
                    tree.range_add(
                        l as usize,
                        r as usize,
                        &CoeffQuad::from_slab(&prep.slabs[si as usize]),
                    );
                }
            }
        }
        row = next;
    }
    ops.tree_touches = tree.node_touches;
    Ok(finish(p, q, best, ops, Some(stats)))
}

/// Answer all interior rows of one block, column by column, through
/// per-cell extreme-point indexes over the block's lifted slab prefix sums.
fn process_block(
    prep: &Prepared,
    quads: &[CoeffQuad],
    base_y: i64,
    mids: &[usize],
    best: &mut Option<(i128, i64, i64)>,
    ops: &mut OpsCounters,
) -> Result<()> {
    // cell boundaries: column ranges of the internal slabs
    let mut bounds: Vec<u32> = vec![0, prep.xs.len() as u32];
    for &ri in mids {
        for &si in &prep.rows[ri] {
            let (l, r) = prep.cols[si as usize];
            bounds.push(l);
            bounds.push(r);
        }
    }
    bounds.sort_unstable();
    bounds.dedup();

    let last_row = *mids.last().unwrap();
    let u_last = (prep.ys[last_row] - base_y) as i128;

    let mut pts: Vec<LiftedPoint> = Vec::with_capacity(mids.len() + 1);
    for win in bounds.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        if lo == hi {
            continue;
        }
        // lifted points of this cell: running prefix of the quads of internal
        // slabs covering the whole cell, sampled at each interior row
        pts.clear();
        pts.push(LiftedPoint::new(0, 0, 0));
        let mut run = CoeffQuad::ZERO;
        let mut covered = false;
        for &ri in mids {
            for &si in &prep.rows[ri] {
                let (l, r) = prep.cols[si as usize];
                if l <= lo && hi <= r {
                    run.add(&CoeffQuad::from_slab(&prep.slabs[si as usize]));
                    covered = true;
                }
            }
            let yj = prep.ys[ri] as i128;
            pts.push(LiftedPoint::new(
                (prep.ys[ri] - base_y) as i128,
                run.b + run.d * yj,
                run.a + run.c * yj,
            ));
        }

        if covered {
            let mut index = EPIndex::build(&pts)?;
            ops.hull_points += pts.len() as u64;
            for ci in lo as usize..hi as usize {
                let tx = prep.xs[ci];
                let q = &quads[ci];
                let d1 = q.c + q.d * tx as i128;
                let (j, add) = index.query(d1, tx as i128);
                ops.ep_queries += 1;
                let ty = if j == 0 { base_y } else { prep.ys[mids[j - 1]] };
                consider(best, q.value_at(tx, base_y) + add, tx, ty);
            }
        } else {
            // no slab covers this cell, so v_j = w_j = 0 and the best row is
            // the base (d1 <= 0) or the last interior row (d1 > 0)
            for ci in lo as usize..hi as usize {
                let tx = prep.xs[ci];
                let q = &quads[ci];
                let d1 = q.c + q.d * tx as i128;
                ops.ep_queries += 1;
                let base_val = q.value_at(tx, base_y);
                if d1 > 0 {
                    consider(best, base_val + u_last * d1, tx, prep.ys[last_row]);
                } else {
                    consider(best, base_val, tx, base_y);
                }
            }
        }
    }
    Ok(())
}

/// Smallest integer `t` with `t*t >= v`.
fn isqrt_ceil(v: u64) -> u64 {
    let mut t = (v as f64).sqrt() as u64;
    while t * t < v {
        t += 1;
    }
    while t > 0 && (t - 1) * (t - 1) >= v {
        t -= 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Point;

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    /// Histogram polygon over `0..widths.len()` columns with the given
    /// positive heights; collinear merging in the constructor tidies it up.
    fn histogram(heights: &[i64]) -> OrthoPolygon {
        let s = heights.len() as i64;
        let mut v = vec![Point::new(0, 0), Point::new(s, 0)];
        for (i, &h) in heights.iter().enumerate().rev() {
            let i = i as i64;
            v.push(Point::new(i + 1, h));
            v.push(Point::new(i, h));
        }
        OrthoPolygon::new(v).unwrap()
    }

    fn rand_histogram(state: &mut u64, max_cols: u64, max_h: u64) -> OrthoPolygon {
        let s = 2 + xorshift(state) % (max_cols - 1);
        let hs: Vec<i64> = (0..s).map(|_| 1 + (xorshift(state) % max_h) as i64).collect();
        histogram(&hs)
    }

    #[test]
    fn unit_squares() {
        let p = OrthoPolygon::rect(Rect::new(0, 0, 1, 1));
        let q = OrthoPolygon::rect(Rect::new(0, 0, 1, 1));
        for solve in [solve_bruteforce, solve_baseline, solve_fast] {
            let r = solve(&p, &q).unwrap();
            assert_eq!(r.area, 1);
            assert_eq!(evaluate_at(&p, &q, r.tx, r.ty), 1);
        }
        // the oracle tie-break is the smallest translation
        let r = solve_bruteforce(&p, &q).unwrap();
        assert_eq!((r.tx, r.ty), (0, 0));
    }

    #[test]
    fn separated_rectangles() {
        let p = OrthoPolygon::rect(Rect::new(0, 0, 2, 1));
        let q = OrthoPolygon::rect(Rect::new(5, 7, 6, 9));
        for solve in [solve_bruteforce, solve_baseline, solve_fast] {
            let r = solve(&p, &q).unwrap();
            assert_eq!(r.area, 1, "1x1 is the largest common box");
            assert_eq!(evaluate_at(&p, &q, r.tx, r.ty), 1);
        }
    }

    #[test]
    fn l_shape_and_square() {
        let p = OrthoPolygon::new(
            [(0, 0), (3, 0), (3, 1), (1, 1), (1, 2), (0, 2)]
                .iter()
                .map(|&(x, y)| Point::new(x, y))
                .collect(),
        )
        .unwrap();
        let q = OrthoPolygon::rect(Rect::new(10, 10, 11, 11));
        for solve in [solve_bruteforce, solve_baseline, solve_fast] {
            let r = solve(&p, &q).unwrap();
            assert_eq!(r.area, 1);
        }
    }

    #[test]
    fn self_overlap_is_total_area() {
        let mut st = 0xfeed_beefu64;
        for _ in 0..10 {
            let p = rand_histogram(&mut st, 6, 5);
            let r = solve_bruteforce(&p, &p).unwrap();
            assert_eq!(r.area, p.area() as i128);
            assert_eq!((r.tx, r.ty), (0, 0));
            let rf = solve_fast(&p, &p).unwrap();
            assert_eq!(rf.area, r.area);
        }
    }

    #[test]
    fn random_cross_agreement() {
        let mut st = 0x5eed_cafeu64;
        for trial in 0..25 {
            let p = rand_histogram(&mut st, 7, 6);
            let q = rand_histogram(&mut st, 5, 4);
            let rb = solve_bruteforce(&p, &q).unwrap();
            let rl = solve_baseline(&p, &q).unwrap();
            let rf = solve_fast(&p, &q).unwrap();
            assert_eq!(rb.area, rl.area, "trial {trial}: baseline area");
            assert_eq!(rb.area, rf.area, "trial {trial}: fast area");
            // oracle and baseline share the deterministic tie-break
            assert_eq!((rb.tx, rb.ty), (rl.tx, rl.ty), "trial {trial}");
            // fast returns some maximizer
            assert_eq!(
                evaluate_at(&p, &q, rf.tx, rf.ty),
                rb.area,
                "trial {trial}: fast witness"
            );
        }
    }

    #[test]
    fn fast_block_invariants() {
        let mut st = 0xabcd_ef12u64;
        for _ in 0..10 {
            let p = rand_histogram(&mut st, 8, 7);
            let q = rand_histogram(&mut st, 6, 5);
            let r = solve_fast(&p, &q).unwrap();
            let stats = r.fast.unwrap();
            assert!(stats.max_internal_slabs < stats.block_threshold);
            assert_eq!(stats.blocks, stats.heavy_rows);
            let nm = (decompose(&p).len() * decompose(&q).len()) as f64;
            assert!(
                (stats.heavy_rows as f64) <= 5.0 * nm.sqrt() + 1.0,
                "heavy rows {} exceed bound for nm={nm}",
                stats.heavy_rows
            );
        }
    }

    #[test]
    fn baseline_counts_tree_work() {
        let p = OrthoPolygon::rect(Rect::new(0, 0, 4, 4));
        let q = OrthoPolygon::rect(Rect::new(0, 0, 3, 2));
        let r = solve_baseline(&p, &q).unwrap();
        assert!(r.ops.tree_touches > 0);
        assert!(r.fast.is_none());
    }

    #[test]
    fn isqrt_ceil_edges() {
        assert_eq!(isqrt_ceil(0), 0);
        assert_eq!(isqrt_ceil(1), 1);
        assert_eq!(isqrt_ceil(2), 2);
        assert_eq!(isqrt_ceil(4), 2);
        assert_eq!(isqrt_ceil(5), 3);
        assert_eq!(isqrt_ceil(18 * 1024 * 1024), 4345);
        assert_eq!(isqrt_ceil(4345 * 4345), 4345);
    }
}
