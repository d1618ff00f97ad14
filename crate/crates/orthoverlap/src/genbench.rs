//! Instance generators and the benchmark harness.
//!
//! Two instance families:
//!
//! * [`gen_random_ortho`] — seeded two-sided histograms (independent top and
//!   bottom profiles over unit columns), the workhorse for randomized
//!   cross-validation of the solvers;
//! * [`gen_comb_pair`] — combs whose tooth *positions* use pitches `k` and
//!   `k+1` and whose tooth *depths* also step by `k` and `k+1`. Position
//!   differences `i·k − j·(k+1)` are pairwise distinct for `0 ≤ i, j < k`,
//!   and likewise for depths, so both candidate-grid axes have Θ(k²)
//!   breakpoints; this family keeps the baseline solver honestly quadratic
//!   in the grid while the blocked solver stays subquadratic, which is what
//!   the slope fit measures.
//!
//! [`run_comb_bench`] runs both solvers over a list of comb sizes under a
//! soft wall-clock budget (partial results are returned, flagged truncated,
//! rather than discarded), and [`loglog_slope`] fits the growth exponent of
//! the op counters against the instance size product `n·m`.

use crate::decomp::decompose;
use crate::error::{Error, Result};
use crate::kernel::CandidateGrid;
use crate::poly::{OrthoPolygon, Point};
use crate::solvers::{solve_baseline, solve_fast, OverlapResult};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Seeded random orthogonal polygon: `cols` unit columns, each spanning
/// `[-bot_i, top_i]` with extents drawn uniformly from `1..=max_extent`.
/// At most `4·cols` vertices (exact when adjacent extents differ).
pub fn gen_random_ortho(seed: u64, cols: usize, max_extent: i64) -> Result<OrthoPolygon> {
    if cols == 0 || max_extent < 1 {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tops: Vec<i64> = (0..cols).map(|_| rng.gen_range(1..=max_extent)).collect();
    let bots: Vec<i64> = (0..cols).map(|_| rng.gen_range(1..=max_extent)).collect();
    let mut v: Vec<Point> = Vec::with_capacity(4 * cols);
    for (i, &b) in bots.iter().enumerate() {
        v.push(Point::new(i as i64, -b));
        v.push(Point::new(i as i64 + 1, -b));
    }
    for (i, &t) in tops.iter().enumerate().rev() {
        v.push(Point::new(i as i64 + 1, t));
        v.push(Point::new(i as i64, t));
    }
    OrthoPolygon::new(v)
}

/// A downward comb: spine `[-1, (teeth-1)·pitch + 2] × [0, pitch]` with
/// `teeth` unit-width teeth at `x = i·pitch` reaching down to
/// `-(depth0 + i·depth_step)`. Exactly `4·teeth + 4` vertices.
pub fn comb_polygon(
    teeth: u64,
    pitch: i64,
    depth0: i64,
    depth_step: i64,
) -> Result<OrthoPolygon> {
    if teeth == 0 || pitch < 1 || depth0 < 1 || depth_step < 0 {
        return Err(Error::EmptyInput);
    }
    let k = teeth as i64;
    let right = (k - 1) * pitch + 2;
    let mut v = Vec::with_capacity(4 * teeth as usize + 4);
    v.push(Point::new(-1, pitch));
    v.push(Point::new(-1, 0));
    for i in 0..k {
        let x = i * pitch;
        let d = depth0 + i * depth_step;
        v.push(Point::new(x, 0));
        v.push(Point::new(x, -d));
        v.push(Point::new(x + 1, -d));
        v.push(Point::new(x + 1, 0));
    }
    v.push(Point::new(right, 0));
    v.push(Point::new(right, pitch));
    OrthoPolygon::new(v)
}

/// The benchmark pair for size `k`: combs with (position, depth) pitches
/// `k` and `k+1`; both have `4k + 4` vertices.
pub fn gen_comb_pair(k: u64) -> Result<(OrthoPolygon, OrthoPolygon)> {
    let p = comb_polygon(k, k as i64, k as i64, k as i64)?;
    let q = comb_polygon(k, k as i64 + 1, k as i64 + 1, k as i64 + 1)?;
    Ok((p, q))
}

/// One solver run on one instance.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub family: &'static str,
    pub k: u64,
    /// vertex counts
    pub n: usize,
    pub m: usize,
    pub nm: u64,
    pub algo: &'static str,
    pub ops_total: u64,
    pub tree_touches: u64,
    pub hull_points: u64,
    pub ep_queries: u64,
    pub grid_x: usize,
    pub grid_y: usize,
    pub wall_ms: u128,
    pub area: i128,
}

#[derive(Debug, Clone)]
pub struct BenchSuite {
    pub records: Vec<BenchRecord>,
    /// true when the soft budget expired before all runs finished
    pub truncated: bool,
}

fn record_run(
    family: &'static str,
    k: u64,
    algo: &'static str,
    p: &OrthoPolygon,
    q: &OrthoPolygon,
    r: &OverlapResult,
    wall: Duration,
) -> BenchRecord {
    let grid = CandidateGrid::from_rects(&decompose(p), &decompose(q));
    BenchRecord {
        family,
        k,
        n: p.len(),
        m: q.len(),
        nm: (p.len() * q.len()) as u64,
        algo,
        ops_total: r.ops.ops_total(),
        tree_touches: r.ops.tree_touches,
        hull_points: r.ops.hull_points,
        ep_queries: r.ops.ep_queries,
        grid_x: grid.xs.len(),
        grid_y: grid.ys.len(),
        wall_ms: wall.as_millis(),
        area: r.area,
    }
}

/// Run `solve_fast` and `solve_baseline` on comb pairs for every `k`.
/// The budget is checked between runs: on expiry the suite is returned
/// truncated, never mid-run.
pub fn run_comb_bench(ks: &[u64], budget: Option<Duration>) -> Result<BenchSuite> {
    let started = Instant::now();
    let mut suite = BenchSuite {
        records: Vec::with_capacity(2 * ks.len()),
        truncated: false,
    };
    type Solver = fn(&OrthoPolygon, &OrthoPolygon) -> Result<OverlapResult>;
    let algos: [(&'static str, Solver); 2] =
        [("fast", solve_fast), ("baseline", solve_baseline)];
    'sizes: for &k in ks {
        let (p, q) = gen_comb_pair(k)?;
        for (name, solver) in algos {
            if budget.map_or(false, |b| started.elapsed() > b) {
                suite.truncated = true;
                break 'sizes;
            }
            let t0 = Instant::now();
            let r = solver(&p, &q)?;
            let rec = record_run("comb", k, name, &p, &q, &r, t0.elapsed());
            log::debug!(
                "bench comb k={k} {name}: nm={} ops={} wall={}ms",
                rec.nm,
                rec.ops_total,
                rec.wall_ms
            );
            suite.records.push(rec);
        }
    }
    Ok(suite)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Fitted growth exponent of `ops_total` vs `n·m` for one algorithm.
pub fn slope_of(records: &[BenchRecord], algo: &str) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.algo == algo)
        .map(|r| (r.nm as f64, r.ops_total as f64))
        .collect();
    loglog_slope(&pts)
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(
        "family,k,n,m,nm,algo,ops_total,tree_touches,hull_points,ep_queries,grid_x,grid_y,wall_ms,area\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.family,
            r.k,
            r.n,
            r.m,
            r.nm,
            r.algo,
            r.ops_total,
            r.tree_touches,
            r.hull_points,
            r.ep_queries,
            r.grid_x,
            r.grid_y,
            r.wall_ms,
            r.area
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_polygons_are_deterministic() {
        let a = gen_random_ortho(42, 8, 6).unwrap();
        let b = gen_random_ortho(42, 8, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.len() <= 32);
        let c = gen_random_ortho(43, 8, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn comb_shape() {
        let k = 5u64;
        let (p, q) = gen_comb_pair(k).unwrap();
        assert_eq!(p.len(), 4 * k as usize + 4);
        assert_eq!(q.len(), 4 * k as usize + 4);
        // area: spine + teeth, computed from the construction parameters
        let spine = |pitch: i64| (((k as i64) - 1) * pitch + 3) * pitch;
        let teeth = |pitch: i64| (0..k as i64).map(|i| pitch + i * pitch).sum::<i64>();
        assert_eq!(p.area(), spine(k as i64) + teeth(k as i64));
        assert_eq!(q.area(), spine(k as i64 + 1) + teeth(k as i64 + 1));
    }

    #[test]
    fn comb_grid_is_quadratic_in_k() {
        // pitches k and k+1 make position differences pairwise distinct,
        // so the grid axes grow like k^2
        let k = 6u64;
        let (p, q) = gen_comb_pair(k).unwrap();
        let grid = CandidateGrid::from_rects(&decompose(&p), &decompose(&q));
        let kk = (k * k) as usize;
        assert!(grid.xs.len() >= kk, "|X| = {} < k^2", grid.xs.len());
        assert!(grid.ys.len() >= kk, "|Y| = {} < k^2", grid.ys.len());
    }

    #[test]
    fn slope_fit_recovers_exponent() {
        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|i| {
                let x = (10 * i) as f64;
                (x, 7.0 * x.powf(1.6))
            })
            .collect();
        let s = loglog_slope(&pts).unwrap();
        assert!((s - 1.6).abs() < 1e-9, "slope {s}");
        assert!(loglog_slope(&pts[..1]).is_none());
    }

    #[test]
    fn mini_bench_runs_both_algos() {
        let suite = run_comb_bench(&[3, 5], None).unwrap();
        assert!(!suite.truncated);
        assert_eq!(suite.records.len(), 4);
        // both solvers agree on every instance
        for k in [3u64, 5] {
            let areas: Vec<i128> = suite
                .records
                .iter()
                .filter(|r| r.k == k)
                .map(|r| r.area)
                .collect();
            assert_eq!(areas.len(), 2);
            assert_eq!(areas[0], areas[1], "k={k}");
        }
        let csv = records_to_csv(&suite.records);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("family,"));
    }

    #[test]
    fn budget_zero_truncates() {
        let suite = run_comb_bench(&[3, 5], Some(Duration::ZERO)).unwrap();
        assert!(suite.truncated);
        assert!(suite.records.is_empty());
    }
}
