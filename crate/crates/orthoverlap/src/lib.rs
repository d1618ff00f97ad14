//! Exact maximum-overlap translation for orthogonal polygons.
//!
//! Given two simple orthogonal polygons `P` and `Q` with integer vertices,
//! this crate computes a translation `t` of `Q` maximizing the area of
//! `P ∩ (Q + t)`, exactly. The overlap function is piecewise bilinear over a
//! grid induced by the O(nm) critical translations, so the maximum is attained
//! at a grid vertex and all arithmetic stays in (wide) integers.
//!
//! Three solvers are provided:
//!
//! * [`solve_bruteforce`] — evaluates the overlap at every grid vertex by
//!   direct area computation; the reference oracle.
//! * [`solve_baseline`] — decomposes the overlap function into axis-aligned
//!   slabs and evaluates all grid vertices through a sweep over a 1D
//!   segment tree; `O((nm)^2 log nm)`.
//! * [`solve_fast`] — the subquadratic algorithm: the same sweep, but grid
//!   rows are grouped into blocks of `~sqrt(nm)` slab events and each block
//!   is answered through a 3D extreme-point index over lifted row sums,
//!   giving `O((nm)^{3/2} log nm)` slab-tree work.
//!
//! The [`hardness`] module generates the reduction instances that transfer
//! (3,2)-SUM and 3-SUM lower bounds to the overlap and containment problems;
//! see its docs for the gadget layout.
//!
//! Set `OVERLAP_LOG=debug` to enable expensive internal shadow checks
//! (each extreme-point query is replayed against a linear scan).

pub mod decomp;
pub mod epindex;
pub mod error;
pub mod fileio;
pub mod genbench;
pub mod hardness;
pub mod kernel;
pub mod poly;
pub mod solvers;
pub mod sweepq;
pub mod wide;

pub use error::{Error, Result};
pub use hardness::{
    certify_reduction, gen_containment_instance, gen_overlap_instance, general_area_at,
    intersection_cells, solve_32sum_brute, CertOptions, CertReport, ReductionInstance,
    SumInstance, Witness,
};
pub use kernel::{rect_pair_pieces, BilinearPiece, CandidateGrid, SlabSet, TranslationSlab};
pub use poly::{GeneralPolygon, OrthoPolygon, Point, Rect};
pub use solvers::{
    evaluate_at, solve_baseline, solve_bruteforce, solve_fast, OpsCounters, OverlapResult,
};

use std::sync::OnceLock;

/// True when `OVERLAP_LOG` is set to `debug` (case-insensitive): enables
/// internal shadow oracles that re-check fast-path answers the slow way.
pub fn shadow_checks_enabled() -> bool {
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| {
        std::env::var("OVERLAP_LOG")
            .map(|v| v.eq_ignore_ascii_case("debug"))
            .unwrap_or(false)
    })
}
