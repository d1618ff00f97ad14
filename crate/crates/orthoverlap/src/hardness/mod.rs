//! Reduction gadgets: five-set sum search encoded as maximum overlap, and
//! three-set sum search encoded as polygon containment.
//!
//! A [`SumInstance`] holds five sets `A, B, C, D, E` of integers and asks for
//! `(a, b, c, d, e)` with `a = b + c + d + e`. [`gen_overlap_instance`] turns
//! such an instance into two polygons `P` (with `O(n)` vertices) and `Q`
//! (with `O(m)` vertices) such that
//!
//! ```text
//!     max over τ of area(P ∩ (Q + τ))  ≥  1 + 3ε²
//! ```
//!
//! exactly when the instance is solvable, where `ε = 1/(100n²)` is the grid
//! unit of the construction. The layout, for `M = 100 · (sum of all
//! elements)`:
//!
//! * an *origin square* `[0,M]²` in `P`, and an *anchor* pair — a large
//!   rectangle high above the origin in `P` and a unit square in `Q` — that
//!   pins any translation achieving overlap `> 1` into `[-1, M+1]²`;
//! * *x-prongs*: for `b_i ∈ B` a thin rectangle of width `ε` hanging below
//!   the origin square at `x ≈ b_i` (shifted by `(3i+1)ε` so distinct prongs
//!   can never align simultaneously), and for `d_k ∈ D` an `ε`-square in `Q`
//!   at `x = -d_k` far below; their overlap is positive only when
//!   `τ_x ≈ b_i + d_k`;
//! * *y-prongs*: the symmetric construction to the right of the origin
//!   square, forcing `τ_y ≈ c_j + e_ℓ`;
//! * *diagonal prongs*: for `a_h ∈ A` the band `a_h ≤ x + y ≤ a_h + (10n+2)ε`
//!   clipped to the region left of the origin square, and a single `ε`-square
//!   *verifier* in `Q` positioned so it can meet only those bands, forcing
//!   `τ_x + τ_y ≈ a_h`.
//!
//! Each aligned pair contributes exactly `ε²`, the anchors contribute `1`,
//! and integrality of the inputs makes partial double-alignments impossible,
//! so the decision threshold `1 + 3ε²` is met exactly on solvable instances.
//!
//! The pieces are joined into simple polygons by thin connector strips of
//! width [`ReductionParams::connector_width`], chosen so the total connector
//! area stays below `ε²/10` (asserted at generation); the slack in the
//! counting argument above absorbs them.
//!
//! [`gen_containment_instance`] is the `m = 1` variant with `D = E = {0}`:
//! the anchor moves to the unit square at the origin, connectors run straight
//! (or diagonally, for the verifier) so that a witness translation places all
//! of `Q` inside `P`, and the decision becomes exact containment, checked as
//! `area(P ∩ (Q + τ)) = area(Q)`.
//!
//! [`certify_reduction`] replays the whole argument numerically on one
//! instance: brute-force witness vs. candidate-translation sweep, sampled
//! strict upper bounds away from witnesses, the anchor pinning bound outside
//! the translation box, and the verifier-meets-only-diagonal-prongs isolation
//! property — all with exact rational areas from [`general_area_at`]'s
//! machinery.

mod clip;

pub use clip::{general_area_at, intersection_cells};

use num::{BigInt, BigRational, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{GeneralPolygon, RPoint};

use self::clip::{convex_overlap_area, ring_area2, AreaOracle, HvdOracle};

/// Largest allowed sum of all instance elements (keeps every generated
/// coordinate comfortably inside exact-arithmetic range).
const MAX_ELEMENT_SUM: i64 = 10_000_000;
/// Largest allowed set size.
const MAX_SET_SIZE: usize = 10_000;
/// `solve_32sum_brute` refuses instances with more than this many tuples.
pub const BRUTE_FORCE_LIMIT: u64 = 200_000_000;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

// ---------------------------------------------------------------------------
// Sum instances and the brute-force oracle
// ---------------------------------------------------------------------------

/// A five-set sum-search instance: is there `(a,b,c,d,e) ∈ A×B×C×D×E` with
/// `a = b + c + d + e`?
///
/// `A`, `B`, `C` share one size `n`; `D`, `E` share a size `m ≤ n`. Sets are
/// stored sorted and deduplicated. [`SumInstance::new`] requires every
/// element to be positive; [`SumInstance::three_sum`] builds the degenerate
/// `D = E = {0}` form used by the containment reduction, where the search
/// collapses to `a = b + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumInstance {
    a: Vec<i64>,
    b: Vec<i64>,
    c: Vec<i64>,
    d: Vec<i64>,
    e: Vec<i64>,
}

impl SumInstance {
    pub fn new(
        a: Vec<i64>,
        b: Vec<i64>,
        c: Vec<i64>,
        d: Vec<i64>,
        e: Vec<i64>,
    ) -> Result<SumInstance> {
        let inst = Self::assemble(a, b, c, d, e)?;
        if inst.iter_all().any(|&v| v < 1) {
            return Err(Error::InvalidSumInstance);
        }
        Ok(inst)
    }

    /// Three-set form for the containment reduction: `D = E = {0}`, so a
    /// witness means `a = b + c`.
    pub fn three_sum(a: Vec<i64>, b: Vec<i64>, c: Vec<i64>) -> Result<SumInstance> {
        let inst = Self::assemble(a, b, c, vec![0], vec![0])?;
        if inst.a.iter().chain(&inst.b).chain(&inst.c).any(|&v| v < 1) {
            return Err(Error::InvalidSumInstance);
        }
        Ok(inst)
    }

    fn assemble(
        a: Vec<i64>,
        b: Vec<i64>,
        c: Vec<i64>,
        d: Vec<i64>,
        e: Vec<i64>,
    ) -> Result<SumInstance> {
        let norm = |mut v: Vec<i64>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        let (a, b, c, d, e) = (norm(a), norm(b), norm(c), norm(d), norm(e));
        let n = a.len();
        let m = d.len();
        if n == 0 || m == 0 {
            return Err(Error::InvalidSumInstance);
        }
        if b.len() != n || c.len() != n || e.len() != m || m > n {
            return Err(Error::InvalidSumInstance);
        }
        if n > MAX_SET_SIZE {
            return Err(Error::InvalidSumInstance);
        }
        let inst = SumInstance { a, b, c, d, e };
        let sum: i64 = inst.iter_all().map(|&v| v.abs()).sum();
        if sum > MAX_ELEMENT_SUM {
            return Err(Error::InvalidSumInstance);
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.d.len()
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn c(&self) -> &[i64] {
        &self.c
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn e(&self) -> &[i64] {
        &self.e
    }

    fn iter_all(&self) -> impl Iterator<Item = &i64> {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .chain(&self.d)
            .chain(&self.e)
    }
}

/// A solution tuple with both indices and values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

/// Exhaustive search for `a = b + c + d + e`; first witness in index order.
///
/// Refuses instances with more than [`BRUTE_FORCE_LIMIT`] candidate tuples.
pub fn solve_32sum_brute(inst: &SumInstance) -> Result<Option<Witness>> {
    let n = inst.n() as u64;
    let m = inst.m() as u64;
    if n.saturating_mul(n).saturating_mul(n).saturating_mul(m).saturating_mul(m)
        > BRUTE_FORCE_LIMIT
    {
        return Err(Error::InstanceTooLarge);
    }
    for (h, &a) in inst.a.iter().enumerate() {
        for (i, &b) in inst.b.iter().enumerate() {
            for (j, &c) in inst.c.iter().enumerate() {
                for (k, &d) in inst.d.iter().enumerate() {
                    for (l, &e) in inst.e.iter().enumerate() {
                        if a == b + c + d + e {
                            return Ok(Some(Witness {
                                h,
                                i,
                                j,
                                k,
                                l,
                                a,
                                b,
                                c,
                                d,
                                e,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Generated instances
// ---------------------------------------------------------------------------

/// Construction parameters derived from a [`SumInstance`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionParams {
    /// `M = 100 · (sum of all elements)`: bounds every relevant translation.
    pub big_m: i64,
    /// Grid unit `ε = 1/(100n²)`.
    pub eps: BigRational,
    /// Width of the thin strips joining gadgets into one simple polygon.
    pub connector_width: BigRational,
    /// Exact total area of all connector strips (both polygons); kept below
    /// `ε²/10` so connectors cannot close the decision gap.
    pub connector_area: BigRational,
}

impl ReductionParams {
    fn derive(inst: &SumInstance) -> ReductionParams {
        let n = inst.n() as i64;
        let m = inst.m() as i64;
        let sum: i64 = inst.iter_all().sum();
        let big_m = 100 * sum;
        let eps = BigRational::new(BigInt::from(1), BigInt::from(100 * n * n));
        let connector_width = &eps * &eps / rat(10_000 * big_m * (n + m + 2));
        ReductionParams {
            big_m,
            eps,
            connector_width,
            connector_area: BigRational::zero(),
        }
    }
}

/// Which decision problem an instance encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Threshold question: `max area(P ∩ (Q+τ)) ≥ 1 + 3ε²`?
    Overlap,
    /// Containment question: is there `τ` with `Q + τ ⊆ P`?
    Containment,
}

/// Role of a convex piece in the gadget decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    Origin,
    Anchor,
    XProng(usize),
    YProng(usize),
    DiagProng(usize),
    Verifier,
    /// A connector strip (counted against the `ε²/10` budget).
    Link,
}

/// One convex piece (counterclockwise ring) of a gadget polygon. The pieces
/// of each polygon are interior-disjoint and tile it exactly.
#[derive(Debug, Clone)]
pub struct Piece {
    pub kind: PieceKind,
    pub ring: Vec<RPoint>,
}

impl Piece {
    fn new(kind: PieceKind, ring: Vec<RPoint>) -> Piece {
        Piece { kind, ring }
    }

    pub fn area(&self) -> BigRational {
        ring_area2(&self.ring) / rat(2)
    }
}

/// A generated reduction instance: the polygon pair, its decision threshold,
/// the construction parameters, and the labelled piece decompositions the
/// certifier uses for isolation checks.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub variant: Variant,
    pub p: GeneralPolygon,
    pub q: GeneralPolygon,
    /// `1 + 3ε²` for overlap instances; `area(Q)` for containment instances.
    pub threshold: BigRational,
    pub params: ReductionParams,
    pub source: SumInstance,
    pub p_pieces: Vec<Piece>,
    pub q_pieces: Vec<Piece>,
}

impl ReductionInstance {
    /// All translations at which a solution can reveal itself:
    /// `(b_i + d_k + (3i+1)ε, c_j + e_ℓ + (3j+1)ε)` over all index choices.
    pub fn candidates(&self) -> Vec<(BigRational, BigRational)> {
        let eps = &self.params.eps;
        let mut out = Vec::with_capacity(
            self.source.n() * self.source.n() * self.source.m() * self.source.m(),
        );
        for (i, &b) in self.source.b.iter().enumerate() {
            for &d in &self.source.d {
                let tx = rat(b + d) + rat(3 * i as i64 + 1) * eps;
                for (j, &c) in self.source.c.iter().enumerate() {
                    for &e in &self.source.e {
                        let ty = rat(c + e) + rat(3 * j as i64 + 1) * eps;
                        out.push((tx.clone(), ty));
                    }
                }
            }
        }
        out
    }

    /// The canonical witness translation for a brute-force solution.
    pub fn witness_translation(&self, w: &Witness) -> (BigRational, BigRational) {
        let eps = &self.params.eps;
        (
            rat(w.b + w.d) + rat(3 * w.i as i64 + 1) * eps,
            rat(w.c + w.e) + rat(3 * w.j as i64 + 1) * eps,
        )
    }
}

fn rect_ring(x0: &BigRational, y0: &BigRational, x1: &BigRational, y1: &BigRational) -> Vec<RPoint> {
    vec![
        (x0.clone(), y0.clone()),
        (x1.clone(), y0.clone()),
        (x1.clone(), y1.clone()),
        (x0.clone(), y1.clone()),
    ]
}

/// `(3·idx + off) · ε`.
fn shift(idx: usize, off: i64, eps: &BigRational) -> BigRational {
    rat(3 * idx as i64 + off) * eps
}

/// Sums connector areas into `params` and enforces the `ε²/10` budget.
fn finish_params(params: &mut ReductionParams, p_pieces: &[Piece], q_pieces: &[Piece]) {
    let mu: BigRational = p_pieces
        .iter()
        .chain(q_pieces)
        .filter(|p| p.kind == PieceKind::Link)
        .map(|p| p.area())
        .sum();
    let eps2 = &params.eps * &params.eps;
    assert!(
        &mu * rat(10) < eps2,
        "connector area {} exceeds the ε²/10 budget",
        mu
    );
    params.connector_area = mu;
}

#[cfg(debug_assertions)]
fn assert_tiles(poly: &GeneralPolygon, pieces: &[Piece]) {
    let total: BigRational = pieces.iter().map(|p| p.area()).sum();
    debug_assert_eq!(total, poly.area(), "pieces must tile the polygon");
}

#[cfg(not(debug_assertions))]
fn assert_tiles(_poly: &GeneralPolygon, _pieces: &[Piece]) {}

/// Builds the overlap-threshold instance for a five-set sum search.
///
/// `P` gets `12n + 12` vertices, `Q` gets `10m + 16`; the decision threshold
/// is exactly `1 + 3ε²`.
pub fn gen_overlap_instance(inst: &SumInstance) -> Result<ReductionInstance> {
    let mut params = ReductionParams::derive(inst);
    let n = inst.n();
    let m = inst.m();
    let big_m = params.big_m;
    let eps = params.eps.clone();
    let w = params.connector_width.clone();

    let r0 = rat(0);
    let r1 = rat(1);
    let rm = rat(big_m);
    let r2m = rat(2 * big_m);
    let r3m = rat(3 * big_m);
    let neg2m = rat(-2 * big_m);
    let r100m = rat(100 * big_m);
    let r101m1 = rat(101 * big_m + 1);
    let delta = rat(10 * n as i64 + 2) * &eps;

    // ---- P: origin square, prongs attached straight to its edges, and a
    // strip up to the anchor rectangle ----
    let mut ring: Vec<RPoint> = Vec::with_capacity(12 * n + 12);
    let mut p_pieces: Vec<Piece> = Vec::with_capacity(3 * n + 3);
    p_pieces.push(Piece::new(PieceKind::Origin, rect_ring(&r0, &r0, &rm, &rm)));

    ring.push((r0.clone(), r0.clone()));
    for (i, &b) in inst.b.iter().enumerate() {
        let xl = rat(b) + shift(i, 1, &eps);
        let xr = rat(b) + shift(i, 2, &eps);
        ring.push((xl.clone(), r0.clone()));
        ring.push((xl.clone(), neg2m.clone()));
        ring.push((xr.clone(), neg2m.clone()));
        ring.push((xr.clone(), r0.clone()));
        p_pieces.push(Piece::new(
            PieceKind::XProng(i),
            rect_ring(&xl, &neg2m, &xr, &r0),
        ));
    }
    ring.push((rm.clone(), r0.clone()));
    for (j, &c) in inst.c.iter().enumerate() {
        let yb = rat(c) + shift(j, 1, &eps);
        let yt = rat(c) + shift(j, 2, &eps);
        ring.push((rm.clone(), yb.clone()));
        ring.push((r3m.clone(), yb.clone()));
        ring.push((r3m.clone(), yt.clone()));
        ring.push((rm.clone(), yt.clone()));
        p_pieces.push(Piece::new(
            PieceKind::YProng(j),
            rect_ring(&rm, &yb, &r3m, &yt),
        ));
    }
    ring.push((rm.clone(), rm.clone()));
    // anchor strip at x ∈ [1, 1+w], then the anchor rectangle
    let strip_r = &r1 + &w;
    ring.push((strip_r.clone(), rm.clone()));
    ring.push((strip_r.clone(), r100m.clone()));
    ring.push((rm.clone(), r100m.clone()));
    ring.push((rm.clone(), r101m1.clone()));
    ring.push((r0.clone(), r101m1.clone()));
    ring.push((r0.clone(), r100m.clone()));
    ring.push((r1.clone(), r100m.clone()));
    ring.push((r1.clone(), rm.clone()));
    p_pieces.push(Piece::new(
        PieceKind::Anchor,
        rect_ring(&r0, &r100m, &rm, &r101m1),
    ));
    p_pieces.push(Piece::new(
        PieceKind::Link,
        rect_ring(&r1, &rm, &strip_r, &r100m),
    ));
    ring.push((r0.clone(), rm.clone()));
    for h in (0..n).rev() {
        let a = rat(inst.a[h]);
        let at = &a + &delta;
        ring.push((r0.clone(), at.clone()));
        ring.push((neg2m.clone(), &at + &r2m));
        ring.push((neg2m.clone(), &a + &r2m));
        ring.push((r0.clone(), a.clone()));
        p_pieces.push(Piece::new(
            PieceKind::DiagProng(h),
            vec![
                (r0.clone(), a.clone()),
                (r0.clone(), at.clone()),
                (neg2m.clone(), &at + &r2m),
                (neg2m.clone(), &a + &r2m),
            ],
        ));
    }
    let p = GeneralPolygon::new(ring)?;

    // ---- Q: a thin bar as the root, prongs hanging off strips, risers up to
    // the verifier and the anchor ----
    let prong_top = &neg2m + &eps;
    let e_last = rat(-inst.e[m - 1]);
    let mut ring: Vec<RPoint> = Vec::with_capacity(10 * m + 16);
    let mut q_pieces: Vec<Piece> = Vec::with_capacity(2 * m + 7);
    q_pieces.push(Piece::new(
        PieceKind::Link,
        rect_ring(&neg2m, &r0, &r2m, &w),
    ));

    ring.push((neg2m.clone(), r0.clone()));
    for k in (0..m).rev() {
        let xd = rat(-inst.d[k]);
        let xde = &xd + &eps;
        let xdw = &xd + &w;
        ring.push((xd.clone(), r0.clone()));
        ring.push((xd.clone(), neg2m.clone()));
        ring.push((xde.clone(), neg2m.clone()));
        ring.push((xde.clone(), prong_top.clone()));
        ring.push((xdw.clone(), prong_top.clone()));
        ring.push((xdw.clone(), r0.clone()));
        q_pieces.push(Piece::new(
            PieceKind::XProng(k),
            rect_ring(&xd, &neg2m, &xde, &prong_top),
        ));
        q_pieces.push(Piece::new(
            PieceKind::Link,
            rect_ring(&xd, &prong_top, &xdw, &r0),
        ));
    }
    // riser left of the y-prong column, prongs attached edge-to-edge
    let ycol = &r2m - &eps;
    let riser_l = &ycol - &w;
    ring.push((riser_l.clone(), r0.clone()));
    ring.push((riser_l.clone(), e_last.clone()));
    ring.push((r2m.clone(), e_last.clone()));
    ring.push((r2m.clone(), &e_last + &eps));
    ring.push((ycol.clone(), &e_last + &eps));
    q_pieces.push(Piece::new(
        PieceKind::Link,
        rect_ring(&riser_l, &e_last, &ycol, &r0),
    ));
    q_pieces.push(Piece::new(
        PieceKind::YProng(m - 1),
        rect_ring(&ycol, &e_last, &r2m, &(&e_last + &eps)),
    ));
    for l in (0..m - 1).rev() {
        let ey = rat(-inst.e[l]);
        ring.push((ycol.clone(), ey.clone()));
        ring.push((r2m.clone(), ey.clone()));
        ring.push((r2m.clone(), &ey + &eps));
        ring.push((ycol.clone(), &ey + &eps));
        q_pieces.push(Piece::new(
            PieceKind::YProng(l),
            rect_ring(&ycol, &ey, &r2m, &(&ey + &eps)),
        ));
    }
    ring.push((ycol.clone(), r0.clone()));
    ring.push((r2m.clone(), r0.clone()));
    ring.push((r2m.clone(), w.clone()));
    // anchor riser at x ∈ [0, w] up to the unit anchor square
    ring.push((w.clone(), w.clone()));
    ring.push((w.clone(), r100m.clone()));
    ring.push((r1.clone(), r100m.clone()));
    ring.push((r1.clone(), &r100m + &r1));
    ring.push((r0.clone(), &r100m + &r1));
    ring.push((r0.clone(), w.clone()));
    q_pieces.push(Piece::new(
        PieceKind::Link,
        rect_ring(&r0, &w, &w, &r100m),
    ));
    q_pieces.push(Piece::new(
        PieceKind::Anchor,
        rect_ring(&r0, &r100m, &r1, &(&r100m + &r1)),
    ));
    // verifier riser flush with the left end of the bar
    let vr = &neg2m + &w;
    let ve = &neg2m + &eps;
    ring.push((vr.clone(), w.clone()));
    ring.push((vr.clone(), r2m.clone()));
    ring.push((ve.clone(), r2m.clone()));
    ring.push((ve.clone(), &r2m + &eps));
    ring.push((neg2m.clone(), &r2m + &eps));
    q_pieces.push(Piece::new(
        PieceKind::Link,
        rect_ring(&neg2m, &w, &vr, &r2m),
    ));
    q_pieces.push(Piece::new(
        PieceKind::Verifier,
        rect_ring(&neg2m, &r2m, &ve, &(&r2m + &eps)),
    ));
    let q = GeneralPolygon::new(ring)?;

    finish_params(&mut params, &p_pieces, &q_pieces);
    assert_tiles(&p, &p_pieces);
    assert_tiles(&q, &q_pieces);

    let threshold = rat(1) + rat(3) * &eps * &eps;
    Ok(ReductionInstance {
        variant: Variant::Overlap,
        p,
        q,
        threshold,
        params,
        source: inst.clone(),
        p_pieces,
        q_pieces,
    })
}

/// Builds the containment instance for a three-set sum search
/// (`D = E = {0}`).
///
/// `Q` always has 19 vertices regardless of `n`; the decision is
/// `area(P ∩ (Q + τ)) = area(Q)` at some candidate `τ`.
pub fn gen_containment_instance(a: &[i64], b: &[i64], c: &[i64]) -> Result<ReductionInstance> {
    let inst = SumInstance::three_sum(a.to_vec(), b.to_vec(), c.to_vec())?;
    let mut params = ReductionParams::derive(&inst);
    let n = inst.n();
    let big_m = params.big_m;
    let eps = params.eps.clone();
    let w = params.connector_width.clone();

    let r0 = rat(0);
    let r1 = rat(1);
    let rm = rat(big_m);
    let r2m = rat(2 * big_m);
    let r3m = rat(3 * big_m);
    let neg2m = rat(-2 * big_m);
    let delta = rat(10 * n as i64 + 2) * &eps;

    // ---- P: as for the overlap variant, minus the anchor and its strip ----
    let mut ring: Vec<RPoint> = Vec::with_capacity(12 * n + 4);
    let mut p_pieces: Vec<Piece> = Vec::with_capacity(3 * n + 1);
    p_pieces.push(Piece::new(PieceKind::Origin, rect_ring(&r0, &r0, &rm, &rm)));
    ring.push((r0.clone(), r0.clone()));
    for (i, &bv) in inst.b.iter().enumerate() {
        let xl = rat(bv) + shift(i, 1, &eps);
        let xr = rat(bv) + shift(i, 2, &eps);
        ring.push((xl.clone(), r0.clone()));
        ring.push((xl.clone(), neg2m.clone()));
        ring.push((xr.clone(), neg2m.clone()));
        ring.push((xr.clone(), r0.clone()));
        p_pieces.push(Piece::new(
            PieceKind::XProng(i),
            rect_ring(&xl, &neg2m, &xr, &r0),
        ));
    }
    ring.push((rm.clone(), r0.clone()));
    for (j, &cv) in inst.c.iter().enumerate() {
        let yb = rat(cv) + shift(j, 1, &eps);
        let yt = rat(cv) + shift(j, 2, &eps);
        ring.push((rm.clone(), yb.clone()));
        ring.push((r3m.clone(), yb.clone()));
        ring.push((r3m.clone(), yt.clone()));
        ring.push((rm.clone(), yt.clone()));
        p_pieces.push(Piece::new(
            PieceKind::YProng(j),
            rect_ring(&rm, &yb, &r3m, &yt),
        ));
    }
    ring.push((rm.clone(), rm.clone()));
    ring.push((r0.clone(), rm.clone()));
    for h in (0..n).rev() {
        let av = rat(inst.a[h]);
        let at = &av + &delta;
        ring.push((r0.clone(), at.clone()));
        ring.push((neg2m.clone(), &at + &r2m));
        ring.push((neg2m.clone(), &av + &r2m));
        ring.push((r0.clone(), av.clone()));
        p_pieces.push(Piece::new(
            PieceKind::DiagProng(h),
            vec![
                (r0.clone(), av.clone()),
                (r0.clone(), at.clone()),
                (neg2m.clone(), &at + &r2m),
                (neg2m.clone(), &av + &r2m),
            ],
        ));
    }
    let p = GeneralPolygon::new(ring)?;

    // ---- Q: unit anchor at the origin, one prong per axis on straight
    // strips, verifier on a diagonal strip — 19 vertices ----
    let ycol = &r2m - &eps;
    let prong_top = &neg2m + &eps;
    let vr = &neg2m + &w;
    let ve = &neg2m + &eps;
    let ring: Vec<RPoint> = vec![
        (w.clone(), r0.clone()),
        (r2m.clone(), r0.clone()),
        (r2m.clone(), eps.clone()),
        (ycol.clone(), eps.clone()),
        (ycol.clone(), w.clone()),
        (r1.clone(), w.clone()),
        (r1.clone(), r1.clone()),
        (r0.clone(), r1.clone()),
        (r0.clone(), w.clone()),
        (vr.clone(), r2m.clone()),
        (ve.clone(), r2m.clone()),
        (ve.clone(), &r2m + &eps),
        (neg2m.clone(), &r2m + &eps),
        (neg2m.clone(), r2m.clone()),
        (r0.clone(), r0.clone()),
        (r0.clone(), neg2m.clone()),
        (eps.clone(), neg2m.clone()),
        (eps.clone(), prong_top.clone()),
        (w.clone(), prong_top.clone()),
    ];
    let q_pieces = vec![
        Piece::new(PieceKind::Anchor, rect_ring(&r0, &r0, &r1, &r1)),
        Piece::new(PieceKind::Link, rect_ring(&r0, &prong_top, &w, &r0)),
        Piece::new(
            PieceKind::XProng(0),
            rect_ring(&r0, &neg2m, &eps, &prong_top),
        ),
        Piece::new(PieceKind::Link, rect_ring(&r1, &r0, &ycol, &w)),
        Piece::new(PieceKind::YProng(0), rect_ring(&ycol, &r0, &r2m, &eps)),
        Piece::new(
            PieceKind::Link,
            vec![
                (r0.clone(), r0.clone()),
                (r0.clone(), w.clone()),
                (vr.clone(), r2m.clone()),
                (neg2m.clone(), r2m.clone()),
            ],
        ),
        Piece::new(
            PieceKind::Verifier,
            rect_ring(&neg2m, &r2m, &ve, &(&r2m + &eps)),
        ),
    ];
    let q = GeneralPolygon::new(ring)?;

    finish_params(&mut params, &p_pieces, &q_pieces);
    assert_tiles(&p, &p_pieces);
    assert_tiles(&q, &q_pieces);

    let threshold = q.area();
    Ok(ReductionInstance {
        variant: Variant::Containment,
        p,
        q,
        threshold,
        params,
        source: inst,
        p_pieces,
        q_pieces,
    })
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// Sample budgets for [`certify_reduction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertOptions {
    pub seed: u64,
    /// Random in-box translations checked to stay strictly below threshold
    /// on unsolvable instances.
    pub unsat_samples: usize,
    /// Random translations outside `[-1, M+1]²` checked against the anchor
    /// pinning bound `1 + connector_area`.
    pub outside_samples: usize,
    /// Random in-box translations (besides all candidates) for the
    /// verifier-isolation property.
    pub isolation_samples: usize,
}

impl Default for CertOptions {
    fn default() -> CertOptions {
        CertOptions {
            seed: 0x7a61_9c03,
            unsat_samples: 1000,
            outside_samples: 100,
            isolation_samples: 32,
        }
    }
}

/// Outcome of [`certify_reduction`]; every field the checks rely on is kept
/// so callers can report or serialize it.
#[derive(Debug, Clone)]
pub struct CertReport {
    pub witness: Option<Witness>,
    pub threshold: BigRational,
    /// With a witness: does the canonical translation reach the threshold?
    pub forward_ok: Option<bool>,
    /// With a witness: does `b + c + d + e = a` hold exactly?
    pub integrality_ok: Option<bool>,
    pub sweep_candidates: usize,
    pub sweep_max: BigRational,
    pub sweep_best: (BigRational, BigRational),
    pub sweep_reaches_threshold: bool,
    /// Candidate sweep verdict equals brute-force satisfiability.
    pub sweep_matches_brute: bool,
    pub unsat_samples_checked: usize,
    pub unsat_samples_ok: bool,
    pub outside_samples_checked: usize,
    pub outside_ok: bool,
    pub isolation_checked: usize,
    pub isolation_ok: bool,
    pub connector_area: BigRational,
    pub connector_budget_ok: bool,
    pub passed: bool,
}

/// Uniform rational in `[lo, hi]` with the given denominator.
fn rat_in_range(
    rng: &mut ChaCha8Rng,
    lo: &BigRational,
    hi: &BigRational,
    den: &BigInt,
) -> BigRational {
    let den_r = BigRational::from_integer(den.clone());
    let lo_k = (lo * &den_r).ceil().to_integer();
    let hi_k = (hi * &den_r).floor().to_integer();
    let span = (&hi_k - &lo_k).to_u128().unwrap_or(u128::MAX);
    let off = rng.gen_range(0..=span);
    BigRational::new(lo_k + BigInt::from(off), den.clone())
}

/// Replays the reduction argument numerically on one generated instance.
///
/// Checks performed (all with exact rational areas):
///
/// 1. *forward*: a brute-force witness, if any, reaches the threshold at its
///    canonical translation, and satisfies `a = b + c + d + e` exactly;
/// 2. *candidate sweep*: the max over all `n²m²` candidate translations
///    reaches the threshold iff a witness exists;
/// 3. *sampling*: on unsolvable instances, random translations in
///    `[-1, M+1]²` stay strictly below the threshold;
/// 4. *anchor pinning*: translations outside `[-1, M+1]²` never exceed
///    `1 + connector_area`;
/// 5. *isolation*: the translated verifier square meets no piece of `P`
///    other than diagonal prongs, at every candidate and sampled in-box
///    translation;
/// 6. *budget*: total connector area is below `ε²/10`.
///
/// Only desk-scale instances (`n ≤ 4`, `m ≤ 2`) are accepted.
pub fn certify_reduction(ri: &ReductionInstance, opts: &CertOptions) -> Result<CertReport> {
    if ri.source.n() > 4 || ri.source.m() > 2 {
        return Err(Error::InstanceTooLarge);
    }
    let witness = solve_32sum_brute(&ri.source)?;

    // Piece-pair grid clipping carries the bulk of the evaluations; it only
    // stands in for the polygon intersection because the pieces tile the
    // polygons exactly, so that is re-checked here. Instances outside the
    // grid envelope fall back to the triangulation oracle.
    let fast = HvdOracle::new(&ri.p_pieces, &ri.q_pieces).filter(|_| {
        let pa: BigRational = ri.p_pieces.iter().map(|p| p.area()).sum();
        let qa: BigRational = ri.q_pieces.iter().map(|p| p.area()).sum();
        pa == ri.p.area() && qa == ri.q.area()
    });
    let slow = match &fast {
        Some(_) => None,
        None => Some(AreaOracle::new(&ri.p, &ri.q)?),
    };
    let area_at = |tx: &BigRational, ty: &BigRational| -> BigRational {
        if let Some(f) = &fast {
            if let Some((sx, sy)) = f.scaled_shift(tx, ty) {
                return f.area_at_scaled(sx, sy);
            }
        }
        match &slow {
            Some(s) => s.area_at(tx, ty),
            // unreachable in practice: every certification translation sits
            // on the fast oracle's own grid
            None => AreaOracle::new(&ri.p, &ri.q)
                .expect("polygons were validated at generation")
                .area_at(tx, ty),
        }
    };
    let reaches = |area: &BigRational| match ri.variant {
        Variant::Overlap => *area >= ri.threshold,
        Variant::Containment => *area == ri.threshold,
    };

    let forward_ok = witness.as_ref().map(|w| {
        let (tx, ty) = ri.witness_translation(w);
        reaches(&area_at(&tx, &ty))
    });
    let integrality_ok = witness.as_ref().map(|w| w.b + w.c + w.d + w.e == w.a);

    let cands = ri.candidates();
    let mut sweep_max = BigRational::zero();
    let mut sweep_best = cands[0].clone();
    for t in &cands {
        let area = area_at(&t.0, &t.1);
        if area > sweep_max {
            sweep_max = area;
            sweep_best = t.clone();
        }
    }
    let sweep_reaches_threshold = reaches(&sweep_max);
    let sweep_matches_brute = sweep_reaches_threshold == witness.is_some();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let den = match (&fast, &slow) {
        (Some(f), _) => f.scale().clone(),
        (None, Some(s)) => s.scale().clone(),
        (None, None) => unreachable!(),
    };
    let big_m = ri.params.big_m;
    let lo_in = rat(-1);
    let hi_in = rat(big_m + 1);

    let mut unsat_samples_checked = 0;
    let mut unsat_samples_ok = true;
    if witness.is_none() {
        for _ in 0..opts.unsat_samples {
            let tx = rat_in_range(&mut rng, &lo_in, &hi_in, &den);
            let ty = rat_in_range(&mut rng, &lo_in, &hi_in, &den);
            unsat_samples_checked += 1;
            if area_at(&tx, &ty) >= ri.threshold {
                unsat_samples_ok = false;
                break;
            }
        }
    }

    let outer_bound = rat(1) + &ri.params.connector_area;
    let (ox_lo, ox_hi) = (rat(-5 * big_m), rat(5 * big_m));
    let (oy_lo, oy_hi) = (rat(-103 * big_m), rat(5 * big_m));
    let mut outside_samples_checked = 0;
    let mut outside_ok = true;
    while outside_samples_checked < opts.outside_samples {
        let tx = rat_in_range(&mut rng, &ox_lo, &ox_hi, &den);
        let ty = rat_in_range(&mut rng, &oy_lo, &oy_hi, &den);
        if tx >= lo_in && tx <= hi_in && ty >= lo_in && ty <= hi_in {
            continue;
        }
        outside_samples_checked += 1;
        if area_at(&tx, &ty) > outer_bound {
            outside_ok = false;
            break;
        }
    }

    let qv_idx = ri
        .q_pieces
        .iter()
        .position(|p| p.kind == PieceKind::Verifier)
        .expect("generated instances carry a verifier piece");
    let qv = &ri.q_pieces[qv_idx];
    let mut iso_taus = cands.clone();
    for _ in 0..opts.isolation_samples {
        iso_taus.push((
            rat_in_range(&mut rng, &lo_in, &hi_in, &den),
            rat_in_range(&mut rng, &lo_in, &hi_in, &den),
        ));
    }
    let mut isolation_checked = 0;
    let mut isolation_ok = true;
    'iso: for (tx, ty) in &iso_taus {
        isolation_checked += 1;
        let grid = fast.as_ref().and_then(|f| f.scaled_shift(tx, ty).map(|s| (f, s)));
        if let Some((f, (sx, sy))) = grid {
            for (pi, piece) in ri.p_pieces.iter().enumerate() {
                if matches!(piece.kind, PieceKind::DiagProng(_)) {
                    continue;
                }
                if f.pieces_meet(pi, qv_idx, sx, sy) {
                    isolation_ok = false;
                    break 'iso;
                }
            }
        } else {
            let moved: Vec<RPoint> = qv.ring.iter().map(|(x, y)| (x + tx, y + ty)).collect();
            for piece in &ri.p_pieces {
                if matches!(piece.kind, PieceKind::DiagProng(_)) {
                    continue;
                }
                if !convex_overlap_area(&piece.ring, &moved).is_zero() {
                    isolation_ok = false;
                    break 'iso;
                }
            }
        }
    }

    let eps2 = &ri.params.eps * &ri.params.eps;
    let connector_budget_ok = &ri.params.connector_area * rat(10) < eps2;

    let passed = forward_ok.unwrap_or(true)
        && integrality_ok.unwrap_or(true)
        && sweep_matches_brute
        && unsat_samples_ok
        && outside_ok
        && isolation_ok
        && connector_budget_ok;

    Ok(CertReport {
        witness,
        threshold: ri.threshold.clone(),
        forward_ok,
        integrality_ok,
        sweep_candidates: cands.len(),
        sweep_max,
        sweep_best,
        sweep_reaches_threshold,
        sweep_matches_brute,
        unsat_samples_checked,
        unsat_samples_ok,
        outside_samples_checked,
        outside_ok,
        isolation_checked,
        isolation_ok,
        connector_area: ri.params.connector_area.clone(),
        connector_budget_ok,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn small_opts(seed: u64) -> CertOptions {
        CertOptions {
            seed,
            unsat_samples: 40,
            outside_samples: 20,
            isolation_samples: 8,
        }
    }

    #[test]
    fn instance_validation() {
        // dedup can shrink a set out of shape
        let i = SumInstance::new(vec![9, 4], vec![2, 1], vec![3, 3], vec![1, 2], vec![2, 1]);
        assert!(matches!(i, Err(Error::InvalidSumInstance)));
        // normalization sorts
        let i = SumInstance::new(vec![9, 4], vec![2, 1], vec![5, 3], vec![1, 2], vec![2, 1])
            .unwrap();
        assert_eq!(i.a(), &[4, 9]);
        assert_eq!(i.c(), &[3, 5]);
        assert_eq!((i.n(), i.m()), (2, 2));
        // positivity
        assert!(SumInstance::new(vec![1], vec![0], vec![1], vec![1], vec![1]).is_err());
        // m > n
        assert!(SumInstance::new(vec![1], vec![1], vec![1], vec![1, 2], vec![1, 2]).is_err());
        // three_sum allows the zero shifts
        let t = SumInstance::three_sum(vec![2], vec![1], vec![1]).unwrap();
        assert_eq!((t.d(), t.e()), (&[0][..], &[0][..]));
    }

    #[test]
    fn brute_force_examples() {
        let sat = SumInstance::new(vec![4], vec![1], vec![1], vec![1], vec![1]).unwrap();
        let w = solve_32sum_brute(&sat).unwrap().unwrap();
        assert_eq!((w.a, w.b + w.c + w.d + w.e), (4, 4));
        let unsat = SumInstance::new(vec![10], vec![1], vec![2], vec![3], vec![5]).unwrap();
        assert!(solve_32sum_brute(&unsat).unwrap().is_none());
    }

    #[test]
    fn brute_force_rejects_oversized() {
        let big: Vec<i64> = (1..=200).collect();
        let inst = SumInstance::new(
            big.clone(),
            big.clone(),
            big.clone(),
            big.clone(),
            big,
        )
        .unwrap();
        assert!(matches!(
            solve_32sum_brute(&inst),
            Err(Error::InstanceTooLarge)
        ));
    }

    #[test]
    fn brute_force_matches_meet_in_middle() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..60 {
            let gen_set = |rng: &mut ChaCha8Rng, len: usize| -> Vec<i64> {
                (0..len).map(|_| rng.gen_range(1..30)).collect()
            };
            let n = rng.gen_range(1..4usize);
            let m = rng.gen_range(1..=n);
            let inst = match SumInstance::new(
                gen_set(&mut rng, n),
                gen_set(&mut rng, n),
                gen_set(&mut rng, n),
                gen_set(&mut rng, m),
                gen_set(&mut rng, m),
            ) {
                Ok(i) => i,
                Err(_) => continue, // dedup shrank a set; skip
            };
            let brute = solve_32sum_brute(&inst).unwrap().is_some();
            let de: HashSet<i64> = inst
                .d()
                .iter()
                .flat_map(|&d| inst.e().iter().map(move |&e| d + e))
                .collect();
            let mitm = inst.a().iter().any(|&a| {
                inst.b()
                    .iter()
                    .any(|&b| inst.c().iter().any(|&c| de.contains(&(a - b - c))))
            });
            assert_eq!(brute, mitm);
        }
    }

    #[test]
    fn overlap_instance_shape_and_areas() {
        let inst = SumInstance::new(vec![4], vec![1], vec![1], vec![1], vec![1]).unwrap();
        let ri = gen_overlap_instance(&inst).unwrap();
        let (n, m) = (1i64, 1i64);
        assert_eq!(ri.p.vertices().len(), (12 * n + 12) as usize);
        assert_eq!(ri.q.vertices().len(), (10 * m + 16) as usize);

        let big_m = ri.params.big_m;
        assert_eq!(big_m, 100 * 8);
        let eps = &ri.params.eps;
        assert_eq!(*eps, BigRational::new(1.into(), 100.into()));
        let w = &ri.params.connector_width;
        let delta = rat(10 * n + 2) * eps;

        // P tiles: origin + anchor + strip + n prongs per family
        let p_expected = rat(big_m) * rat(big_m)
            + rat(big_m) * rat(big_m + 1)
            + w * rat(99 * big_m)
            + rat(n) * (eps * rat(2 * big_m))
            + rat(n) * (eps * rat(2 * big_m))
            + rat(n) * (&delta * rat(2 * big_m));
        assert_eq!(ri.p.area(), p_expected);

        // Q tiles: bar, drops, prongs, risers, verifier, anchor
        let e_last = rat(1);
        let q_expected = w * rat(4 * big_m)
            + rat(m) * (w * (rat(2 * big_m) - eps))
            + rat(m) * (eps * eps)
            + w * &e_last
            + rat(m) * (eps * eps)
            + w * (rat(2 * big_m) - w)
            + eps * eps
            + w * (rat(100 * big_m) - w)
            + rat(1);
        assert_eq!(ri.q.area(), q_expected);

        assert_eq!(ri.threshold, rat(1) + rat(3) * eps * eps);
        assert!(&ri.params.connector_area * rat(10) < eps * eps);
    }

    #[test]
    fn overlap_forward_witness_reaches_threshold() {
        let inst = SumInstance::new(vec![4], vec![1], vec![1], vec![1], vec![1]).unwrap();
        let ri = gen_overlap_instance(&inst).unwrap();
        let w = solve_32sum_brute(&inst).unwrap().unwrap();
        let tau = ri.witness_translation(&w);
        let area = general_area_at(&ri.p, &ri.q, &tau).unwrap();
        assert!(area >= ri.threshold);
        // connectors are the only extra material, so the excess is tiny
        assert!(&area - &ri.threshold <= ri.params.connector_area);
    }

    #[test]
    fn overlap_unsat_stays_below_threshold() {
        let inst = SumInstance::new(vec![10], vec![1], vec![1], vec![1], vec![1]).unwrap();
        let ri = gen_overlap_instance(&inst).unwrap();
        let report = certify_reduction(&ri, &small_opts(5)).unwrap();
        assert!(report.witness.is_none());
        assert!(report.sweep_max < report.threshold);
        assert!(report.sweep_matches_brute);
        assert!(report.unsat_samples_ok && report.outside_ok && report.isolation_ok);
        assert!(report.passed);
    }

    #[test]
    fn overlap_sat_certifies() {
        let inst =
            SumInstance::new(vec![7, 9], vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 2]).unwrap();
        // 9 = 2 + 3 + 3 + 1 among others
        let ri = gen_overlap_instance(&inst).unwrap();
        let report = certify_reduction(&ri, &small_opts(6)).unwrap();
        assert!(report.witness.is_some());
        assert_eq!(report.forward_ok, Some(true));
        assert_eq!(report.integrality_ok, Some(true));
        assert!(report.sweep_reaches_threshold && report.sweep_matches_brute);
        assert_eq!(report.sweep_candidates, 2 * 2 * 2 * 2);
        assert!(report.passed);
    }

    #[test]
    fn containment_q_has_constant_complexity() {
        for n in 1..=4usize {
            let a: Vec<i64> = (0..n as i64).map(|v| 5 + 3 * v).collect();
            let b: Vec<i64> = (0..n as i64).map(|v| 1 + v).collect();
            let c: Vec<i64> = (0..n as i64).map(|v| 2 + v).collect();
            let ri = gen_containment_instance(&a, &b, &c).unwrap();
            assert_eq!(ri.q.vertices().len(), 19);
            assert!(ri.q.vertices().len() <= 32);
            assert_eq!(ri.p.vertices().len(), 12 * n + 4);
            assert_eq!(ri.threshold, ri.q.area());
        }
    }

    #[test]
    fn containment_forward_is_exact_equality() {
        let ri = gen_containment_instance(&[2], &[1], &[1]).unwrap();
        let w = solve_32sum_brute(&ri.source).unwrap().unwrap();
        let tau = ri.witness_translation(&w);
        let area = general_area_at(&ri.p, &ri.q, &tau).unwrap();
        assert_eq!(area, ri.threshold); // Q + τ* lies inside P
        let report = certify_reduction(&ri, &small_opts(7)).unwrap();
        assert!(report.passed && report.sweep_reaches_threshold);
    }

    #[test]
    fn containment_unsat_never_contained() {
        let ri = gen_containment_instance(&[5], &[1], &[1]).unwrap();
        let report = certify_reduction(&ri, &small_opts(8)).unwrap();
        assert!(report.witness.is_none());
        assert!(!report.sweep_reaches_threshold);
        assert!(report.sweep_max < report.threshold);
        assert!(report.passed);
    }

    #[test]
    fn certify_rejects_oversized() {
        let five: Vec<i64> = vec![11, 12, 13, 14, 15];
        let inst = SumInstance::new(
            five.clone(),
            vec![1, 2, 3, 4, 5],
            vec![1, 2, 3, 4, 6],
            vec![1],
            vec![2],
        )
        .unwrap();
        let ri = gen_overlap_instance(&inst).unwrap();
        assert!(matches!(
            certify_reduction(&ri, &CertOptions::default()),
            Err(Error::InstanceTooLarge)
        ));
    }
}
