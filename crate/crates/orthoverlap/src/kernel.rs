//! The overlap function of two rectangles, and its slab decomposition.
//!
//! For a single rectangle pair `(R ⊆ P, S ⊆ Q)`, the area of `R ∩ (S + τ)` as
//! a function of the translation `τ = (x, y)` factors into two 1D interval
//! convolutions, each piecewise linear with at most 3 non-trivial pieces, so
//! the product is piecewise *bilinear* with at most 9 pieces of the form
//! `A + Bx + Cy + Dxy` on a grid cell.
//!
//! Each piece, supported on `[x0,x1) × [y0,y1)`, is rewritten as two
//! half-open *slabs* `[x0,x1) × [y0,∞)` and `[x0,x1) × [y1,∞)` carrying `+`
//! and `-` the piece's coefficients. Summing the quadruples of all slabs at
//! or below a query point recovers the total overlap area — this is the
//! representation both solvers sweep over. A rectangle pair yields at most
//! 18 slabs.

use crate::poly::Rect;
use num::BigRational;

/// One linear piece `a + b·t` of a 1D interval convolution on `[x0, x1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinPiece {
    pub x0: i64,
    pub x1: i64,
    pub a: i64,
    pub b: i64,
}

/// Pieces of `t ↦ |[lp,rp] ∩ [lq+t, rq+t]|`, left-to-right, covering exactly
/// the open support of the function.
pub fn interval_conv_pieces(lp: i64, rp: i64, lq: i64, rq: i64) -> Vec<LinPiece> {
    debug_assert!(lp < rp && lq < rq);
    let x0 = lp - rq;
    let x1 = (lp - lq).min(rp - rq);
    let x2 = (lp - lq).max(rp - rq);
    let x3 = rp - lq;
    let mut out = Vec::with_capacity(3);
    out.push(LinPiece {
        x0,
        x1,
        a: rq - lp,
        b: 1,
    });
    if x1 < x2 {
        out.push(LinPiece {
            x0: x1,
            x1: x2,
            a: (rp - lp).min(rq - lq),
            b: 0,
        });
    }
    out.push(LinPiece {
        x0: x2,
        x1: x3,
        a: rp - lq,
        b: -1,
    });
    out
}

/// A bilinear piece `A + Bx + Cy + Dxy` supported on `[x0,x1) × [y0,y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BilinearPiece {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl BilinearPiece {
    pub fn contains_int(&self, x: i64, y: i64) -> bool {
        self.x0 <= x && x < self.x1 && self.y0 <= y && y < self.y1
    }

    pub fn value_int(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 + self.b as i128 * x + self.c as i128 * y + self.d as i128 * x * y
    }

    pub fn contains_rational(&self, x: &BigRational, y: &BigRational) -> bool {
        let i = |v: i64| BigRational::from_integer(v.into());
        *x >= i(self.x0) && *x < i(self.x1) && *y >= i(self.y0) && *y < i(self.y1)
    }

    pub fn value_rational(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let i = |v: i64| BigRational::from_integer(v.into());
        i(self.a) + i(self.b) * x + i(self.c) * y + i(self.d) * x * y
    }
}

/// All bilinear pieces of `τ ↦ area(rp ∩ (rq + τ))`; at most 9.
pub fn rect_pair_pieces(rp: &Rect, rq: &Rect) -> Vec<BilinearPiece> {
    let px = interval_conv_pieces(rp.x0, rp.x1, rq.x0, rq.x1);
    let py = interval_conv_pieces(rp.y0, rp.y1, rq.y0, rq.y1);
    let mut out = Vec::with_capacity(px.len() * py.len());
    for h in &px {
        for v in &py {
            out.push(BilinearPiece {
                x0: h.x0,
                x1: h.x1,
                y0: v.x0,
                y1: v.x1,
                a: h.a * v.a,
                b: h.b * v.a,
                c: h.a * v.b,
                d: h.b * v.b,
            });
        }
    }
    out
}

/// Half-open slab `[x0,x1) × [y,∞)` carrying a bilinear coefficient
/// quadruple. The overlap function is the sum, over all slabs containing a
/// point, of `a + bx + cy + dxy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslationSlab {
    pub x0: i64,
    pub x1: i64,
    pub y: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// The two slabs (opening and closing) of one bilinear piece.
pub fn piece_slabs(p: &BilinearPiece) -> [TranslationSlab; 2] {
    [
        TranslationSlab {
            x0: p.x0,
            x1: p.x1,
            y: p.y0,
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
        },
        TranslationSlab {
            x0: p.x0,
            x1: p.x1,
            y: p.y1,
            a: -p.a,
            b: -p.b,
            c: -p.c,
            d: -p.d,
        },
    ]
}

/// All slabs of a rectangle pair; at most 18.
pub fn rect_pair_slabs(rp: &Rect, rq: &Rect) -> Vec<TranslationSlab> {
    rect_pair_pieces(rp, rq)
        .iter()
        .flat_map(|p| piece_slabs(p).into_iter())
        .collect()
}

/// Exact overlap area of two rectangles with `rq` translated by `(tx, ty)`.
pub fn rect_overlap_at(rp: &Rect, rq: &Rect, tx: i64, ty: i64) -> i128 {
    let w = (rp.x1.min(rq.x1 + tx) - rp.x0.max(rq.x0 + tx)).max(0) as i128;
    let h = (rp.y1.min(rq.y1 + ty) - rp.y0.max(rq.y0 + ty)).max(0) as i128;
    w * h
}

/// The slab decomposition of the full overlap function of two rectangle
/// collections (the decompositions of the two polygons).
#[derive(Debug, Clone)]
pub struct SlabSet {
    slabs: Vec<TranslationSlab>,
}

impl SlabSet {
    pub fn build(p_rects: &[Rect], q_rects: &[Rect]) -> SlabSet {
        let mut slabs = Vec::with_capacity(p_rects.len() * q_rects.len() * 18);
        for rp in p_rects {
            for rq in q_rects {
                slabs.extend(rect_pair_slabs(rp, rq));
            }
        }
        SlabSet { slabs }
    }

    pub fn slabs(&self) -> &[TranslationSlab] {
        &self.slabs
    }

    /// Reference evaluator: sum the quadruples of every slab containing
    /// `(x, y)` and evaluate. Linear scan; for tests and oracles.
    pub fn value_rational(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let i = |v: i64| BigRational::from_integer(v.into());
        let (mut a, mut b, mut c, mut d) = (0i128, 0i128, 0i128, 0i128);
        for s in &self.slabs {
            if *x >= i(s.x0) && *x < i(s.x1) && *y >= i(s.y) {
                a += s.a as i128;
                b += s.b as i128;
                c += s.c as i128;
                d += s.d as i128;
            }
        }
        let r = |v: i128| BigRational::from_integer(v.into());
        r(a) + r(b) * x + r(c) * y + r(d) * x * y
    }

    pub fn value_int(&self, x: i64, y: i64) -> i128 {
        let (mut a, mut b, mut c, mut d) = (0i128, 0i128, 0i128, 0i128);
        for s in &self.slabs {
            if s.x0 <= x && x < s.x1 && y >= s.y {
                a += s.a as i128;
                b += s.b as i128;
                c += s.c as i128;
                d += s.d as i128;
            }
        }
        a + b * x as i128 + c * y as i128 + d * x as i128 * y as i128
    }
}

/// The grid of candidate translations: the overlap function is bilinear on
/// each cell of `xs × ys`, so its maximum over the plane is attained at a
/// grid point.
#[derive(Debug, Clone)]
pub struct CandidateGrid {
    pub xs: Vec<i64>,
    pub ys: Vec<i64>,
}

impl CandidateGrid {
    pub fn from_rects(p_rects: &[Rect], q_rects: &[Rect]) -> CandidateGrid {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for rp in p_rects {
            for rq in q_rects {
                // breakpoints of the two 1D convolutions
                xs.extend_from_slice(&[rp.x0 - rq.x1, rp.x0 - rq.x0, rp.x1 - rq.x1, rp.x1 - rq.x0]);
                ys.extend_from_slice(&[rp.y0 - rq.y1, rp.y0 - rq.y0, rp.y1 - rq.y1, rp.y1 - rq.y0]);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        CandidateGrid { xs, ys }
    }
}
