//! Segment tree over grid columns, accumulating bilinear coefficients.
//!
//! Both solvers sweep slabs bottom-up by their `y`. The active coefficient
//! quadruple for a column interval is maintained in a classic iterative
//! segment tree: a slab touching columns `[l, r)` adds its quadruple to
//! `O(log)` nodes, and the summed quadruple at one column is the sum along
//! the leaf-to-root path. The tree counts node visits so solvers can report
//! machine-independent work.

/// Coefficients of `a + b·x + c·y + d·x·y`, summed over active slabs.
/// Stored in i128: with coordinates below 2^21 and up to ~2^35 slabs the
/// sums stay under ~2^77 and evaluations under ~2^81.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoeffQuad {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl CoeffQuad {
    pub const ZERO: CoeffQuad = CoeffQuad {
        a: 0,
        b: 0,
        c: 0,
        d: 0,
    };

    pub fn from_slab(s: &crate::kernel::TranslationSlab) -> CoeffQuad {
        CoeffQuad {
            a: s.a as i128,
            b: s.b as i128,
            c: s.c as i128,
            d: s.d as i128,
        }
    }

    pub fn add(&mut self, o: &CoeffQuad) {
        self.a += o.a;
        self.b += o.b;
        self.c += o.c;
        self.d += o.d;
    }

    pub fn sub(&mut self, o: &CoeffQuad) {
        self.a -= o.a;
        self.b -= o.b;
        self.c -= o.c;
        self.d -= o.d;
    }

    pub fn value_at(&self, x: i64, y: i64) -> i128 {
        self.a + self.b * x as i128 + self.c * y as i128 + self.d * x as i128 * y as i128
    }
}

/// Segment tree over `n` columns; see module docs.
pub struct SlabTree {
    size: usize,
    n: usize,
    nodes: Vec<CoeffQuad>,
    /// Total nodes visited by `range_add` and `point_sum` since construction.
    pub node_touches: u64,
}

impl SlabTree {
    pub fn new(n: usize) -> SlabTree {
        let size = n.max(1).next_power_of_two();
        SlabTree {
            size,
            n,
            nodes: vec![CoeffQuad::ZERO; 2 * size],
            node_touches: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Add `q` over columns `[l, r)`.
    pub fn range_add(&mut self, l: usize, r: usize, q: &CoeffQuad) {
        debug_assert!(l <= r && r <= self.n);
        let mut l = l + self.size;
        let mut r = r + self.size;
        while l < r {
            if l & 1 == 1 {
                self.nodes[l].add(q);
                self.node_touches += 1;
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                self.nodes[r].add(q);
                self.node_touches += 1;
            }
            l >>= 1;
            r >>= 1;
        }
    }

    /// Summed quadruple active at column `i`.
    pub fn point_sum(&mut self, i: usize) -> CoeffQuad {
        debug_assert!(i < self.n);
        let mut i = i + self.size;
        let mut acc = CoeffQuad::ZERO;
        while i >= 1 {
            acc.add(&self.nodes[i]);
            self.node_touches += 1;
            i >>= 1;
        }
        acc
    }

    /// Summed quadruples for a list of columns, in order.
    pub fn batch_query(&mut self, columns: &[usize]) -> Vec<CoeffQuad> {
        columns.iter().map(|&i| self.point_sum(i)).collect()
    }
}
