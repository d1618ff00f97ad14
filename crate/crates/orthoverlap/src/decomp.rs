//! Decomposition of an orthogonal polygon into disjoint rectangles.
//!
//! A bottom-up sweep over the horizontal edges keeps the currently "open"
//! x-intervals in a `BTreeMap`. A west→east edge (interior above, since
//! vertices are counterclockwise) opens an interval; an east→west edge closes
//! the parts of open intervals it covers, emitting one rectangle per covered
//! part. Ends of a closing edge may split an open interval, leaving
//! remainders that keep their original opening height, so rectangles are
//! maximal in the vertical direction.
//!
//! For an `n`-vertex polygon this emits fewer than `n` rectangles, all of
//! whose coordinates are coordinates of the polygon itself.

use crate::poly::{OrthoPolygon, Rect};
use std::collections::BTreeMap;

/// Split `p` into disjoint rectangles whose union is exactly `p`.
pub fn decompose(p: &OrthoPolygon) -> Vec<Rect> {
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    enum Kind {
        Remove,
        Add,
    }
    let mut events: Vec<(i64, Kind, i64, i64)> = Vec::with_capacity(p.len() / 2);
    for (a, b) in p.edges() {
        if a.y == b.y {
            if a.x < b.x {
                events.push((a.y, Kind::Add, a.x, b.x));
            } else {
                events.push((a.y, Kind::Remove, b.x, a.x));
            }
        }
    }
    events.sort_by(|l, r| (l.0, &l.1).cmp(&(r.0, &r.1)));

    let mut open: BTreeMap<i64, (i64, i64)> = BTreeMap::new(); // x0 -> (x1, y_open)
    let mut out: Vec<Rect> = Vec::new();
    for (y, kind, xlo, xhi) in events {
        match kind {
            Kind::Add => {
                if let Some((_, &(prev_x1, _))) = open.range(..xlo).next_back() {
                    debug_assert!(prev_x1 <= xlo, "overlapping open intervals");
                }
                if let Some((&next_x0, _)) = open.range(xlo..).next() {
                    debug_assert!(next_x0 >= xhi, "overlapping open intervals");
                }
                open.insert(xlo, (xhi, y));
            }
            Kind::Remove => {
                let mut cur = xlo;
                while cur < xhi {
                    let (&k, &(x1, y0)) = open
                        .range(..=cur)
                        .next_back()
                        .expect("closing edge over a gap; polygon invariant broken");
                    debug_assert!(x1 > cur, "closing edge over a gap");
                    open.remove(&k);
                    if k < cur {
                        open.insert(k, (cur, y0)); // left remainder
                    }
                    let hi = x1.min(xhi);
                    debug_assert!(y0 < y);
                    out.push(Rect::new(cur, y0, hi, y));
                    if x1 > xhi {
                        open.insert(xhi, (x1, y0)); // right remainder
                    }
                    cur = hi;
                }
            }
        }
    }
    debug_assert!(open.is_empty(), "unclosed intervals after sweep");
    debug_assert!(out.len() < p.len());
    debug_assert_eq!(out.iter().map(Rect::area).sum::<i64>(), p.area());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Point;

    fn poly(v: &[(i64, i64)]) -> OrthoPolygon {
        OrthoPolygon::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn check(p: &OrthoPolygon) -> Vec<Rect> {
        let rects = decompose(p);
        assert!(rects.len() < p.len());
        assert_eq!(rects.iter().map(Rect::area).sum::<i64>(), p.area());
        // pairwise interior-disjoint
        for (i, a) in rects.iter().enumerate() {
            for b in &rects[i + 1..] {
                let dx = a.x0.max(b.x0) < a.x1.min(b.x1);
                let dy = a.y0.max(b.y0) < a.y1.min(b.y1);
                assert!(!(dx && dy), "rectangles overlap: {a:?} {b:?}");
            }
        }
        // rectangle corners use polygon coordinates only
        let xs: std::collections::HashSet<i64> = p.vertices().iter().map(|q| q.x).collect();
        let ys: std::collections::HashSet<i64> = p.vertices().iter().map(|q| q.y).collect();
        for r in &rects {
            assert!(xs.contains(&r.x0) && xs.contains(&r.x1));
            assert!(ys.contains(&r.y0) && ys.contains(&r.y1));
        }
        rects
    }

    #[test]
    fn square_is_one_rect() {
        let p = poly(&[(0, 0), (5, 0), (5, 3), (0, 3)]);
        let r = check(&p);
        assert_eq!(r, vec![Rect::new(0, 0, 5, 3)]);
    }

    #[test]
    fn l_shape_two_rects() {
        let p = poly(&[(0, 0), (3, 0), (3, 1), (1, 1), (1, 2), (0, 2)]);
        let r = check(&p);
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn arch_three_rects() {
        // two towers joined by a top bar; the closing edge spans three segments
        let p = poly(&[
            (0, 0),
            (1, 0),
            (1, 2),
            (3, 2),
            (3, 0),
            (4, 0),
            (4, 3),
            (0, 3),
        ]);
        let r = check(&p);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn notch_splits_interval() {
        // removal strictly inside an open interval leaves two remainders
        let p = poly(&[
            (0, 0),
            (10, 0),
            (10, 8),
            (7, 8),
            (7, 5),
            (3, 5),
            (3, 8),
            (0, 8),
        ]);
        let r = check(&p);
        assert_eq!(r.len(), 3);
        assert!(r.contains(&Rect::new(3, 0, 7, 5)));
        assert!(r.contains(&Rect::new(0, 0, 3, 8)));
        assert!(r.contains(&Rect::new(7, 0, 10, 8)));
    }

    #[test]
    fn staircase() {
        let p = poly(&[
            (0, 0),
            (4, 0),
            (4, 1),
            (3, 1),
            (3, 2),
            (2, 2),
            (2, 3),
            (1, 3),
            (1, 4),
            (0, 4),
        ]);
        check(&p);
    }

    #[test]
    fn holeless_comb() {
        let p = poly(&[
            (0, 0),
            (7, 0),
            (7, 3),
            (6, 3),
            (6, 1),
            (5, 1),
            (5, 3),
            (4, 3),
            (4, 1),
            (3, 1),
            (3, 3),
            (2, 3),
            (2, 1),
            (1, 1),
            (1, 3),
            (0, 3),
        ]);
        let r = check(&p);
        assert_eq!(r.iter().map(Rect::area).sum::<i64>(), p.area());
    }
}
