//! Pairwise compatibility of typed edges in the cylindric drawing model.
//!
//! Vertices sit on a horizontal spine. Head-head and tail-tail edges are single
//! arcs above and below the spine; head-tail and tail-head edges leave their
//! earlier endpoint on one side, wrap around a point right of the last vertex
//! and come back to their later endpoint on the other side. Two edges conflict
//! when no choice of wrap points avoids a crossing.

use super::{EdgeType, LayoutError, TypedEdge, VertexOrder};
use EdgeType::{HH, HT, TH, TT};

fn inside(p: usize, lo: usize, hi: usize) -> bool {
    lo < p && p < hi
}

fn alternate(a: usize, b: usize, c: usize, d: usize) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

fn nest(a: usize, b: usize, c: usize, d: usize) -> bool {
    (a < c && d < b) || (c < a && b < d)
}

/// Conflict test for two independent edges given as sorted rank intervals.
///
/// The caller guarantees `a < b`, `c < d` and that all four ranks are distinct.
pub fn independent_conflict(a: usize, b: usize, x: EdgeType, c: usize, d: usize, y: EdgeType) -> bool {
    match (x, y) {
        (HH, HH) | (TT, TT) => alternate(a, b, c, d),
        (HH, TT) | (TT, HH) => false,
        // the arc above the spine from the wrapping edge's left endpoint
        (HH, HT) => inside(c, a, b),
        (HT, HH) => inside(a, c, d),
        // the arc above the spine into the wrapping edge's right endpoint
        (HH, TH) => inside(d, a, b),
        (TH, HH) => inside(b, c, d),
        (TT, HT) => inside(d, a, b),
        (HT, TT) => inside(b, c, d),
        (TT, TH) => inside(c, a, b),
        (TH, TT) => inside(a, c, d),
        (HT, HT) | (TH, TH) => nest(a, b, c, d),
        (HT, TH) | (TH, HT) => !(b < c || d < a),
    }
}

/// Whether two independent edges with rank intervals `(a, b)` and `(c, d)`
/// can share a page with types `x` and `y`.
///
/// Returns an error unless `a < b`, `c < d` and the four ranks are distinct;
/// edges sharing an endpoint never conflict and must be filtered out first.
pub fn conflicts(a: usize, b: usize, x: EdgeType, c: usize, d: usize, y: EdgeType) -> Result<bool, LayoutError> {
    if a >= b || c >= d {
        return Err(LayoutError::InvalidArgument(format!(
            "rank intervals must be sorted: ({a}, {b}), ({c}, {d})"
        )));
    }
    if a == c || a == d || b == c || b == d {
        return Err(LayoutError::InvalidArgument(format!(
            "edges ({a}, {b}) and ({c}, {d}) share an endpoint"
        )));
    }
    Ok(independent_conflict(a, b, x, c, d, y))
}

/// Conflict test for two typed edges under `order`. Edges sharing an endpoint
/// never conflict. Both edges must have endpoints inside the order.
pub fn edges_conflict(order: &VertexOrder, e: &TypedEdge, f: &TypedEdge) -> bool {
    if e.shares_endpoint(f) {
        return false;
    }
    let (a, b) = e.ranks(order).expect("edge endpoint outside order");
    let (c, d) = f.ranks(order).expect("edge endpoint outside order");
    independent_conflict(a, b, e.etype, c, d, f.etype)
}
