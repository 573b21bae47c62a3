//! Operational semantics: run a page through an actual deque, draw pairs of
//! edges on the cylinder by brute force, and search exhaustively for page
//! numbers of tiny graphs.
//!
//! The pairwise validator in [`crate::layout`] never lets two edges with a
//! common endpoint conflict. The deque does not agree: a head-tail edge
//! `(a, b)` pushed at the head is stuck behind a longer edge `(a, c)` pushed
//! at the tail. [`shared_endpoint_conflict`] lists exactly those cases, and
//! [`Semantics::Operational`] adds them to the pairwise test.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::bounds::density_lower_bound;
use crate::layout::{
    independent_conflict, EdgeType, Graph, LayoutKind, LinearLayout, Page, TypedEdge, VerificationReport, Vertex,
    VertexOrder, Violation,
};
use EdgeType::{HH, HT, TH, TT};

/// Most distinct endpoints a page may touch in [`simulate_page`].
pub const MAX_SIM_VERTICES: usize = 12;
/// Most edges a page may hold in [`simulate_page`].
pub const MAX_SIM_EDGES: usize = 20;
/// Most vertices a graph may have in [`exact_page_number`].
pub const MAX_EXACT_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("instance too large: {what} is {actual}, cap is {cap}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
    #[error("edge ({0}, {1}) has an endpoint outside the order")]
    OutsideOrder(Vertex, Vertex),
}

/// Live edges of one page, head at the front.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DequeState {
    pub content: VecDeque<usize>,
}

impl DequeState {
    pub fn insert(&mut self, edge: usize, at_head: bool) {
        if at_head {
            self.content.push_front(edge);
        } else {
            self.content.push_back(edge);
        }
    }

    /// Removes `edge` if it sits at the requested end.
    pub fn remove(&mut self, edge: usize, at_head: bool) -> bool {
        let end = if at_head {
            self.content.front()
        } else {
            self.content.back()
        };
        if end != Some(&edge) {
            return false;
        }
        if at_head {
            self.content.pop_front();
        } else {
            self.content.pop_back();
        }
        true
    }
}

/// How removals and insertions at one vertex may be ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Any interleaving.
    Interleaved,
    /// Every removal before the first insertion.
    RemovalsFirst,
}

struct Run {
    types: Vec<EdgeType>,
    starts: Vec<Vec<usize>>,
    ends: Vec<Vec<usize>>,
    schedule: Schedule,
    failed: HashSet<(usize, u32, u32, Vec<usize>)>,
}

impl Run {
    // `pending_r` / `pending_i` are bitmasks over the current vertex's lists.
    fn go(&mut self, pos: usize, state: &mut DequeState, pending_r: u32, pending_i: u32) -> bool {
        if pos == self.starts.len() {
            return true;
        }
        if pending_r == 0 && pending_i == 0 {
            let next = pos + 1;
            if next == self.starts.len() {
                return true;
            }
            let r = (1u32 << self.ends[next].len()) - 1;
            let i = (1u32 << self.starts[next].len()) - 1;
            return self.go(next, state, r, i);
        }
        let key = (pos, pending_r, pending_i, state.content.iter().copied().collect());
        if self.failed.contains(&key) {
            return false;
        }
        for k in 0..self.ends[pos].len() {
            if pending_r & (1 << k) == 0 {
                continue;
            }
            let e = self.ends[pos][k];
            let at_head = self.types[e].removes_at_head();
            let mut next = state.clone();
            if next.remove(e, at_head) && self.go(pos, &mut next, pending_r & !(1 << k), pending_i) {
                return true;
            }
        }
        if pending_r == 0 || self.schedule == Schedule::Interleaved {
            for k in 0..self.starts[pos].len() {
                if pending_i & (1 << k) == 0 {
                    continue;
                }
                let e = self.starts[pos][k];
                let mut next = state.clone();
                next.insert(e, self.types[e].inserts_at_head());
                if self.go(pos, &mut next, pending_r, pending_i & !(1 << k)) {
                    return true;
                }
            }
        }
        self.failed.insert(key);
        false
    }
}

/// Runs the page through a deque under [`Schedule::Interleaved`].
pub fn simulate_page(order: &VertexOrder, page: &Page) -> Result<bool, SimError> {
    simulate_page_with(order, page, Schedule::Interleaved)
}

/// True iff some per-vertex schedule of pushes and pops processes every edge
/// of `page`: each edge is pushed at its earlier endpoint at the end given by
/// its type and must be at the other named end when its later endpoint comes.
pub fn simulate_page_with(order: &VertexOrder, page: &Page, schedule: Schedule) -> Result<bool, SimError> {
    if page.len() > MAX_SIM_EDGES {
        return Err(SimError::TooLarge {
            what: "page edges",
            actual: page.len(),
            cap: MAX_SIM_EDGES,
        });
    }
    let mut ranks = Vec::with_capacity(page.len());
    for e in &page.edges {
        let r = e.ranks(order).ok_or(SimError::OutsideOrder(e.u, e.v))?;
        ranks.push(r);
    }
    let mut touched: Vec<usize> = ranks.iter().flat_map(|&(a, b)| [a, b]).collect();
    touched.sort_unstable();
    touched.dedup();
    if touched.len() > MAX_SIM_VERTICES {
        return Err(SimError::TooLarge {
            what: "page vertices",
            actual: touched.len(),
            cap: MAX_SIM_VERTICES,
        });
    }
    if page.is_empty() {
        return Ok(true);
    }
    let slot = |r: usize| touched.binary_search(&r).unwrap();
    let mut starts = vec![Vec::new(); touched.len()];
    let mut ends = vec![Vec::new(); touched.len()];
    for (i, &(a, b)) in ranks.iter().enumerate() {
        starts[slot(a)].push(i);
        ends[slot(b)].push(i);
    }
    let mut run = Run {
        types: page.edges.iter().map(|e| e.etype).collect(),
        starts,
        ends,
        schedule,
        failed: HashSet::new(),
    };
    let r = (1u32 << run.ends[0].len()) - 1;
    let i = (1u32 << run.starts[0].len()) - 1;
    Ok(run.go(0, &mut DequeState::default(), r, i))
}

/// Conflicts between two edges that share exactly one endpoint, with ranks
/// `a < b < c`.
///
/// * common left end, long `(a, c)` and short `(a, b)`: the short edge wraps
///   and the long one is pushed at the other end;
/// * common right end, long `(a, c)` and short `(b, c)`: the short edge wraps
///   and the long one is popped from the other end;
/// * a path `(a, b)`, `(b, c)` never conflicts.
///
/// `x` is the type of the long edge (the first edge of a path), `y` the type
/// of the short one.
pub fn shared_endpoint_conflict(shape: SharedShape, x: EdgeType, y: EdgeType) -> bool {
    match shape {
        SharedShape::Left => y.wraps() && y.inserts_at_head() != x.inserts_at_head(),
        SharedShape::Right => y.wraps() && y.removes_at_head() != x.removes_at_head(),
        SharedShape::Path => false,
    }
}

/// How two edges with one common endpoint sit on the spine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharedShape {
    /// `(a, c)` and `(a, b)`.
    Left,
    /// `(a, c)` and `(b, c)`.
    Right,
    /// `(a, b)` and `(b, c)`.
    Path,
}

/// Conflict rule of the pairwise validator or of the deque itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Edges with a common endpoint never conflict.
    #[default]
    Pairwise,
    /// Adds [`shared_endpoint_conflict`].
    Operational,
}

fn rank_conflict(sem: Semantics, (a, b): (usize, usize), x: EdgeType, (c, d): (usize, usize), y: EdgeType) -> bool {
    if a != c && a != d && b != c && b != d {
        return independent_conflict(a, b, x, c, d, y);
    }
    if sem == Semantics::Pairwise || (a == c && b == d) {
        return false;
    }
    if a == c {
        return if b > d {
            shared_endpoint_conflict(SharedShape::Left, x, y)
        } else {
            shared_endpoint_conflict(SharedShape::Left, y, x)
        };
    }
    if b == d {
        return if a < c {
            shared_endpoint_conflict(SharedShape::Right, x, y)
        } else {
            shared_endpoint_conflict(SharedShape::Right, y, x)
        };
    }
    false
}

/// Conflict test for two typed edges under the given semantics.
pub fn edges_conflict_with(sem: Semantics, order: &VertexOrder, e: &TypedEdge, f: &TypedEdge) -> bool {
    let r = e.ranks(order).expect("edge endpoint outside order");
    let s = f.ranks(order).expect("edge endpoint outside order");
    rank_conflict(sem, r, e.etype, s, f.etype)
}

/// [`crate::validate_layout`] plus every shared-endpoint conflict.
pub fn validate_layout_operational(layout: &LinearLayout) -> VerificationReport {
    let mut report = crate::validate_layout(layout);
    if report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::OrderDefect { .. }))
    {
        return report;
    }
    for (i, page) in layout.pages.iter().enumerate() {
        for (j, e) in page.edges.iter().enumerate() {
            for f in &page.edges[j + 1..] {
                if e.shares_endpoint(f)
                    && e.key() != f.key()
                    && edges_conflict_with(Semantics::Operational, &layout.order, e, f)
                {
                    report.violations.push(Violation::Conflict {
                        page: i,
                        first: *e,
                        second: *f,
                    });
                }
            }
        }
    }
    report.valid = report.violations.is_empty();
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Above,
    Below,
}

fn half_arcs(a: usize, b: usize, t: EdgeType, wrap: usize) -> Vec<(Side, usize, usize)> {
    match t {
        HH => vec![(Side::Above, a, b)],
        TT => vec![(Side::Below, a, b)],
        HT => vec![(Side::Above, a, wrap), (Side::Below, b, wrap)],
        TH => vec![(Side::Below, a, wrap), (Side::Above, b, wrap)],
    }
}

fn arcs_cross(p: (Side, usize, usize), q: (Side, usize, usize)) -> bool {
    let ((s, a, b), (t, c, d)) = (p, q);
    if s != t || a == c || a == d || b == c || b == d {
        return false;
    }
    let (a, b) = (a.min(b), a.max(b));
    let (c, d) = (c.min(d), c.max(d));
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Brute-force drawing oracle: can edges `(a, b)` and `(c, d)` (ranks, `a < b`,
/// `c < d`) with types `x` and `y` be drawn on the cylinder without crossing?
///
/// Each edge is split into half-circles above or below the spine; wrapping
/// edges go through their own point right of every vertex, and both orders of
/// the two wrap points are tried. Half-circles on one side cross exactly when
/// their endpoints alternate. Shared endpoints are allowed.
pub fn cylindric_pair_drawable(a: usize, b: usize, x: EdgeType, c: usize, d: usize, y: EdgeType) -> bool {
    let far = a.max(b).max(c).max(d) + 1;
    [(far, far + 1), (far + 1, far)]
        .into_iter()
        .any(|(p, q)| drawable_with_wraps((a, b, x, p), (c, d, y, q)))
}

/// Whether two edges `(left, right, type, wrap point)` avoid each other with
/// the given wrap points, which must lie right of every endpoint.
pub(crate) fn drawable_with_wraps(e: (usize, usize, EdgeType, usize), f: (usize, usize, EdgeType, usize)) -> bool {
    let e = half_arcs(e.0, e.1, e.2, e.3);
    let f = half_arcs(f.0, f.1, f.2, f.3);
    !e.iter().any(|&h| f.iter().any(|&k| arcs_cross(h, k)))
}

/// True iff no three edges `(a, a')`, `(b, b')`, `(c, c')` satisfy
/// `a < b < c < b' < a'` and `b' < c'` in the order.
pub fn rique_pattern_check(order: &VertexOrder, edges: &[(Vertex, Vertex)]) -> bool {
    let spans: Vec<(usize, usize)> = edges
        .iter()
        .filter_map(|&(u, v)| {
            let (ru, rv) = (order.rank(u)?, order.rank(v)?);
            Some((ru.min(rv), ru.max(rv)))
        })
        .collect();
    // any edge around (b, b') and any edge leaving it to the right complete
    // the pattern, since both orderings of a and c against b are forced
    !spans.iter().any(|&(b, b2)| {
        spans.iter().any(|&(a, a2)| a < b && b2 < a2) && spans.iter().any(|&(c, c2)| b < c && c < b2 && b2 < c2)
    })
}

/// Result of [`exact_page_number`].
#[derive(Debug, Clone)]
pub enum ExactOutcome {
    Found { pages: usize, witness: LinearLayout },
    ExceedsMax { max_pages: usize },
}

impl ExactOutcome {
    pub fn pages(&self) -> Option<usize> {
        match self {
            ExactOutcome::Found { pages, .. } => Some(*pages),
            ExactOutcome::ExceedsMax { .. } => None,
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if g.edges().iter().all(|&(u, v)| g.contains_edge(perm[u], perm[v])) {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

/// Spine orders up to graph automorphism and, for kinds closed under it, up
/// to reversal.
///
/// Reversing the order swaps pushes with pops, turning HT into TH; combined
/// with renaming head and tail this maps stack, queue and deque layouts to
/// layouts of the same kind but takes riques outside {HH, HT}, so riques keep
/// both directions. Fixing an arbitrary vertex first is only sound for
/// vertex-transitive graphs, which is why orbits are computed instead.
fn order_representatives(g: &Graph, kind: LayoutKind) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let auts = automorphisms(g);
    let reverse = kind != LayoutKind::Rique;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps = Vec::new();
    let mut seq: Vec<usize> = (0..n).collect();
    loop {
        if !seen.contains(&seq) {
            reps.push(seq.clone());
            for a in &auts {
                let img: Vec<usize> = seq.iter().map(|&v| a[v]).collect();
                if reverse {
                    seen.insert(img.iter().rev().copied().collect());
                }
                seen.insert(img);
            }
        }
        if !next_permutation(&mut seq) {
            return reps;
        }
    }
}

struct Assign<'a> {
    spans: Vec<(usize, usize)>,
    types: &'a [EdgeType],
    sem: Semantics,
    pages: usize,
    on_page: Vec<Vec<(usize, EdgeType)>>,
    choice: Vec<(usize, EdgeType)>,
}

impl Assign<'_> {
    fn go(&mut self, i: usize, used: usize) -> bool {
        if i == self.spans.len() {
            return true;
        }
        let s = self.spans[i];
        for p in 0..self.pages.min(used + 1) {
            for &t in self.types {
                // a fresh page may take any type; renaming head and tail on
                // that page is a symmetry, so its first edge inserts at head
                if p == used && !t.inserts_at_head() {
                    continue;
                }
                let sem = self.sem;
                let spans = &self.spans;
                if self.on_page[p]
                    .iter()
                    .any(|&(j, u)| rank_conflict(sem, s, t, spans[j], u))
                {
                    continue;
                }
                self.on_page[p].push((i, t));
                self.choice[i] = (p, t);
                if self.go(i + 1, used.max(p + 1)) {
                    return true;
                }
                self.on_page[p].pop();
            }
        }
        false
    }
}

/// Tries to place `g`'s edges on `pages` pages of `kind` with `seq` as the spine.
fn assign_on_order(g: &Graph, seq: &[usize], kind: LayoutKind, pages: usize, sem: Semantics) -> Option<LinearLayout> {
    let order = VertexOrder::new(seq.to_vec()).expect("permutation");
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().to_vec();
    let span = |&(u, v): &(Vertex, Vertex)| {
        let (a, b) = (order.rank(u).unwrap(), order.rank(v).unwrap());
        (a.min(b), a.max(b))
    };
    // long edges first: they constrain the most
    edges.sort_by_key(|e| {
        let (a, b) = span(e);
        (std::cmp::Reverse(b - a), a)
    });
    let mut run = Assign {
        spans: edges.iter().map(span).collect(),
        types: kind.allowed_types(),
        sem,
        pages,
        on_page: vec![Vec::new(); pages],
        choice: vec![(0, HH); edges.len()],
    };
    if !run.go(0, 0) {
        return None;
    }
    let mut out = vec![Page::default(); pages];
    for (k, &(p, t)) in run.choice.iter().enumerate() {
        let (u, v) = edges[k];
        out[p].edges.push(TypedEdge::new(u, v, t).oriented(&order));
    }
    let layout = LinearLayout::new(g.clone(), order, out, kind)
        .expect("shape")
        .canonical();
    Some(layout)
}

/// Least `p <= max_pages` such that `g` has a valid `p`-page layout of `kind`,
/// by exhaustive search over spine orders, page assignments and types.
pub fn exact_page_number(g: &Graph, kind: LayoutKind, max_pages: usize) -> Result<ExactOutcome, SimError> {
    exact_page_number_with(g, kind, max_pages, Semantics::Pairwise)
}

pub fn exact_page_number_with(
    g: &Graph,
    kind: LayoutKind,
    max_pages: usize,
    sem: Semantics,
) -> Result<ExactOutcome, SimError> {
    let n = g.num_vertices();
    if n > MAX_EXACT_VERTICES {
        return Err(SimError::TooLarge {
            what: "graph vertices",
            actual: n,
            cap: MAX_EXACT_VERTICES,
        });
    }
    let lo = if n >= 3 && g.num_edges() > 0 {
        density_lower_bound(n as u64, g.num_edges() as u64, kind).unwrap_or(1) as usize
    } else {
        1
    };
    if g.num_edges() == 0 && max_pages >= 1 {
        let layout =
            LinearLayout::new(g.clone(), VertexOrder::identity(n), vec![Page::default()], kind).expect("shape");
        return Ok(ExactOutcome::Found {
            pages: 1,
            witness: layout,
        });
    }
    let reps = order_representatives(g, kind);
    for p in lo..=max_pages {
        for seq in &reps {
            if let Some(witness) = assign_on_order(g, seq, kind, p, sem) {
                return Ok(ExactOutcome::Found { pages: p, witness });
            }
        }
    }
    Ok(ExactOutcome::ExceedsMax { max_pages })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page(edges: &[(usize, usize, EdgeType)]) -> Page {
        Page::new(edges.iter().map(|&(u, v, t)| TypedEdge::new(u, v, t)).collect())
    }

    #[test]
    fn twist_and_queue() {
        let o = VertexOrder::identity(4);
        assert!(!simulate_page(&o, &page(&[(0, 2, HH), (1, 3, HH)])).unwrap());
        assert!(simulate_page(&o, &page(&[(0, 2, HT), (1, 3, HT)])).unwrap());
        assert!(simulate_page(&o, &page(&[(0, 2, HH), (1, 3, TT)])).unwrap());
        assert!(simulate_page(&o, &page(&[])).unwrap());
    }

    #[test]
    fn shared_endpoint_blocking() {
        let o = VertexOrder::identity(3);
        // HT (0,1) pushed at head, TT (0,2) at tail: the tail is never (0,1)
        assert!(!simulate_page(&o, &page(&[(0, 1, HT), (0, 2, TT)])).unwrap());
        assert!(simulate_page(&o, &page(&[(0, 1, HT), (0, 2, HH)])).unwrap());
        assert!(!simulate_page(&o, &page(&[(0, 2, HH), (1, 2, HT)])).unwrap());
        assert!(simulate_page(&o, &page(&[(0, 1, TH), (1, 2, HT)])).unwrap());
    }

    #[test]
    fn size_cap() {
        let o = VertexOrder::identity(30);
        let big = page(&(0..21).map(|i| (i, i + 1, HH)).collect::<Vec<_>>());
        assert!(matches!(simulate_page(&o, &big), Err(SimError::TooLarge { .. })));
        let wide = page(&(0..7).map(|i| (2 * i, 2 * i + 1, HH)).collect::<Vec<_>>());
        assert!(matches!(simulate_page(&o, &wide), Err(SimError::TooLarge { .. })));
    }

    #[test]
    fn drawing_oracle_examples() {
        assert!(!cylindric_pair_drawable(1, 3, HH, 2, 4, HH));
        assert!(cylindric_pair_drawable(1, 3, HH, 2, 4, TT));
        assert!(!cylindric_pair_drawable(1, 4, HH, 2, 3, HT));
        assert!(cylindric_pair_drawable(1, 2, HT, 3, 4, TH));
        assert!(!cylindric_pair_drawable(1, 3, HT, 2, 4, TH));
    }

    #[test]
    fn pattern_examples() {
        let o = VertexOrder::identity(6);
        assert!(!rique_pattern_check(&o, &[(0, 4), (1, 3), (2, 5)]));
        assert!(rique_pattern_check(&o, &[(0, 4)]));
        assert!(rique_pattern_check(&o, &[(0, 4), (1, 3)]));
    }

    #[test]
    fn tiny_exact_numbers() {
        let k4 = Graph::complete(4);
        assert_eq!(exact_page_number(&k4, LayoutKind::Deque, 3).unwrap().pages(), Some(1));
        assert_eq!(exact_page_number(&k4, LayoutKind::Rique, 3).unwrap().pages(), Some(1));
        let k5 = Graph::complete(5);
        assert_eq!(exact_page_number(&k5, LayoutKind::Deque, 3).unwrap().pages(), Some(2));
        assert!(matches!(
            exact_page_number(&k5, LayoutKind::Deque, 1).unwrap(),
            ExactOutcome::ExceedsMax { max_pages: 1 }
        ));
        assert!(exact_page_number(&Graph::complete(9), LayoutKind::Deque, 3).is_err());
    }

    #[test]
    fn representatives_of_path() {
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        // 6 orders, automorphism swaps 0 and 2, reversal folds again
        assert_eq!(order_representatives(&p3, LayoutKind::Deque).len(), 2);
        assert_eq!(order_representatives(&p3, LayoutKind::Rique).len(), 3);
        assert_eq!(order_representatives(&Graph::complete(5), LayoutKind::Rique).len(), 1);
    }
}
