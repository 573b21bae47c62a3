//! Explicit layouts of complete and complete bipartite graphs.
//!
//! * [`stack_layout_kn`], [`merge_stacks_to_deques`], [`deque_layout_kn`]:
//!   `ceil(n/4)` deques for `K_n` by pairing zig-zag stack pages.
//! * [`rique_layout_kn`]: `max(1, floor((n-1)/3))` riques for `K_n`.
//! * [`deque_layout_knn`]: `n/3` deques for `K_{n,n}`.
//! * [`rique_layout_knn`]: `floor((n-1)/2) - 1` riques for `K_{n,n}`.
//!
//! The last three transcribe published per-page edge lists. Those lists need a
//! handful of index repairs before they partition the edge set without
//! conflicts; each repair carries an id (`KR0-1`, `KD-7`, ...) at the bullet it
//! touches, and `docs/CORRECTIONS.md` explains every id. Pages and bullets are
//! numbered from 1 in comments to match that document; the produced layouts
//! number pages from 0.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::{
    induced_sublayout, EdgeType, Graph, LayoutError, LayoutKind, LinearLayout, Page, TypedEdge, Vertex, VertexOrder,
};
use EdgeType::{HH, HT, TH, TT};

/// Smallest `n` for which [`rique_layout_kn`] is valid, indexed by `n % 3`.
pub const RIQUE_KN_MIN: [usize; 3] = [21, 10, 11];
/// Smallest multiple of three for which [`deque_layout_knn`] builds directly.
pub const DEQUE_KNN_MIN: usize = 36;
/// Smallest odd `n` for which [`rique_layout_knn`] is valid.
pub const RIQUE_KNN_MIN_ODD: usize = 27;
/// Smallest even `n` for which [`rique_layout_knn`] is valid.
pub const RIQUE_KNN_MIN_EVEN: usize = 28;

/// Every correction id used by the generators in this module.
pub const CORRECTION_IDS: &[&str] = &[
    "KR0-1", "KR0-2", "KR0-3", "KR0-4", "KR0-5", "KR0-C", "KR2-1", "KR2-2", "KR2-3", "KR2-C", "KD-1", "KD-2", "KD-3",
    "KD-4", "KD-5", "KD-6", "KD-7", "KD-8", "KD-9", "KD-10", "KD-11", "KD-12", "KD-C", "BR-1", "BR-2", "BR-3", "BR-4",
    "BR-5", "BR-6", "BR-7", "BR-C",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(
        "{family} has no construction for n = {n}; it needs n >= {n_min}{hint} (use the SAT search for smaller sizes)"
    )]
    UnsupportedSize {
        family: Family,
        n: usize,
        n_min: usize,
        hint: &'static str,
    },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// The generated families, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    KnStack,
    KnDeque,
    KnRique,
    KnnDeque,
    KnnRique,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::KnStack,
        Family::KnDeque,
        Family::KnRique,
        Family::KnnDeque,
        Family::KnnRique,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::KnStack => "kn-stack",
            Family::KnDeque => "kn-deque",
            Family::KnRique => "kn-rique",
            Family::KnnDeque => "knn-deque",
            Family::KnnRique => "knn-rique",
        }
    }

    /// Builds the family member for parameter `n`.
    pub fn generate(self, n: usize) -> Result<LinearLayout, ConstructionError> {
        match self {
            Family::KnStack => stack_layout_kn(n),
            Family::KnDeque => deque_layout_kn(n),
            Family::KnRique => rique_layout_kn(n),
            Family::KnnDeque => deque_layout_knn(n),
            Family::KnnRique => rique_layout_knn(n),
        }
    }

    /// Page count the construction achieves for `n`.
    pub fn expected_pages(self, n: usize) -> usize {
        match self {
            Family::KnStack => n.div_ceil(2),
            Family::KnDeque => n.div_ceil(4),
            Family::KnRique => ((n.saturating_sub(1)) / 3).max(1),
            Family::KnnDeque => n.div_ceil(3),
            Family::KnnRique => (n.saturating_sub(1) / 2).saturating_sub(1),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| ConstructionError::InvalidArgument(format!("unknown family {s:?}")))
    }
}

/// Vertex ids of `K_{n,n}`: `a_i` is `i - 1` and `b_j` is `n + j - 1`, both
/// 1-based in their part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteLabels {
    pub n: usize,
}

impl BipartiteLabels {
    pub fn new(n: usize) -> Self {
        BipartiteLabels { n }
    }

    pub fn a(&self, i: usize) -> Vertex {
        debug_assert!((1..=self.n).contains(&i));
        i - 1
    }

    pub fn b(&self, j: usize) -> Vertex {
        debug_assert!((1..=self.n).contains(&j));
        self.n + j - 1
    }

    /// Inverse mapping: `('a', i)` or `('b', j)`.
    pub fn label(&self, v: Vertex) -> (char, usize) {
        if v < self.n {
            ('a', v + 1)
        } else {
            ('b', v - self.n + 1)
        }
    }

    pub fn graph(&self) -> Graph {
        Graph::complete_bipartite(self.n)
    }
}

/// Collects bullet edges page by page. Indices are signed so that printed
/// formulas can be written as they read; a bullet that lists an edge already
/// present on the same page with the same type is a harmless repeat and is
/// dropped.
struct Sheets {
    pages: Vec<Vec<TypedEdge>>,
    seen: Vec<HashMap<(Vertex, Vertex), EdgeType>>,
}

impl Sheets {
    fn new(num_pages: usize) -> Self {
        Sheets {
            pages: vec![Vec::new(); num_pages],
            seen: vec![HashMap::new(); num_pages],
        }
    }

    fn put(&mut self, page: i64, t: EdgeType, edges: impl IntoIterator<Item = (Vertex, Vertex)>) {
        let p = (page - 1) as usize;
        for (u, v) in edges {
            let e = TypedEdge::new(u, v, t);
            match self.seen[p].insert(e.key(), t) {
                None => self.pages[p].push(e),
                Some(prev) => assert_eq!(prev, t, "edge {:?} typed twice on page {page}", e.key()),
            }
        }
    }

    fn finish(self, graph: Graph, order: VertexOrder, kind: LayoutKind) -> Result<LinearLayout, LayoutError> {
        let pages = self.pages.into_iter().map(Page::new).collect();
        LinearLayout::new(graph, order, pages, kind)
    }
}

/// Inclusive range, empty when `lo > hi`.
fn span(lo: i64, hi: i64) -> impl Iterator<Item = i64> + Clone {
    lo..=hi
}

/// Pairs `(i_hi - k, j_lo + k)` and `(i_hi - k - 1, j_lo + k)` for `k = 0, 1, ...`
/// while the row stays `>= i_lo` and the column `<= j_hi`.
fn vstair(i_hi: i64, i_lo: i64, j_lo: i64, j_hi: i64) -> Vec<(i64, i64)> {
    (0..)
        .take_while(|k| i_hi - k >= i_lo && j_lo + k <= j_hi)
        .flat_map(|k| [(i_hi - k, j_lo + k), (i_hi - k - 1, j_lo + k)])
        .collect()
}

/// Pairs `(i_hi - k, j_lo + k)` and `(i_hi - k, j_lo + k + 1)`, same bounds as
/// [`vstair`].
fn hstair(i_hi: i64, i_lo: i64, j_lo: i64, j_hi: i64) -> Vec<(i64, i64)> {
    (0..)
        .take_while(|k| i_hi - k >= i_lo && j_lo + k <= j_hi)
        .flat_map(|k| [(i_hi - k, j_lo + k), (i_hi - k, j_lo + k + 1)])
        .collect()
}

/// `ceil(n/2)` stack pages for `K_n` on the identity order. Page `i` is the
/// zig-zag Hamiltonian path `i, i+1, i-1, i+2, i-2, ...` (indices mod `n`, with
/// a dummy vertex added when `n` is odd).
pub fn stack_layout_kn(n: usize) -> Result<LinearLayout, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let m = n + n % 2;
    let mut pages = Vec::with_capacity(m / 2);
    for i in 0..m / 2 {
        let mut path = vec![i];
        for k in 1..=m / 2 {
            path.push((i + k) % m);
            if path.len() < m {
                path.push((i + m - k) % m);
            }
        }
        let edges = path
            .windows(2)
            .filter(|w| w[0] < n && w[1] < n)
            .map(|w| TypedEdge::new(w[0], w[1], HH).oriented(&VertexOrder::identity(n)))
            .collect();
        pages.push(Page::new(edges));
    }
    Ok(LinearLayout::new(
        Graph::complete(n),
        VertexOrder::identity(n),
        pages,
        LayoutKind::Stack,
    )?)
}

/// Pairs stack pages `(0, 1), (2, 3), ...` into deque pages: the first stack
/// goes above the spine (HH), the second below it (TT).
pub fn merge_stacks_to_deques(stacks: &LinearLayout) -> LinearLayout {
    let pages = stacks
        .pages
        .chunks(2)
        .map(|pair| {
            let mut edges: Vec<TypedEdge> = pair[0].edges.iter().map(|e| TypedEdge { etype: HH, ..*e }).collect();
            if let Some(second) = pair.get(1) {
                edges.extend(second.edges.iter().map(|e| TypedEdge { etype: TT, ..*e }));
            }
            Page::new(edges)
        })
        .collect();
    LinearLayout {
        graph: stacks.graph.clone(),
        order: stacks.order.clone(),
        pages,
        kind: LayoutKind::Deque,
    }
}

/// `ceil(n/4)` deque pages for `K_n`.
pub fn deque_layout_kn(n: usize) -> Result<LinearLayout, ConstructionError> {
    Ok(merge_stacks_to_deques(&stack_layout_kn(n)?))
}

/// Rique layout of `K_n` with `floor((n-1)/3)` pages on the identity order.
pub fn rique_layout_kn(n: usize) -> Result<LinearLayout, ConstructionError> {
    let n_min = RIQUE_KN_MIN[n % 3];
    if n < n_min {
        return Err(ConstructionError::UnsupportedSize {
            family: Family::KnRique,
            n,
            n_min,
            hint: match n % 3 {
                0 => " for n divisible by 3",
                1 => " for n = 1 mod 3",
                _ => " for n = 2 mod 3",
            },
        });
    }
    let sheets = match n % 3 {
        0 => kn_rique_mod0(n as i64),
        1 => kn_rique_mod1(n as i64),
        _ => kn_rique_mod2(n as i64),
    };
    Ok(sheets.finish(Graph::complete(n), VertexOrder::identity(n), LayoutKind::Rique)?)
}

fn v(i: i64) -> Vertex {
    debug_assert!(i >= 1);
    (i - 1) as Vertex
}

fn kn_rique_mod0(n: i64) -> Sheets {
    let t = n / 3;
    let mut s = Sheets::new((t - 1) as usize);
    let mut put = |p: i64, ty, it: Vec<(i64, i64)>| s.put(p, ty, it.into_iter().map(|(i, j)| (v(i), v(j))));

    put(1, HT, span(2, n).map(|j| (1, j)).collect());
    put(1, HT, span(2, t).map(|i| (i, n)).collect());
    put(1, HH, span(t + 1, 2 * t + 1).map(|j| (t, j)).collect());
    put(1, HH, span(2 * t + 2, n).map(|j| (2 * t + 1, j)).collect());
    put(1, HH, vec![(n - 1, n)]);

    put(2, HT, span(3, n - 1).map(|j| (2, j)).collect());
    put(2, HT, span(3, t + 1).map(|i| (i, n - 1)).collect());
    put(2, HT, vec![(t + 1, n)]);
    put(2, HH, span(t + 2, 2 * t).map(|j| (t + 1, j)).collect());
    put(2, HH, span(2 * t + 1, n).map(|j| (2 * t, j)).collect());

    put(3, HT, span(4, n - 2).map(|j| (3, j)).collect());
    put(3, HT, span(4, t + 1).map(|i| (i, n - 2)).collect());
    put(3, HT, span(n - 2, n).map(|j| (2 * t + 2, j)).collect());
    put(3, HH, vec![(t + 1, 2 * t + 1)]);
    put(3, HH, span(2 * t - 1, 2 * t + 1).map(|j| (t + 2, j)).collect());
    put(3, HH, span(t + 4, 2 * t - 1).map(|j| (t + 3, j)).collect());
    put(3, HH, span(2 * t + 3, n - 3).map(|j| (2 * t + 2, j)).collect());
    put(3, HH, span(n - 2, n).map(|j| (n - 3, j)).collect());

    // KR0-5: page 4 follows the uniform rule
    for p in 4..=t - 4 {
        put(p, HT, span(p + 1, n - p + 1).map(|j| (p, j)).collect());
        put(p, HT, span(p + 1, t + 1).map(|i| (i, n - p + 1)).collect());
        put(p, HT, span(n - p + 1, n).map(|j| (t + p + 1, j)).collect());
        put(p, HH, span(2 * t + p - 2, n - p).map(|j| (t + p + 1, j)).collect());
        // KR0-1
        put(p, HH, span(n - p + 1, n).map(|j| (n - p, j)).collect());
        // KR0-2
        let cap = if p < t - 4 { n - p - 1 } else { n - p };
        put(
            p,
            HH,
            span(t + p + 3, (2 * t + p - 2).min(cap))
                .map(|j| (t + p + 2, j))
                .collect(),
        );
    }

    let a = t - 3;
    put(a, HT, span(t - 2, 2 * t + 4).map(|j| (t - 3, j)).collect());
    put(a, HT, span(t - 2, t + 1).map(|i| (i, 2 * t + 4)).collect());
    put(a, HT, span(2 * t + 4, n - 1).map(|j| (t + 3, j)).collect());
    put(a, HT, vec![(2 * t + 3, n - 1), (2 * t + 3, n)]);
    put(a, HH, span(2 * t, 2 * t + 3).map(|j| (t + 3, j)).collect());
    put(a, HH, span(t + 5, 2 * t).map(|j| (t + 4, j)).collect());
    // KR0-3
    put(a, HH, span(2 * t + 4, n - 2).map(|j| (2 * t + 3, j)).collect());
    put(a, HH, vec![(n - 2, n - 1), (n - 2, n)]);

    let b = t - 2;
    put(b, HT, span(t - 1, 2 * t + 3).map(|j| (t - 2, j)).collect());
    put(b, HT, span(t - 1, t + 1).map(|i| (i, 2 * t + 3)).collect());
    put(b, HT, span(2 * t + 3, n).map(|j| (t + 2, j)).collect());
    put(b, HT, vec![(t + 3, n)]);
    put(b, HH, span(2 * t + 1, n).map(|j| (t + 4, j)).collect());
    put(b, HH, span(t + 6, 2 * t + 1).map(|j| (t + 5, j)).collect());

    let c = t - 1;
    put(c, HT, span(t, 2 * t + 2).map(|j| (t - 1, j)).collect());
    put(c, HT, span(t, t + 2).map(|i| (i, 2 * t + 2)).collect());
    // KR0-4
    put(c, HT, span((n - 5).min(2 * t + 5), n).map(|j| (2 * t - 2, j)).collect());
    put(c, HH, span(t + 3, 2 * t - 2).map(|j| (t + 2, j)).collect());
    put(c, HH, span(2 * t, n).map(|j| (2 * t - 1, j)).collect());
    s
}

fn kn_rique_mod1(n: i64) -> Sheets {
    let s_ = (n - 1) / 3;
    let mut s = Sheets::new(s_ as usize);
    let mut put = |p: i64, ty, it: Vec<(i64, i64)>| s.put(p, ty, it.into_iter().map(|(i, j)| (v(i), v(j))));

    put(1, HT, span(2, n).map(|j| (1, j)).collect());
    put(1, HT, span(2, s_ + 1).map(|i| (i, n)).collect());
    put(1, HH, span(s_ + 2, 2 * s_ + 1).map(|j| (s_ + 1, j)).collect());
    put(1, HH, span(2 * s_ + 2, n).map(|j| (2 * s_ + 1, j)).collect());
    put(1, HH, vec![(n - 1, n)]);

    put(2, HT, span(3, n - 1).map(|j| (2, j)).collect());
    put(2, HT, span(3, s_ + 1).map(|i| (i, n - 1)).collect());
    put(2, HT, vec![(s_ + 2, n - 1), (s_ + 2, n)]);
    put(2, HH, span(s_ + 3, n - 2).map(|j| (s_ + 2, j)).collect());
    put(2, HH, vec![(n - 2, n - 1), (n - 2, n)]);

    for p in 3..s_ {
        put(p, HT, span(p + 1, n - p + 1).map(|j| (p, j)).collect());
        put(p, HT, span(p + 1, s_ + 1).map(|i| (i, n - p + 1)).collect());
        put(p, HT, span(n - p + 1, n).map(|j| (s_ + p, j)).collect());
        put(p, HH, span(s_ + p + 1, n - p).map(|j| (s_ + p, j)).collect());
        put(p, HH, span(n - p + 1, n).map(|j| (n - p, j)).collect());
    }

    put(s_, HT, span(s_ + 1, 2 * s_ + 2).map(|j| (s_, j)).collect());
    put(s_, HT, vec![(s_ + 1, 2 * s_ + 2)]);
    put(s_, HH, span(2 * s_ + 1, n).map(|j| (2 * s_, j)).collect());
    s
}

fn kn_rique_mod2(n: i64) -> Sheets {
    let s_ = (n - 2) / 3;
    // KR2-3: three HH edges rotate between the last three pages
    let rotated = [
        ((2 * s_ - 2, 2 * s_), s_),
        ((2 * s_ - 1, 2 * s_ + 1), s_ - 2),
        ((2 * s_, 2 * s_ + 2), s_ - 1),
    ];
    let mut s = Sheets::new(s_ as usize);
    let mut put = |p: i64, ty, it: Vec<(i64, i64)>| {
        s.put(
            p,
            ty,
            it.into_iter()
                .filter(|e| !rotated.iter().any(|(r, _)| r == e))
                .map(|(i, j)| (v(i), v(j))),
        )
    };

    put(1, HT, span(2, n).map(|j| (1, j)).collect());
    put(1, HT, span(2, s_ + 1).map(|i| (i, n)).collect());
    put(1, HH, span(s_ + 2, 2 * s_ + 2).map(|j| (s_ + 1, j)).collect());
    put(1, HH, span(2 * s_ + 3, n).map(|j| (2 * s_ + 2, j)).collect());
    put(1, HH, vec![(n - 1, n)]);

    put(2, HT, span(3, n - 1).map(|j| (2, j)).collect());
    // KR2-1
    put(2, HT, span(3, s_ + 1).map(|i| (i, n - 1)).collect());
    put(2, HT, vec![(s_ + 2, n - 1), (s_ + 2, n)]);
    put(2, HH, span(s_ + 3, n - 2).map(|j| (s_ + 2, j)).collect());
    put(2, HH, vec![(n - 2, n - 1), (n - 2, n)]);

    for p in 3..=s_ {
        put(p, HT, span(p + 1, n - p + 1).map(|j| (p, j)).collect());
        put(p, HT, span(p + 1, s_ + 1).map(|i| (i, n - p + 1)).collect());
        put(p, HT, span(n - p + 1, n).map(|j| (s_ + p, j)).collect());
        put(p, HH, span(s_ + p + 1, n - p).map(|j| (s_ + p, j)).collect());
        // KR2-2: the last page's bullet uses row 2s+1
        let row = if p == s_ { 2 * s_ + 1 } else { n - p };
        put(p, HH, span(row + 1, n).map(|j| (row, j)).collect());
    }
    for ((i, j), p) in rotated {
        s.put(p, HH, [(v(i), v(j))]);
    }
    s
}

/// Spine order `a_1..a_{n/3}, b_1..b_{2n/3}, a_{n/3+1}..a_n, b_{2n/3+1}..b_n`.
fn knn_block_order(lab: BipartiteLabels) -> VertexOrder {
    let n = lab.n;
    let (n3, t) = (n / 3, 2 * n / 3);
    let seq = (1..=n3)
        .map(|i| lab.a(i))
        .chain((1..=t).map(|j| lab.b(j)))
        .chain((n3 + 1..=n).map(|i| lab.a(i)))
        .chain((t + 1..=n).map(|j| lab.b(j)))
        .collect();
    VertexOrder::new(seq).expect("block order is a permutation")
}

/// Spine order `a_1, b_1, ..., a_m, b_m, b_{m+1}..b_n, a_{m+1}..a_n` with
/// `m = floor((n-1)/2)`.
fn knn_interleaved_order(lab: BipartiteLabels) -> VertexOrder {
    let n = lab.n;
    let m = (n - 1) / 2;
    let seq = (1..=m)
        .flat_map(|i| [lab.a(i), lab.b(i)])
        .chain((m + 1..=n).map(|j| lab.b(j)))
        .chain((m + 1..=n).map(|i| lab.a(i)))
        .collect();
    VertexOrder::new(seq).expect("interleaved order is a permutation")
}

/// Deque layout of `K_{n,n}` with `ceil(n/3)` pages.
///
/// Multiples of three from [`DEQUE_KNN_MIN`] on are built directly; other
/// `n >= DEQUE_KNN_MIN - 2` are cut out of the layout for `3 ceil(n/3)`, which
/// has the same page count. Smaller `n` are rejected; see
/// [`deque_layout_knn_padded`].
pub fn deque_layout_knn(n: usize) -> Result<LinearLayout, ConstructionError> {
    let padded = 3 * n.div_ceil(3);
    if padded < DEQUE_KNN_MIN {
        return Err(ConstructionError::UnsupportedSize {
            family: Family::KnnDeque,
            n,
            n_min: DEQUE_KNN_MIN - 2,
            hint: "",
        });
    }
    if padded == n {
        let lab = BipartiteLabels::new(n);
        return Ok(knn_deque_sheets(n as i64).finish(lab.graph(), knn_block_order(lab), LayoutKind::Deque)?);
    }
    Ok(knn_restrict(&deque_layout_knn(padded)?, padded, n)?)
}

/// Deque layout of `K_{n,n}` for any `n >= 1`, taken from the smallest direct
/// construction containing it. Returns the layout together with the size it
/// was cut from; below `DEQUE_KNN_MIN - 2` the page count exceeds `ceil(n/3)`.
pub fn deque_layout_knn_padded(n: usize) -> Result<(LinearLayout, usize), ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InvalidArgument("need n >= 1".into()));
    }
    let padded = (3 * n.div_ceil(3)).max(DEQUE_KNN_MIN);
    let full = deque_layout_knn(padded)?;
    Ok((knn_restrict(&full, padded, n)?, padded))
}

/// Keeps `a_1..a_n` and `b_1..b_n` of a `K_{big,big}` layout.
fn knn_restrict(layout: &LinearLayout, big: usize, n: usize) -> Result<LinearLayout, LayoutError> {
    let keep: Vec<Vertex> = (0..n).chain(big..big + n).collect();
    induced_sublayout(layout, &keep)
}

fn knn_deque_sheets(n: i64) -> Sheets {
    let lab = BipartiteLabels::new(n as usize);
    let n3 = n / 3;
    let t = 2 * n / 3;
    let mut s = Sheets::new(n3 as usize);
    let mut put = |p: i64, ty, it: Vec<(i64, i64)>| {
        s.put(
            p,
            ty,
            it.into_iter().map(|(i, j)| (lab.a(i as usize), lab.b(j as usize))),
        )
    };
    let row = |i: i64, lo: i64, hi: i64| span(lo, hi).map(move |j| (i, j)).collect::<Vec<_>>();
    let col = |j: i64, lo: i64, hi: i64| span(lo, hi).map(move |i| (i, j)).collect::<Vec<_>>();

    put(1, HH, row(1, t + 4, n));
    put(1, HH, vec![(1, 6)]);
    put(1, HH, row(2, 1, 6));
    put(1, HH, row(n3 + 8, 8, 10));
    put(1, HH, col(10, n3 + 1, n3 + 7));
    put(1, HH, col(t + 4, n3 + 8, n));
    put(1, TT, row(2, n - 2, n));
    put(1, TT, col(t + 5, n3 - 2, n3));
    put(1, TT, row(n3, t + 1, t + 2));
    put(1, TT, vec![(n, 1), (n, 2), (n - 1, 2)]);
    put(1, TT, vstair(n - 1, t + 3, 4, n3));
    put(1, TT, col(n3, t + 1, t + 2));
    put(1, TT, row(t + 1, n3 + 1, n3 + 3));
    put(1, TT, col(n3 + 3, n3 + 1, t));

    put(2, HT, vec![(1, t + 3)]);
    put(2, HT, row(2, t + 3, n - 3));
    put(2, HT, row(3, n - 3, n - 1));
    put(2, HT, col(n, 3, n3));
    put(2, HH, vec![(n - 3, 1), (n - 4, 1)]);
    put(2, HH, vec![(n - 4, 2), (n - 5, 2)]);
    put(2, HH, vstair(n - 5, t + 1, 4, n3 - 2));
    put(2, HH, col(n3 - 2, t - 1, t + 1));
    put(2, HH, row(t - 1, n3 - 1, n3));
    put(2, HH, col(n3 + 1, n3 + 1, t - 1));
    put(2, HH, col(n, n - 3, n));
    put(2, TT, row(1, 1, 5));
    put(2, TT, hstair(n - 1, t + 4, 5, n3));
    put(2, TT, col(n3 + 1, t + 2, t + 3));
    put(2, TT, row(t + 2, n3 + 2, n3 + 3));
    put(2, TT, col(n3 + 4, n3 + 1, t + 2));

    // bullets 17-19 shared by pages 3..n/3-4
    let tail = |put: &mut dyn FnMut(i64, EdgeType, Vec<(i64, i64)>), p: i64| {
        put(p, HH, row(n + 2 - 2 * p, n + 2 - p, n));
        put(p, HH, col(n + 2 - p, n + 3 - 2 * p, n));
        put(p, HT, row(n + 1 - 2 * p, n + 2 - p, n));
    };

    for p in 3..=4 {
        // KD-8
        put(p, TT, col(p + 4, 1, p - 1));
        put(p, TT, row(p, 1, p + 4));
        put(p, HT, col(t + 5 - p, 1, p - 1));
        put(p, HT, row(p, t + 5 - p, n - 1 - p));
        put(p, HT, row(p + 1, n - 1 - p, n + 1 - p));
        put(p, HT, col(n + 2 - p, 1 + p, n3));
        put(p, HH, vec![(n - 2 * p + 1, 1), (n - 2 * p, 1)]);
        put(p, HH, vec![(n - 2 * p, 2), (n - 2 * p - 1, 2)]);
        put(p, HH, vstair(n - 2 * p - 1, t + 4 - p, 4, n3 - p - 1));
        put(p, HH, col(n3 - p, t - p + 1, t - p + 3));
        // KD-10
        put(p, HH, row(t - p + 1, n3 - p + 1, n3 - p + 2));
        put(p, HH, col(n3 - p + 3, n3 + 1, t - p + 1));
        // KD-12
        put(p, TT, hstair(n - 1, t + p + 2, 2 * p + 1, n3 + p - 2));
        put(p, TT, col(n3 + p - 1, t + p, t + p + 1));
        put(p, TT, row(t + p, n3 + p, n3 + p + 1));
        put(p, TT, col(n3 + p + 2, n3 + 1, t + p));
        tail(&mut put, p);
    }

    for p in 5..=n3 - 4 {
        let late = p >= n3 - 7;
        put(p, HH, vec![(n - 2 * p + 1, 1), (n - 2 * p, 1)]);
        put(p, HH, vec![(n - 2 * p, 2), (n - 2 * p - 1, 2)]);
        // KD-11 (late pages)
        put(p, HH, vstair(n - 2 * p - 1, t + 4 - p, 4, n3 - p - 1));
        if !late {
            put(p, HH, col(n3 - p, t - p + 1, t - p + 3));
            // KD-10
            put(p, HH, row(t - p + 1, n3 - p + 1, n3 - p + 2));
            put(p, HH, col(n3 - p + 3, n3 + 1, t - p + 1));
        } else {
            put(p, HH, col(n3 - p, t - p + 1, t - p + 3));
            put(p, HH, row(t - p, n3 - p, n3 - p + 1));
            put(p, HH, col(n3 - p + 2, n3 + 1, t - p));
        }
        // KD-12
        put(p, TT, hstair(n - 1, t + p + 2, 2 * p + 1, n3 + p - 2));
        put(p, TT, col(n3 + p + 2, n3 + 1, t + p));
        put(p, TT, row(t + p, n3 + p - 1, n3 + p + 1));
        put(p, TT, vec![(t + p + 1, n3 + p - 1)]);
        put(p, TT, row(p, 1, 2 * p - 1));
        // KD-7
        put(p, TT, col(2 * p - 1, 1, p - 1));
        put(p, HT, col(2 * p, 1, p));
        put(p, HT, row(p, t + 1, n - 1 - p));
        put(p, HT, row(p + 1, n - 1 - p, n + 1 - p));
        put(p, HT, col(n + 2 - p, p + 1, n3));
        tail(&mut put, p);
    }

    let w = n3 - 3;
    // KD-4: the corner (a_{n/3-3}, b_{2n/3-6}) stays in bullet 1
    put(w, HT, col(t - 6, 1, n3 - 3));
    put(w, HT, row(n3 - 3, t + 1, t + 2));
    put(w, HT, row(n3 - 2, t + 2, t + 4));
    put(w, HT, col(t + 4, n3 - 1, n3));
    put(w, HH, col(1, n3 + 6, n3 + 7));
    put(w, HH, col(2, n3 + 3, n3 + 6));
    put(w, HH, vec![(n3 + 3, 4)]);
    put(w, HH, col(5, n3 + 1, n3 + 3));
    put(w, HT, row(n3 + 7, t + 4, n));
    put(w, HH, row(n3 + 8, t + 5, n));
    // KD-2
    put(w, HH, col(t + 5, n3 + 8, n));
    // KD-5
    put(w, TT, col(t - 7, 1, n3 - 3));
    // KD-4
    put(w, TT, row(n3 - 3, 1, t - 7));
    put(w, TT, row(n - 1, t - 5, t - 4));
    put(w, TT, col(t - 4, n - 3, n - 2));
    put(w, TT, row(n - 3, t - 3, t - 2));
    put(w, TT, col(t - 1, n3 + 1, n - 3));

    let x = n3 - 2;
    put(x, HT, col(t - 4, 1, n3 - 2));
    put(x, HT, vec![(n3 - 2, t + 1)]);
    put(x, HT, row(n3 - 1, t + 1, t + 3));
    put(x, HT, vec![(n3, t + 3)]);
    put(x, HH, col(1, n3 + 2, n3 + 5));
    put(x, HH, vec![(n3 + 2, 2), (n3 + 2, 4), (n3 + 1, 4)]);
    put(x, HT, row(n3 + 5, t + 3, n));
    put(x, HH, row(n3 + 6, t + 3, n));
    // KD-1
    put(x, HH, col(t + 3, n3 + 7, n));
    put(x, TT, col(t - 5, 1, n3 - 2));
    // KD-9
    put(x, TT, row(n3 - 2, 1, t - 5));
    put(x, TT, vec![(n - 1, t - 3)]);
    put(x, TT, row(n - 2, t - 3, t));
    put(x, TT, col(t, n3 + 1, n - 3));

    let y = n3 - 1;
    put(y, HH, col(t - 3, 1, n3 - 1));
    put(y, HH, row(n3 - 1, 1, t - 4));
    put(y, TH, col(t - 2, 1, n3 - 1));
    put(y, HT, row(n - 1, t - 2, t));
    put(y, HT, vec![(n3 + 2, t + 1)]);
    put(y, HT, row(n3 + 3, t + 1, n));
    put(y, HH, row(n3 + 4, t + 3, n));
    // KD-3
    put(y, HH, vec![(n3 + 5, t + 2)]);
    put(y, HH, col(t + 2, n3 + 6, n));
    put(y, TT, vec![(n - 1, 1), (n - 2, 1), (n - 2, 2), (n - 3, 2)]);
    put(y, TT, vstair(n - 3, t + 2, 4, n3 - 2));
    put(y, TT, col(n3 - 1, t, t + 2));
    put(y, TT, row(t, n3, n3 + 1));
    put(y, TT, col(n3 + 2, n3 + 1, t));

    let z = n3;
    put(z, HT, col(t, 1, n3));
    put(z, HT, row(n3 + 1, 1, 3));
    put(z, HT, col(3, n3 + 1, n));
    put(z, HT, row(n, 4, t));
    put(z, HH, row(n3 + 2, t + 2, n));
    put(z, HH, vec![(n3 + 4, t + 2)]);
    put(z, HH, col(t + 1, n3 + 4, n));
    put(z, HT, row(n3 + 1, t + 1, n));
    // KD-6
    put(z, TT, col(t - 1, 1, n3));
    put(z, TT, row(n3, 1, t - 1));
    s
}

/// Rique layout of `K_{n,n}` with `floor((n-1)/2) - 1` pages.
pub fn rique_layout_knn(n: usize) -> Result<LinearLayout, ConstructionError> {
    let (n_min, hint) = if n % 2 == 1 {
        (RIQUE_KNN_MIN_ODD, " for odd n")
    } else {
        (RIQUE_KNN_MIN_EVEN, " for even n")
    };
    if n < n_min {
        return Err(ConstructionError::UnsupportedSize {
            family: Family::KnnRique,
            n,
            n_min,
            hint,
        });
    }
    let lab = BipartiteLabels::new(n);
    Ok(knn_rique_sheets(n as i64).finish(lab.graph(), knn_interleaved_order(lab), LayoutKind::Rique)?)
}

// Written once for both parities with m = floor((n-1)/2), M = m + 1; the only
// parity-dependent bullets are the two extra hook bullets on page 7 for even n.
fn knn_rique_sheets(n: i64) -> Sheets {
    let lab = BipartiteLabels::new(n as usize);
    let m = (n - 1) / 2;
    let big = m + 1;
    let mut s = Sheets::new((m - 1) as usize);
    let mut put = |p: i64, ty, it: Vec<(i64, i64)>| {
        s.put(
            p,
            ty,
            it.into_iter().map(|(i, j)| (lab.a(i as usize), lab.b(j as usize))),
        )
    };
    let row = |i: i64, lo: i64, hi: i64| span(lo, hi).map(move |j| (i, j)).collect::<Vec<_>>();
    let col = |j: i64, lo: i64, hi: i64| span(lo, hi).map(move |i| (i, j)).collect::<Vec<_>>();
    // bullets 1-3 of pages 3..m-2: rows a_{p-1}, a_p, a_{p+1} split at lo, hi
    let rows = |put: &mut dyn FnMut(i64, EdgeType, Vec<(i64, i64)>), p: i64, lo: i64, hi: i64| {
        put(p, HT, row(p - 1, 2, lo));
        put(p, HT, row(p, lo, hi));
        put(p, HT, row(p + 1, hi, n));
    };

    put(1, HT, row(1, 1, n));
    put(1, HT, col(1, big, n));
    put(1, HH, row(m, 2, m));
    put(1, HH, col(2, big, n));
    put(1, HH, row(big, big, n));

    put(2, HT, col(1, 2, m));
    put(2, HT, vec![(2, m)]);
    put(2, HT, row(2, big, n));
    put(2, HT, vec![(3, n)]);
    put(2, HT, col(3, big, n));
    put(2, HH, row(n - 3, m - 2, big + 1));
    put(2, HH, col(big + 1, big + 1, n - 4));
    put(2, HH, row(big + 1, big + 2, n));
    // BR-5
    put(2, HH, vec![(m - 2, 3)]);

    for p in 3..=5 {
        rows(&mut put, p, m - p + 2, n - p + 2);
        put(p, HT, col(p + 1, big, n));
        // BR-6 (even n)
        put(p, HH, row(n + p - 5, m - 2, big + p - 1));
        put(p, HH, col(big + p - 1, big + p - 1, n + p - 6));
        put(p, HH, row(big + p - 1, big + p, n));
    }

    rows(&mut put, 6, m - 4, n - 4);
    put(6, HT, col(7, big, n));
    put(6, HH, col(big + 5, big + 5, n));
    put(6, HH, row(big + 5, big + 6, n));

    rows(&mut put, 7, m - 5, n - 5);
    put(7, HT, col(8, big, n));
    put(7, HH, row(m, big, n - m + 2));
    if n % 2 == 0 {
        put(7, HH, row(n - 8, n - 8, n));
        put(7, HH, col(n - 8, n - 7, n));
    }

    for p in 8..=m - 6 {
        rows(&mut put, p, m - p + 2, n - p + 2);
        put(p, HT, col(p + 1, big, n));
        put(p, HH, col(big + p - 2, big + p - 2, n));
        put(p, HH, row(big + p - 2, big + p - 1, n));
    }

    let a = m - 5;
    // BR-1
    rows(&mut put, a, m - a + 2, n - a + 2);
    put(a, HT, col(m - 4, big, n));
    put(a, HH, col(m - 3, big + 5, n));

    for k in [4, 3, 2] {
        let p = m - k;
        // BR-1
        rows(&mut put, p, m - p + 2, n - p + 2);
        // BR-7 (even n): the bullets below use rows n - 8 + k with k counted as here
        put(p, HT, col(p + 1, big, big + k));
        put(p, HT, col(p + 2, big + k, n - 8 + k));
        // BR-2
        put(p, HT, row(n - 8 + k, m + 2 - k, big));
        put(p, HT, col(n + 2 * k - 9, n + k - 8, n));
        put(p, HH, col(n + 2 * k - 8, n + k - 8, n));
        put(p, HH, row(n + k - 8, n + 2 * k - 7, n));
    }

    let l = m - 1;
    put(l, HT, row(m - 1, 2, n - m + 3));
    put(l, HT, row(m, n - m + 3, n));
    put(l, HT, vec![(big, m), (big + 1, m)]);
    put(l, HT, col(big, big + 1, n - 7));
    // BR-3
    put(l, HT, col(n - 7, n - 7, n));
    put(l, HH, col(n - 6, n - 7, n));
    put(l, HH, row(n - 7, n - 5, n));
    // BR-4
    put(l, HT, vec![(m - 2, 2)]);
    s
}

/// Per-page edge counts (pages numbered from 1) stated alongside the
/// published edge lists, for the families that have them.
pub fn stated_page_counts(family: Family, n: usize) -> Option<Vec<i64>> {
    let n_ = n as i64;
    match family {
        Family::KnRique => {
            let pages = family.expected_pages(n) as i64;
            Some(match n % 3 {
                0 => {
                    let t = n_ / 3;
                    (1..=pages)
                        .map(|p| match p {
                            1 => 2 * n_,
                            2 => 2 * n_ - 7,
                            3 => 2 * n_ - 5,
                            _ if p == t - 3 => 4 * n_ / 3 + 6,
                            _ if p == t - 2 => 4 * n_ / 3 + 3,
                            _ if p == t - 1 => n_ + 9,
                            _ => n_ / 3 - 2 * p + 3,
                        })
                        .collect()
                }
                1 => {
                    let s = (n_ - 1) / 3;
                    (1..=pages)
                        .map(|p| match p {
                            1 => 2 * n_ - 1,
                            2 => 2 * n_ - 4,
                            _ if p == s => 2 * s + 4,
                            _ => 2 * n_ - 3 * p + 2,
                        })
                        .collect()
                }
                _ => (1..=pages)
                    .map(|p| match p {
                        1 => 2 * n_,
                        2 => 2 * n_ - 4,
                        _ => 2 * n_ - 3 * p + 2,
                    })
                    .collect(),
            })
        }
        Family::KnnDeque if n % 3 == 0 => {
            let n3 = n_ / 3;
            let e = 8 * n_ / 3;
            Some(
                (1..=n3)
                    .map(|p| match p {
                        1 => 2 * n_ + 16,
                        2 => e + 5,
                        3 | 4 => e + p + 5,
                        _ if p == n3 - 3 => 10 * n_ / 3 + 11,
                        _ if p == n3 - 2 => 10 * n_ / 3 + 13,
                        _ if p == n3 - 1 => 11 * n_ / 3 - 8,
                        _ if p == n3 => 4 * n_ + 14,
                        _ if p >= n3 - 7 => e - 2 * p - 1,
                        _ => e + 2 * p + 18,
                    })
                    .collect(),
            )
        }
        Family::KnnRique => {
            let m = (n_ - 1) / 2;
            let odd = n % 2 == 1;
            Some(
                (1..=m - 1)
                    .map(|p| match (p, odd) {
                        (1, true) => 3 * n_,
                        (1, false) => 3 * n_ + 1,
                        (2..=5, true) => (5 * n_ - 1) / 2 + 1,
                        (2..=5, false) => 5 * n_ / 2 + 2,
                        (6, true) => (5 * n_ - 1) / 2 - 8,
                        (6, false) => 5 * n_ / 2 - 7,
                        (7, true) => (3 * n_ + 1) / 2 + 4,
                        (7, false) => 3 * n_ / 2 + 23,
                        _ if p == m - 1 => {
                            if odd {
                                (3 * n_ + 1) / 2 + 18
                            } else {
                                3 * n_ / 2 + 19
                            }
                        }
                        _ if p >= m - 4 => {
                            let k = m - p;
                            if odd {
                                (3 * n_ - 1) / 2 - 2 * k + 20
                            } else {
                                3 * n_ / 2 - 2 * (k + 1) + 22
                            }
                        }
                        _ if p == m - 5 => {
                            if odd {
                                2 * n_ - 3
                            } else {
                                2 * n_ - 2
                            }
                        }
                        _ => {
                            if odd {
                                (5 * n_ + 3) / 2 - 2 * p + 4
                            } else {
                                5 * n_ / 2 - 2 * p + 7
                            }
                        }
                    })
                    .collect(),
            )
        }
        _ => None,
    }
}

/// Pages (numbered from 1) whose edge count is known to differ from
/// [`stated_page_counts`], each with the correction id that explains it.
pub fn count_deviations(family: Family, n: usize) -> Vec<(usize, &'static str)> {
    match family {
        Family::KnRique => match n % 3 {
            0 => {
                let t = n / 3;
                let mut out: Vec<_> = (1..=3).chain(4..=t.saturating_sub(4)).map(|p| (p, "KR0-C")).collect();
                if n > 30 {
                    out.push((t - 1, "KR0-4"));
                }
                out
            }
            2 => vec![(1, "KR2-C"), ((n - 2) / 3, "KR2-C")],
            _ => Vec::new(),
        },
        Family::KnnDeque => (2..=n / 3).map(|p| (p, "KD-C")).collect(),
        Family::KnnRique => vec![(2, "BR-C"), ((n - 1) / 2 - 1, "BR-C")],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::validate_layout;

    #[test]
    fn staircases() {
        assert_eq!(
            vstair(10, 8, 4, 9),
            vec![(10, 4), (9, 4), (9, 5), (8, 5), (8, 6), (7, 6)]
        );
        assert_eq!(hstair(10, 9, 4, 4), vec![(10, 4), (10, 5)]);
        assert!(vstair(3, 4, 1, 9).is_empty());
    }

    #[test]
    fn labels_roundtrip() {
        let lab = BipartiteLabels::new(5);
        assert_eq!(lab.a(1), 0);
        assert_eq!(lab.b(1), 5);
        assert_eq!(lab.label(7), ('b', 3));
        assert_eq!(lab.label(4), ('a', 5));
    }

    #[test]
    fn orders_are_as_documented() {
        let lab = BipartiteLabels::new(6);
        let o = knn_block_order(lab);
        let a = |i| lab.a(i);
        let b = |j| lab.b(j);
        assert_eq!(
            o.sequence(),
            &[a(1), a(2), b(1), b(2), b(3), b(4), a(3), a(4), a(5), a(6), b(5), b(6)]
        );
        let o = knn_interleaved_order(BipartiteLabels::new(5));
        let lab = BipartiteLabels::new(5);
        let (a, b) = (|i| lab.a(i), |j| lab.b(j));
        assert_eq!(
            o.sequence(),
            &[a(1), b(1), a(2), b(2), b(3), b(4), b(5), a(3), a(4), a(5)]
        );
    }

    #[test]
    fn small_stack_layouts() {
        for n in 2..=9 {
            let l = stack_layout_kn(n).unwrap();
            assert_eq!(l.num_pages(), n.div_ceil(2));
            assert!(validate_layout(&l).valid, "n = {n}");
        }
        assert!(stack_layout_kn(1).is_err());
    }

    #[test]
    fn unsupported_sizes_name_the_threshold() {
        let e = rique_layout_kn(18).unwrap_err();
        assert!(e.to_string().contains("n >= 21"), "{e}");
        let e = rique_layout_knn(26).unwrap_err();
        assert!(e.to_string().contains("n >= 28"), "{e}");
        let e = deque_layout_knn(33).unwrap_err();
        assert!(e.to_string().contains("n >= 34"), "{e}");
    }

    #[test]
    fn family_names_roundtrip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("kn-heap".parse::<Family>().is_err());
    }
}
