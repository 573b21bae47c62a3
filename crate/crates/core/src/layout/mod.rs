//! Domain types for linear layouts.
//!
//! Vertices are dense `usize` ids. A [`VertexOrder`] places them on the spine;
//! a [`TypedEdge`] records which end of the deque the edge enters at its
//! earlier endpoint and leaves at its later one.

mod conflict;
mod format;
mod validate;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conflict::{conflicts, edges_conflict, independent_conflict};
pub use format::{parse_layout, serialize_layout, ParseError};
pub use validate::{validate_layout, validate_page, VerificationReport, Violation};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { vertex: Vertex, num_vertices: usize },
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
}

/// A simple undirected graph in canonical form: every edge is stored with the
/// smaller id first and the edge list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, LayoutError> {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(LayoutError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= num_vertices {
                    return Err(LayoutError::VertexOutOfRange {
                        vertex: w,
                        num_vertices,
                    });
                }
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(LayoutError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Graph {
            num_vertices,
            edges: canon,
        })
    }

    pub fn empty(num_vertices: usize) -> Self {
        Graph {
            num_vertices,
            edges: Vec::new(),
        }
    }

    /// The complete graph `K_n` on vertices `0..n`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { num_vertices: n, edges }
    }

    /// The complete bipartite graph `K_{n,n}`: part A is `0..n`, part B is `n..2n`.
    pub fn complete_bipartite(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (n..2 * n).map(move |b| (a, b))).collect();
        Graph {
            num_vertices: 2 * n,
            edges,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Position of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.num_vertices;
        self.edges.len() == n * n.saturating_sub(1) / 2
    }
}

/// A total order of the vertices `0..n` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexOrder {
    sequence: Vec<Vertex>,
    position: Vec<usize>,
}

impl VertexOrder {
    /// Builds an order from the spine sequence (vertex ids left to right).
    pub fn new(sequence: Vec<Vertex>) -> Result<Self, LayoutError> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (rank, &v) in sequence.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(LayoutError::NotAPermutation(n));
            }
            position[v] = rank;
        }
        Ok(VertexOrder { sequence, position })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrder {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[Vertex] {
        &self.sequence
    }

    /// Rank of `v` on the spine, or `None` if `v` is not ordered.
    pub fn rank(&self, v: Vertex) -> Option<usize> {
        self.position.get(v).copied()
    }

    pub fn vertex_at(&self, rank: usize) -> Vertex {
        self.sequence[rank]
    }

    pub fn precedes(&self, u: Vertex, v: Vertex) -> bool {
        self.position[u] < self.position[v]
    }
}

/// Which end of the deque an edge is inserted at (its earlier endpoint) and
/// removed from (its later endpoint).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeType {
    HH,
    TT,
    HT,
    TH,
}

impl EdgeType {
    pub const ALL: [EdgeType; 4] = [EdgeType::HH, EdgeType::TT, EdgeType::HT, EdgeType::TH];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeType::HH => "hh",
            EdgeType::TT => "tt",
            EdgeType::HT => "ht",
            EdgeType::TH => "th",
        }
    }

    /// True if the edge is pushed at the head of the deque.
    pub fn inserts_at_head(self) -> bool {
        matches!(self, EdgeType::HH | EdgeType::HT)
    }

    /// True if the edge is popped from the head of the deque.
    pub fn removes_at_head(self) -> bool {
        matches!(self, EdgeType::HH | EdgeType::TH)
    }

    /// Type-(ii) edges wrap around the right end of the spine.
    pub fn wraps(self) -> bool {
        matches!(self, EdgeType::HT | EdgeType::TH)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeType {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hh" => Ok(EdgeType::HH),
            "tt" => Ok(EdgeType::TT),
            "ht" => Ok(EdgeType::HT),
            "th" => Ok(EdgeType::TH),
            other => Err(LayoutError::InvalidArgument(format!("unknown edge type {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub etype: EdgeType,
}

impl TypedEdge {
    pub fn new(u: Vertex, v: Vertex, etype: EdgeType) -> Self {
        TypedEdge { u, v, etype }
    }

    /// The underlying unordered edge, smaller id first.
    pub fn key(&self) -> (Vertex, Vertex) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    pub fn shares_endpoint(&self, other: &TypedEdge) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }

    /// Rank interval `(left, right)` under `order`; `None` if an endpoint is
    /// outside the order.
    pub fn ranks(&self, order: &VertexOrder) -> Option<(usize, usize)> {
        let a = order.rank(self.u)?;
        let b = order.rank(self.v)?;
        Some((a.min(b), a.max(b)))
    }

    /// The same edge with `u` set to the endpoint that comes first in `order`.
    pub fn oriented(&self, order: &VertexOrder) -> TypedEdge {
        if order.precedes(self.v, self.u) {
            TypedEdge::new(self.v, self.u, self.etype)
        } else {
            *self
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Page {
    pub edges: Vec<TypedEdge>,
}

impl Page {
    pub fn new(edges: Vec<TypedEdge>) -> Self {
        Page { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// The data structure each page models; it fixes the admissible edge types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutKind {
    Stack,
    Queue,
    Rique,
    Deque,
}

impl LayoutKind {
    pub const ALL: [LayoutKind; 4] = [
        LayoutKind::Stack,
        LayoutKind::Queue,
        LayoutKind::Rique,
        LayoutKind::Deque,
    ];

    pub fn allowed_types(self) -> &'static [EdgeType] {
        match self {
            LayoutKind::Stack => &[EdgeType::HH],
            LayoutKind::Queue => &[EdgeType::HT],
            LayoutKind::Rique => &[EdgeType::HH, EdgeType::HT],
            LayoutKind::Deque => &EdgeType::ALL,
        }
    }

    pub fn allows(self, t: EdgeType) -> bool {
        self.allowed_types().contains(&t)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LayoutKind::Stack => "stack",
            LayoutKind::Queue => "queue",
            LayoutKind::Rique => "rique",
            LayoutKind::Deque => "deque",
        }
    }
}

impl fmt::Display for LayoutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LayoutKind {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stack" => Ok(LayoutKind::Stack),
            "queue" => Ok(LayoutKind::Queue),
            "rique" => Ok(LayoutKind::Rique),
            "deque" => Ok(LayoutKind::Deque),
            other => Err(LayoutError::InvalidArgument(format!("unknown layout kind {other:?}"))),
        }
    }
}

/// A vertex order plus a partition of the graph's edges into typed pages.
///
/// Construction only checks shape (order length, endpoint ranges). Whether the
/// pages really partition the edge set, respect `kind` and avoid conflicts is
/// the job of [`validate_layout`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearLayout {
    pub graph: Graph,
    pub order: VertexOrder,
    pub pages: Vec<Page>,
    pub kind: LayoutKind,
}

impl LinearLayout {
    pub fn new(graph: Graph, order: VertexOrder, pages: Vec<Page>, kind: LayoutKind) -> Result<Self, LayoutError> {
        if order.len() != graph.num_vertices() {
            return Err(LayoutError::InvalidArgument(format!(
                "order has {} vertices, graph has {}",
                order.len(),
                graph.num_vertices()
            )));
        }
        for e in pages.iter().flat_map(|p| &p.edges) {
            if e.u == e.v {
                return Err(LayoutError::SelfLoop(e.u));
            }
            for w in [e.u, e.v] {
                if w >= graph.num_vertices() {
                    return Err(LayoutError::VertexOutOfRange {
                        vertex: w,
                        num_vertices: graph.num_vertices(),
                    });
                }
            }
        }
        Ok(LinearLayout {
            graph,
            order,
            pages,
            kind,
        })
    }

    /// Builds a layout whose graph is the union of the page edges.
    pub fn from_pages(
        num_vertices: usize,
        order: VertexOrder,
        pages: Vec<Page>,
        kind: LayoutKind,
    ) -> Result<Self, LayoutError> {
        let keys: BTreeSet<_> = pages.iter().flat_map(|p| &p.edges).map(|e| e.key()).collect();
        let graph = Graph::new(num_vertices, keys)?;
        LinearLayout::new(graph, order, pages, kind)
    }

    pub fn num_pages(&self) -> usize {
        self.pages.len()
    }

    pub fn num_edges(&self) -> usize {
        self.pages.iter().map(Page::len).sum()
    }

    /// Orients every edge along the order and sorts each page by
    /// `(left rank, right rank)`.
    pub fn canonicalize(&mut self) {
        let order = &self.order;
        for page in &mut self.pages {
            for e in &mut page.edges {
                *e = e.oriented(order);
            }
            page.edges.sort_by_key(|e| (order.rank(e.u), order.rank(e.v), e.etype));
        }
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Count of edges per type over all pages, indexed by [`EdgeType::index`].
    pub fn type_histogram(&self) -> [usize; 4] {
        let mut hist = [0; 4];
        for e in self.pages.iter().flat_map(|p| &p.edges) {
            hist[e.etype.index()] += 1;
        }
        hist
    }
}

/// Restricts `layout` to the vertices in `keep`.
///
/// Removed vertices take their incident edges with them; surviving ids are
/// compacted so that their relative numeric order is preserved. Pages are
/// kept even when they become empty.
pub fn induced_sublayout(layout: &LinearLayout, keep: &[Vertex]) -> Result<LinearLayout, LayoutError> {
    let n = layout.graph.num_vertices();
    let mut new_id = vec![None; n];
    let kept: BTreeSet<Vertex> = keep.iter().copied().collect();
    for (i, &v) in kept.iter().enumerate() {
        if v >= n {
            return Err(LayoutError::VertexOutOfRange {
                vertex: v,
                num_vertices: n,
            });
        }
        new_id[v] = Some(i);
    }
    let sequence = layout.order.sequence().iter().filter_map(|&v| new_id[v]).collect();
    let order = VertexOrder::new(sequence)?;
    let edges = layout
        .graph
        .edges()
        .iter()
        .filter_map(|&(u, v)| Some((new_id[u]?, new_id[v]?)));
    let graph = Graph::new(kept.len(), edges)?;
    let pages = layout
        .pages
        .iter()
        .map(|p| {
            Page::new(
                p.edges
                    .iter()
                    .filter_map(|e| Some(TypedEdge::new(new_id[e.u]?, new_id[e.v]?, e.etype)))
                    .collect(),
            )
        })
        .collect();
    LinearLayout::new(graph, order, pages, layout.kind)
}
