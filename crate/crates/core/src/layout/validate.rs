use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::conflict::independent_conflict;
use super::{EdgeType, LayoutKind, LinearLayout, Page, TypedEdge, Vertex, VertexOrder};

/// A single defect found by [`validate_page`] or [`validate_layout`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// Two independent edges on one page whose types cannot coexist.
    Conflict {
        page: usize,
        first: TypedEdge,
        second: TypedEdge,
    },
    /// An edge type outside the kind's allowed set.
    DisallowedType {
        page: usize,
        edge: TypedEdge,
        kind: LayoutKind,
    },
    /// The same underlying edge appears more than once on one page.
    DuplicateInPage { page: usize, edge: (Vertex, Vertex) },
    /// A graph edge assigned to no page.
    MissingEdge { edge: (Vertex, Vertex) },
    /// A graph edge assigned to several pages.
    DuplicatedEdge { edge: (Vertex, Vertex), pages: Vec<usize> },
    /// A page edge that is not an edge of the graph.
    ForeignEdge { page: usize, edge: (Vertex, Vertex) },
    /// An endpoint outside the vertex order, or an order/graph size mismatch.
    OrderDefect { page: Option<usize>, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Conflict { page, first, second } => write!(
                f,
                "page {page}: ({}, {}, {}) conflicts with ({}, {}, {})",
                first.u, first.v, first.etype, second.u, second.v, second.etype
            ),
            Violation::DisallowedType { page, edge, kind } => write!(
                f,
                "page {page}: edge ({}, {}) has type {} not allowed in a {kind} layout",
                edge.u, edge.v, edge.etype
            ),
            Violation::DuplicateInPage { page, edge } => {
                write!(f, "page {page}: edge {edge:?} listed twice")
            }
            Violation::MissingEdge { edge } => write!(f, "edge {edge:?} is on no page"),
            Violation::DuplicatedEdge { edge, pages } => {
                write!(f, "edge {edge:?} is on several pages {pages:?}")
            }
            Violation::ForeignEdge { page, edge } => {
                write!(f, "page {page}: {edge:?} is not an edge of the graph")
            }
            Violation::OrderDefect { page, detail } => match page {
                Some(p) => write!(f, "page {p}: {detail}"),
                None => f.write_str(detail),
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        VerificationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn conflict_count(&self) -> usize {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::Conflict { .. }))
            .count()
    }

    fn with_page(mut self, page: usize) -> Self {
        for v in &mut self.violations {
            match v {
                Violation::Conflict { page: p, .. }
                | Violation::DisallowedType { page: p, .. }
                | Violation::DuplicateInPage { page: p, .. }
                | Violation::ForeignEdge { page: p, .. } => *p = page,
                Violation::OrderDefect { page: p, .. } => *p = Some(page),
                _ => {}
            }
        }
        self
    }
}

fn page_violations(order: &VertexOrder, page: &Page, kind: LayoutKind, index: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut placed: Vec<(usize, usize, EdgeType, TypedEdge)> = Vec::with_capacity(page.len());
    let mut seen = HashSet::new();
    for e in &page.edges {
        if !kind.allows(e.etype) {
            out.push(Violation::DisallowedType {
                page: index,
                edge: *e,
                kind,
            });
        }
        if e.u == e.v {
            out.push(Violation::OrderDefect {
                page: Some(index),
                detail: format!("self-loop at vertex {}", e.u),
            });
            continue;
        }
        let Some((a, b)) = e.ranks(order) else {
            out.push(Violation::OrderDefect {
                page: Some(index),
                detail: format!("edge ({}, {}) has an endpoint outside the order", e.u, e.v),
            });
            continue;
        };
        if !seen.insert(e.key()) {
            out.push(Violation::DuplicateInPage {
                page: index,
                edge: e.key(),
            });
            continue;
        }
        placed.push((a, b, e.etype, *e));
    }
    for (i, &(a, b, x, e)) in placed.iter().enumerate() {
        for &(c, d, y, f) in &placed[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if independent_conflict(a, b, x, c, d, y) {
                out.push(Violation::Conflict {
                    page: index,
                    first: e,
                    second: f,
                });
            }
        }
    }
    out
}

/// Checks one page: every independent edge pair against the conflict rules and
/// every edge type against `kind`.
pub fn validate_page(order: &VertexOrder, page: &Page, kind: LayoutKind) -> VerificationReport {
    VerificationReport::from_violations(page_violations(order, page, kind, 0))
}

/// Checks every page and that the pages partition the graph's edges exactly.
pub fn validate_layout(layout: &LinearLayout) -> VerificationReport {
    let mut violations = Vec::new();
    let n = layout.graph.num_vertices();
    if layout.order.len() != n {
        violations.push(Violation::OrderDefect {
            page: None,
            detail: format!("order has {} vertices, graph has {n}", layout.order.len()),
        });
    }
    let mut placements: BTreeMap<(Vertex, Vertex), Vec<usize>> = BTreeMap::new();
    for (i, page) in layout.pages.iter().enumerate() {
        let report =
            VerificationReport::from_violations(page_violations(&layout.order, page, layout.kind, i)).with_page(i);
        violations.extend(report.violations);
        let mut on_page = HashSet::new();
        for e in &page.edges {
            if on_page.insert(e.key()) {
                placements.entry(e.key()).or_default().push(i);
            }
        }
    }
    for &edge in layout.graph.edges() {
        match placements.remove(&edge) {
            None => violations.push(Violation::MissingEdge { edge }),
            Some(pages) if pages.len() > 1 => violations.push(Violation::DuplicatedEdge { edge, pages }),
            Some(_) => {}
        }
    }
    for (edge, pages) in placements {
        for page in pages {
            violations.push(Violation::ForeignEdge { page, edge });
        }
    }
    VerificationReport::from_violations(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::Graph;
    use EdgeType::*;

    fn page(edges: &[(usize, usize, EdgeType)]) -> Page {
        Page::new(edges.iter().map(|&(u, v, t)| TypedEdge::new(u, v, t)).collect())
    }

    #[test]
    fn twist_on_one_side() {
        let o = VertexOrder::identity(4);
        let r = validate_page(&o, &page(&[(0, 2, HH), (1, 3, HH)]), LayoutKind::Deque);
        assert!(!r.valid);
        assert_eq!(r.conflict_count(), 1);
        let r = validate_page(&o, &page(&[(0, 2, HH), (1, 3, TT)]), LayoutKind::Deque);
        assert!(r.valid);
    }

    #[test]
    fn rique_pattern_has_no_valid_typing() {
        // a=0 < b=1 < c=2 < b'=3 < a'=4, c'=5
        let o = VertexOrder::identity(6);
        let pairs = [(0, 4), (1, 3), (2, 5)];
        for mask in 0..8u32 {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| (u, v, if mask >> i & 1 == 1 { HT } else { HH }))
                .collect();
            assert!(!validate_page(&o, &page(&edges), LayoutKind::Rique).valid);
        }
    }

    #[test]
    fn endpoint_outside_order_is_reported() {
        let o = VertexOrder::identity(3);
        let r = validate_page(&o, &page(&[(0, 5, HH)]), LayoutKind::Deque);
        assert!(matches!(r.violations[..], [Violation::OrderDefect { .. }]));
    }

    #[test]
    fn disallowed_type() {
        let o = VertexOrder::identity(3);
        let r = validate_page(&o, &page(&[(0, 1, TT)]), LayoutKind::Rique);
        assert!(matches!(r.violations[..], [Violation::DisallowedType { .. }]));
    }

    fn k4_one_deque() -> LinearLayout {
        LinearLayout::new(
            Graph::complete(4),
            VertexOrder::identity(4),
            vec![page(&[
                (0, 1, HH),
                (0, 2, HH),
                (0, 3, HH),
                (1, 2, HH),
                (1, 3, TT),
                (2, 3, HH),
            ])],
            LayoutKind::Deque,
        )
        .unwrap()
    }

    #[test]
    fn coverage_defects() {
        let l = k4_one_deque();
        assert!(validate_layout(&l).valid);

        let mut dup = l.clone();
        dup.pages.push(page(&[(0, 1, HH)]));
        let r = validate_layout(&dup);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicatedEdge { edge: (0, 1), .. })));

        let mut missing = l.clone();
        missing.pages[0].edges.pop();
        let r = validate_layout(&missing);
        assert_eq!(r.violations, vec![Violation::MissingEdge { edge: (2, 3) }]);
    }

    #[test]
    fn relabelled_kind_is_reported() {
        let mut l = k4_one_deque();
        l.kind = LayoutKind::Rique;
        let r = validate_layout(&l);
        assert_eq!(r.violations.len(), 1);
        assert!(matches!(
            r.violations[0],
            Violation::DisallowedType {
                page: 0,
                edge: TypedEdge { etype: TT, .. },
                ..
            }
        ));
    }

    #[test]
    fn conflict_names_page_and_edges() {
        let mut l = k4_one_deque();
        l.pages.push(Page::default());
        l.pages[0].edges.retain(|e| e.key() != (1, 3));
        l.pages[1].edges.push(TypedEdge::new(1, 3, HH));
        assert!(validate_layout(&l).valid);
        l.pages[1].edges.push(TypedEdge::new(0, 2, HH));
        l.pages[0].edges.retain(|e| e.key() != (0, 2));
        let r = validate_layout(&l);
        assert_eq!(r.conflict_count(), 1);
        assert!(matches!(r.violations[0], Violation::Conflict { page: 1, .. }));
    }
}
