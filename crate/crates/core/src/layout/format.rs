//! The line-oriented `linlay` text format.
//!
//! ```text
//! # comment
//! linlay 1 deque 4 1
//! order: 0 1 2 3
//! page 0:
//! 0 1 hh
//! 1 3 tt
//! ```
//!
//! Pages are numbered from 0. Each edge line is `<u> <v> <type>` with `u` the
//! endpoint that comes first in the order. The graph of a parsed layout is the
//! union of its page edges.

use std::fmt::Write as _;

use thiserror::Error;

use super::{EdgeType, LayoutKind, LinearLayout, Page, TypedEdge, Vertex, VertexOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {field}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub field: &'static str,
    pub message: String,
}

fn err(line: usize, field: &'static str, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        field,
        message: message.into(),
    }
}

/// Serializes the canonical form of `layout`.
pub fn serialize_layout(layout: &LinearLayout) -> String {
    let canon = layout.clone().canonical();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "linlay 1 {} {} {}",
        canon.kind,
        canon.graph.num_vertices(),
        canon.pages.len()
    );
    out.push_str("order:");
    for v in canon.order.sequence() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    for (i, page) in canon.pages.iter().enumerate() {
        let _ = writeln!(out, "page {i}:");
        for e in &page.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.etype);
        }
    }
    out
}

fn parse_usize(tok: &str, line: usize, field: &'static str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| err(line, field, format!("expected a nonnegative integer, found {tok:?}")))
}

/// Parses a layout document. Structural problems (bad header, unknown edge
/// types, endpoints outside the order, self-loops) are errors; coverage and
/// conflict problems are left to [`super::validate_layout`].
pub fn parse_layout(text: &str) -> Result<LinearLayout, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| err(0, "header", "empty document"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "linlay" {
        return Err(err(hline, "header", "expected `linlay 1 <kind> <n> <pages>`"));
    }
    if fields[1] != "1" {
        return Err(err(hline, "version", format!("unsupported version {:?}", fields[1])));
    }
    let kind: LayoutKind = fields[2]
        .parse()
        .map_err(|_| err(hline, "kind", format!("unknown layout kind {:?}", fields[2])))?;
    let n = parse_usize(fields[3], hline, "n")?;
    let num_pages = parse_usize(fields[4], hline, "pages")?;

    let (oline, order_text) = lines
        .next()
        .ok_or_else(|| err(hline + 1, "order", "missing `order:` line"))?;
    let rest = order_text
        .strip_prefix("order:")
        .ok_or_else(|| err(oline, "order", "expected `order:` line"))?;
    let sequence = rest
        .split_whitespace()
        .map(|t| parse_usize(t, oline, "order"))
        .collect::<Result<Vec<Vertex>, _>>()?;
    if sequence.len() != n {
        return Err(err(
            oline,
            "order",
            format!("expected {n} vertices, found {}", sequence.len()),
        ));
    }
    let order = VertexOrder::new(sequence).map_err(|_| err(oline, "order", format!("not a permutation of 0..{n}")))?;

    let mut pages: Vec<Page> = Vec::new();
    for (lno, line) in lines {
        if let Some(head) = line.strip_prefix("page") {
            let idx = head
                .trim()
                .strip_suffix(':')
                .ok_or_else(|| err(lno, "page", "expected `page <i>:`"))?;
            let idx = parse_usize(idx.trim(), lno, "page")?;
            if idx != pages.len() {
                return Err(err(
                    lno,
                    "page",
                    format!("expected page {}, found page {idx}", pages.len()),
                ));
            }
            pages.push(Page::default());
            continue;
        }
        let page = pages
            .last_mut()
            .ok_or_else(|| err(lno, "page", "edge line before the first `page` line"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(err(lno, "edge", "expected `<u> <v> <hh|tt|ht|th>`"));
        }
        let u = parse_usize(toks[0], lno, "u")?;
        let v = parse_usize(toks[1], lno, "v")?;
        for (w, field) in [(u, "u"), (v, "v")] {
            if w >= n {
                return Err(err(lno, field, format!("vertex {w} out of range 0..{n}")));
            }
        }
        if u == v {
            return Err(err(lno, "v", format!("self-loop at vertex {u}")));
        }
        let etype: EdgeType = toks[2]
            .parse()
            .map_err(|_| err(lno, "etype", format!("unknown edge type {:?}", toks[2])))?;
        page.edges.push(TypedEdge::new(u, v, etype).oriented(&order));
    }
    if pages.len() != num_pages {
        return Err(err(
            hline,
            "pages",
            format!("header declares {num_pages} pages, found {}", pages.len()),
        ));
    }
    LinearLayout::from_pages(n, order, pages, kind).map_err(|e| err(hline, "layout", e.to_string()))
}
