//! SVG output: the grid representation (edge `(v_i, v_j)` as point `(i, j)`)
//! and the cylindric arc diagram, one panel per page.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::{validate_layout, EdgeType, LinearLayout, Violation};
use crate::sim::drawable_with_wraps;

const TAB10: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Grid,
    Arcs,
}

impl std::str::FromStr for RenderMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grid" => Ok(RenderMode::Grid),
            "arcs" => Ok(RenderMode::Arcs),
            _ => Err(format!("unknown render mode '{s}' (grid or arcs)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub mode: RenderMode,
    /// Grid spacing in pixels.
    pub cell: f64,
    /// Page `i` is drawn in `palette[i]`.
    pub palette: Vec<String>,
}

impl RenderSpec {
    pub fn new(mode: RenderMode, pages: usize) -> Self {
        RenderSpec {
            mode,
            cell: 16.0,
            palette: default_palette(pages),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("layout is not valid ({} violations), refusing to render", .0.len())]
    InvalidLayout(Vec<Violation>),
    #[error("palette has {have} colours for {pages} pages")]
    PaletteTooShort { have: usize, pages: usize },
    #[error("palette repeats colour {0}")]
    PaletteRepeats(String),
    #[error("cell size must be positive")]
    BadCell,
}

/// Pairwise distinct colours: a categorical palette up to ten pages, evenly
/// spaced hues beyond.
pub fn default_palette(pages: usize) -> Vec<String> {
    if pages <= TAB10.len() {
        return TAB10[..pages].iter().map(|c| c.to_string()).collect();
    }
    (0..pages)
        .map(|i| format!("hsl({:.2},70%,45%)", i as f64 * 360.0 / pages as f64))
        .collect()
}

pub fn render_svg(layout: &LinearLayout, spec: &RenderSpec) -> Result<String, RenderError> {
    let report = validate_layout(layout);
    if !report.valid {
        return Err(RenderError::InvalidLayout(report.violations));
    }
    if !(spec.cell > 0.0) {
        return Err(RenderError::BadCell);
    }
    let pages = layout.num_pages();
    if spec.palette.len() < pages {
        return Err(RenderError::PaletteTooShort {
            have: spec.palette.len(),
            pages,
        });
    }
    let mut seen = BTreeSet::new();
    for c in &spec.palette[..pages] {
        if !seen.insert(c.to_ascii_lowercase()) {
            return Err(RenderError::PaletteRepeats(c.clone()));
        }
    }
    Ok(match spec.mode {
        RenderMode::Grid => grid(layout, spec),
        RenderMode::Arcs => arcs(layout, spec),
    })
}

fn header(out: &mut String, w: f64, h: f64, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn is_tail(t: EdgeType) -> bool {
    matches!(t, EdgeType::TT | EdgeType::TH)
}

fn dash(t: EdgeType) -> &'static str {
    if t.wraps() {
        r#" stroke-dasharray="4 3""#
    } else {
        ""
    }
}

fn grid(layout: &LinearLayout, spec: &RenderSpec) -> String {
    let n = layout.order.len();
    let c = spec.cell;
    let margin = 2.0 * c;
    let side = margin * 2.0 + (n.max(1) - 1) as f64 * c;
    let at = |r: usize| margin + r as f64 * c;
    let mut out = String::new();
    header(
        &mut out,
        side,
        side,
        &format!(
            "{} layout, {} vertices, {} pages, grid",
            layout.kind,
            n,
            layout.num_pages()
        ),
    );

    let _ = writeln!(out, r##"<g stroke="#e4e4e4" stroke-width="1">"##);
    for r in 0..n {
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
            at(r),
            at(0),
            at(r),
            at(n - 1)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
            at(0),
            at(r),
            at(n - 1),
            at(r)
        );
    }
    let _ = writeln!(out, "</g>");

    for (p, page) in layout.pages.iter().enumerate() {
        let colour = &spec.palette[p];
        let _ = writeln!(out, r#"<g class="page" data-page="{}">"#, p + 1);
        for t in EdgeType::ALL {
            let mut pts: Vec<(usize, usize)> = page
                .edges
                .iter()
                .filter(|e| e.etype == t)
                .filter_map(|e| e.ranks(&layout.order))
                .collect();
            // stack-like types trace a decreasing curve, queue-like an increasing one
            if t.wraps() {
                pts.sort_unstable();
            } else {
                pts.sort_unstable_by_key(|&(i, j)| (i, std::cmp::Reverse(j)));
            }
            let opacity = if is_tail(t) { 0.45 } else { 1.0 };
            if pts.len() > 1 {
                let path: Vec<String> = pts.iter().map(|&(i, j)| format!("{:.1},{:.1}", at(i), at(j))).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-opacity="{opacity}" stroke-width="1.5"{}/>"#,
                    path.join(" "),
                    dash(t)
                );
            }
            for &(i, j) in &pts {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="{:.1}" fill="{colour}" fill-opacity="{opacity}" data-type="{}"/>"#,
                    at(i),
                    at(j),
                    c * 0.3,
                    t.as_str()
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Wrap points of one page, nearest to the spine end first. Pairs that are
/// only drawable in one order are respected; the rest follow the left
/// endpoint, right to left.
fn wrap_order(spans: &[(usize, usize, EdgeType)]) -> Vec<usize> {
    let k = spans.len();
    let mut before = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    let far = spans.iter().map(|s| s.1).max().unwrap_or(0) + 1;
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (spans[i], spans[j]);
            let ij = drawable_with_wraps((a.0, a.1, a.2, far), (b.0, b.1, b.2, far + 1));
            let ji = drawable_with_wraps((a.0, a.1, a.2, far + 1), (b.0, b.1, b.2, far));
            if ij && !ji {
                before[i].push(j);
                indeg[j] += 1;
            } else if ji && !ij {
                before[j].push(i);
                indeg[i] += 1;
            }
        }
    }
    let key = |i: usize| (std::cmp::Reverse(spans[i].0), spans[i].1, i);
    let mut ready: BTreeSet<_> = (0..k).filter(|&i| indeg[i] == 0).map(key).collect();
    let mut done = vec![false; k];
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let next = match ready.pop_first() {
            Some((_, _, i)) => i,
            // a cycle cannot come from a drawable page; place the rest by key
            None => (0..k).filter(|&i| !done[i]).min_by_key(|&i| key(i)).unwrap(),
        };
        done[next] = true;
        out.push(next);
        for &j in &before[next] {
            indeg[j] -= 1;
            if indeg[j] == 0 && !done[j] {
                ready.insert(key(j));
            }
        }
    }
    out
}

fn arcs(layout: &LinearLayout, spec: &RenderSpec) -> String {
    let n = layout.order.len();
    let c = spec.cell;
    let margin = 2.0 * c;
    let max_wraps = layout
        .pages
        .iter()
        .map(|p| p.edges.iter().filter(|e| e.etype.wraps()).count())
        .max()
        .unwrap_or(0);
    // wrap points sit at half-cell steps past the last vertex
    let span = (n.max(1) - 1) as f64 * c + (max_wraps as f64) * c * 0.5;
    let width = span + 2.0 * margin;
    let panel = span + 2.0 * margin;
    let height = panel * layout.num_pages().max(1) as f64;
    let x = |r: usize| margin + r as f64 * c;
    let wx = |k: usize| x(n.max(1) - 1) + (k + 1) as f64 * c * 0.5;
    let mut out = String::new();
    header(
        &mut out,
        width,
        height,
        &format!(
            "{} layout, {} vertices, {} pages, arcs",
            layout.kind,
            n,
            layout.num_pages()
        ),
    );

    for (p, page) in layout.pages.iter().enumerate() {
        let colour = &spec.palette[p];
        let y = p as f64 * panel + panel / 2.0;
        let _ = writeln!(out, r#"<g class="page" data-page="{}">"#, p + 1);
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black" stroke-width="1"/>"#,
            x(0),
            margin + span
        );
        let _ = writeln!(
            out,
            r#"<text x="4" y="{:.1}" font-size="{:.1}" font-family="sans-serif">{}</text>"#,
            y - panel / 2.0 + c,
            c * 0.8,
            p + 1
        );

        let spans: Vec<(usize, usize, EdgeType)> = page
            .edges
            .iter()
            .filter_map(|e| e.ranks(&layout.order).map(|(a, b)| (a, b, e.etype)))
            .collect();
        let wrapping: Vec<usize> = (0..spans.len()).filter(|&i| spans[i].2.wraps()).collect();
        let mut wrap_at = vec![0usize; spans.len()];
        let sub: Vec<_> = wrapping.iter().map(|&i| spans[i]).collect();
        for (slot, idx) in wrap_order(&sub).into_iter().enumerate() {
            wrap_at[wrapping[idx]] = slot;
        }

        for (i, &(a, b, t)) in spans.iter().enumerate() {
            let opacity = if is_tail(t) { 0.5 } else { 1.0 };
            // sweep 1 runs left to right over the spine, sweep 0 under it
            let half = |x1: f64, x2: f64, above: bool| {
                format!(
                    "M {x1:.1} {y:.1} A {r:.1} {r:.1} 0 0 {} {x2:.1} {y:.1}",
                    above as u8,
                    r = (x2 - x1) / 2.0
                )
            };
            let d = match t {
                EdgeType::HH => half(x(a), x(b), true),
                EdgeType::TT => half(x(a), x(b), false),
                EdgeType::HT => format!(
                    "{} {}",
                    half(x(a), wx(wrap_at[i]), true),
                    half(x(b), wx(wrap_at[i]), false)
                ),
                EdgeType::TH => format!(
                    "{} {}",
                    half(x(a), wx(wrap_at[i]), false),
                    half(x(b), wx(wrap_at[i]), true)
                ),
            };
            let _ = writeln!(
                out,
                r#"<path d="{d}" fill="none" stroke="{colour}" stroke-opacity="{opacity}" stroke-width="1.5"{} data-type="{}"/>"#,
                dash(t),
                t.as_str()
            );
        }
        for r in 0..n {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{y:.1}" r="{:.1}" fill="black"/>"#,
                x(r),
                c * 0.15
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
