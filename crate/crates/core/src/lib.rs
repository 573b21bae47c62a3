//! Linear layouts of graphs on stacks, queues, riques and deques.
//!
//! The crate is organised around a single artifact, the [`LinearLayout`]:
//! a vertex order plus a partition of the edges into pages, each edge carrying
//! one of the four deque edge types. Around it live
//!
//! * [`layout`]: domain types, the pairwise conflict predicate, validation,
//!   induced sublayouts and the `linlay` text format;
//! * [`sim`]: an operational deque simulator and exhaustive page-number search
//!   for tiny graphs;
//! * [`constructions`]: explicit layouts of complete and complete bipartite
//!   graphs;
//! * [`sat`]: a CNF encoding of the layout problem with a built-in CDCL solver
//!   and an external-solver hook;
//! * [`bounds`]: edge-density bounds and the page lower bounds they imply;
//! * [`render`]: SVG output (grid and arc diagrams).

pub mod bounds;
pub mod constructions;
pub mod layout;
pub mod render;
pub mod sat;
pub mod sim;

pub use layout::{
    conflicts, induced_sublayout, parse_layout, serialize_layout, validate_layout, validate_page, EdgeType, Graph,
    LayoutError, LayoutKind, LinearLayout, Page, ParseError, TypedEdge, VerificationReport, Vertex, VertexOrder,
    Violation,
};
pub use render::{render_svg, RenderMode, RenderSpec};
