//! CNF encoding of "G has a p-page layout of a given kind".
//!
//! Variables:
//!
//! * `sigma(u, v)` for `u < v`, true iff `u` precedes `v`; `sigma(v, u)` is
//!   its negation;
//! * `phi(i, e)`, edge `e` lies on page `i`;
//! * `tau(i, e, x)`, edge `e` has type `x` on page `i`, only for types the
//!   kind allows;
//! * `chi(e, f)`, edges `e` and `f` share a page (only with
//!   [`EncodeOptions::same_page_vars`]).
//!
//! Every forbidden configuration of two independent edges becomes one clause
//! per page and type pair: the negation of `phi, phi, tau, tau` and of the
//! three-literal `sigma` chain that fixes the order of the four endpoints.

mod solver;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use solver::{solve_clauses, Answer, Limits, Solver, Stats};

use crate::bounds::density_lower_bound;
use crate::layout::{
    independent_conflict, validate_layout, EdgeType, Graph, LayoutKind, LinearLayout, Page, TypedEdge, Vertex,
    VertexOrder, Violation,
};
use crate::sim::{shared_endpoint_conflict, SharedShape};

/// Clause count above which the built-in backend refuses an instance.
pub const BUILTIN_CLAUSE_CAP: usize = 250_000;

/// Environment variable holding the default external solver command.
pub const SOLVER_ENV: &str = "LINLAY_SAT_SOLVER";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("model line {line}: {message}")]
    Model { line: usize, message: String },
    #[error("instance has {clauses} clauses, built-in solver cap is {cap}; use an external solver")]
    TooLarge { clauses: usize, cap: usize },
    #[error("external solver: {0}")]
    Backend(String),
    #[error("decoded assignment is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EncodeOptions {
    /// Pin the identity order `0 < 1 < ... < n-1`.
    pub fixed_order: bool,
    /// Sound symmetry breaking: the first edge goes to page 0 with a
    /// head-inserted type. For complete graphs the order is pinned outright;
    /// for balanced complete bipartite graphs each side keeps its index order
    /// and the side of vertex 0 starts.
    pub symmetry_breaking: bool,
    /// Emit the same-page variables and their linking clauses.
    pub same_page_vars: bool,
    /// Add clauses for edges with a common endpoint (the deque semantics).
    pub operational: bool,
}

/// Variable numbering. Ids are dense and 1-based in the order sigma, phi,
/// tau, chi.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarMap {
    pub num_vertices: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    pub pages: usize,
    pub types: Vec<EdgeType>,
    pub with_chi: bool,
}

impl VarMap {
    fn num_sigma(&self) -> usize {
        self.num_vertices * self.num_vertices.saturating_sub(1) / 2
    }

    fn phi_base(&self) -> usize {
        self.num_sigma()
    }

    fn tau_base(&self) -> usize {
        self.phi_base() + self.pages * self.edges.len()
    }

    fn chi_base(&self) -> usize {
        self.tau_base() + self.pages * self.edges.len() * self.types.len()
    }

    pub fn num_vars(&self) -> usize {
        let m = self.edges.len();
        self.chi_base() + if self.with_chi { m * m.saturating_sub(1) / 2 } else { 0 }
    }

    /// Literal "`u` precedes `v`".
    pub fn sigma(&self, u: Vertex, v: Vertex) -> i32 {
        assert!(u != v && u < self.num_vertices && v < self.num_vertices);
        let (a, b) = (u.min(v), u.max(v));
        let n = self.num_vertices;
        // pairs (a, b) with a < b in row-major order
        let id = a * (2 * n - a - 1) / 2 + (b - a - 1) + 1;
        if u < v {
            id as i32
        } else {
            -(id as i32)
        }
    }

    pub fn phi(&self, page: usize, edge: usize) -> i32 {
        (self.phi_base() + page * self.edges.len() + edge + 1) as i32
    }

    /// `None` when the kind does not allow `t`.
    pub fn tau(&self, page: usize, edge: usize, t: EdgeType) -> Option<i32> {
        let k = self.types.iter().position(|&x| x == t)?;
        let m = self.edges.len();
        Some((self.tau_base() + (page * m + edge) * self.types.len() + k + 1) as i32)
    }

    pub fn chi(&self, e: usize, f: usize) -> Option<i32> {
        if !self.with_chi || e == f {
            return None;
        }
        let (a, b) = (e.min(f), e.max(f));
        let m = self.edges.len();
        Some((self.chi_base() + a * (2 * m - a - 1) / 2 + (b - a - 1) + 1) as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub varmap: VarMap,
    pub kind: LayoutKind,
    /// The graph has no edges: the instance is satisfiable by any order.
    pub trivial: bool,
    /// Shared-endpoint clauses are included.
    pub operational: bool,
}

impl CnfInstance {
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }
}

/// Pairs `(u, v)` such that some optimal layout has `u` before `v`, derived
/// from the automorphisms of complete and balanced complete bipartite graphs.
fn symmetric_precedences(g: &Graph) -> Vec<(Vertex, Vertex)> {
    let n = g.num_vertices();
    if g.is_complete() {
        return (1..n).map(|v| (v - 1, v)).collect();
    }
    if n % 2 != 0 || g.num_edges() != (n / 2) * (n / 2) {
        return Vec::new();
    }
    // balanced complete bipartite: the neighbourhood of 0 is the other side
    let side: BTreeSet<Vertex> = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            if u == 0 {
                Some(v)
            } else if v == 0 {
                Some(u)
            } else {
                None
            }
        })
        .collect();
    let bipartite = side.len() == n / 2 && g.edges().iter().all(|&(u, v)| side.contains(&u) != side.contains(&v));
    if !bipartite {
        return Vec::new();
    }
    let a: Vec<Vertex> = (0..n).filter(|v| !side.contains(v)).collect();
    let b: Vec<Vertex> = side.into_iter().collect();
    let mut out: Vec<(Vertex, Vertex)> = a.windows(2).chain(b.windows(2)).map(|w| (w[0], w[1])).collect();
    out.push((a[0], b[0]));
    out
}

/// Orders of four distinct vertices (`[u, v]` for `e`, `[s, t]` for `f`) under
/// which `e` with type `x` and `f` with type `y` conflict.
pub fn forbidden_orders(e: (Vertex, Vertex), x: EdgeType, f: (Vertex, Vertex), y: EdgeType) -> Vec<[Vertex; 4]> {
    let verts = [e.0, e.1, f.0, f.1];
    let mut out = Vec::new();
    for perm in permutations4() {
        let seq = perm.map(|i| verts[i]);
        let rank = |w: Vertex| seq.iter().position(|&z| z == w).unwrap();
        let (a, b) = (rank(e.0).min(rank(e.1)), rank(e.0).max(rank(e.1)));
        let (c, d) = (rank(f.0).min(rank(f.1)), rank(f.0).max(rank(f.1)));
        if independent_conflict(a, b, x, c, d, y) {
            out.push(seq);
        }
    }
    out
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a == b || a == c || b == c {
                    continue;
                }
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

/// Orders of three vertices under which two edges sharing an endpoint conflict
/// in the deque.
fn shared_forbidden_orders(e: (Vertex, Vertex), x: EdgeType, f: (Vertex, Vertex), y: EdgeType) -> Vec<[Vertex; 3]> {
    let common = if e.0 == f.0 || e.0 == f.1 { e.0 } else { e.1 };
    let oe = if e.0 == common { e.1 } else { e.0 };
    let of = if f.0 == common { f.1 } else { f.0 };
    let verts = [common, oe, of];
    let mut out = Vec::new();
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let seq = perm.map(|i| verts[i]);
        let rank = |w: Vertex| seq.iter().position(|&z| z == w).unwrap();
        let (rc, re, rf) = (rank(common), rank(oe), rank(of));
        let conflict = if rc < re && rc < rf {
            // common left end; the long edge is the one reaching further
            if re > rf {
                shared_endpoint_conflict(SharedShape::Left, x, y)
            } else {
                shared_endpoint_conflict(SharedShape::Left, y, x)
            }
        } else if rc > re && rc > rf {
            if re < rf {
                shared_endpoint_conflict(SharedShape::Right, x, y)
            } else {
                shared_endpoint_conflict(SharedShape::Right, y, x)
            }
        } else {
            false
        };
        if conflict {
            out.push(seq);
        }
    }
    out
}

/// Builds the formula for `pages` pages of `kind`.
pub fn encode(g: &Graph, pages: usize, kind: LayoutKind, opts: EncodeOptions) -> Result<CnfInstance, SatError> {
    if pages == 0 {
        return Err(SatError::InvalidArgument("need at least one page".into()));
    }
    let n = g.num_vertices();
    let edges = g.edges().to_vec();
    let m = edges.len();
    let vm = VarMap {
        num_vertices: n,
        edges: edges.clone(),
        pages,
        types: kind.allowed_types().to_vec(),
        with_chi: opts.same_page_vars,
    };
    let mut cl: Vec<Vec<i32>> = Vec::new();

    // (a) no cyclic triple, which with the sign convention makes sigma a
    // linear order
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                cl.push(vec![-vm.sigma(u, v), -vm.sigma(v, w), -vm.sigma(w, u)]);
                cl.push(vec![-vm.sigma(v, u), -vm.sigma(w, v), -vm.sigma(u, w)]);
            }
        }
    }

    // (b) pages and types
    for e in 0..m {
        cl.push((0..pages).map(|i| vm.phi(i, e)).collect());
        for i in 0..pages {
            let mut c = vec![-vm.phi(i, e)];
            for &t in &vm.types {
                let tv = vm.tau(i, e, t).unwrap();
                c.push(tv);
                cl.push(vec![-tv, vm.phi(i, e)]);
            }
            cl.push(c);
        }
    }

    // (c) conflicts
    for e in 0..m {
        for f in e + 1..m {
            let (eu, ev) = edges[e];
            let (fu, fv) = edges[f];
            let shared = eu == fu || eu == fv || ev == fu || ev == fv;
            if shared && !opts.operational {
                continue;
            }
            for &x in &vm.types {
                for &y in &vm.types {
                    let chains: Vec<Vec<i32>> = if shared {
                        shared_forbidden_orders(edges[e], x, edges[f], y)
                            .into_iter()
                            .map(|s| vec![vm.sigma(s[0], s[1]), vm.sigma(s[1], s[2])])
                            .collect()
                    } else {
                        forbidden_orders(edges[e], x, edges[f], y)
                            .into_iter()
                            .map(|s| vec![vm.sigma(s[0], s[1]), vm.sigma(s[1], s[2]), vm.sigma(s[2], s[3])])
                            .collect()
                    };
                    for chain in &chains {
                        for i in 0..pages {
                            let mut c = vec![
                                -vm.phi(i, e),
                                -vm.phi(i, f),
                                -vm.tau(i, e, x).unwrap(),
                                -vm.tau(i, f, y).unwrap(),
                            ];
                            c.extend(chain.iter().map(|&l| -l));
                            cl.push(c);
                        }
                    }
                }
            }
            if let Some(chi) = vm.chi(e, f) {
                for i in 0..pages {
                    cl.push(vec![-vm.phi(i, e), -vm.phi(i, f), chi]);
                }
            }
        }
    }

    // (d) fixed order
    if opts.fixed_order {
        for u in 0..n {
            for v in u + 1..n {
                cl.push(vec![vm.sigma(u, v)]);
            }
        }
    }

    // (e) symmetry breaking
    if opts.symmetry_breaking && m > 0 {
        cl.push(vec![vm.phi(0, 0)]);
        let heads: Vec<i32> = vm
            .types
            .iter()
            .filter(|t| !t.inserts_at_head())
            .map(|&t| -vm.tau(0, 0, t).unwrap())
            .collect();
        for h in heads {
            cl.push(vec![h]);
        }
        if !opts.fixed_order {
            for (u, v) in symmetric_precedences(g) {
                cl.push(vec![vm.sigma(u, v)]);
            }
        }
    }

    Ok(CnfInstance {
        num_vars: vm.num_vars(),
        clauses: cl,
        varmap: vm,
        kind,
        trivial: m == 0,
        operational: opts.operational,
    })
}

/// Writes `cnf` in DIMACS format.
pub fn write_dimacs(cnf: &CnfInstance, sink: &mut impl Write) -> io::Result<()> {
    writeln!(sink, "c linlay {} pages={}", cnf.kind, cnf.varmap.pages)?;
    writeln!(sink, "p cnf {} {}", cnf.num_vars, cnf.clauses.len())?;
    let mut line = String::new();
    for c in &cnf.clauses {
        line.clear();
        for l in c {
            let _ = write!(line, "{l} ");
        }
        line.push('0');
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

/// Parses `p cnf` input back into a clause list; used by the CLI's
/// `dimacs-solve` command and by tests.
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i32>>), SatError> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let nums: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| SatError::Model {
                    line: i + 1,
                    message: "bad header".into(),
                })?;
            if nums.len() != 2 {
                return Err(SatError::Model {
                    line: i + 1,
                    message: "bad header".into(),
                });
            }
            header = Some((nums[0], nums[1]));
            continue;
        }
        let (nv, _) = header.ok_or(SatError::Model {
            line: i + 1,
            message: "clause before header".into(),
        })?;
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| SatError::Model {
                line: i + 1,
                message: format!("bad literal {tok:?}"),
            })?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if l.unsigned_abs() as usize > nv {
                return Err(SatError::Model {
                    line: i + 1,
                    message: format!("literal {l} out of range"),
                });
            } else {
                cur.push(l);
            }
        }
    }
    let (nv, nc) = header.ok_or(SatError::Model {
        line: 0,
        message: "missing header".into(),
    })?;
    if !cur.is_empty() {
        clauses.push(cur);
    }
    if clauses.len() != nc {
        return Err(SatError::Model {
            line: 0,
            message: format!("header says {nc} clauses, found {}", clauses.len()),
        });
    }
    Ok((nv, clauses))
}

/// Solver verdict carried through the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Assignment indexed by variable id; index 0 unused.
    Sat(Vec<bool>),
    Unsat,
    Unknown(String),
}

/// Parses solver output: competition style (`s SATISFIABLE` plus `v` lines),
/// MiniSat result files (`SAT` then literals) or a bare literal list.
pub fn parse_model(text: &str, num_vars: usize) -> Result<SolveResult, SatError> {
    let mut status: Option<bool> = None;
    let mut lits: Vec<i32> = Vec::new();
    let mut terminated = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let body = if let Some(s) = line.strip_prefix("s ") {
            match s.trim() {
                "SATISFIABLE" => status = Some(true),
                "UNSATISFIABLE" => status = Some(false),
                "UNKNOWN" | "INDETERMINATE" => return Ok(SolveResult::Unknown("solver reported unknown".into())),
                other => {
                    return Err(SatError::Model {
                        line: lineno,
                        message: format!("unknown status {other:?}"),
                    })
                }
            }
            continue;
        } else if line == "SAT" || line == "SATISFIABLE" {
            status = Some(true);
            continue;
        } else if line == "UNSAT" || line == "UNSATISFIABLE" {
            status = Some(false);
            continue;
        } else if line == "INDET" || line == "UNKNOWN" {
            return Ok(SolveResult::Unknown("solver reported unknown".into()));
        } else if let Some(rest) = line.strip_prefix('v') {
            rest
        } else {
            line
        };
        for tok in body.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| SatError::Model {
                line: lineno,
                message: format!("bad literal {tok:?}"),
            })?;
            if terminated {
                return Err(SatError::Model {
                    line: lineno,
                    message: "literal after terminating 0".into(),
                });
            }
            if l == 0 {
                terminated = true;
                continue;
            }
            if l.unsigned_abs() as usize > num_vars {
                return Err(SatError::Model {
                    line: lineno,
                    message: format!("literal {l} out of range 1..={num_vars}"),
                });
            }
            lits.push(l);
        }
    }
    match status {
        Some(false) => return Ok(SolveResult::Unsat),
        None if lits.is_empty() => {
            return Err(SatError::Model {
                line: 0,
                message: "no status and no model".into(),
            })
        }
        _ => {}
    }
    let mut set = vec![None; num_vars + 1];
    for l in lits {
        let v = l.unsigned_abs() as usize;
        if set[v].replace(l > 0).is_some_and(|old| old != (l > 0)) {
            return Err(SatError::Model {
                line: 0,
                message: format!("variable {v} assigned both ways"),
            });
        }
    }
    if let Some(v) = (1..=num_vars).find(|&v| set[v].is_none()) {
        return Err(SatError::Model {
            line: 0,
            message: format!("model is truncated: variable {v} missing"),
        });
    }
    Ok(SolveResult::Sat(set.into_iter().map(|x| x.unwrap_or(false)).collect()))
}

/// Which solver answers a [`CnfInstance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Builtin {
        limits_conflicts: Option<u64>,
        timeout: Option<Duration>,
    },
    /// Shell command with a `{cnf}` placeholder for the DIMACS path; output
    /// on stdout is read with [`parse_model`].
    External { command: String, timeout: Option<Duration> },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Builtin {
            limits_conflicts: None,
            timeout: None,
        }
    }
}

impl Backend {
    /// External backend from [`SOLVER_ENV`] if set.
    pub fn from_env(timeout: Option<Duration>) -> Option<Backend> {
        let command = std::env::var(SOLVER_ENV).ok().filter(|c| !c.trim().is_empty())?;
        Some(Backend::External { command, timeout })
    }
}

fn check_model(cnf: &CnfInstance, model: &[bool]) -> Result<(), SatError> {
    for c in &cnf.clauses {
        if !c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)) {
            return Err(SatError::Inconsistent(format!("model violates clause {c:?}")));
        }
    }
    Ok(())
}

fn run_external(cnf: &CnfInstance, command: &str, timeout: Option<Duration>) -> Result<SolveResult, SatError> {
    if !command.contains("{cnf}") {
        return Err(SatError::InvalidArgument(format!(
            "solver command {command:?} lacks the {{cnf}} placeholder"
        )));
    }
    let mut file = tempfile::Builder::new()
        .prefix("linlay-")
        .suffix(".cnf")
        .tempfile()
        .map_err(|e| SatError::Backend(format!("temp file: {e}")))?;
    write_dimacs(cnf, &mut io::BufWriter::new(file.as_file_mut()))
        .map_err(|e| SatError::Backend(format!("writing DIMACS: {e}")))?;
    let path = file.path().to_string_lossy().into_owned();
    let script = command.replace("{cnf}", &shell_quote(&path));
    let out_file = tempfile::tempfile().map_err(|e| SatError::Backend(format!("temp file: {e}")))?;
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&script)
        .stdin(Stdio::null())
        .stdout(out_file.try_clone().map_err(|e| SatError::Backend(e.to_string()))?)
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| SatError::Backend(format!("cannot start {script:?}: {e}")))?;
    let started = Instant::now();
    let status = loop {
        if let Some(st) = child.try_wait().map_err(|e| SatError::Backend(e.to_string()))? {
            break st;
        }
        if timeout.is_some_and(|t| started.elapsed() >= t) {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(SolveResult::Unknown(format!("timed out after {:?}", timeout.unwrap())));
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let mut text = String::new();
    {
        use std::io::{Read, Seek};
        let mut f = out_file;
        f.rewind().map_err(|e| SatError::Backend(e.to_string()))?;
        f.read_to_string(&mut text)
            .map_err(|e| SatError::Backend(e.to_string()))?;
    }
    // SAT solvers conventionally exit with 10 or 20
    match status.code() {
        Some(0 | 10 | 20) => {}
        other => {
            return Err(SatError::Backend(format!("{script:?} exited with {other:?}")));
        }
    }
    let res = parse_model(&text, cnf.num_vars)?;
    if let SolveResult::Sat(m) = &res {
        check_model(cnf, m)?;
    }
    Ok(res)
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

/// Runs a backend on `cnf`. Satisfying assignments are checked against every
/// clause before they are returned.
pub fn solve(cnf: &CnfInstance, backend: &Backend) -> Result<SolveResult, SatError> {
    match backend {
        Backend::Builtin {
            limits_conflicts,
            timeout,
        } => {
            if cnf.clauses.len() > BUILTIN_CLAUSE_CAP {
                return Err(SatError::TooLarge {
                    clauses: cnf.clauses.len(),
                    cap: BUILTIN_CLAUSE_CAP,
                });
            }
            let limits = Limits {
                conflicts: *limits_conflicts,
                time: *timeout,
            };
            let (answer, stats) = solve_clauses(cnf.num_vars, &cnf.clauses, limits);
            Ok(match answer {
                Answer::Sat(m) => {
                    check_model(cnf, &m)?;
                    SolveResult::Sat(m)
                }
                Answer::Unsat => SolveResult::Unsat,
                Answer::Unknown => {
                    SolveResult::Unknown(format!("budget exhausted after {} conflicts", stats.conflicts))
                }
            })
        }
        Backend::External { command, timeout } => run_external(cnf, command, *timeout),
    }
}

/// Turns a satisfying assignment into a layout and validates it.
pub fn decode(model: &[bool], cnf: &CnfInstance, g: &Graph) -> Result<LinearLayout, SatError> {
    let vm = &cnf.varmap;
    let n = vm.num_vertices;
    if model.len() < cnf.num_vars + 1 {
        return Err(SatError::Inconsistent(
            "assignment shorter than the variable count".into(),
        ));
    }
    if g.edges() != vm.edges.as_slice() {
        return Err(SatError::InvalidArgument("graph does not match the encoded one".into()));
    }
    let holds = |lit: i32| model[lit.unsigned_abs() as usize] == (lit > 0);
    // in a transitive tournament the rank is the number of predecessors
    let mut seq = vec![usize::MAX; n];
    for u in 0..n {
        let before = (0..n).filter(|&v| v != u && holds(vm.sigma(v, u))).count();
        if seq[before] != usize::MAX {
            return Err(SatError::Inconsistent("order variables contain a cycle".into()));
        }
        seq[before] = u;
    }
    let order = VertexOrder::new(seq).map_err(|e| SatError::Inconsistent(e.to_string()))?;
    let mut pages = vec![Page::default(); vm.pages];
    for (e, &(u, v)) in vm.edges.iter().enumerate() {
        let placed = (0..vm.pages).find_map(|i| {
            if !holds(vm.phi(i, e)) {
                return None;
            }
            vm.types
                .iter()
                .find(|&&t| holds(vm.tau(i, e, t).unwrap()))
                .map(|&t| (i, t))
        });
        let (i, t) =
            placed.ok_or_else(|| SatError::Inconsistent(format!("edge ({u}, {v}) has no page with a type")))?;
        pages[i].edges.push(TypedEdge::new(u, v, t).oriented(&order));
    }
    let layout = LinearLayout::new(g.clone(), order, pages, cnf.kind)
        .map_err(|e| SatError::Inconsistent(e.to_string()))?
        .canonical();
    let report = if cnf.operational {
        crate::sim::validate_layout_operational(&layout)
    } else {
        validate_layout(&layout)
    };
    if !report.valid {
        let first = report.violations.first().map(Violation::to_string).unwrap_or_default();
        return Err(SatError::Inconsistent(format!(
            "decoded layout fails validation: {first}"
        )));
    }
    Ok(layout)
}

/// Satisfiability verdict of one page count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
    /// Skipped because the density bound already rules it out.
    Bound,
}

/// One line of the JSON-lines sweep log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub graph: String,
    pub kind: LayoutKind,
    pub pages: usize,
    pub status: Status,
    pub seconds: f64,
    pub vars: usize,
    pub clauses: usize,
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        pages: usize,
        layout: LinearLayout,
    },
    /// Every page count in the bracket is unsatisfiable.
    NoneUpTo {
        hi: usize,
    },
    /// The backend gave up at `pages`; everything below is unsatisfiable.
    Unknown {
        lo: usize,
        pages: usize,
        reason: String,
    },
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub records: Vec<SearchRecord>,
}

/// Least `p` in `[lo, hi]` with a `p`-page layout, scanning upward. The
/// density bound raises `lo` when it is larger.
pub fn page_number_search(
    g: &Graph,
    name: &str,
    kind: LayoutKind,
    lo: usize,
    hi: usize,
    backend: &Backend,
    opts: EncodeOptions,
) -> Result<SearchResult, SatError> {
    if lo == 0 || lo > hi {
        return Err(SatError::InvalidArgument(format!("bad bracket [{lo}, {hi}]")));
    }
    let n = g.num_vertices();
    let bound = if n >= 3 && g.num_edges() > 0 {
        density_lower_bound(n as u64, g.num_edges() as u64, kind)
            .map(|b| b as usize)
            .unwrap_or(hi + 1)
    } else {
        1
    };
    let mut records = Vec::new();
    for p in lo..bound.max(lo).min(hi + 1) {
        records.push(SearchRecord {
            graph: name.to_string(),
            kind,
            pages: p,
            status: Status::Bound,
            seconds: 0.0,
            vars: 0,
            clauses: 0,
            witness: None,
        });
    }
    for p in bound.max(lo)..=hi {
        let started = Instant::now();
        let cnf = encode(g, p, kind, opts)?;
        let res = solve(&cnf, backend)?;
        let mut rec = SearchRecord {
            graph: name.to_string(),
            kind,
            pages: p,
            status: Status::Unknown,
            seconds: 0.0,
            vars: cnf.num_vars,
            clauses: cnf.num_clauses(),
            witness: None,
        };
        match res {
            SolveResult::Sat(model) => {
                let layout = decode(&model, &cnf, g)?;
                rec.status = Status::Sat;
                rec.seconds = started.elapsed().as_secs_f64();
                records.push(rec);
                return Ok(SearchResult {
                    outcome: SearchOutcome::Found { pages: p, layout },
                    records,
                });
            }
            SolveResult::Unsat => {
                rec.status = Status::Unsat;
                rec.seconds = started.elapsed().as_secs_f64();
                records.push(rec);
            }
            SolveResult::Unknown(reason) => {
                rec.seconds = started.elapsed().as_secs_f64();
                records.push(rec);
                return Ok(SearchResult {
                    outcome: SearchOutcome::Unknown { lo, pages: p, reason },
                    records,
                });
            }
        }
    }
    Ok(SearchResult {
        outcome: SearchOutcome::NoneUpTo { hi },
        records,
    })
}

/// Appends records to a JSON-lines log.
pub fn append_log(path: &Path, records: &[SearchRecord]) -> io::Result<()> {
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    for r in records {
        let line = serde_json::to_string(r).map_err(io::Error::other)?;
        writeln!(f, "{line}")?;
    }
    Ok(())
}
