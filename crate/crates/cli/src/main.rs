//! `linlay`: generate, verify, solve, render and bound linear layouts.
//!
//! Exit codes: 0 valid or satisfiable, 1 invalid or unsatisfiable, 2 usage
//! or input errors, 3 solver backend failures.

mod input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use linlay::bounds::{self, bounds_report};
use linlay::constructions::Family;
use linlay::render::{default_palette, render_svg, RenderError, RenderMode, RenderSpec};
use linlay::sat::{
    self, append_log, decode, encode, page_number_search, solve_clauses, write_dimacs, Answer, Backend, EncodeOptions,
    Limits, SatError, SearchOutcome, SearchRecord, SolveResult, Status,
};
use linlay::sim::{exact_page_number_with, validate_layout_operational, ExactOutcome, Semantics};
use linlay::{parse_layout, serialize_layout, validate_layout, LayoutKind, LinearLayout};

use input::GraphInput;

#[derive(Parser)]
#[command(name = "linlay", version, about = "Stack, queue, rique and deque layouts of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the explicit layout of a complete or complete bipartite graph.
    Generate {
        /// kn-stack, kn-deque, kn-rique, knn-deque or knn-rique
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Output file (default: stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a layout file.
    Verify {
        file: PathBuf,
        /// Also reject shared-endpoint pairs an actual deque cannot process.
        #[arg(long)]
        operational: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Find a layout with a SAT solver.
    Solve(SolveArgs),
    /// Draw a verified layout as SVG.
    Render {
        file: PathBuf,
        #[arg(long, default_value = "grid")]
        mode: RenderMode,
        /// Grid spacing in pixels.
        #[arg(long, default_value_t = 16.0)]
        cell: f64,
        /// Comma-separated colours, one per page.
        #[arg(long, value_delimiter = ',')]
        palette: Option<Vec<String>>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Exhaustive page number of a tiny graph.
    Exact {
        #[command(flatten)]
        graph: GraphInput,
        /// stack, queue, rique or deque.
        #[arg(long)]
        kind: LayoutKind,
        #[arg(long, default_value_t = 8)]
        max_pages: usize,
        #[arg(long)]
        operational: bool,
        /// Write the witness layout here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Density bounds for K_n or K_{n,n}.
    Bounds {
        #[arg(long)]
        family: bounds::Family,
        #[arg(long)]
        kind: LayoutKind,
        #[arg(long)]
        n: u64,
    },
    /// Solve a DIMACS file with the built-in solver (usable as an external
    /// solver command).
    DimacsSolve {
        file: PathBuf,
        #[arg(long)]
        conflicts: Option<u64>,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// stack, queue, rique or deque.
    #[arg(long)]
    kind: LayoutKind,
    /// Decide this page count.
    #[arg(long, conflicts_with = "min", required_unless_present = "min")]
    pages: Option<usize>,
    /// Search the least page count.
    #[arg(long)]
    min: bool,
    /// Upper end of the search (default: one page per edge).
    #[arg(long, requires = "min")]
    max: Option<usize>,
    /// Pin the identity vertex order.
    #[arg(long)]
    fixed_order: bool,
    /// Skip the symmetry-breaking clauses.
    #[arg(long)]
    no_symmetry: bool,
    /// Emit the same-page variables.
    #[arg(long)]
    chi: bool,
    /// Forbid shared-endpoint pairs an actual deque cannot process.
    #[arg(long)]
    operational: bool,
    /// External solver command with a {cnf} placeholder (overrides the
    /// environment variable).
    #[arg(long, conflicts_with = "builtin")]
    solver: Option<String>,
    /// Ignore the external solver environment variable.
    #[arg(long)]
    builtin: bool,
    /// Per-instance time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Conflict budget for the built-in solver.
    #[arg(long)]
    conflicts: Option<u64>,
    /// Witness layout file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Append one JSON record per page count tried.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Also write the CNF of a --pages instance.
    #[arg(long, requires = "pages")]
    dimacs: Option<PathBuf>,
}

/// A failure that is not a plain negative answer.
enum Failure {
    Usage(String),
    Backend(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<SatError> for Failure {
    fn from(e: SatError) -> Self {
        match e {
            SatError::Backend(_) | SatError::Model { .. } | SatError::Inconsistent(_) => {
                Failure::Backend(e.to_string())
            }
            SatError::InvalidArgument(_) | SatError::TooLarge { .. } => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Generate { family, n, out } => generate(family, n, out.as_deref()),
        Command::Verify {
            file,
            operational,
            json,
        } => verify(&file, operational, json),
        Command::Solve(args) => solve(args),
        Command::Render {
            file,
            mode,
            cell,
            palette,
            out,
        } => render(&file, mode, cell, palette, out.as_deref()),
        Command::Exact {
            graph,
            kind,
            max_pages,
            operational,
            out,
        } => exact(&graph, kind, max_pages, operational, out.as_deref()),
        Command::Bounds { family, kind, n } => bounds_cmd(family, kind, n),
        Command::DimacsSolve {
            file,
            conflicts,
            timeout,
        } => return dimacs_solve(&file, conflicts, timeout),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Backend(m)) => {
            eprintln!("solver failure: {m}");
            ExitCode::from(3)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn print_json(v: &impl Serialize) -> io::Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(io::Error::other)?;
    println!("{s}");
    Ok(())
}

fn read_layout(file: &Path) -> Result<LinearLayout, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    parse_layout(&text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>, Failure> {
    s.map(|s| Duration::try_from_secs_f64(s).map_err(|e| Failure::Usage(format!("bad timeout {s}: {e}"))))
        .transpose()
}

fn generate(family: Family, n: usize, out: Option<&Path>) -> Outcome {
    let layout = family.generate(n).map_err(|e| Failure::Usage(e.to_string()))?;
    emit(&serialize_layout(&layout), out)?;
    eprintln!(
        "{family} n={n}: {} pages, {} edges",
        layout.num_pages(),
        layout.num_edges()
    );
    Ok(true)
}

fn verify(file: &Path, operational: bool, json: bool) -> Outcome {
    let layout = read_layout(file)?;
    let report = if operational {
        validate_layout_operational(&layout)
    } else {
        validate_layout(&layout)
    };
    if json {
        print_json(&report)?;
    } else if report.valid {
        println!(
            "valid {} layout: {} vertices, {} edges, {} pages",
            layout.kind,
            layout.graph.num_vertices(),
            layout.num_edges(),
            layout.num_pages()
        );
    } else {
        println!("invalid: {} violations", report.violations.len());
        for v in &report.violations {
            println!("  {v}");
        }
    }
    Ok(report.valid)
}

fn backend(args: &SolveArgs) -> Result<Backend, Failure> {
    let timeout = seconds(args.timeout)?;
    if let Some(command) = &args.solver {
        return Ok(Backend::External {
            command: command.clone(),
            timeout,
        });
    }
    if !args.builtin {
        if let Some(b) = Backend::from_env(timeout) {
            return Ok(b);
        }
    }
    Ok(Backend::Builtin {
        limits_conflicts: args.conflicts,
        timeout,
    })
}

fn solve(args: SolveArgs) -> Outcome {
    let (g, name) = args.graph.load().map_err(Failure::Usage)?;
    let backend = backend(&args)?;
    let opts = EncodeOptions {
        fixed_order: args.fixed_order,
        symmetry_breaking: !args.no_symmetry,
        same_page_vars: args.chi,
        operational: args.operational,
    };
    let (found, mut records) = match args.pages {
        Some(p) => {
            let started = Instant::now();
            let cnf = encode(&g, p, args.kind, opts)?;
            if let Some(path) = &args.dimacs {
                let mut f = io::BufWriter::new(fs::File::create(path)?);
                write_dimacs(&cnf, &mut f)?;
                f.flush()?;
            }
            let res = sat::solve(&cnf, &backend)?;
            let mut rec = SearchRecord {
                graph: name.clone(),
                kind: args.kind,
                pages: p,
                status: Status::Unknown,
                seconds: 0.0,
                vars: cnf.num_vars,
                clauses: cnf.num_clauses(),
                witness: None,
            };
            let found = match res {
                SolveResult::Sat(model) => {
                    rec.status = Status::Sat;
                    Ok(Some((p, decode(&model, &cnf, &g)?)))
                }
                SolveResult::Unsat => {
                    rec.status = Status::Unsat;
                    Ok(None)
                }
                SolveResult::Unknown(reason) => Err(reason),
            };
            rec.seconds = started.elapsed().as_secs_f64();
            (found, vec![rec])
        }
        None => {
            let hi = args.max.unwrap_or(g.num_edges().max(1));
            let r = page_number_search(&g, &name, args.kind, 1, hi, &backend, opts)?;
            let found = match r.outcome {
                SearchOutcome::Found { pages, layout } => Ok(Some((pages, layout))),
                SearchOutcome::NoneUpTo { .. } => Ok(None),
                SearchOutcome::Unknown { pages, reason, .. } => Err(format!("undecided at {pages} pages: {reason}")),
            };
            (found, r.records)
        }
    };
    let result = match found {
        Ok(Some((p, layout))) => {
            if let (Some(rec), Some(out)) = (records.last_mut(), &args.out) {
                rec.witness = Some(out.clone());
            }
            emit(&serialize_layout(&layout), args.out.as_deref())?;
            eprintln!("{name} {}: SAT with {p} pages", args.kind);
            Ok(true)
        }
        Ok(None) => {
            let tried: Vec<String> = records
                .iter()
                .map(|r| format!("{}={:?}", r.pages, r.status).to_lowercase())
                .collect();
            println!("{name} {}: UNSAT ({})", args.kind, tried.join(", "));
            Ok(false)
        }
        Err(reason) => Err(Failure::Backend(reason)),
    };
    if let Some(log) = &args.log {
        append_log(log, &records)?;
    }
    result
}

fn render(file: &Path, mode: RenderMode, cell: f64, palette: Option<Vec<String>>, out: Option<&Path>) -> Outcome {
    let layout = read_layout(file)?;
    let spec = RenderSpec {
        mode,
        cell,
        palette: palette.unwrap_or_else(|| default_palette(layout.num_pages())),
    };
    match render_svg(&layout, &spec) {
        Ok(svg) => {
            emit(&svg, out)?;
            Ok(true)
        }
        Err(RenderError::InvalidLayout(v)) => {
            eprintln!("refusing to render an invalid layout ({} violations)", v.len());
            for x in v.iter().take(5) {
                eprintln!("  {x}");
            }
            Ok(false)
        }
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

#[derive(Serialize)]
struct ExactReport {
    graph: String,
    kind: LayoutKind,
    semantics: &'static str,
    pages: Option<usize>,
    max_pages: usize,
}

fn exact(graph: &GraphInput, kind: LayoutKind, max_pages: usize, operational: bool, out: Option<&Path>) -> Outcome {
    let (g, name) = graph.load().map_err(Failure::Usage)?;
    let sem = if operational {
        Semantics::Operational
    } else {
        Semantics::Pairwise
    };
    let res = exact_page_number_with(&g, kind, max_pages, sem).map_err(|e| Failure::Usage(e.to_string()))?;
    if let (ExactOutcome::Found { witness, .. }, Some(out)) = (&res, out) {
        fs::write(out, serialize_layout(witness))?;
    }
    print_json(&ExactReport {
        graph: name,
        kind,
        semantics: if operational { "operational" } else { "pairwise" },
        pages: res.pages(),
        max_pages,
    })?;
    Ok(res.pages().is_some())
}

fn bounds_cmd(family: bounds::Family, kind: LayoutKind, n: u64) -> Outcome {
    let r = bounds_report(family, n, kind).map_err(|e| Failure::Usage(e.to_string()))?;
    print_json(&r)?;
    Ok(true)
}

/// SAT-competition conventions: `s` line, `v` lines, exit 10 or 20.
fn dimacs_solve(file: &Path, conflicts: Option<u64>, timeout: Option<f64>) -> ExitCode {
    let run = || -> Result<u8, Failure> {
        let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
        let (num_vars, clauses) = sat::parse_dimacs(&text)?;
        let (answer, _) = solve_clauses(
            num_vars,
            &clauses,
            Limits {
                conflicts,
                time: seconds(timeout)?,
            },
        );
        let mut out = io::BufWriter::new(io::stdout().lock());
        match answer {
            Answer::Sat(model) => {
                writeln!(out, "s SATISFIABLE")?;
                let lits: Vec<String> = (1..=num_vars)
                    .map(|v| if model[v] { v.to_string() } else { format!("-{v}") })
                    .collect();
                for chunk in lits.chunks(20) {
                    writeln!(out, "v {}", chunk.join(" "))?;
                }
                writeln!(out, "v 0")?;
                Ok(10)
            }
            Answer::Unsat => {
                writeln!(out, "s UNSATISFIABLE")?;
                Ok(20)
            }
            Answer::Unknown => {
                writeln!(out, "s UNKNOWN")?;
                Ok(0)
            }
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m) | Failure::Backend(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
