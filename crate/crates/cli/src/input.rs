use std::fs;
use std::path::PathBuf;

use clap::Args;

use linlay::Graph;

/// Exactly one of `--kn`, `--knn`, `--edges`.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct GraphInput {
    /// Complete graph on N vertices.
    #[arg(long, value_name = "N")]
    pub kn: Option<usize>,
    /// Complete bipartite graph K_{N,N}: parts 0..N and N..2N.
    #[arg(long, value_name = "N")]
    pub knn: Option<usize>,
    /// Edge list, one `u v` pair per line; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
}

impl GraphInput {
    /// The graph and a short name for logs.
    pub fn load(&self) -> Result<(Graph, String), String> {
        if let Some(n) = self.kn {
            return Ok((Graph::complete(n), format!("K_{n}")));
        }
        if let Some(n) = self.knn {
            return Ok((Graph::complete_bipartite(n), format!("K_{n},{n}")));
        }
        let path = self.edges.as_ref().expect("clap enforces one graph source");
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let g = parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((g, name))
    }
}

/// Vertices are `0..=max id`.
pub fn parse_edge_list(text: &str) -> Result<Graph, String> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ids: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = ids[..] else {
            return Err(format!("line {}: expected two vertex ids, got '{line}'", i + 1));
        };
        let parse = |s: &str| s.parse::<usize>().map_err(|e| format!("line {}: '{s}': {e}", i + 1));
        edges.push((parse(u)?, parse(v)?));
    }
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::new(n, edges).map_err(|e| e.to_string())
}
