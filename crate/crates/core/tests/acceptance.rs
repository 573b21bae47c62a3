//! One line per acceptance criterion. PASS: reproduced as expected. FINDING:
//! the computation disagrees with an expected value, the disagreement is
//! confirmed by an independent check and recorded in the docs. FAIL: anything
//! else; the process then exits nonzero.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use linlay::bounds::{check_ceiling_identity, max_edges_deque, max_edges_rique};
use linlay::constructions::{
    count_deviations, deque_layout_kn, deque_layout_knn, rique_layout_kn, rique_layout_knn, stated_page_counts, Family,
};
use linlay::layout::conflicts;
use linlay::sat::{encode, page_number_search, solve, Backend, EncodeOptions, SearchOutcome, SolveResult};
use linlay::sim::{
    cylindric_pair_drawable, edges_conflict_with, exact_page_number_with, rique_pattern_check, simulate_page, Semantics,
};
use linlay::{validate_layout, validate_page, EdgeType, Graph, LayoutKind, LinearLayout, Page, TypedEdge, VertexOrder};

enum Verdict {
    Pass(String),
    Finding(String),
    Fail(String),
}

use Verdict::*;

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("ceiling identity", c1_ceiling_identity),
        ("density formulas", c2_density),
        ("exact tiny page numbers", c3_exact),
        ("SAT reproduction", c4_sat),
        ("constructions", c5_constructions),
        ("conflict predicate fidelity", c6_conflicts),
        ("validator vs deque simulation", c7_simulation),
        ("rique pattern equivalence", c8_pattern),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = started.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Pass(d) => ("PASS", d),
            Finding(d) => ("FINDING", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} [{tag}] {name} ({secs:.2}s): {detail}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn c1_ceiling_identity() -> Verdict {
    let started = Instant::now();
    let ok = check_ceiling_identity(100_000).unwrap();
    let t = started.elapsed();
    match (ok, t < Duration::from_secs(1)) {
        (true, true) => Pass(format!("holds for 3 <= n <= 100000 in {:.0} ms", t.as_secs_f64() * 1e3)),
        (true, false) => Fail(format!("holds but took {t:?}")),
        (false, _) => Fail("identity violated".into()),
    }
}

fn c2_density() -> Verdict {
    let d = max_edges_deque(10, 2).unwrap();
    let r = max_edges_rique(10, 2).unwrap();
    // direct evaluation of the two closed forms
    if d != (2 * 2 + 1) * 10 - 5 * 2 - 1 || d != 39 || r != (2 * 10 + 2) * 2 - 2 * 2 + (10 - 3) || r != 47 {
        return Fail(format!("deque(10,2) = {d}, rique(10,2) = {r}"));
    }
    for k in 1..=20i64 {
        let f = |n: i64| max_edges_deque(n as u64, k as u64).unwrap();
        let slope = f(11) - f(10);
        let intercept = f(10) - 10 * slope;
        if (3..200).any(|n| f(n + 1) - f(n) != slope) || slope != 2 * k + 1 || intercept != -5 * k - 1 {
            return Fail(format!(
                "deque coefficients at k = {k}: slope {slope}, intercept {intercept}"
            ));
        }
    }
    for n in 3..=60i64 {
        let f = |k: i64| max_edges_rique(n as u64, k as u64).unwrap();
        let second = f(3) - 2 * f(2) + f(1);
        let quad = second / 2;
        let lin = f(2) - f(1) - quad * 3;
        let cons = f(1) - quad - lin;
        let steady = (1..n).all(|k| f(k + 2) - 2 * f(k + 1) + f(k) == second);
        if !steady || quad != -1 || lin != 2 * n + 2 || cons != n - 3 {
            return Fail(format!("rique coefficients at n = {n}: {quad}, {lin}, {cons}"));
        }
    }
    Pass("deque(10,2) = 39, rique(10,2) = 47; differences give (2k+1, -5k-1) and (-1, 2n+2, n-3)".into())
}

fn exact(g: &Graph, kind: LayoutKind, sem: Semantics) -> usize {
    exact_page_number_with(g, kind, 6, sem).unwrap().pages().unwrap()
}

fn c3_exact() -> Verdict {
    let mut deque = Vec::new();
    let mut rique = Vec::new();
    for sem in [Semantics::Pairwise, Semantics::Operational] {
        deque.push(
            (3..=6)
                .map(|n| exact(&Graph::complete(n), LayoutKind::Deque, sem))
                .collect::<Vec<_>>(),
        );
        rique.push(
            (4..=7)
                .map(|n| exact(&Graph::complete(n), LayoutKind::Rique, sem))
                .collect::<Vec<_>>(),
        );
    }
    let quarter: Vec<usize> = (3..=6usize).map(|n| n.div_ceil(4)).collect();
    let third: Vec<usize> = (4..=7usize).map(|n| ((n - 1) / 3).max(1)).collect();
    if deque[0] != deque[1] || rique[0] != rique[1] {
        return Fail(format!("semantics disagree: deque {deque:?}, rique {rique:?}"));
    }
    if deque[0] != quarter {
        return Fail(format!("deque K_3..K_6 = {:?}, expected {quarter:?}", deque[0]));
    }
    if rique[0] != [1, 2, 2, 2] {
        return Fail(format!("rique K_4..K_7 = {:?}, expected [1, 2, 2, 2]", rique[0]));
    }
    let off: Vec<usize> = (4..=7).filter(|&n| rique[0][n - 4] != third[n - 4]).collect();
    let msg = format!(
        "deque K_3..K_6 = {:?} = ceil(n/4); rique K_4..K_7 = {:?}",
        deque[0], rique[0]
    );
    if off.is_empty() {
        Pass(msg)
    } else {
        Finding(format!(
            "{msg}; floor((n-1)/3) gives {third:?}, so the bound is not tight at n = {off:?} (same under both semantics)"
        ))
    }
}

fn builtin() -> Backend {
    Backend::Builtin {
        limits_conflicts: None,
        timeout: Some(Duration::from_secs(120)),
    }
}

fn decide(g: &Graph, p: usize, kind: LayoutKind) -> (Option<bool>, f64) {
    let started = Instant::now();
    let cnf = encode(
        g,
        p,
        kind,
        EncodeOptions {
            symmetry_breaking: true,
            ..Default::default()
        },
    )
    .unwrap();
    let r = match solve(&cnf, &builtin()).unwrap() {
        SolveResult::Sat(_) => Some(true),
        SolveResult::Unsat => Some(false),
        SolveResult::Unknown(_) => None,
    };
    (r, started.elapsed().as_secs_f64())
}

fn minimum(g: &Graph, kind: LayoutKind, hi: usize) -> (Option<usize>, f64) {
    let started = Instant::now();
    let opts = EncodeOptions {
        symmetry_breaking: true,
        ..Default::default()
    };
    let r = page_number_search(g, "g", kind, 1, hi, &builtin(), opts).unwrap();
    let p = match r.outcome {
        SearchOutcome::Found { pages, layout } => validate_layout(&layout).valid.then_some(pages),
        _ => None,
    };
    (p, started.elapsed().as_secs_f64())
}

fn c4_sat() -> Verdict {
    let k5 = Graph::complete(5);
    let k7 = Graph::complete(7);
    let k66 = Graph::complete_bipartite(6);
    let checks = [
        ("K_5 1 deque", decide(&k5, 1, LayoutKind::Deque), Some(false)),
        ("K_5 2 deques", decide(&k5, 2, LayoutKind::Deque), Some(true)),
        ("K_7 1 rique", decide(&k7, 1, LayoutKind::Rique), Some(false)),
        ("K_7 2 riques", decide(&k7, 2, LayoutKind::Rique), Some(true)),
        ("K_6,6 3 stacks", decide(&k66, 3, LayoutKind::Stack), Some(false)),
        ("K_6,6 4 stacks", decide(&k66, 4, LayoutKind::Stack), Some(false)),
        ("K_6,6 5 stacks", decide(&k66, 5, LayoutKind::Stack), Some(true)),
    ];
    let mut slow = Vec::new();
    for (name, (got, secs), want) in &checks {
        if got != want {
            return Fail(format!("{name}: got {got:?}, expected {want:?}"));
        }
        if *secs >= 120.0 {
            slow.push(*name);
        }
    }
    let brute: Vec<bool> = (3..=5).map(|k| knn_stack_layout_exists(6, k)).collect();
    if brute != [false, false, true] {
        return Fail(format!("brute force K_6,6 with 3, 4, 5 stacks: {brute:?}"));
    }
    let (deques, td) = minimum(&k66, LayoutKind::Deque, 4);
    let (stacks, ts) = minimum(&k66, LayoutKind::Stack, 6);
    if deques != Some(2) || stacks != Some(5) || td >= 120.0 || ts >= 120.0 || !slow.is_empty() {
        return Fail(format!(
            "K_6,6: deques {deques:?} ({td:.1}s), stacks {stacks:?} ({ts:.1}s), slow {slow:?}"
        ));
    }
    let worst = checks.iter().map(|c| c.1 .1).fold(td.max(ts), f64::max);
    Finding(format!(
        "K_5 deque 1 UNSAT / 2 SAT, K_7 rique 1 UNSAT / 2 SAT, K_6,6 needs 2 deques; K_6,6 needs 5 stacks, not the \
         expected 3 (3 and 4 stacks UNSAT, 5 SAT, matching a brute force over orders and page colourings); slowest instance {worst:.2}s"
    ))
}

/// Brute force for `K_{n,n}` in `k` stacks: the parts keep their internal
/// order and part A starts (automorphisms), and a page assignment is a proper
/// `k`-colouring of the crossing graph.
fn knn_stack_layout_exists(n: usize, k: usize) -> bool {
    fn colour(adj: &[Vec<usize>], by_degree: &[usize], at: usize, used: usize, k: usize, col: &mut [usize]) -> bool {
        let Some(&v) = by_degree.get(at) else { return true };
        for c in 0..k.min(used + 1) {
            if adj[v].iter().all(|&u| col[u] != c) {
                col[v] = c;
                if colour(adj, by_degree, at + 1, used.max(c + 1), k, col) {
                    return true;
                }
                col[v] = usize::MAX;
            }
        }
        false
    }
    let rest: Vec<usize> = (1..2 * n).collect();
    let mut found = false;
    combinations(&rest, n - 1, &mut |picked| {
        if found {
            return;
        }
        let mut is_a = vec![false; 2 * n];
        is_a[0] = true;
        for &p in picked {
            is_a[p] = true;
        }
        let (a, b): (Vec<usize>, Vec<usize>) = (0..2 * n).partition(|&p| is_a[p]);
        let spans: Vec<(usize, usize)> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| (x.min(y), x.max(y))))
            .collect();
        let adj: Vec<Vec<usize>> = spans
            .iter()
            .map(|&(p, q)| {
                (0..spans.len())
                    .filter(|&j| {
                        let (r, s) = spans[j];
                        (p < r && r < q && q < s) || (r < p && p < s && s < q)
                    })
                    .collect()
            })
            .collect();
        let mut by_degree: Vec<usize> = (0..spans.len()).collect();
        by_degree.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
        found = colour(&adj, &by_degree, 0, 0, k, &mut vec![usize::MAX; spans.len()]);
    });
    found
}

fn combinations(items: &[usize], r: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], r: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pick.len() == r {
            f(pick);
            return;
        }
        for i in from..items.len() {
            pick.push(items[i]);
            rec(items, r, i + 1, pick, f);
            pick.pop();
        }
    }
    rec(items, r, 0, &mut Vec::new(), f);
}

fn partition_ok(l: &LinearLayout, pages: usize, edges: usize) -> Result<(), String> {
    let r = validate_layout(l);
    if !r.valid {
        return Err(format!("{} violations, first {}", r.violations.len(), r.violations[0]));
    }
    if l.num_pages() != pages || l.num_edges() != edges {
        return Err(format!(
            "{} pages / {} edges, expected {pages} / {edges}",
            l.num_pages(),
            l.num_edges()
        ));
    }
    Ok(())
}

fn counts_ok(family: Family, n: usize, l: &LinearLayout) -> Result<(), String> {
    let stated = stated_page_counts(family, n).ok_or("no stated counts")?;
    let documented: BTreeSet<usize> = count_deviations(family, n).into_iter().map(|(p, _)| p).collect();
    for (i, page) in l.pages.iter().enumerate() {
        if stated[i] != page.len() as i64 && !documented.contains(&(i + 1)) {
            return Err(format!("page {} has {} edges, stated {}", i + 1, page.len(), stated[i]));
        }
    }
    Ok(())
}

fn c5_constructions() -> Verdict {
    let run = || -> Result<String, String> {
        let mut rique_kn = Vec::new();
        for n in 2..=60 {
            let l = deque_layout_kn(n).map_err(|e| e.to_string())?;
            partition_ok(&l, n.div_ceil(4), n * (n - 1) / 2).map_err(|e| format!("deque K_{n}: {e}"))?;
            if let Ok(l) = rique_layout_kn(n) {
                partition_ok(&l, ((n - 1) / 3).max(1), n * (n - 1) / 2).map_err(|e| format!("rique K_{n}: {e}"))?;
                counts_ok(Family::KnRique, n, &l).map_err(|e| format!("rique K_{n}: {e}"))?;
                rique_kn.push(n);
            }
        }
        if ![28, 29, 30].iter().all(|n| rique_kn.contains(n)) {
            return Err("rique K_n misses one of 28, 29, 30".into());
        }
        for n in [39, 42, 45] {
            let l = deque_layout_knn(n).map_err(|e| e.to_string())?;
            partition_ok(&l, n / 3, n * n).map_err(|e| format!("deque K_{n},{n}: {e}"))?;
            counts_ok(Family::KnnDeque, n, &l).map_err(|e| format!("deque K_{n},{n}: {e}"))?;
        }
        let mut rique_knn = Vec::new();
        for n in 2..=60 {
            if let Ok(l) = rique_layout_knn(n) {
                partition_ok(&l, (n - 1) / 2 - 1, n * n).map_err(|e| format!("rique K_{n},{n}: {e}"))?;
                counts_ok(Family::KnnRique, n, &l).map_err(|e| format!("rique K_{n},{n}: {e}"))?;
                rique_knn.push(n);
            }
        }
        if !rique_knn.iter().any(|n| n % 2 == 1) || !rique_knn.iter().any(|n| n % 2 == 0) {
            return Err("rique K_n,n lacks an odd or an even size".into());
        }
        Ok(format!(
            "deque K_n n = 2..60, rique K_n n in {}..60 ({} sizes), deque K_n,n n = 39, 42, 45, rique K_n,n n = {}..60; \
             per-page counts differ only where docs/CORRECTIONS.md says so",
            rique_kn[0],
            rique_kn.len(),
            rique_knn[0]
        ))
    };
    match run() {
        Ok(m) => Pass(m),
        Err(m) => Fail(m),
    }
}

fn c6_conflicts() -> Verdict {
    let started = Instant::now();
    // the published head-head / head-tail clause, e = (u, v), e' = (u', v')
    let published: BTreeSet<[char; 4]> = [
        ['u', 'U', 'v', 'V'],
        ['v', 'U', 'u', 'V'],
        ['u', 'V', 'v', 'U'],
        ['v', 'V', 'u', 'U'],
        ['u', 'U', 'V', 'v'],
        ['u', 'V', 'U', 'v'],
        ['v', 'U', 'V', 'u'],
        ['v', 'V', 'U', 'u'],
    ]
    .into_iter()
    .collect();
    let names = ['u', 'v', 'U', 'V'];
    let mut forbidden = BTreeSet::new();
    let mut arrangements = 0;
    for p in permutations(4) {
        // p[i] is the rank of names[i]
        let (e, f) = ((p[0].min(p[1]), p[0].max(p[1])), (p[2].min(p[3]), p[2].max(p[3])));
        if conflicts(e.0, e.1, EdgeType::HH, f.0, f.1, EdgeType::HT).unwrap() {
            let mut seq = ['?'; 4];
            for i in 0..4 {
                seq[p[i]] = names[i];
            }
            forbidden.insert(seq);
        }
        for x in EdgeType::ALL {
            for y in EdgeType::ALL {
                arrangements += 1;
                let rule = conflicts(e.0, e.1, x, f.0, f.1, y).unwrap();
                if rule == cylindric_pair_drawable(e.0, e.1, x, f.0, f.1, y) {
                    return Fail(format!("{x}-{y} at {e:?} {f:?} disagrees with the drawing oracle"));
                }
            }
        }
    }
    let t = started.elapsed();
    if forbidden != published {
        return Fail(format!(
            "HH-HT forbids {} orderings, not the published 8",
            forbidden.len()
        ));
    }
    if t >= Duration::from_secs(1) {
        return Fail(format!("took {t:?}"));
    }
    Pass(format!(
        "HH-HT forbids exactly the 8 published orderings; {arrangements} typed arrangements match the drawing oracle"
    ))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Every edge set of at most `max_edges` edges that touches all of `0..k`.
/// Pages on more vertices differ only by isolated spine positions, which
/// neither the validator nor the deque can see.
fn covering_edge_sets(k: usize, max_edges: usize, mut f: impl FnMut(&[(usize, usize)])) {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
    fn rec(
        pairs: &[(usize, usize)],
        from: usize,
        left: usize,
        k: usize,
        pick: &mut Vec<(usize, usize)>,
        f: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if !pick.is_empty() {
            let touched = pick.iter().fold(0u32, |m, &(u, v)| m | 1 << u | 1 << v);
            if touched.count_ones() as usize == k {
                f(pick);
            }
        }
        if left == 0 {
            return;
        }
        for i in from..pairs.len() {
            pick.push(pairs[i]);
            rec(pairs, i + 1, left - 1, k, pick, f);
            pick.pop();
        }
    }
    rec(&pairs, 0, max_edges, k, &mut Vec::new(), &mut f);
}

fn c7_simulation() -> Verdict {
    let mut pages = 0u64;
    let mut pairwise_only = 0u64;
    let mut simulator_only = 0u64;
    let mut operational_mismatch = 0u64;
    let mut independent_mismatch = 0u64;
    for k in 2..=8 {
        let order = VertexOrder::identity(k);
        covering_edge_sets(k, 5, |edges| {
            let m = edges.len();
            let independent = (0..m).all(|i| {
                (i + 1..m).all(|j| {
                    let (a, b) = edges[i];
                    let (c, d) = edges[j];
                    a != c && a != d && b != c && b != d
                })
            });
            for code in 0..1usize << (2 * m) {
                let page = Page::new(
                    edges
                        .iter()
                        .enumerate()
                        .map(|(i, &(u, v))| TypedEdge::new(u, v, EdgeType::ALL[code >> (2 * i) & 3]))
                        .collect(),
                );
                pages += 1;
                let pairwise = validate_page(&order, &page, LayoutKind::Deque).valid;
                let real = simulate_page(&order, &page).unwrap();
                let operational = !page.edges.iter().enumerate().any(|(i, e)| {
                    page.edges[i + 1..]
                        .iter()
                        .any(|f| edges_conflict_with(Semantics::Operational, &order, e, f))
                });
                match (pairwise, real) {
                    (true, false) => pairwise_only += 1,
                    (false, true) => simulator_only += 1,
                    _ => {}
                }
                if pairwise != real && independent {
                    independent_mismatch += 1;
                }
                if operational != real {
                    operational_mismatch += 1;
                }
            }
        });
    }
    let summary = format!(
        "{pages} typed pages on <= 8 vertices with <= 5 edges; operational rules match the simulator on all of them"
    );
    if operational_mismatch > 0 || simulator_only > 0 || independent_mismatch > 0 {
        return Fail(format!(
            "{pages} pages: {operational_mismatch} operational mismatches, {simulator_only} pages only the simulator \
             accepts, {independent_mismatch} mismatches without shared endpoints"
        ));
    }
    if pairwise_only == 0 {
        return Pass(format!("{summary}; the pairwise validator agrees everywhere"));
    }
    Finding(format!(
        "{summary}; the pairwise validator accepts {pairwise_only} pages the deque cannot process, all caused by edge \
         pairs with a common endpoint (pages without shared endpoints agree exactly)"
    ))
}

fn c8_pattern() -> Verdict {
    let mut sets = 0u64;
    for k in 2..=7 {
        let order = VertexOrder::identity(k);
        let mut bad = None;
        covering_edge_sets(k, 6, |edges| {
            if bad.is_some() {
                return;
            }
            sets += 1;
            let m = edges.len();
            let typable = (0..1usize << m).any(|code| {
                let page = Page::new(
                    edges
                        .iter()
                        .enumerate()
                        .map(|(i, &(u, v))| {
                            TypedEdge::new(u, v, if code >> i & 1 == 1 { EdgeType::HT } else { EdgeType::HH })
                        })
                        .collect(),
                );
                validate_page(&order, &page, LayoutKind::Rique).valid
            });
            if typable != rique_pattern_check(&order, edges) {
                bad = Some(edges.to_vec());
            }
        });
        if let Some(edges) = bad {
            return Fail(format!("pattern check and HH/HT typing disagree on {edges:?}"));
        }
    }
    Pass(format!(
        "{sets} edge sets on <= 7 vertices with <= 6 edges: pattern-free iff some HH/HT typing is valid"
    ))
}
