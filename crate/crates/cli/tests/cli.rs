use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use linlay::constructions::Family;
use linlay::{parse_layout, validate_layout, LayoutKind};

fn linlay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linlay"))
        .args(args)
        .env_remove("LINLAY_SAT_SOLVER")
        .output()
        .expect("run linlay")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_verify_render_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let matrix: &[(Family, &[usize])] = &[
        (Family::KnStack, &[2, 7, 30]),
        (Family::KnDeque, &[2, 3, 9, 17, 60]),
        (Family::KnRique, &[10, 11, 21, 28, 29, 30, 31, 60]),
        (Family::KnnDeque, &[34, 36, 39, 41]),
        (Family::KnnRique, &[27, 28, 40]),
    ];
    for &(family, sizes) in matrix {
        for &n in sizes {
            let file = dir.path().join(format!("{family}-{n}.txt"));
            let o = linlay(&[
                "generate",
                "--family",
                family.as_str(),
                "--n",
                &n.to_string(),
                "-o",
                s(&file),
            ]);
            assert_eq!(code(&o), 0, "{family} {n}: {}", stderr(&o));
            let o = linlay(&["verify", s(&file)]);
            assert_eq!(code(&o), 0, "{family} {n}: {}", stdout(&o));
            for mode in ["grid", "arcs"] {
                let svg = dir.path().join(format!("{family}-{n}-{mode}.svg"));
                let o = linlay(&["render", s(&file), "--mode", mode, "-o", s(&svg)]);
                assert_eq!(code(&o), 0, "{}", stderr(&o));
                let text = std::fs::read_to_string(&svg).unwrap();
                roxmltree::Document::parse(&text).expect("well-formed svg");
            }
        }
    }
}

#[test]
fn kn_rique_30_has_nine_pages_and_colours() {
    let o = linlay(&["generate", "--family", "kn-rique", "--n", "30"]);
    assert_eq!(code(&o), 0);
    let l = parse_layout(&stdout(&o)).unwrap();
    assert_eq!(l.num_pages(), 9);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k30.txt");
    std::fs::write(&file, stdout(&o)).unwrap();
    let svg = stdout(&linlay(&["render", s(&file)]));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let colours: std::collections::BTreeSet<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle"))
        .filter_map(|n| n.attribute("fill"))
        .collect();
    assert_eq!(colours.len(), 9);
}

#[test]
fn unsupported_size_names_the_threshold() {
    let o = linlay(&["generate", "--family", "kn-rique", "--n", "12"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("n >= 21"), "{}", stderr(&o));
    let o = linlay(&["generate", "--family", "knn-deque", "--n", "30"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("n >= 34"), "{}", stderr(&o));
}

#[test]
fn every_fixture_verifies() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "txt") {
            let o = linlay(&["verify", s(&path)]);
            assert_eq!(code(&o), 0, "{}: {}", path.display(), stdout(&o));
            seen += 1;
        }
    }
    assert!(seen >= 4);
}

#[test]
fn injected_crossing_is_reported() {
    let text = std::fs::read_to_string(fixtures().join("k5-queue.txt")).unwrap();
    // (1, 2) moved next to (0, 3) on the queue page: they nest
    let mut l = parse_layout(&text).unwrap();
    let moved = l.pages[1].edges.remove(0);
    l.pages[0].edges.push(moved);
    assert!(!validate_layout(&l).valid);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, linlay::serialize_layout(&l)).unwrap();
    let o = linlay(&["verify", s(&file)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(
        out.contains("page 0") && out.contains("(1, 2, ht)") && out.contains("(0, 3, ht)"),
        "{out}"
    );

    let o = linlay(&["verify", s(&file), "--json"]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["valid"], false);

    let o = linlay(&["render", s(&file)]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn solve_reproduces_small_page_numbers() {
    let o = linlay(&["solve", "--kn", "5", "--kind", "deque", "--pages", "1"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stdout(&o).contains("UNSAT"));

    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("w.txt");
    let log = dir.path().join("log.jsonl");
    let o = linlay(&[
        "solve",
        "--kn",
        "7",
        "--kind",
        "rique",
        "--min",
        "-o",
        s(&witness),
        "--log",
        s(&log),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let l = parse_layout(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!((l.num_pages(), l.kind), (2, LayoutKind::Rique));
    assert!(validate_layout(&l).valid);
    let records: Vec<serde_json::Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|x| serde_json::from_str(x).unwrap())
        .collect();
    let last = records.last().unwrap();
    assert_eq!(last["status"], "sat");
    assert_eq!(last["pages"], 2);
    assert_eq!(last["witness"], s(&witness));

    let o = linlay(&["solve", "--knn", "6", "--kind", "deque", "--min"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(parse_layout(&stdout(&o)).unwrap().num_pages(), 2);
}

#[test]
fn solve_reads_edge_lists_and_writes_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("c5.cnf");
    let edges = fixtures().join("c5-chord.edges");
    let o = linlay(&[
        "solve",
        "--edges",
        s(&edges),
        "--kind",
        "stack",
        "--pages",
        "1",
        "--dimacs",
        s(&cnf),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let l = parse_layout(&stdout(&o)).unwrap();
    assert_eq!((l.graph.num_vertices(), l.num_edges()), (5, 6));
    assert!(std::fs::read_to_string(&cnf)
        .unwrap()
        .lines()
        .any(|x| x.starts_with("p cnf ")));

    let bad = dir.path().join("bad.edges");
    std::fs::write(&bad, "0 1\n1 2 3\n").unwrap();
    let o = linlay(&["solve", "--edges", s(&bad), "--kind", "stack", "--pages", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn external_solver_round_trip_and_failure() {
    let me = env!("CARGO_BIN_EXE_linlay");
    let cmd = format!("'{me}' dimacs-solve {{cnf}}");
    let o = linlay(&["solve", "--kn", "9", "--kind", "deque", "--min", "--solver", &cmd]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(parse_layout(&stdout(&o)).unwrap().num_pages(), 3);

    let o = Command::new(me)
        .args(["solve", "--kn", "5", "--kind", "deque", "--pages", "1"])
        .env("LINLAY_SAT_SOLVER", &cmd)
        .output()
        .unwrap();
    assert_eq!(code(&o), 1, "{}", stderr(&o));

    let o = linlay(&[
        "solve",
        "--kn",
        "4",
        "--kind",
        "deque",
        "--pages",
        "1",
        "--solver",
        "exit 7 # {cnf}",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));

    // a budget too small to decide maps to a backend failure as well
    let o = linlay(&[
        "solve",
        "--kn",
        "9",
        "--kind",
        "deque",
        "--pages",
        "2",
        "--no-symmetry",
        "--conflicts",
        "10",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn exact_and_bounds_reports() {
    let o = linlay(&["exact", "--kn", "5", "--kind", "deque"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pages"], 2);

    let o = linlay(&["exact", "--kn", "13", "--kind", "deque"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cap is 8"), "{}", stderr(&o));

    let o = linlay(&["bounds", "--family", "kn", "--kind", "deque", "--n", "8"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["lower_bound_pages"], 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&linlay(&[])), 2);
    assert_eq!(code(&linlay(&["solve", "--kn", "5", "--kind", "deque"])), 2);
    assert_eq!(
        code(&linlay(&[
            "solve", "--kn", "5", "--knn", "3", "--kind", "deque", "--min"
        ])),
        2
    );
    assert_eq!(code(&linlay(&["generate", "--family", "kn-bogus", "--n", "5"])), 2);
    assert_eq!(code(&linlay(&["verify", "/nonexistent/layout.txt"])), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["generate", "--family", "knn-rique", "--n", "29"][..],
        &["solve", "--kn", "6", "--kind", "deque", "--min"][..],
        &["bounds", "--family", "knn", "--kind", "rique", "--n", "10"][..],
    ] {
        assert_eq!(linlay(args).stdout, linlay(args).stdout, "{args:?}");
    }
}
