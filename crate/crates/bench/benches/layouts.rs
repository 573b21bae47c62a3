use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use linlay::constructions::{deque_layout_knn, rique_layout_kn, rique_layout_knn};
use linlay::sat::{encode, solve_clauses, EncodeOptions, Limits};
use linlay::sim::{exact_page_number, simulate_page};
use linlay::{parse_layout, serialize_layout, validate_layout, Graph, LayoutKind};

fn constructions(c: &mut Criterion) {
    c.bench_function("rique_layout_kn(60)", |b| {
        b.iter(|| rique_layout_kn(black_box(60)).unwrap())
    });
    c.bench_function("deque_layout_knn(60)", |b| {
        b.iter(|| deque_layout_knn(black_box(60)).unwrap())
    });
}

fn validation(c: &mut Criterion) {
    let kn = rique_layout_kn(60).unwrap();
    let knn = rique_layout_knn(60).unwrap();
    c.bench_function("validate rique K_60", |b| b.iter(|| validate_layout(black_box(&kn))));
    c.bench_function("validate rique K_60,60", |b| {
        b.iter(|| validate_layout(black_box(&knn)))
    });
    let text = serialize_layout(&knn);
    c.bench_function("parse K_60,60", |b| b.iter(|| parse_layout(black_box(&text)).unwrap()));
}

fn search(c: &mut Criterion) {
    let l = rique_layout_kn(10).unwrap();
    c.bench_function("simulate one K_10 page", |b| {
        b.iter(|| simulate_page(black_box(&l.order), black_box(&l.pages[0])).unwrap())
    });
    c.bench_function("exact deque K_6", |b| {
        b.iter(|| exact_page_number(&Graph::complete(6), LayoutKind::Deque, 3).unwrap())
    });
    let opts = EncodeOptions {
        symmetry_breaking: true,
        ..Default::default()
    };
    let cnf = encode(&Graph::complete(9), 2, LayoutKind::Deque, opts).unwrap();
    let mut group = c.benchmark_group("sat");
    group.sample_size(10);
    group.bench_function("K_9 two deques (unsat)", |b| {
        b.iter(|| solve_clauses(cnf.num_vars, &cnf.clauses, Limits::default()))
    });
    group.finish();
}

criterion_group!(benches, constructions, validation, search);
criterion_main!(benches);
