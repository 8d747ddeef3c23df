#[path = "../tests/common/mod.rs"]
mod common;

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use specimen_core::batch::{normalize_all, readings_all, Execution};
use specimen_core::compose::{ComposeConfig, SyntaxTree};
use specimen_core::demo;
use specimen_core::kernel::{Term, DEFAULT_FUEL};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn normalization(c: &mut Criterion) {
    let terms: Vec<Term> = (0..4096).map(|s| common::Gen::new(s).closed_redex().0).collect();
    let mut group = c.benchmark_group("normalize_all");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &terms, |b, ts| {
            b.iter(|| normalize_all(black_box(ts), DEFAULT_FUEL, mode))
        });
    }
    group.finish();
}

fn composition(c: &mut Criterion) {
    let g = demo::grammar();
    let trees: Vec<SyntaxTree> =
        demo::TREES.iter().cycle().take(64).map(|(_, t)| SyntaxTree::parse(t).unwrap()).collect();
    let mut group = c.benchmark_group("readings_all");
    for (name, execution) in MODES {
        let config = ComposeConfig { execution, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &trees, |b, ts| {
            b.iter(|| readings_all(black_box(ts), &g, &config))
        });
    }
    group.finish();
}

criterion_group!(benches, normalization, composition);
criterion_main!(benches);
