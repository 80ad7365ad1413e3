use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use netident_core::identify::{decide_graph, suggest_measurement_sets};
use netident_core::oracle::rank_evidence;
use netident_core::{Config, DiGraph, Execution, NodeSet};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

/// Layered graph: `layers` layers of `width` nodes, each node feeding the
/// next layer's node at the same position and its right neighbour.
fn layered(layers: usize, width: usize) -> DiGraph {
    let id = |l: usize, k: usize| l * width + k + 1;
    let mut edges = Vec::new();
    for l in 0..layers - 1 {
        for k in 0..width {
            edges.push((id(l, k), id(l + 1, k)));
            edges.push((id(l, k), id(l + 1, (k + 1) % width)));
        }
    }
    DiGraph::new(layers * width, edges).unwrap()
}

fn last_layer(layers: usize, width: usize) -> NodeSet {
    ((layers - 1) * width + 1..=layers * width).collect()
}

fn fig2() -> DiGraph {
    DiGraph::new(
        8,
        [
            (1, 2),
            (1, 3),
            (2, 4),
            (3, 4),
            (3, 5),
            (4, 6),
            (4, 7),
            (4, 8),
            (5, 7),
            (5, 8),
        ],
    )
    .unwrap()
}

fn bench_decide_graph(c: &mut Criterion) {
    let (layers, width) = (6, 4);
    let g = layered(layers, width);
    let measured = last_layer(layers, width);
    let mut group = c.benchmark_group("decide_graph");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| decide_graph(&g, &measured, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_oracle_sampling(c: &mut Criterion) {
    let g = fig2();
    let measured = NodeSet::from([6, 7, 8]);
    let mut group = c.benchmark_group("rank_evidence");
    group.sample_size(10);
    for (name, execution) in MODES {
        let config = Config {
            execution,
            ..Config::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| rank_evidence(&g, &measured, 0..16, config).unwrap())
        });
    }
    group.finish();
}

fn bench_suggestions(c: &mut Criterion) {
    let g = layered(3, 4);
    let mut group = c.benchmark_group("suggest_measurement_sets");
    group.sample_size(10);
    for (name, execution) in MODES {
        let config = Config {
            execution,
            ..Config::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| suggest_measurement_sets(&g, 4, config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_decide_graph,
    bench_oracle_sampling,
    bench_suggestions
);
criterion_main!(benches);
