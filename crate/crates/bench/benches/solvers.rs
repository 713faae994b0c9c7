use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hallkit::{
    bipartite_view, edge_color_3half, edge_color_3half_eps, peel_to_hall, saturating_matching, solve_hso,
    solve_hso_local, weak_splitting,
};
use hallkit_bench::{hypergraph, simple, HSO_GRID};

fn orientation(c: &mut Criterion) {
    let mut group = c.benchmark_group("hso");
    group.sample_size(10);
    for (n, d, r) in HSO_GRID {
        let g = hypergraph(n, d, r);
        let id = format!("n={n},d={d},r={r}");
        group.bench_with_input(BenchmarkId::new("sequential", &id), &g, |b, g| b.iter(|| solve_hso(g).unwrap()));
        group.bench_with_input(BenchmarkId::new("local", &id), &g, |b, g| b.iter(|| solve_hso_local(g).unwrap()));
    }
    group.finish();
}

fn hall(c: &mut Criterion) {
    let mut group = c.benchmark_group("hall");
    let g = hypergraph(10_000, 4, 2);
    let b = bipartite_view(&g);
    group.bench_function("peel_to_hall", |x| x.iter(|| peel_to_hall(&g)));
    group.bench_function("saturating_matching", |x| x.iter(|| saturating_matching(&b).unwrap()));
    let s = bipartite_view(&hypergraph(2000, 8, 3));
    group.bench_function("weak_splitting", |x| x.iter(|| weak_splitting(&s).unwrap()));
    group.finish();
}

fn coloring(c: &mut Criterion) {
    let mut group = c.benchmark_group("color");
    group.sample_size(10);
    for (n, d) in [(2000, 3), (2000, 8)] {
        let g = simple(n, d);
        group.bench_with_input(BenchmarkId::new("3half", format!("n={n},d={d}")), &g, |b, g| {
            b.iter(|| edge_color_3half(g).unwrap())
        });
    }
    let g = simple(2000, 64);
    group.bench_function("eps/n=2000,d=64", |b| b.iter(|| edge_color_3half_eps(&g, 0.25).unwrap()));
    group.finish();
}

criterion_group!(benches, orientation, hall, coloring);
criterion_main!(benches);
