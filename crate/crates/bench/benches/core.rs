use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tiler_core::generate;
use tiler_core::multipack::build_partitions;
use tiler_core::packing::{join, shrink};
use tiler_core::quasitile::{build_mediators, candidate_sets, quasi_tile, CandidateFamily, QuasiTileConfig};
use tiler_core::randseq::{plan_cfw, sample_cfw, CfwOptions};
use tiler_core::rational::ratio;
use tiler_core::witness::{rationalize, uniform_ball_witness, validate_witness};
use tiler_core::{Packing, VertexSet};

fn witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate_uniform_ball");
    for (name, g, r) in [
        ("cycle1000_r10", generate::cycle(1000), 10),
        ("torus30x30_r5", generate::torus(&[30, 30]).unwrap(), 5),
    ] {
        let w = uniform_ball_witness(&g, r);
        group.bench_function(name, |b| b.iter(|| validate_witness(&g, black_box(&w)).unwrap()));
    }
    group.finish();
}

fn partitions(c: &mut Criterion) {
    let g = generate::cycle(120);
    let w = rationalize(&uniform_ball_witness(&g, 4), 60).unwrap();
    c.bench_function("build_partitions_cycle120_m60", |b| {
        b.iter(|| build_partitions(&g, black_box(&w), 60, 7).unwrap())
    });
}

fn packing_ops(c: &mut Criterion) {
    let g = generate::cycle(3000);
    let tiles = |len: usize, start: usize| -> Packing {
        let t = (start..3000 - len).step_by(len + 2).map(|s| VertexSet::range(s, s + len)).collect();
        Packing::new(t, len)
    };
    let f = tiles(9, 0);
    let fp = tiles(3, 5);
    let mut group = c.benchmark_group("packing");
    for s in [1, 3] {
        group.bench_with_input(BenchmarkId::new("shrink", s), &s, |b, &s| b.iter(|| shrink(&g, black_box(&f), s)));
    }
    group.bench_function("join", |b| b.iter(|| join(&g, black_box(&f), black_box(&fp))));
    group.finish();
}

fn quasitile(c: &mut Criterion) {
    let g = generate::cycle(200);
    let eps1 = ratio(1, 20);
    let cfg = QuasiTileConfig::manual(ratio(1, 2), 12, eps1.clone(), 60, 16).unwrap();
    let probes = candidate_sets(&g, &CandidateFamily::Balls, &eps1, 60).unwrap();
    let mediators = build_mediators(&g, &probes, 60, 10_000).unwrap();
    let mut group = c.benchmark_group("quasitile");
    group.sample_size(10);
    group.bench_function("cycle200_manual", |b| {
        b.iter(|| quasi_tile(&g, &Packing::empty(12), &mediators, &probes, &cfg).unwrap())
    });
    group.finish();
}

fn cfw(c: &mut Criterion) {
    let g = generate::cycle(200);
    let mut group = c.benchmark_group("cfw");
    group.sample_size(10);
    group.bench_function("plan_cycle200_j3", |b| b.iter(|| plan_cfw(&g, 3, &CfwOptions::default()).unwrap()));
    let plan = plan_cfw(&g, 3, &CfwOptions::default()).unwrap();
    group.bench_function("sample_cycle200_j3", |b| b.iter(|| sample_cfw(&g, &plan, black_box(7)).unwrap()));
    group.finish();
}

criterion_group!(benches, witness, partitions, packing_ops, quasitile, cfw);
criterion_main!(benches);
