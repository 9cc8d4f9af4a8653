use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dnls_core::exec::{map_parallel, map_sequential};
use dnls_core::nehari::{normalize, project};
use dnls_core::solver::random_directions;
use dnls_core::{
    minimize, Boundary, Graph, Init, Potential, PowerNonlinearity, Problem, ProjectionOptions,
    SolverOptions,
};

fn problem(side: usize) -> Problem {
    let g = Graph::lattice_box(2, &[side, side], Boundary::DirichletBox).unwrap();
    let v = Potential::constant(&g, 1.0).unwrap();
    Problem::new(
        g,
        v,
        Arc::new(PowerNonlinearity::homogeneous(1.0, 4.0).unwrap()),
    )
    .unwrap()
}

fn ray_batch(c: &mut Criterion) {
    let p = problem(31);
    let dirs = random_directions(p.graph(), 256, 1);
    let opts = ProjectionOptions::default();
    let work = |w: &dnls_core::Field| project(&p, &normalize(&p, w).unwrap(), &opts).unwrap().s;
    let mut group = c.benchmark_group("ray_projection_256");
    group.bench_function("sequential", |b| b.iter(|| map_sequential(&dirs, work)));
    group.bench_function("parallel", |b| b.iter(|| map_parallel(&dirs, work)));
    group.finish();
}

fn solve_batch(c: &mut Criterion) {
    let p = problem(11);
    let seeds: Vec<u64> = (0..16).collect();
    let work = |&seed: &u64| {
        let opts = SolverOptions {
            init: Init::RandomPositive,
            seed,
            record_trace: false,
            ..Default::default()
        };
        minimize(&p, &opts).unwrap().energy
    };
    let mut group = c.benchmark_group("solves_16");
    group.sample_size(10);
    for (name, parallel) in [("sequential", false), ("parallel", true)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &parallel, |b, &par| {
            b.iter(|| {
                if par {
                    map_parallel(&seeds, work)
                } else {
                    map_sequential(&seeds, work)
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, ray_batch, solve_batch);
criterion_main!(benches);
