use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ant_gls::demo::demo8_matrix;
use ant_gls::{
    ant_crossover, classify_ls, pbx_crossover, random_tour, run_gls, three_opt_ls, two_opt_ls,
    AcsParams, PheromoneMatrix, SolverConfig, SolverRng,
};
use ant_gls_bench::eil51;

fn bench_crossover(c: &mut Criterion) {
    let d = eil51();
    let mut rng = SolverRng::seeded(1);
    let father = random_tour(d.n(), &mut rng, &d);
    let mother = random_tour(d.n(), &mut rng, &d);
    let params = AcsParams::default();

    c.bench_function("pbx_crossover eil51", |b| {
        b.iter(|| {
            black_box(pbx_crossover(&father, &mother, 3, &mut rng, &d).unwrap());
        })
    });
    c.bench_function("ant_crossover eil51", |b| {
        let mut tau = PheromoneMatrix::init(&d);
        b.iter(|| {
            black_box(
                ant_crossover(&father, &mother, 3, &mut tau, &params, &d, &mut rng).unwrap(),
            );
        })
    });
}

fn bench_local_search(c: &mut Criterion) {
    let d = eil51();
    let n = d.n();
    let mut rng = SolverRng::seeded(2);

    c.bench_function("two_opt_ls eil51 patience n", |b| {
        b.iter(|| {
            let tour = random_tour(n, &mut rng, &d);
            black_box(two_opt_ls(&tour, &d, &mut rng, n));
        })
    });
    c.bench_function("three_opt_ls eil51 patience n", |b| {
        b.iter(|| {
            let tour = random_tour(n, &mut rng, &d);
            black_box(three_opt_ls(&tour, &d, &mut rng, n));
        })
    });
    c.bench_function("classify_ls eil51 k=4", |b| {
        b.iter(|| {
            let tour = random_tour(n, &mut rng, &d);
            black_box(classify_ls(&tour, &d, 4, &mut rng));
        })
    });
}

fn bench_solver(c: &mut Criterion) {
    let d = demo8_matrix();
    let config = SolverConfig {
        population_size: 10,
        generation_size: 50,
        max_while_iterations: 5,
        ..SolverConfig::default()
    };
    c.bench_function("run_gls demo8 small config", |b| {
        b.iter(|| {
            black_box(run_gls(&d, &config).unwrap());
        })
    });
}

criterion_group!(benches, bench_crossover, bench_local_search, bench_solver);
criterion_main!(benches);
