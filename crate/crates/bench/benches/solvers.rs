use criterion::{criterion_group, criterion_main, Criterion};
use pubcfr_bench::{label, load, FIXTURES};
use pubcfr_core::cfr::new_solver;
use pubcfr_core::{build_public_tree, Algorithm};

fn iteration(c: &mut Criterion) {
    for &(spec, algos) in FIXTURES {
        let game = load(spec).expect("fixture game");
        let mut group = c.benchmark_group(format!("iteration/{}", label(spec)));
        if label(spec) == "river" {
            group.sample_size(10);
        }
        for &algo in algos {
            // Warm solver so the measured iteration is a steady-state one.
            let mut solver = new_solver(&game, algo, Default::default()).expect("solver");
            solver.iterate().expect("iterate");
            group.bench_function(algo.tag(), |b| b.iter(|| solver.iterate().expect("iterate")));
        }
        group.finish();
    }
}

fn setup(c: &mut Criterion) {
    let game = load("leduc").expect("leduc");
    let mut group = c.benchmark_group("setup/leduc");
    group.bench_function("public_tree", |b| b.iter(|| build_public_tree(&game).expect("tree")));
    group.bench_function("ps_solver", |b| {
        b.iter(|| new_solver(&game, Algorithm::PublicState, Default::default()).expect("solver"))
    });
    group.finish();
}

criterion_group!(benches, iteration, setup);
criterion_main!(benches);
