//! The rayon pool against a single-thread pool on the heaviest fan-outs.
//! Build with `--no-default-features` to time the sequential fallback.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use powerops::homalg::CoeffRing;
use powerops::par::sequential;
use powerops::partition::{partition_homology, transitive_abelian_subgroups, Uniform};
use powerops::qfunctors::functors::Free;
use powerops::shelling::{build_k_contraction_on, verify_completion_uniqueness, verify_jump_properties};

fn bench(c: &mut Criterion) {
    let u8 = Arc::new(Uniform::build(2, 3).unwrap());
    let groups8 = transitive_abelian_subgroups(8).unwrap();
    let a = groups8.iter().find(|a| a.abstract_type.len() == 3).unwrap().clone();

    let mut g = c.benchmark_group("k-contraction U_8 free/Z");
    g.sample_size(10);
    g.bench_function("pool", |b| b.iter(|| build_k_contraction_on(u8.clone(), &Free, CoeffRing::Integers).unwrap()));
    g.bench_function("one thread", |b| {
        b.iter(|| sequential(|| build_k_contraction_on(u8.clone(), &Free, CoeffRing::Integers).unwrap()))
    });
    g.finish();

    let mut g = c.benchmark_group("jump properties m=8");
    g.sample_size(10);
    g.bench_function("pool", |b| b.iter(|| verify_jump_properties(&groups8, 2, true)));
    g.bench_function("one thread", |b| b.iter(|| sequential(|| verify_jump_properties(&groups8, 2, true))));
    g.finish();

    let mut g = c.benchmark_group("unique completions U_8");
    g.sample_size(10);
    g.bench_function("pool", |b| b.iter(|| verify_completion_uniqueness(&u8).unwrap()));
    g.bench_function("one thread", |b| b.iter(|| sequential(|| verify_completion_uniqueness(&u8).unwrap())));
    g.finish();

    let mut g = c.benchmark_group("homology of P̄_8^A, A elementary");
    g.sample_size(10);
    g.bench_function("pool", |b| b.iter(|| partition_homology(8, Some(&a), CoeffRing::Integers).unwrap()));
    g.bench_function("one thread", |b| {
        b.iter(|| sequential(|| partition_homology(8, Some(&a), CoeffRing::Integers).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
