use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use supermod_core::courant::Hamiltonian;
use supermod_core::{batch, dirac, modular, random, BaseChart};

fn modular_paths(seed: u64) -> bool {
    let mut r = random::rng(seed);
    let a = random::skew_algebroid(&mut r, &BaseChart::standard(3), 3, 2);
    let one = supermod_core::ScalarField::one(3);
    modular::divergence_path(&a) == modular::nabla_path(&a, &one).unwrap()
}

fn master_identity(seed: u64) -> bool {
    let mut r = random::rng(seed);
    let a = random::lie_algebroid(&mut r, &BaseChart::standard(2), 3);
    let phi = random::form(&mut r, &a, 3, 1);
    let h = Hamiltonian::from_algebroid(&a, Some(&phi)).unwrap();
    let p = random::bivector(&mut r, h.space(), 1);
    let (lhs, rhs) = dirac::quasi_poisson_sides(&p, &h).unwrap();
    lhs == rhs
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    for count in [16u64, 64] {
        group.bench_with_input(BenchmarkId::new("modular/sequential", count), &count, |b, &n| {
            b.iter(|| batch::map_seeds_sequential(black_box(n), modular_paths))
        });
        group.bench_with_input(BenchmarkId::new("modular/batch", count), &count, |b, &n| {
            b.iter(|| batch::map_seeds(black_box(n), modular_paths))
        });
        group.bench_with_input(BenchmarkId::new("master/sequential", count), &count, |b, &n| {
            b.iter(|| batch::map_seeds_sequential(black_box(n), master_identity))
        });
        group.bench_with_input(BenchmarkId::new("master/batch", count), &count, |b, &n| {
            b.iter(|| batch::map_seeds(black_box(n), master_identity))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
