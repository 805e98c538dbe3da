use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyppl_core::geometry::{CoordinatePoint, HyperboloidFunction, KTypeTerm};
use hyppl_core::jacobi::{RadialProfile, SpectralGridSpec};
use hyppl_core::plancherel::{continuous_part, InversionEngine, PlancherelOptions};
use hyppl_core::{Exec, C64};
use std::hint::black_box;

fn mixed() -> HyperboloidFunction {
    let g = RadialProfile::gaussian(0.15, 0.5);
    let terms = [0, 2, 6].iter().map(|&m| KTypeTerm { m, profile: g }).collect();
    HyperboloidFunction::new(0, C64::new(0.0, 0.0), terms).unwrap()
}

fn opts(exec: Exec) -> PlancherelOptions {
    PlancherelOptions {
        exec,
        ..PlancherelOptions::default()
    }
}

fn bench_continuous(c: &mut Criterion) {
    let f = mixed();
    let mut group = c.benchmark_group("continuous_part");
    group.sample_size(10);
    for n in [100usize, 400] {
        let grid = SpectralGridSpec::new(10.0, n);
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, n), &grid, |b, grid| {
                b.iter(|| continuous_part(black_box(&f), grid, &opts(exec)).unwrap().value)
            });
        }
    }
    group.finish();
}

fn bench_inversion(c: &mut Criterion) {
    let f = mixed();
    let grid = SpectralGridSpec::new(16.0, 640);
    let p = CoordinatePoint::new(0.4, 0.3).unwrap();
    let mut group = c.benchmark_group("inversion");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(name, |b| {
            b.iter(|| {
                let engine = InversionEngine::new(black_box(&f), &grid, &opts(exec)).unwrap();
                engine.invert(p).unwrap().reconstructed
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_continuous, bench_inversion);
criterion_main!(benches);
