//! Destabilizer enumeration, sequential versus rank-partitioned parallel.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use k3walls_core::walls::potential_destabilizers_with;
use k3walls_core::{Execution, MukaiClass, RatInterval, Rat, Region, SurfaceData};

fn region(b: &str, t: &str) -> Region {
    Region::new(b.parse().unwrap(), t.parse().unwrap()).unwrap()
}

fn bench_enumeration(c: &mut Criterion) {
    let cases = [
        ("d2_n5", 2, MukaiClass::ideal_sheaf(5), region("[-3/2,-1/2]", "(0,2]"), 6),
        ("d9_n5_path", 9, MukaiClass::ideal_sheaf(5), region("[-2/3,-2/3]", "(0,4]"), 8),
        ("d1_rank2", 1, MukaiClass::new(2, 1, -2), region("[-1/4,1/4]", "(0,3]"), 8),
    ];
    let mut group = c.benchmark_group("potential_destabilizers");
    group.sample_size(20);
    for (name, d, v, reg, bound) in &cases {
        let x = SurfaceData::new(*d).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &exec, |bch, &exec| {
                bch.iter(|| {
                    potential_destabilizers_with(black_box(v), black_box(reg), *bound, &x, exec).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn bench_vertical_path(c: &mut Criterion) {
    let x = SurfaceData::new(4).unwrap();
    let v = MukaiClass::ideal_sheaf(7);
    let t_range: RatInterval = "(0,8]".parse().unwrap();
    let b = Rat::from_int(-1);
    let mut group = c.benchmark_group("walls_on_vertical_path");
    group.sample_size(20);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}"), |bch| {
            bch.iter(|| {
                k3walls_core::walls::walls_on_vertical_path_with(&v, &b, &t_range, 10, &x, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration, bench_vertical_path);
criterion_main!(benches);
