use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paramtc_bench::{antipodal_pairs, random_pairs};
use paramtc_core::planner::plan_default;
use paramtc_core::verify::check_path;

fn planning(c: &mut Criterion) {
    let mut group = c.benchmark_group("planner");
    for n in [1usize, 3, 8] {
        let pairs = random_pairs(n, 64);
        group.bench_with_input(BenchmarkId::new("plan random", n), &pairs, |b, pairs| {
            b.iter(|| {
                for (x, y) in pairs {
                    black_box(plan_default(x, y).unwrap());
                }
            })
        });
        let antipodal = antipodal_pairs(n);
        group.bench_with_input(
            BenchmarkId::new("plan antipodal", n),
            &antipodal,
            |b, pairs| {
                b.iter(|| {
                    for (x, y) in pairs {
                        black_box(plan_default(x, y).unwrap());
                    }
                })
            },
        );
        let path = plan_default(&antipodal[0].0, &antipodal[0].1).unwrap();
        group.bench_with_input(BenchmarkId::new("eval", n), &path, |b, path| {
            b.iter(|| path.eval(black_box(0.37)))
        });
        group.bench_with_input(BenchmarkId::new("check_path 1001", n), &path, |b, path| {
            b.iter(|| check_path(path, 1001))
        });
    }
    group.finish();
}

criterion_group!(benches, planning);
criterion_main!(benches);
