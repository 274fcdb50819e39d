use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paramtc_core::{LHElement, RingDescriptor, RingElement};

fn cup_and_height(c: &mut Criterion) {
    let mut group = c.benchmark_group("ring");
    for n in [4u32, 16, 64] {
        let ring = RingDescriptor::cohomology_cp(n);
        let x = RingElement::generator(&ring, 0).unwrap();
        let one = RingElement::one(&ring);
        let class = &one + &x;
        group.bench_with_input(BenchmarkId::new("power (1+x)^n", n), &n, |b, &n| {
            b.iter(|| black_box(&class).power(n))
        });
        group.bench_with_input(BenchmarkId::new("height x", n), &n, |b, _| {
            b.iter(|| black_box(&x).height().unwrap())
        });
        let kernel = LHElement::kernel_generator(x.clone(), 2).unwrap();
        group.bench_with_input(BenchmarkId::new("height U - x", n), &n, |b, _| {
            b.iter(|| black_box(&kernel).height().unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cup_and_height);
criterion_main!(benches);
