use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use salagean_core::diskops::CaratheodoryAtoms;
use salagean_core::harness::build_trial;
use salagean_core::{
    caratheodory_series, delta, q_beta_coeffs, region_subordination_check, scan_circle,
    ClassParams, DeltaMethod,
};

fn series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    for order in [32, 128, 512] {
        let p = caratheodory_series(&CaratheodoryAtoms::extremal(), 0.25, order).unwrap();
        group.bench_with_input(BenchmarkId::new("pow", order), &p, |b, p| {
            b.iter(|| black_box(p).pow(black_box(0.5)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mul", order), &p, |b, p| {
            b.iter(|| black_box(p).mul(p).unwrap())
        });
    }
    group.finish();
}

fn delta_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta");
    for method in DeltaMethod::ALL {
        group.bench_function(method.as_str(), |b| {
            b.iter(|| delta(black_box(2.0), black_box(0.25), method, 1e-10).unwrap())
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let q = q_beta_coeffs(1.0, 0.0, 128).unwrap();
    c.bench_function("scan_circle/128x1024", |b| {
        b.iter(|| scan_circle(black_box(&q), 0.99, 1024).unwrap())
    });

    let params = ClassParams::new(1, 1.0, 0.0).unwrap();
    c.bench_function("trial/n=1 N=128", |b| {
        b.iter(|| build_trial(&params, 128, 7, black_box(3)).unwrap())
    });

    let p = build_trial(&params, 128, 7, 3).unwrap().functional;
    c.bench_function("containment/4096", |b| {
        b.iter(|| region_subordination_check(black_box(&p), &q, 0.9, 0.999, 4096).unwrap())
    });
}

criterion_group!(benches, series, delta_methods, scans);
criterion_main!(benches);
