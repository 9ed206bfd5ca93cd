use std::f64::consts::FRAC_PI_6;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tgd_core::op1d::{build_continuous, discretize, kernel_for_size, smooth_weights, tgd_1d};
use tgd_core::opnd::{lot_operator, orthogonal_operator, rotate_operator};
use tgd_core::spectrum::spectrum;
use tgd_core::{convolve, convolve_separable, Boundary, KernelSpec, Order, RotateSpec, SampledField};

fn gaussian(n: usize) -> KernelSpec {
    KernelSpec::gaussian(n as f64 / 2.5, n as f64 + 0.5).unwrap()
}

fn field_2d(side: usize) -> SampledField {
    SampledField::from_fn(&[side, side], |i| ((i[0] as f64) * 0.13).sin() + ((i[1] as f64) * 0.07).cos())
}

fn bench_discretize(c: &mut Criterion) {
    let mut group = c.benchmark_group("discretize_1d");
    for n in [5, 9, 17] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let k = kernel_for_size(&gaussian(n), n).unwrap();
                let op = build_continuous(&k, Order::First).unwrap();
                discretize(black_box(&op), n).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_apply_1d(c: &mut Criterion) {
    let n = 9;
    let op = discretize(&build_continuous(&gaussian(n), Order::First).unwrap(), n).unwrap();
    let signal = SampledField::new_1d((0..65_536).map(|i| (i as f64 * 0.01).sin()).collect());
    c.bench_function("tgd_1d_65536_n9", |b| {
        b.iter(|| tgd_1d(black_box(&signal), &op, Boundary::Replicate, true).unwrap())
    });
}

fn bench_build_nd(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_2d");
    let n = 6;
    let k = gaussian(n);
    group.bench_function("orthogonal", |b| {
        b.iter(|| orthogonal_operator(black_box(&k), 0, Order::First, 2, n).unwrap())
    });
    group.bench_function("rotated_30deg", |b| {
        b.iter(|| rotate_operator(black_box(&k), &RotateSpec::Orthogonal, FRAC_PI_6, Order::First, n).unwrap())
    });
    group.bench_function("lot", |b| b.iter(|| lot_operator(black_box(&k), 2, n).unwrap()));
    group.finish();
}

fn bench_convolve_2d(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve_2d");
    group.sample_size(20);
    let field = field_2d(256);
    for n in [3, 6] {
        let op = orthogonal_operator(&gaussian(n), 0, Order::First, 2, n).unwrap();
        group.bench_with_input(BenchmarkId::new("dense", n), &op, |b, op| {
            b.iter(|| convolve(black_box(&field), op, Boundary::Replicate).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("separable", n), &op, |b, op| {
            b.iter(|| convolve_separable(black_box(&field), op, Boundary::Replicate).unwrap())
        });
    }
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let weights = smooth_weights(&gaussian(9), 9).unwrap();
    c.bench_function("spectrum_n9_fft1024", |b| b.iter(|| spectrum(black_box(&weights), 1024).unwrap()));
}

criterion_group!(benches, bench_discretize, bench_apply_1d, bench_build_nd, bench_convolve_2d, bench_spectrum);
criterion_main!(benches);
