//! Randomized invariants of kernels, stencils, N-D operators and convolution.

use proptest::prelude::*;
use tgd_core::kernel::{make_kernel, FamilyName, Intercept, Params};
use tgd_core::op1d::{build_continuous, discretize, tgd_1d};
use tgd_core::opnd::{lot_operator, orthogonal_operator, rotational_operator};
use tgd_core::rotation::RotationWeight;
use tgd_core::{convolve, convolve_separable, Boundary, KernelSpec, Mode, Order, SampledField};

/// A valid kernel of a random shipped family on `W = N + 1/2`.
fn kernel_strategy() -> impl Strategy<Value = (KernelSpec, usize)> {
    (0usize..6, 2usize..=16, 0.0f64..1.0, 0.0f64..1.0, prop::collection::vec(0.3f64..0.95, 1..12)).prop_map(
        |(family, n, a, b, ratios)| {
            let w = n as f64 + 0.5;
            let mut p = Params::default();
            let name = FamilyName::SHIPPED[family];
            match name {
                FamilyName::Gaussian => p.delta = Some(w * (0.25 + 0.75 * a)),
                FamilyName::Linear => {
                    let k = 0.1 + 9.9 * a;
                    p.k = Some(k);
                    p.c = Some(Intercept::Value(-k * w * (1.0 + 2.0 * b)));
                }
                FamilyName::Exponential => p.delta = Some((w * (0.1 + 1.9 * a)).sqrt()),
                FamilyName::Landau => {
                    p.tau = Some(w * (1.0 + 2.0 * a));
                    p.n = Some(0.5 + 3.5 * b);
                }
                FamilyName::Weibull => {
                    p.k = Some(0.3 + 0.7 * a);
                    p.lambda = Some(w * (0.1 + 1.9 * b));
                }
                _ => {
                    let mut v = vec![1.0];
                    for r in ratios {
                        v.push(v.last().unwrap() * r);
                    }
                    p.values = Some(v);
                }
            }
            (make_kernel(name, &p, w).unwrap(), n)
        },
    )
}

fn unit_direction() -> impl Strategy<Value = Vec<f64>> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| vec![t.cos(), t.sin()])
}

fn random_field(shape: Vec<usize>) -> impl Strategy<Value = SampledField> {
    let len: usize = shape.iter().product();
    prop::collection::vec(-1.0f64..1.0, len).prop_map(move |v| SampledField::new(shape.clone(), v).unwrap())
}

fn field_2d() -> impl Strategy<Value = SampledField> {
    (17usize..=64, 17usize..=64).prop_flat_map(|(r, c)| random_field(vec![r, c]))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stencil_invariants((kernel, n) in kernel_strategy()) {
        for order in [Order::First, Order::Second] {
            let op = discretize(&build_continuous(&kernel, order).unwrap(), n).unwrap();
            prop_assert!(op.weights.iter().sum::<f64>().abs() <= 1e-12);
            let int = op.to_integer_scale();
            prop_assert_eq!(int.weights.iter().sum::<f64>(), 0.0);
            prop_assert_eq!(int.mode, Mode::IntegerScaled);
            let sign = if order == Order::First { -1.0 } else { 1.0 };
            for s in [&op, &int] {
                for i in 1..=n as isize {
                    prop_assert_eq!(s.weight(i), sign * s.weight(-i));
                }
            }
            prop_assert_eq!(op.weight(0), if order == Order::First { 0.0 } else { -2.0 });
            // magnitudes fall strictly with distance; rounding may tie integers
            for i in 1..n as isize {
                prop_assert!(op.weight(-i).abs() > op.weight(-i - 1).abs(), "{:?} at {}", op.weights, i);
                prop_assert!(int.weight(-i).abs() >= int.weight(-i - 1).abs());
            }
            prop_assert!(op.weight(-(n as isize)) > 0.0);
        }
    }

    #[test]
    fn affine_and_quadratic_exactness((kernel, n) in kernel_strategy(), a in -3.0f64..3.0, b in -5.0f64..5.0) {
        let len = 4 * n + 8;
        let line = SampledField::new_1d((0..len).map(|i| a * i as f64 + b).collect());
        let first = discretize(&build_continuous(&kernel, Order::First).unwrap(), n).unwrap();
        let out = tgd_1d(&line, &first, Boundary::Valid, true).unwrap();
        prop_assert!(out.values.iter().all(|v| (v - a).abs() <= 1e-9));
        let quad = SampledField::new_1d((0..len).map(|i| a * (i * i) as f64 + b * i as f64).collect());
        let second = discretize(&build_continuous(&kernel, Order::Second).unwrap(), n).unwrap();
        let out = tgd_1d(&quad, &second, Boundary::Valid, true).unwrap();
        prop_assert!(out.values.iter().all(|v| (v - 2.0 * a).abs() <= 1e-9 * (1.0 + a.abs() * (len * len) as f64)));
    }

    #[test]
    fn stencil_linearity((kernel, n) in kernel_strategy(), a in -2.0f64..2.0, b in -2.0f64..2.0,
                         x in prop::collection::vec(-1.0f64..1.0, 40), y in prop::collection::vec(-1.0f64..1.0, 40)) {
        let op = discretize(&build_continuous(&kernel, Order::First).unwrap(), n).unwrap();
        let mix = SampledField::new_1d(x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect());
        let fx = tgd_1d(&SampledField::new_1d(x), &op, Boundary::Reflect, false).unwrap();
        let fy = tgd_1d(&SampledField::new_1d(y), &op, Boundary::Reflect, false).unwrap();
        let fm = tgd_1d(&mix, &op, Boundary::Reflect, false).unwrap();
        let expected: Vec<f64> = fx.values.iter().zip(&fy.values).map(|(p, q)| a * p + b * q).collect();
        prop_assert!(max_abs_diff(&fm.values, &expected) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotational_symmetry_classes(v in unit_direction(), n in 3usize..=8, cosine in any::<bool>()) {
        let kernel = KernelSpec::default_for(FamilyName::Gaussian, n as f64 + 0.5).unwrap();
        let rw = if cosine { RotationWeight::cosine() } else { RotationWeight::constant() };
        for order in [Order::First, Order::Second] {
            let op = rotational_operator(&kernel, &rw, &v, order, 2, n).unwrap();
            let len = op.weights.len();
            let sign = if order == Order::First { -1.0 } else { 1.0 };
            for k in 0..len {
                prop_assert_eq!(op.weights[k], sign * op.weights[len - 1 - k]);
            }
            prop_assert!(op.weights.iter().sum::<f64>().abs() <= 1e-10);
            prop_assert_eq!(op.to_integer_scale().weights.iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn constant_fields_are_annihilated(v in unit_direction(), n in 3usize..=6, c in -100.0f64..100.0) {
        let kernel = KernelSpec::default_for(FamilyName::Gaussian, n as f64 + 0.5).unwrap();
        let field = SampledField::from_fn(&[20, 23], |_| c);
        let ops = [
            rotational_operator(&kernel, &RotationWeight::cosine(), &v, Order::First, 2, n).unwrap(),
            rotational_operator(&kernel, &RotationWeight::cosine(), &v, Order::Second, 2, n).unwrap(),
            lot_operator(&kernel, 2, n).unwrap(),
            orthogonal_operator(&kernel, 1, Order::First, 2, n).unwrap(),
        ];
        for op in &ops {
            let bound: f64 = op.weights.iter().map(|w| w.abs()).sum::<f64>() * c.abs() * 1e-14;
            for b in [Boundary::Replicate, Boundary::Reflect, Boundary::Valid] {
                let out = convolve(&field, op, b).unwrap();
                prop_assert!(out.values.iter().all(|x| x.abs() <= bound));
            }
        }
    }

    #[test]
    fn separable_matches_dense_2d(field in field_2d(), n in 2usize..=6, axis in 0usize..2, second in any::<bool>()) {
        let kernel = KernelSpec::default_for(FamilyName::Gaussian, n as f64 + 0.5).unwrap();
        let order = if second { Order::Second } else { Order::First };
        let op = orthogonal_operator(&kernel, axis, order, 2, n).unwrap();
        for b in [Boundary::Replicate, Boundary::Reflect, Boundary::Zero, Boundary::Valid] {
            let dense = convolve(&field, &op, b).unwrap();
            let sep = convolve_separable(&field, &op, b).unwrap();
            prop_assert_eq!(&dense.shape, &sep.shape);
            prop_assert!(max_abs_diff(&dense.values, &sep.values) <= 1e-10);
        }
    }

    #[test]
    fn convolution_is_linear(x in random_field(vec![19, 21]), y in random_field(vec![19, 21]),
                             a in -3.0f64..3.0, b in -3.0f64..3.0, v in unit_direction()) {
        let kernel = KernelSpec::default_for(FamilyName::Gaussian, 4.5).unwrap();
        let op = rotational_operator(&kernel, &RotationWeight::cosine(), &v, Order::First, 2, 4).unwrap();
        let mix = SampledField::new(x.shape.clone(), x.values.iter().zip(&y.values).map(|(p, q)| a * p + b * q).collect()).unwrap();
        let cx = convolve(&x, &op, Boundary::Reflect).unwrap();
        let cy = convolve(&y, &op, Boundary::Reflect).unwrap();
        let cm = convolve(&mix, &op, Boundary::Reflect).unwrap();
        let expected: Vec<f64> = cx.values.iter().zip(&cy.values).map(|(p, q)| a * p + b * q).collect();
        prop_assert!(max_abs_diff(&cm.values, &expected) <= 1e-12);
    }

    #[test]
    fn valid_mode_is_translation_equivariant(x in random_field(vec![24, 26]), dr in 0usize..4, dc in 0usize..4) {
        let kernel = KernelSpec::default_for(FamilyName::Gaussian, 3.5).unwrap();
        let op = lot_operator(&kernel, 2, 3).unwrap();
        let shifted = SampledField::from_fn(&[20, 22], |i| x.get(&[i[0] + dr, i[1] + dc]));
        let base = convolve(&x, &op, Boundary::Valid).unwrap();
        let moved = convolve(&shifted, &op, Boundary::Valid).unwrap();
        for r in 0..moved.shape[0] {
            for c in 0..moved.shape[1] {
                prop_assert_eq!(moved.get(&[r, c]), base.get(&[r + dr, c + dc]));
            }
        }
    }
}

fn plane(v: &[f64], s: f64, shape: &[usize]) -> SampledField {
    // array axis 0 is Cartesian y, axis 1 is x
    SampledField::from_fn(shape, |i| s * (v[0] * i[1] as f64 + v[1] * i[0] as f64))
}

#[test]
fn directional_linear_response_is_isotropic() {
    let n = 5;
    let kernel = KernelSpec::default_for(FamilyName::Gaussian, n as f64 + 0.5).unwrap();
    for rw in [RotationWeight::cosine(), RotationWeight::constant()] {
        let mut responses = Vec::new();
        for j in 0..8 {
            let t = j as f64 * std::f64::consts::PI / 4.0 + 0.1;
            let v = [t.cos(), t.sin()];
            let op = rotational_operator(&kernel, &rw, &v, Order::First, 2, n).unwrap();
            let out = convolve(&plane(&v, 1.7, &[30, 30]), &op, Boundary::Valid).unwrap();
            let k = op.norm_constant();
            let vals: Vec<f64> = out.values.iter().map(|x| x * k / 1.7).collect();
            let first = vals[0];
            assert!(vals.iter().all(|x| (x - first).abs() <= 1e-9 * first.abs()));
            responses.push(first);
        }
        let (lo, hi) = responses.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        assert!((hi - lo) / hi <= 1e-6, "{responses:?}");
        assert!((hi - rw.gain(1, 2)).abs() <= 1e-9);
    }
}

#[test]
fn orthogonal_partial_is_exact_on_affine_fields() {
    let kernel = KernelSpec::default_for(FamilyName::Gaussian, 4.5).unwrap();
    let (gx, gy, gz) = (0.7, -1.3, 2.1);
    let f2 = SampledField::from_fn(&[18, 20], |i| gx * i[1] as f64 + gy * i[0] as f64 + 3.0);
    for (axis, slope) in [(0, gx), (1, gy)] {
        let op = orthogonal_operator(&kernel, axis, Order::First, 2, 4).unwrap();
        let out = convolve(&f2, &op, Boundary::Valid).unwrap();
        let k = op.norm_constant();
        assert!(out.values.iter().all(|v| (v * k - slope).abs() <= 1e-9));
    }
    let f3 = SampledField::from_fn(&[12, 13, 14], |i| gx * i[2] as f64 + gy * i[1] as f64 + gz * i[0] as f64);
    for (axis, slope) in [(0, gx), (1, gy), (2, gz)] {
        let op = orthogonal_operator(&kernel, axis, Order::First, 3, 4).unwrap();
        let out = convolve_separable(&f3, &op, Boundary::Valid).unwrap();
        let k = op.norm_constant();
        assert!(out.values.iter().all(|v| (v * k - slope).abs() <= 1e-9));
    }
}

#[test]
fn ramp_plateau_argmax_does_not_move_with_size() {
    // rises steeply on 48..52 and gently elsewhere
    let signal = SampledField::new_1d(
        (0..100)
            .map(|i| {
                let x = i as f64;
                if x < 48.0 {
                    0.01 * x
                } else if x <= 52.0 {
                    0.48 + (x - 48.0)
                } else {
                    4.48 + 0.01 * (x - 52.0)
                }
            })
            .collect(),
    );
    for name in FamilyName::SHIPPED {
        let at: Vec<usize> = [3usize, 5, 9]
            .iter()
            .map(|&n| {
                let kernel = KernelSpec::default_for(name, n as f64 + 0.5).unwrap();
                let op = discretize(&build_continuous(&kernel, Order::First).unwrap(), n).unwrap();
                let out = tgd_1d(&signal, &op, Boundary::Replicate, true).unwrap();
                let (best, _) = out
                    .values
                    .iter()
                    .enumerate()
                    .fold((0, f64::MIN), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
                best
            })
            .collect();
        assert!(at.iter().all(|&i| i == at[0]), "{name:?}: {at:?}");
        assert_eq!(at[0], 50, "{name:?}");
    }
}

#[test]
fn error_shrinks_with_support() {
    let h = 0.01;
    let signal = SampledField::new_1d((0..800).map(|i| (i as f64 * h).sin()).collect())
        .with_spacing(vec![h])
        .unwrap();
    for name in FamilyName::SHIPPED {
        let mut last = f64::MAX;
        for n in (2..=32).rev() {
            let kernel = KernelSpec::default_for(name, n as f64 + 0.5).unwrap();
            let op = discretize(&build_continuous(&kernel, Order::First).unwrap(), n).unwrap();
            let out = tgd_1d(&signal, &op, Boundary::Valid, true).unwrap();
            let err = out
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| (v - ((j + n) as f64 * h).cos()).abs())
                .fold(0.0, f64::max);
            assert!(err < last, "{name:?} N={n}: {err} vs {last}");
            last = err;
        }
    }
}
