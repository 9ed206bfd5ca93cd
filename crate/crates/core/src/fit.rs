//! One-dimensional parameter fitting.

/// Minimizes `f` on `[lo, hi]`: a 64-point scan, then golden-section search
/// in the bracket around the best scan point. Returns `(x, f(x))`.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    const SCAN: usize = 64;
    let step = (hi - lo) / SCAN as f64;
    let best = (0..=SCAN)
        .map(|j| lo + step * j as f64)
        .map(|x| (x, f(x)))
        .fold((lo, f64::INFINITY), |b, p| if p.1 < b.1 { p } else { b });
    let mut a = (best.0 - step).max(lo);
    let mut b = (best.0 + step).min(hi);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-10 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    let fx = f(x);
    if fx <= best.1 {
        (x, fx)
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let (x, fx) = minimize_scalar(|x| (x - 1.3).powi(2) + 0.5, 0.0, 4.0);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((fx - 0.5).abs() < 1e-12);
    }

    #[test]
    fn handles_kinks() {
        let (x, _) = minimize_scalar(|x| (x - 2.25).abs(), 1.0, 5.0);
        assert!((x - 2.25).abs() < 1e-8);
    }
}
