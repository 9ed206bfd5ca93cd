//! Fixed-panel composite Simpson quadrature.

/// Panel count used for every kernel integral.
pub const PANELS: usize = 4096;

/// Composite Simpson rule over `[a, b]` with an even number of panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for j in 1..n {
        let v = f(a + h * j as f64);
        if j % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b))
}
