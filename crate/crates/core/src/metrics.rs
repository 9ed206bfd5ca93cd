//! Comparison metrics for differenced signals.

/// Pearson correlation; NaN when either input is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "pearson needs equal lengths");
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    sab / (saa * sbb).sqrt()
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "rmse needs equal lengths");
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (s / a.len() as f64).sqrt()
}

/// Strict sign changes between neighbours, located by linear interpolation.
///
/// Samples with `|v| <= 1e-9 * max|v|` count as zero; a run of such samples
/// between opposite signs yields one crossing at its midpoint.
pub fn zero_crossings(values: &[f64]) -> Vec<f64> {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-9 * max;
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (k, &v) in values.iter().enumerate() {
        if v.abs() <= eps {
            continue;
        }
        if let Some(j) = last {
            let u = values[j];
            if u.signum() != v.signum() {
                out.push(if k == j + 1 {
                    j as f64 + u / (u - v)
                } else {
                    (j + k) as f64 / 2.0
                });
            }
        }
        last = Some(k);
    }
    out
}

/// Local maxima of `|v|` that reach `rel_threshold * max|v|`.
pub fn peaks(values: &[f64], rel_threshold: f64) -> Vec<usize> {
    let m: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let max = m.iter().fold(0.0f64, |a, &b| a.max(b));
    (1..m.len().saturating_sub(1))
        .filter(|&k| m[k] >= m[k - 1] && m[k] > m[k + 1] && m[k] >= rel_threshold * max && max > 0.0)
        .collect()
}

/// For each reference location, the index of the largest `|v|` within
/// `half_window` of it and the distance between the two.
pub fn argmax_offsets(values: &[f64], reference: &[f64], half_window: f64) -> Vec<(f64, f64)> {
    reference
        .iter()
        .map(|&p| {
            let lo = (p - half_window).ceil().max(0.0) as usize;
            let hi = ((p + half_window).floor() as usize).min(values.len() - 1);
            let mut best = lo;
            for k in lo..=hi {
                if values[k].abs() > values[best].abs() {
                    best = k;
                }
            }
            (best as f64, (best as f64 - p).abs())
        })
        .collect()
}

/// For each reference location, the nearest zero crossing within
/// `half_window` and its distance; `None` when there is none.
pub fn crossing_offsets(values: &[f64], reference: &[f64], half_window: f64) -> Vec<Option<(f64, f64)>> {
    let zc = zero_crossings(values);
    reference
        .iter()
        .map(|&p| {
            zc.iter()
                .filter(|z| (*z - p).abs() <= half_window)
                .map(|&z| (z, (z - p).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
        })
        .collect()
}

/// Sign changes between horizontal and vertical neighbours of a 2D field,
/// as `(row, col)` midpoints. Near-zero samples are ignored as in
/// [`zero_crossings`].
pub fn zero_crossings_2d(values: &[f64], rows: usize, cols: usize) -> Vec<(f64, f64)> {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-9 * max;
    let sign = |v: f64| if v.abs() <= eps { 0.0 } else { v.signum() };
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = sign(values[r * cols + c]);
            if c + 1 < cols && v * sign(values[r * cols + c + 1]) < 0.0 {
                out.push((r as f64, c as f64 + 0.5));
            }
            if r + 1 < rows && v * sign(values[(r + 1) * cols + c]) < 0.0 {
                out.push((r as f64 + 0.5, c as f64));
            }
        }
    }
    out
}
