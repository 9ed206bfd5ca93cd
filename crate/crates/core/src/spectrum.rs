//! Magnitude spectra of stencils.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Result, TgdError};

/// `|DFT|` of `weights` zero-padded to `n_fft`, bins `0..=n_fft/2`.
pub fn spectrum(weights: &[f64], n_fft: usize) -> Result<Vec<f64>> {
    if !n_fft.is_power_of_two() || n_fft < weights.len() {
        return Err(TgdError::InvalidParam(format!(
            "n_fft must be a power of two >= {}, got {n_fft}",
            weights.len()
        )));
    }
    let mut buf: Vec<Complex<f64>> = weights.iter().map(|&w| Complex::new(w, 0.0)).collect();
    buf.resize(n_fft, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    Ok(buf[..=n_fft / 2].iter().map(|c| c.norm()).collect())
}

/// Mean magnitude over the upper half band, bins `n_fft/4..=n_fft/2`.
pub fn upper_half_band_mean(magnitudes: &[f64]) -> f64 {
    let last = magnitudes.len() - 1;
    let band = &magnitudes[last / 2..];
    band.iter().sum::<f64>() / band.len() as f64
}

/// Unit-sum Gaussian taps on `-N..=N` with `sigma = (N + 1/2) / 3`.
pub fn gaussian_equal_support(n: usize) -> Vec<f64> {
    let sigma = (n as f64 + 0.5) / 3.0;
    let r = n as isize;
    let mut g: Vec<f64> = (-r..=r).map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = g.iter().sum();
    g.iter_mut().for_each(|v| *v /= total);
    g
}
