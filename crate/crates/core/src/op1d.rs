//! Continuous TGD operators and 1D stencils.
//!
//! Stencils are indexed `-N..=N` and stored left to right. First-order
//! weights are positive at negative offsets (`[1, 0, -1]` for `N = 1`) so that
//! convolution yields `+slope` on a rising ramp.

use serde::{Deserialize, Serialize};

use crate::conv::convolve;
use crate::error::{Result, TgdError};
use crate::field::{Boundary, SampledField};
use crate::kernel::KernelSpec;
use crate::quad::{simpson, PANELS};

/// Entries smaller than this fraction of the largest magnitude are treated as
/// zero when choosing the integer scale.
pub const INTEGER_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    First,
    Second,
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    FloatNormalized,
    IntegerScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    IntervalIntegral,
    DirectSample,
}

/// An evaluable operator `T`, `R` or `S` on `[-W, W]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousOperator {
    pub order: Order,
    pub kernel: KernelSpec,
    /// `1 / (2 int t w)`.
    pub c1: f64,
    /// `1 / int t^2 w`.
    pub c2: f64,
    /// Weight of the Dirac delta at the origin of `R`: `-2 int w`.
    pub center_mass: f64,
    smooth_mass: f64,
}

/// Builds `T`, `R` or the unit-integral smooth operator `S` from a kernel.
///
/// The kernel must satisfy C1 and C2, and C3 as well when `order` is smooth.
pub fn build_continuous(kernel: &KernelSpec, order: Order) -> Result<ContinuousOperator> {
    let report = kernel.validate();
    let mut failed = Vec::new();
    if !report.c1_ok {
        failed.push("C1");
    }
    if !report.c2_ok {
        failed.push("C2");
    }
    if order == Order::Smooth && !report.c3_ok {
        failed.push("C3");
    }
    if !failed.is_empty() {
        return Err(TgdError::ConstraintViolation(format!(
            "{} kernel fails {}",
            kernel.name().as_str(),
            failed.join(", ")
        )));
    }
    Ok(ContinuousOperator::unchecked(kernel, order))
}

impl ContinuousOperator {
    fn unchecked(kernel: &KernelSpec, order: Order) -> Self {
        let m1 = kernel.integral(0.0, kernel.w, 1);
        let m2 = kernel.integral(0.0, kernel.w, 2);
        ContinuousOperator {
            order,
            kernel: kernel.clone(),
            c1: 1.0 / (2.0 * m1),
            c2: 1.0 / m2,
            center_mass: -2.0 * kernel.integral(0.0, kernel.w, 0),
            smooth_mass: kernel.smooth_mass(),
        }
    }

    pub fn w(&self) -> f64 {
        self.kernel.w
    }

    /// Operator value at `t`. For `R` the delta at the origin is excluded and
    /// `R(0)` evaluates to 0; see [`center_mass`](Self::center_mass).
    pub fn eval(&self, t: f64) -> f64 {
        match self.order {
            Order::First => {
                if t < 0.0 {
                    self.kernel.eval(-t)
                } else {
                    -self.kernel.eval(t)
                }
            }
            Order::Second => self.kernel.eval(t.abs()),
            Order::Smooth => self.kernel.smooth_raw(t) / self.smooth_mass,
        }
    }

    /// Continuous TGD of `f` at `x0`, scaled by `C1` or `C2`.
    ///
    /// For the smooth operator this is the weighted mean `int S(t) f(x0 - t)`.
    pub fn apply_fn<F: Fn(f64) -> f64>(&self, f: F, x0: f64) -> f64 {
        let w = self.w();
        let k = &self.kernel;
        match self.order {
            Order::First => self.c1 * simpson(|t| k.eval(t) * (f(x0 + t) - f(x0 - t)), 0.0, w, PANELS),
            Order::Second => {
                let f0 = f(x0);
                self.c2 * simpson(|t| k.eval(t) * (f(x0 + t) + f(x0 - t) - 2.0 * f0), 0.0, w, PANELS)
            }
            Order::Smooth => simpson(|t| self.eval(t) * (f(x0 + t) + f(x0 - t)), 0.0, w, PANELS),
        }
    }
}

/// A `(2N + 1)`-weight stencil.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteOperator1D {
    pub order: Order,
    #[serde(rename = "N")]
    pub n: usize,
    pub mode: Mode,
    pub scale: f64,
    #[serde(default = "default_provenance")]
    pub provenance: Provenance,
    pub weights: Vec<f64>,
}

fn default_provenance() -> Provenance {
    Provenance::IntervalIntegral
}

fn check_kernel_order(order: Order) -> Result<()> {
    if order == Order::Smooth {
        return Err(TgdError::InvalidParam(
            "stencils are first or second order; use smooth_weights for S".into(),
        ));
    }
    Ok(())
}

/// Stencil from one-sided magnitudes `side[i - 1]` for offsets `i = 1..=N`.
fn from_side(order: Order, side: &[f64], provenance: Provenance) -> DiscreteOperator1D {
    let n = side.len();
    let total: f64 = side.iter().sum();
    let mut weights = vec![0.0; 2 * n + 1];
    for (i, &p) in side.iter().enumerate() {
        let v = p / total;
        let off = i + 1;
        match order {
            Order::First => {
                weights[n - off] = v;
                weights[n + off] = -v;
            }
            _ => {
                weights[n - off] = v;
                weights[n + off] = v;
            }
        }
    }
    if order == Order::Second {
        weights[n] = -2.0;
    }
    DiscreteOperator1D {
        order,
        n,
        mode: Mode::FloatNormalized,
        scale: 1.0,
        provenance,
        weights,
    }
}

/// Kernel re-supported on `W = N + 1/2`; see [`KernelSpec::with_support`].
pub fn kernel_for_size(kernel: &KernelSpec, n: usize) -> Result<KernelSpec> {
    let w = n as f64 + 0.5;
    if kernel.w == w {
        return Ok(kernel.clone());
    }
    kernel.with_support(w)
}

/// Interval-integral discretization of `T` or `R` with `W = N + 1/2`.
///
/// Each side is normalized to unit sum; the second-order center is `-2`,
/// which equals the interval integral of `R` over `[-1/2, 1/2]` after
/// normalization.
pub fn discretize(op: &ContinuousOperator, n: usize) -> Result<DiscreteOperator1D> {
    if n < 1 {
        return Err(TgdError::DegenerateSize(n));
    }
    check_kernel_order(op.order)?;
    let k = kernel_for_size(&op.kernel, n)?;
    let side: Vec<f64> = (1..=n).map(|i| k.integral(i as f64 - 0.5, i as f64 + 0.5, 0)).collect();
    Ok(from_side(op.order, &side, Provenance::IntervalIntegral))
}

/// Direct sampling `w(i) / sum_j w(j)` with `W = N + 1/2`.
pub fn discretize_by_sampling(kernel: &KernelSpec, n: usize, order: Order) -> Result<DiscreteOperator1D> {
    if n < 3 {
        return Err(TgdError::SampleTooCoarse(n));
    }
    check_kernel_order(order)?;
    let k = kernel_for_size(kernel, n)?;
    let side: Vec<f64> = (1..=n).map(|i| k.eval(i as f64)).collect();
    Ok(from_side(order, &side, Provenance::DirectSample))
}

/// Interval integrals of `S` over `[i - 1/2, i + 1/2]`, `i = -N..=N`, with
/// `W = N + 1/2`, normalized to unit sum.
pub fn smooth_weights(kernel: &KernelSpec, n: usize) -> Result<Vec<f64>> {
    let k = kernel_for_size(kernel, n)?;
    let half: Vec<f64> = (0..=n)
        .map(|i| {
            if i == 0 {
                2.0 * k.smooth_raw_integral(0.0, 0.5)
            } else {
                k.smooth_raw_integral(i as f64 - 0.5, i as f64 + 0.5)
            }
        })
        .collect();
    Ok(mirror_unit(&half))
}

/// Samples `S(i)`, `i = -N..=N`, with `W = N + 1/2`, normalized to unit sum.
pub fn smooth_samples(kernel: &KernelSpec, n: usize) -> Result<Vec<f64>> {
    let k = kernel_for_size(kernel, n)?;
    let half: Vec<f64> = (0..=n).map(|i| k.smooth_raw(i as f64)).collect();
    Ok(mirror_unit(&half))
}

fn mirror_unit(half: &[f64]) -> Vec<f64> {
    let n = half.len() - 1;
    let mut out: Vec<f64> = (0..=2 * n).map(|j| half[j.abs_diff(n)]).collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    out
}

/// Scales `weights` so the smallest significant magnitude is 1, rounds half
/// away from zero and puts any residual sum on `center`. Returns the scale
/// such that `weights ~= scale * integers`.
pub(crate) fn integer_scale(weights: &[f64], center: usize) -> (Vec<f64>, f64) {
    let max = weights.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let min = weights
        .iter()
        .map(|w| w.abs())
        .filter(|&a| a > INTEGER_FLOOR * max)
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return (vec![0.0; weights.len()], 1.0);
    }
    let factor = 1.0 / min;
    let mut ints: Vec<f64> = weights.iter().map(|w| (w * factor).round()).collect();
    let residual: f64 = ints.iter().sum();
    ints[center] -= residual;
    (ints, min)
}

impl DiscreteOperator1D {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight at offset `i` in `-N..=N`.
    pub fn weight(&self, i: isize) -> f64 {
        self.weights[(i + self.n as isize) as usize]
    }

    /// Sum of the weights at negative offsets.
    pub fn left_sum(&self) -> f64 {
        self.weights[..self.n].iter().sum()
    }

    /// Sum of the weights at positive offsets.
    pub fn right_sum(&self) -> f64 {
        self.weights[self.n + 1..].iter().sum()
    }

    /// Multiplier making the stencil exact on affine (first order) or
    /// quadratic (second order) sequences with unit spacing.
    ///
    /// Taken from the discrete moments: `1 / sum(-i w_i)` for first order and
    /// `2 / sum(i^2 w_i)` for second order.
    pub fn norm_constant(&self) -> f64 {
        let n = self.n as isize;
        match self.order {
            Order::Second => {
                let m2: f64 = (-n..=n).map(|i| (i * i) as f64 * self.weight(i)).sum();
                2.0 / m2
            }
            _ => {
                let m1: f64 = (-n..=n).map(|i| -(i as f64) * self.weight(i)).sum();
                1.0 / m1
            }
        }
    }

    /// Integer presentation; the residual of rounding is repaired at the center.
    pub fn to_integer_scale(&self) -> DiscreteOperator1D {
        let (weights, scale) = integer_scale(&self.weights, self.n);
        DiscreteOperator1D {
            mode: Mode::IntegerScaled,
            scale: scale * self.scale,
            weights,
            ..self.clone()
        }
    }
}

/// Applies a stencil to a 1D signal, optionally scaled by the norm constant
/// divided by `spacing^order`.
pub fn tgd_1d(
    signal: &SampledField,
    dop: &DiscreteOperator1D,
    boundary: Boundary,
    apply_norm_constant: bool,
) -> Result<SampledField> {
    if signal.dims() != 1 {
        return Err(TgdError::DimsMismatch { op: 1, field: signal.dims() });
    }
    if signal.values.is_empty() {
        return Err(TgdError::EmptySignal);
    }
    if boundary == Boundary::Valid && signal.values.len() < dop.len() {
        return Err(TgdError::SignalTooShort { len: signal.values.len(), needed: dop.len() });
    }
    let mut out = convolve(signal, dop, boundary)?;
    if apply_norm_constant {
        let h = signal.spacing[0];
        let k = dop.norm_constant()
            / match dop.order {
                Order::Second => h * h,
                _ => h,
            };
        out.values.iter_mut().for_each(|v| *v *= k);
    }
    Ok(out)
}

fn plain(order: Order, weights: Vec<f64>) -> DiscreteOperator1D {
    DiscreteOperator1D {
        order,
        n: weights.len() / 2,
        mode: Mode::FloatNormalized,
        scale: 1.0,
        provenance: Provenance::DirectSample,
        weights,
    }
}

/// Classical central difference `(x(n+1) - x(n-1)) / 2` or
/// `x(n+1) - 2 x(n) + x(n-1)`, replicate boundary.
pub fn baseline_central_difference(signal: &SampledField, order: Order) -> Result<SampledField> {
    if signal.values.len() < 3 {
        return Err(TgdError::SignalTooShort { len: signal.values.len(), needed: 3 });
    }
    let op = match order {
        Order::Second => plain(Order::Second, vec![1.0, -2.0, 1.0]),
        _ => plain(Order::First, vec![0.5, 0.0, -0.5]),
    };
    convolve(signal, &op, Boundary::Replicate)
}

/// Stencil of the Lanczos kernel `2t / W^2`, `W = N + 1/2`, sampled at the
/// integers. Its kernel fails C2; it serves as a counterexample.
pub fn baseline_ld_operator(n: usize) -> Result<DiscreteOperator1D> {
    if n < 1 {
        return Err(TgdError::DegenerateSize(n));
    }
    let side: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    Ok(from_side(Order::First, &side, Provenance::DirectSample))
}

/// Gaussian filter truncated at `ceil(3 sigma)` with renormalized weights,
/// followed by the first-order central difference. Replicate boundary.
pub fn baseline_smooth_then_diff(signal: &SampledField, sigma: f64) -> Result<SampledField> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(TgdError::InvalidParam(format!("sigma must be positive, got {sigma}")));
    }
    let smoothed = convolve(signal, &plain(Order::Smooth, gaussian_filter(sigma)), Boundary::Replicate)?;
    baseline_central_difference(&smoothed, Order::First)
}

/// Normalized Gaussian taps on `-ceil(3 sigma)..=ceil(3 sigma)`.
pub fn gaussian_filter(sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil().max(1.0) as isize;
    let mut g: Vec<f64> = (-r..=r).map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = g.iter().sum();
    g.iter_mut().for_each(|v| *v /= total);
    g
}
