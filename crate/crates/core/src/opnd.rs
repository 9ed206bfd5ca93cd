//! Directional, partial and LoT operators in 2D and 3D.
//!
//! Weights are dense row-major arrays of shape `(2N + 1)^m` indexed by
//! offsets in `[-N, N]` per array axis (see [`SampledField`] for the axis
//! order). Directions and the `axis` argument use Cartesian order `x, y, z`;
//! Cartesian coordinate `c` lives on array axis `m - 1 - c`, and `y` grows
//! downward with the row index.
//!
//! [`SampledField`]: crate::field::SampledField

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TgdError};
use crate::kernel::KernelSpec;
use crate::op1d::{
    build_continuous, discretize, discretize_by_sampling, integer_scale, kernel_for_size, smooth_samples,
    smooth_weights, Mode, Order, Provenance,
};
use crate::rotation::RotationWeight;

/// Largest `N` accepted for 3D operators.
pub const MAX_N_3D: usize = 12;
/// Lattice points with `|cos| <= ORTHO_EPS` to the direction get weight 0.
pub const ORTHO_EPS: f64 = 1e-12;
/// Rotated coordinates within this distance of 0 lie on the zero line.
const LINE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdKind {
    DirectionalFirst,
    DirectionalSecond,
    PartialFirst,
    PartialSecond,
    Lot,
}

impl NdKind {
    pub fn order(self) -> Order {
        match self {
            NdKind::DirectionalFirst | NdKind::PartialFirst => Order::First,
            _ => Order::Second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Rotational,
    Orthogonal,
}

/// Base constructor for [`rotate_operator`].
#[derive(Debug, Clone, PartialEq)]
pub enum RotateSpec {
    Rotational(RotationWeight),
    Orthogonal,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteOperatorND {
    pub dims: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub kind: NdKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    pub construction: Construction,
    pub mode: Mode,
    pub scale: f64,
    pub provenance: Provenance,
    /// Response of the normalized operator to a unit slope along `direction`,
    /// relative to the exact derivative; below 1 for rotational operators.
    #[serde(default = "one")]
    pub gain: f64,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separable_factors: Option<Vec<Vec<f64>>>,
}

/// Offsets of a `(2N + 1)^m` array in row-major order, in array-axis order.
pub fn offsets(dims: usize, n: usize) -> impl Iterator<Item = Vec<isize>> {
    let side = 2 * n + 1;
    (0..side.pow(dims as u32)).map(move |flat| {
        let mut rem = flat;
        let mut idx = vec![0isize; dims];
        for a in (0..dims).rev() {
            idx[a] = (rem % side) as isize - n as isize;
            rem /= side;
        }
        idx
    })
}

/// Cartesian `(x, y, z)` coordinates of an array-order offset.
fn cartesian(off: &[isize]) -> Vec<f64> {
    off.iter().rev().map(|&v| v as f64).collect()
}

fn check_shape(dims: usize, n: usize, min_n: usize) -> Result<()> {
    if !(dims == 2 || dims == 3) {
        return Err(TgdError::UnsupportedDims(dims));
    }
    if n < min_n {
        return Err(TgdError::DegenerateSize(n));
    }
    if dims == 3 && n > MAX_N_3D {
        return Err(TgdError::InvalidParam(format!("3D operators need N <= {MAX_N_3D}, got {n}")));
    }
    Ok(())
}

fn unit(direction: &[f64], dims: usize) -> Result<Vec<f64>> {
    if direction.len() != dims {
        return Err(TgdError::InvalidParam(format!(
            "direction has {} components, expected {dims}",
            direction.len()
        )));
    }
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(TgdError::InvalidParam("direction must be a non-zero finite vector".into()));
    }
    Ok(direction.iter().map(|v| v / norm).collect())
}

/// `(cos, sin)` with exact values at multiples of `pi/4`.
fn cos_sin(theta: f64) -> (f64, f64) {
    let k = (theta / FRAC_PI_4).round();
    if (theta - k * FRAC_PI_4).abs() <= 1e-12 {
        let table = [
            (1.0, 0.0),
            (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            (0.0, 1.0),
            (-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            (-1.0, 0.0),
            (-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
            (0.0, -1.0),
            (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        ];
        return table[(k as i64).rem_euclid(8) as usize];
    }
    (theta.cos(), theta.sin())
}

/// Scales so the positive weights sum to 1.
fn normalize_first(weights: &mut [f64]) {
    let pos: f64 = weights.iter().filter(|w| **w > 0.0).sum();
    weights.iter_mut().for_each(|w| *w /= pos);
}

/// Scales off-center weights to sum 2 and sets the center to -2.
fn normalize_second(weights: &mut [f64], center: usize) {
    weights[center] = 0.0;
    let off: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= 2.0 / off);
    weights[center] = -2.0;
}

fn require_kernel(kernel: &KernelSpec, n: usize, order: Order) -> Result<KernelSpec> {
    let k = kernel_for_size(kernel, n)?;
    build_continuous(&k, order)?;
    Ok(k)
}

/// Rotational construction sampled at the integer lattice inside radius `W = N + 1/2`.
///
/// First order: `-sign(c) w(r) w~(acos|c|)` with `c` the cosine between the
/// offset and `direction`; second order uses `w(r) w~(acos|c|)` on both sides
/// and a center fixed by sum zero.
pub fn rotational_operator(
    kernel: &KernelSpec,
    rw: &RotationWeight,
    direction: &[f64],
    order: Order,
    dims: usize,
    n: usize,
) -> Result<DiscreteOperatorND> {
    check_shape(dims, n, 3)?;
    if order == Order::Smooth {
        return Err(TgdError::InvalidParam("rotational operators are first or second order".into()));
    }
    let v = unit(direction, dims)?;
    let k = require_kernel(kernel, n, order)?;
    let w = k.w;
    let mut weights: Vec<f64> = offsets(dims, n)
        .map(|off| {
            let t = cartesian(&off);
            let r = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r == 0.0 || r > w {
                return 0.0;
            }
            let c = t.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / r;
            if c.abs() <= ORTHO_EPS {
                return 0.0;
            }
            let val = k.eval(r) * rw.eval(c.abs().min(1.0).acos());
            match order {
                Order::First => -c.signum() * val,
                _ => val,
            }
        })
        .collect();
    let center = weights.len() / 2;
    let kind = match order {
        Order::First => {
            normalize_first(&mut weights);
            NdKind::DirectionalFirst
        }
        _ => {
            normalize_second(&mut weights, center);
            NdKind::DirectionalSecond
        }
    };
    Ok(DiscreteOperatorND {
        dims,
        n,
        kind,
        direction: Some(v),
        construction: Construction::Rotational,
        mode: Mode::FloatNormalized,
        scale: 1.0,
        provenance: Provenance::DirectSample,
        gain: rw.gain(if order == Order::First { 1 } else { 2 }, dims),
        weights,
        separable_factors: None,
    })
}

/// Isotropic second-order operator: `w(r) / pi` off center inside radius `W`,
/// center fixed by sum zero.
pub fn lot_operator(kernel: &KernelSpec, dims: usize, n: usize) -> Result<DiscreteOperatorND> {
    check_shape(dims, n, 3)?;
    let k = require_kernel(kernel, n, Order::Second)?;
    let mut weights: Vec<f64> = offsets(dims, n)
        .map(|off| {
            let r = cartesian(&off).iter().map(|x| x * x).sum::<f64>().sqrt();
            if r == 0.0 || r > k.w {
                0.0
            } else {
                k.eval(r) / PI
            }
        })
        .collect();
    let center = weights.len() / 2;
    normalize_second(&mut weights, center);
    Ok(DiscreteOperatorND {
        dims,
        n,
        kind: NdKind::Lot,
        direction: None,
        construction: Construction::Rotational,
        mode: Mode::FloatNormalized,
        scale: 1.0,
        provenance: Provenance::DirectSample,
        gain: 1.0,
        weights,
        separable_factors: None,
    })
}

fn outer(factors: &[Vec<f64>], n: usize) -> Vec<f64> {
    let dims = factors.len();
    offsets(dims, n)
        .map(|off| off.iter().zip(factors).map(|(&i, f)| f[(i + n as isize) as usize]).product())
        .collect()
}

fn orthogonal_from_factors(
    dims: usize,
    n: usize,
    axis: usize,
    order: Order,
    factors: Vec<Vec<f64>>,
    provenance: Provenance,
) -> DiscreteOperatorND {
    let mut direction = vec![0.0; dims];
    direction[axis] = 1.0;
    DiscreteOperatorND {
        dims,
        n,
        kind: if order == Order::First { NdKind::PartialFirst } else { NdKind::PartialSecond },
        direction: Some(direction),
        construction: Construction::Orthogonal,
        mode: Mode::FloatNormalized,
        scale: 1.0,
        provenance,
        gain: 1.0,
        weights: outer(&factors, n),
        separable_factors: Some(factors),
    }
}

fn orthogonal_impl(
    kernel: &KernelSpec,
    axis: usize,
    order: Order,
    dims: usize,
    n: usize,
    sampled: bool,
) -> Result<DiscreteOperatorND> {
    check_shape(dims, n, 2)?;
    if axis >= dims {
        return Err(TgdError::InvalidParam(format!("axis {axis} out of range for {dims} dims")));
    }
    if order == Order::Smooth {
        return Err(TgdError::InvalidParam("orthogonal operators are first or second order".into()));
    }
    let k = require_kernel(kernel, n, Order::Smooth)?;
    let (diff, smooth, provenance) = if sampled {
        (discretize_by_sampling(&k, n, order)?.weights, smooth_samples(&k, n)?, Provenance::DirectSample)
    } else {
        let op = build_continuous(&k, order)?;
        (discretize(&op, n)?.weights, smooth_weights(&k, n)?, Provenance::IntervalIntegral)
    };
    let diff_axis = dims - 1 - axis;
    let factors: Vec<Vec<f64>> = (0..dims)
        .map(|a| if a == diff_axis { diff.clone() } else { smooth.clone() })
        .collect();
    Ok(orthogonal_from_factors(dims, n, axis, order, factors, provenance))
}

/// Partial operator along Cartesian `axis`: the 1D interval-integral stencil
/// on that axis and the unit-sum smooth operator `S` on every other axis.
pub fn orthogonal_operator(kernel: &KernelSpec, axis: usize, order: Order, dims: usize, n: usize) -> Result<DiscreteOperatorND> {
    orthogonal_impl(kernel, axis, order, dims, n, false)
}

/// As [`orthogonal_operator`] with directly sampled factors (`N >= 3`).
pub fn orthogonal_operator_sampled(
    kernel: &KernelSpec,
    axis: usize,
    order: Order,
    dims: usize,
    n: usize,
) -> Result<DiscreteOperatorND> {
    orthogonal_impl(kernel, axis, order, dims, n, true)
}

/// 2D operator for direction `theta`, evaluated at rotated coordinates
/// `x' = x cos + y sin`, `y' = -x sin + y cos` before sampling.
///
/// With [`RotateSpec::Orthogonal`] the base is the sampled `T(x') S(y')`
/// (second order: `w(|x'|) S(y')`, with the zero line `x' = 0` set by sum
/// zero) on the rotated square `|x'|, |y'| <= W`. Separable factors are kept
/// only at multiples of `pi/2`, where the result is a lattice rotation of
/// [`orthogonal_operator_sampled`].
pub fn rotate_operator(kernel: &KernelSpec, spec: &RotateSpec, theta: f64, order: Order, n: usize) -> Result<DiscreteOperatorND> {
    let (c, s) = cos_sin(theta);
    match spec {
        RotateSpec::Rotational(rw) => rotational_operator(kernel, rw, &[c, s], order, 2, n),
        RotateSpec::Orthogonal => {
            check_shape(2, n, 3)?;
            let quarter = (theta / FRAC_PI_2).round();
            let mut op = if (theta - quarter * FRAC_PI_2).abs() <= 1e-12 {
                orthogonal_operator_sampled(kernel, 0, order, 2, n)?.rotate_lattice(theta)?
            } else {
                rotated_orthogonal(kernel, c, s, order, n)?
            };
            op.kind = if order == Order::First { NdKind::DirectionalFirst } else { NdKind::DirectionalSecond };
            op.direction = Some(vec![c, s]);
            Ok(op)
        }
    }
}

fn rotated_orthogonal(kernel: &KernelSpec, c: f64, s: f64, order: Order, n: usize) -> Result<DiscreteOperatorND> {
    if order == Order::Smooth {
        return Err(TgdError::InvalidParam("rotated operators are first or second order".into()));
    }
    let k = require_kernel(kernel, n, Order::Smooth)?;
    let w = k.w;
    let mut line = vec![false; (2 * n + 1).pow(2)];
    let mut weights: Vec<f64> = offsets(2, n)
        .enumerate()
        .map(|(flat, off)| {
            let (x, y) = (off[1] as f64, off[0] as f64);
            let xp = x * c + y * s;
            let yp = -x * s + y * c;
            if xp.abs() > w || yp.abs() > w {
                return 0.0;
            }
            let sm = k.smooth_raw(yp);
            if xp.abs() <= LINE_EPS {
                line[flat] = order == Order::Second;
                return if order == Order::Second { sm } else { 0.0 };
            }
            match order {
                Order::First => -xp.signum() * k.eval(xp.abs()) * sm,
                _ => k.eval(xp.abs()) * sm,
            }
        })
        .collect();
    if order == Order::First {
        normalize_first(&mut weights);
    } else {
        let off: f64 = weights.iter().zip(&line).filter(|(_, l)| !**l).map(|(w, _)| w).sum();
        let on: f64 = weights.iter().zip(&line).filter(|(_, l)| **l).map(|(w, _)| w).sum();
        for (wt, l) in weights.iter_mut().zip(&line) {
            *wt *= 2.0 / off;
            if *l {
                *wt *= -off / on;
            }
        }
    }
    Ok(DiscreteOperatorND {
        dims: 2,
        n,
        kind: NdKind::DirectionalFirst,
        direction: None,
        construction: Construction::Orthogonal,
        mode: Mode::FloatNormalized,
        scale: 1.0,
        provenance: Provenance::DirectSample,
        gain: 1.0,
        weights,
        separable_factors: None,
    })
}

impl DiscreteOperatorND {
    /// Raw stencil without construction metadata.
    pub fn from_weights(dims: usize, n: usize, weights: Vec<f64>) -> Self {
        DiscreteOperatorND {
            dims,
            n,
            kind: NdKind::DirectionalFirst,
            direction: None,
            construction: Construction::Rotational,
            mode: Mode::FloatNormalized,
            scale: 1.0,
            provenance: Provenance::DirectSample,
            gain: 1.0,
            weights,
            separable_factors: None,
        }
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    /// Flat index of an array-order offset.
    pub fn index(&self, off: &[isize]) -> usize {
        let side = self.side() as isize;
        off.iter().fold(0isize, |acc, &i| acc * side + i + self.n as isize) as usize
    }

    pub fn weight(&self, off: &[isize]) -> f64 {
        self.weights[self.index(off)]
    }

    pub fn center(&self) -> usize {
        self.weights.len() / 2
    }

    /// Multiplier giving the derivative of a linear (first order) or
    /// quadratic (second order) field at unit spacing.
    ///
    /// First order: `gain / (v . M)` with `M = -sum t op(t)`, so a unit slope
    /// along `v` yields `gain`. Second order: `2 gain / sum (v . t)^2 op(t)`.
    /// LoT: `2m / sum |t|^2 op(t)`, so the output approximates the Laplacian.
    pub fn norm_constant(&self) -> f64 {
        let moments = |f: &dyn Fn(&[f64]) -> f64| -> f64 {
            offsets(self.dims, self.n)
                .zip(&self.weights)
                .map(|(off, w)| f(&cartesian(&off)) * w)
                .sum()
        };
        let v = self.direction.clone().unwrap_or_else(|| vec![0.0; self.dims]);
        let dot = |t: &[f64]| t.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
        match self.kind {
            NdKind::DirectionalFirst | NdKind::PartialFirst => self.gain / moments(&|t| -dot(t)),
            NdKind::DirectionalSecond | NdKind::PartialSecond => 2.0 * self.gain / moments(&|t| dot(t).powi(2)),
            NdKind::Lot => 2.0 * self.dims as f64 / moments(&|t| t.iter().map(|x| x * x).sum()),
        }
    }

    /// Integer presentation with the rounding residual put on the origin.
    /// Separable factors are dropped because the rounded array is no longer
    /// their exact outer product.
    pub fn to_integer_scale(&self) -> DiscreteOperatorND {
        let (weights, scale) = integer_scale(&self.weights, self.center());
        DiscreteOperatorND {
            mode: Mode::IntegerScaled,
            scale: scale * self.scale,
            weights,
            separable_factors: None,
            ..self.clone()
        }
    }

    /// Exact lattice rotation of a 2D operator by a multiple of `pi/2`:
    /// the result at `(x, y)` is this operator at `(x', y')`.
    pub fn rotate_lattice(&self, theta: f64) -> Result<DiscreteOperatorND> {
        if self.dims != 2 {
            return Err(TgdError::UnsupportedDims(self.dims));
        }
        let q = (theta / FRAC_PI_2).round();
        if (theta - q * FRAC_PI_2).abs() > 1e-9 {
            return Err(TgdError::InvalidParam(format!("{theta} is not a multiple of pi/2")));
        }
        let mut out = self.clone();
        for _ in 0..(q as i64).rem_euclid(4) {
            out = out.quarter_turn();
        }
        Ok(out)
    }

    /// Rotation by `pi/2`: new `(x, y)` takes old `(y, -x)`.
    fn quarter_turn(&self) -> DiscreteOperatorND {
        let weights = offsets(2, self.n)
            .map(|off| {
                let (x, y) = (off[1], off[0]);
                self.weight(&[-x, y])
            })
            .collect();
        let direction = self.direction.as_ref().map(|v| vec![-v[1], v[0]]);
        // factors are stored in array order [y, x]
        let separable_factors = self.separable_factors.as_ref().map(|f| {
            let mut fx = f[0].clone();
            fx.reverse();
            vec![f[1].clone(), fx]
        });
        DiscreteOperatorND { weights, direction, separable_factors, ..self.clone() }
    }
}
