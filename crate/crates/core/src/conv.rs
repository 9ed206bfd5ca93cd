//! Direct convolution of sampled fields with discrete operators.
//!
//! `out(n) = sum_i op(i) * x(n - i)` over all offsets `i` in `[-N, N]^m`.
//! Each output element sums its terms in a fixed row-major offset order, so
//! results do not depend on how rayon splits the work.

use rayon::prelude::*;

use crate::error::{Result, TgdError};
use crate::field::{strides, Boundary, SampledField};
use crate::op1d::DiscreteOperator1D;
use crate::opnd::DiscreteOperatorND;

/// Either kind of discrete operator.
#[derive(Debug, Clone, Copy)]
pub enum OperatorRef<'a> {
    OneD(&'a DiscreteOperator1D),
    Nd(&'a DiscreteOperatorND),
}

impl<'a> From<&'a DiscreteOperator1D> for OperatorRef<'a> {
    fn from(op: &'a DiscreteOperator1D) -> Self {
        OperatorRef::OneD(op)
    }
}

impl<'a> From<&'a DiscreteOperatorND> for OperatorRef<'a> {
    fn from(op: &'a DiscreteOperatorND) -> Self {
        OperatorRef::Nd(op)
    }
}

impl OperatorRef<'_> {
    pub fn dims(&self) -> usize {
        match self {
            OperatorRef::OneD(_) => 1,
            OperatorRef::Nd(op) => op.dims,
        }
    }

    pub fn radius(&self) -> usize {
        match self {
            OperatorRef::OneD(op) => op.n,
            OperatorRef::Nd(op) => op.n,
        }
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            OperatorRef::OneD(op) => &op.weights,
            OperatorRef::Nd(op) => &op.weights,
        }
    }
}

/// Output shape, or `FieldTooSmall` in valid mode.
fn output_shape(shape: &[usize], n: usize, boundary: Boundary) -> Result<Vec<usize>> {
    if boundary != Boundary::Valid {
        return Ok(shape.to_vec());
    }
    shape
        .iter()
        .enumerate()
        .map(|(axis, &len)| {
            if len < 2 * n + 1 {
                Err(TgdError::FieldTooSmall { axis, len, needed: 2 * n + 1 })
            } else {
                Ok(len - 2 * n)
            }
        })
        .collect()
}

/// Field padded by `n` on every side of every axis; zero padding marks
/// out-of-range samples with `0.0`.
fn pad(field: &SampledField, n: usize, boundary: Boundary) -> (Vec<usize>, Vec<f64>) {
    if boundary == Boundary::Valid || n == 0 {
        return (field.shape.clone(), field.values.clone());
    }
    let shape: Vec<usize> = field.shape.iter().map(|&l| l + 2 * n).collect();
    let maps: Vec<Vec<Option<usize>>> = field
        .shape
        .iter()
        .map(|&len| (0..len + 2 * n).map(|p| boundary.source(p as isize - n as isize, len)).collect())
        .collect();
    let src_strides = field.strides();
    let padded = SampledField::from_fn(&shape, |idx| {
        let mut flat = 0;
        for (a, &p) in idx.iter().enumerate() {
            match maps[a][p] {
                Some(s) => flat += s * src_strides[a],
                None => return 0.0,
            }
        }
        field.values[flat]
    });
    (shape, padded.values)
}

/// Dense convolution of `field` with a 1D or N-D operator.
pub fn convolve<'a>(field: &SampledField, op: impl Into<OperatorRef<'a>>, boundary: Boundary) -> Result<SampledField> {
    let op = op.into();
    let m = field.dims();
    if op.dims() != m {
        return Err(TgdError::DimsMismatch { op: op.dims(), field: m });
    }
    let n = op.radius();
    let out_shape = output_shape(&field.shape, n, boundary)?;
    let (pshape, padded) = pad(field, n, boundary);
    let pstrides = strides(&pshape);
    let side = 2 * n + 1;

    // Taps in row-major offset order: out(o) += w(i) * P(o + N - i)
    let mut taps: Vec<(usize, f64)> = Vec::new();
    for (flat, &w) in op.weights().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let mut rem = flat;
        let mut off = 0usize;
        for a in (0..m).rev() {
            let k = rem % side;
            rem /= side;
            // k = i + N, so N - i = 2N - k
            off += (2 * n - k) * pstrides[a];
        }
        taps.push((off, w));
    }

    let out_strides = strides(&out_shape);
    let row = *out_shape.last().unwrap_or(&1);
    let total: usize = out_shape.iter().product();
    let mut values = vec![0.0; total];
    if row == 0 {
        return Ok(SampledField { shape: out_shape, spacing: field.spacing.clone(), values });
    }
    values.par_chunks_mut(row).enumerate().for_each(|(r, chunk)| {
        let mut base = 0;
        let mut rem = r * row;
        for a in 0..m {
            let i = rem / out_strides[a];
            rem %= out_strides[a];
            base += i * pstrides[a];
        }
        for (j, out) in chunk.iter_mut().enumerate() {
            let b = base + j;
            let mut acc = 0.0;
            for &(off, w) in &taps {
                acc += w * padded[b + off];
            }
            *out = acc;
        }
    });
    Ok(SampledField { shape: out_shape, spacing: field.spacing.clone(), values })
}

/// 1D convolution with `taps` (length `2N + 1`) along one axis.
pub fn convolve_axis(field: &SampledField, axis: usize, taps: &[f64], boundary: Boundary) -> Result<SampledField> {
    let m = field.dims();
    if axis >= m {
        return Err(TgdError::InvalidParam(format!("axis {axis} out of range for {m} dims")));
    }
    let n = taps.len() / 2;
    let len = field.shape[axis];
    let mut out_shape = field.shape.clone();
    if boundary == Boundary::Valid {
        if len < 2 * n + 1 {
            return Err(TgdError::FieldTooSmall { axis, len, needed: 2 * n + 1 });
        }
        out_shape[axis] = len - 2 * n;
    }
    let src_strides = field.strides();
    let out_strides = strides(&out_shape);
    let stride = src_strides[axis];
    let offset = if boundary == Boundary::Valid { n as isize } else { 0 };
    let total: usize = out_shape.iter().product();
    let row = *out_shape.last().unwrap_or(&1);
    let mut values = vec![0.0; total];
    if row == 0 {
        return Ok(SampledField { shape: out_shape, spacing: field.spacing.clone(), values });
    }
    values.par_chunks_mut(row).enumerate().for_each(|(r, chunk)| {
        let mut idx = vec![0usize; m];
        let mut rem = r * row;
        for a in 0..m {
            idx[a] = rem / out_strides[a];
            rem %= out_strides[a];
        }
        for (j, out) in chunk.iter_mut().enumerate() {
            idx[m - 1] = j;
            let mut base = 0;
            for a in 0..m {
                if a != axis {
                    base += idx[a] * src_strides[a];
                }
            }
            let centre = idx[axis] as isize + offset;
            let mut acc = 0.0;
            for (k, &w) in taps.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let p = centre - (k as isize - n as isize);
                if let Some(s) = boundary.source(p, len) {
                    acc += w * field.values[base + s * stride];
                }
            }
            *out = acc;
        }
    });
    Ok(SampledField { shape: out_shape, spacing: field.spacing.clone(), values })
}

/// Sequential per-axis passes with the operator's separable factors.
pub fn convolve_separable(field: &SampledField, op: &DiscreteOperatorND, boundary: Boundary) -> Result<SampledField> {
    let factors = op.separable_factors.as_ref().ok_or(TgdError::NotSeparable)?;
    if op.dims != field.dims() {
        return Err(TgdError::DimsMismatch { op: op.dims, field: field.dims() });
    }
    output_shape(&field.shape, op.n, boundary)?;
    let mut out = field.clone();
    for (axis, taps) in factors.iter().enumerate() {
        out = convolve_axis(&out, axis, taps, boundary)?;
    }
    Ok(out)
}
