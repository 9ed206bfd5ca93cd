use serde::{Deserialize, Serialize};

use crate::error::{Result, TgdError};

/// Dense row-major samples on a uniform grid.
///
/// Axis 0 is the slowest. In 2D axis 0 is `y` (rows, increasing downward)
/// and axis 1 is `x`; in 3D the axes are `z, y, x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledField {
    pub shape: Vec<usize>,
    pub spacing: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.len() > 3 {
            return Err(TgdError::UnsupportedDims(shape.len()));
        }
        let len: usize = shape.iter().product();
        if len != values.len() {
            return Err(TgdError::InvalidField(format!(
                "shape {shape:?} needs {len} values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(TgdError::InvalidField(format!("non-finite value at index {i}")));
        }
        let spacing = vec![1.0; shape.len()];
        Ok(SampledField { shape, spacing, values })
    }

    /// 1D field with unit spacing.
    pub fn new_1d(values: Vec<f64>) -> Self {
        SampledField { shape: vec![values.len()], spacing: vec![1.0], values }
    }

    /// Field of `shape` filled from a function of the multi-index.
    pub fn from_fn<F: Fn(&[usize]) -> f64>(shape: &[usize], f: F) -> Self {
        let len: usize = shape.iter().product();
        let mut idx = vec![0usize; shape.len()];
        let mut values = Vec::with_capacity(len);
        for flat in 0..len {
            let mut rem = flat;
            for a in (0..shape.len()).rev() {
                idx[a] = rem % shape[a];
                rem /= shape[a];
            }
            values.push(f(&idx));
        }
        SampledField { shape: shape.to_vec(), spacing: vec![1.0; shape.len()], values }
    }

    pub fn with_spacing(mut self, spacing: Vec<f64>) -> Result<Self> {
        if spacing.len() != self.shape.len() || spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(TgdError::InvalidField(format!("invalid spacing {spacing:?}")));
        }
        self.spacing = spacing;
        Ok(self)
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.shape)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        let s = self.strides();
        self.values[idx.iter().zip(&s).map(|(i, s)| i * s).sum::<usize>()]
    }
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; shape.len()];
    for a in (0..shape.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * shape[a + 1];
    }
    s
}

/// How samples outside the field are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Nearest edge sample.
    #[default]
    Replicate,
    /// Mirror about the edge sample without repeating it: `x[-1] = x[1]`.
    Reflect,
    /// Zeros.
    Zero,
    /// No padding; output shrinks by `2N` per axis.
    Valid,
}

impl std::str::FromStr for Boundary {
    type Err = TgdError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "replicate" => Boundary::Replicate,
            "reflect" => Boundary::Reflect,
            "zero" => Boundary::Zero,
            "valid" => Boundary::Valid,
            other => return Err(TgdError::InvalidParam(format!("unknown boundary '{other}'"))),
        })
    }
}

impl Boundary {
    /// Source index for position `p` on an axis of length `len`, or `None` for zero.
    pub fn source(self, p: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        if (0..n).contains(&p) {
            return Some(p as usize);
        }
        match self {
            Boundary::Replicate | Boundary::Valid => Some(p.clamp(0, n - 1) as usize),
            Boundary::Zero => None,
            Boundary::Reflect => {
                if n == 1 {
                    return Some(0);
                }
                let period = 2 * (n - 1);
                let q = p.rem_euclid(period);
                Some(if q < n { q } else { period - q } as usize)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_does_not_repeat_edge() {
        let b = Boundary::Reflect;
        assert_eq!(b.source(-1, 5), Some(1));
        assert_eq!(b.source(-2, 5), Some(2));
        assert_eq!(b.source(5, 5), Some(3));
        assert_eq!(b.source(6, 5), Some(2));
        assert_eq!(b.source(-9, 5), Some(1));
        assert_eq!(b.source(3, 1), Some(0));
    }

    #[test]
    fn replicate_and_zero() {
        assert_eq!(Boundary::Replicate.source(-3, 4), Some(0));
        assert_eq!(Boundary::Replicate.source(7, 4), Some(3));
        assert_eq!(Boundary::Zero.source(-1, 4), None);
        assert_eq!(Boundary::Zero.source(2, 4), Some(2));
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(SampledField::new(vec![2, 3], vec![0.0; 5]).is_err());
        assert!(SampledField::new(vec![2], vec![0.0, f64::NAN]).is_err());
        assert!(SampledField::new(vec![1, 1, 1, 1], vec![0.0]).is_err());
    }

    #[test]
    fn from_fn_is_row_major() {
        let f = SampledField::from_fn(&[2, 3], |i| (10 * i[0] + i[1]) as f64);
        assert_eq!(f.values, vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        assert_eq!(f.get(&[1, 2]), 12.0);
        assert_eq!(f.strides(), vec![3, 1]);
    }
}
