//! Rotation weights `w~(theta)` for the rotational construction.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TgdError};
use crate::quad::{simpson, PANELS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum RotationFamily {
    /// `cos(theta)`.
    Cosine,
    /// Uniform over all acute directions.
    Constant,
    /// Samples on a uniform grid over `[0, pi/2]`, linearly interpolated and
    /// extended evenly to negative angles.
    Table { values: Vec<f64> },
}

/// Even, non-negative, non-increasing weight on `(-pi/2, pi/2)` with unit integral.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationWeight {
    pub family: RotationFamily,
    pub normalization: f64,
}

impl RotationWeight {
    pub fn new(family: RotationFamily) -> Result<Self> {
        if let RotationFamily::Table { values } = &family {
            if values.len() < 2 {
                return Err(TgdError::InvalidParam("rotation table needs at least two values".into()));
            }
            if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(TgdError::InvalidParam("rotation table values must be finite and non-negative".into()));
            }
            if values.windows(2).any(|p| p[1] > p[0]) {
                return Err(TgdError::InvalidParam("rotation table must be non-increasing".into()));
            }
            if values[0] <= 0.0 {
                return Err(TgdError::InvalidParam("rotation table must be positive at 0".into()));
            }
        }
        let mut rw = RotationWeight { family, normalization: 1.0 };
        rw.normalization = match rw.family {
            RotationFamily::Cosine => 0.5,
            RotationFamily::Constant => 1.0 / PI,
            RotationFamily::Table { .. } => 1.0 / (2.0 * simpson(|t| rw.raw(t), 0.0, FRAC_PI_2, PANELS)),
        };
        Ok(rw)
    }

    pub fn cosine() -> Self {
        RotationWeight { family: RotationFamily::Cosine, normalization: 0.5 }
    }

    pub fn constant() -> Self {
        RotationWeight { family: RotationFamily::Constant, normalization: 1.0 / PI }
    }

    fn raw(&self, theta: f64) -> f64 {
        let t = theta.abs();
        match &self.family {
            RotationFamily::Cosine => t.cos().max(0.0),
            RotationFamily::Constant => 1.0,
            RotationFamily::Table { values } => {
                let x = (t / FRAC_PI_2 * (values.len() - 1) as f64).clamp(0.0, (values.len() - 1) as f64);
                let j = (x.floor() as usize).min(values.len() - 2);
                values[j] + (x - j as f64) * (values[j + 1] - values[j])
            }
        }
    }

    /// `w~(theta)`, zero for `|theta| > pi/2`.
    pub fn eval(&self, theta: f64) -> f64 {
        if theta.abs() > FRAC_PI_2 {
            0.0
        } else {
            self.normalization * self.raw(theta)
        }
    }

    /// Mean of `cos^p` over acute directions weighted by `w~`.
    ///
    /// In 2D directions are angles in `(-pi/2, pi/2)`; in 3D they are polar
    /// angles with the `sin(theta)` surface element. For the cosine weight
    /// `p = 1` gives `pi/4` in 2D and `2/3` in 3D.
    pub fn gain(&self, p: i32, dims: usize) -> f64 {
        let jac = |t: f64| if dims == 3 { t.sin() } else { 1.0 };
        let num = simpson(|t| t.cos().powi(p) * self.raw(t) * jac(t), 0.0, FRAC_PI_2, PANELS);
        let den = simpson(|t| self.raw(t) * jac(t), 0.0, FRAC_PI_2, PANELS);
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_integral() {
        for rw in [
            RotationWeight::cosine(),
            RotationWeight::constant(),
            RotationWeight::new(RotationFamily::Table { values: vec![1.0, 0.8, 0.3, 0.0] }).unwrap(),
        ] {
            let total = simpson(|t| rw.eval(t), -FRAC_PI_2, FRAC_PI_2, PANELS);
            assert!((total - 1.0).abs() < 1e-9, "{rw:?}");
        }
    }

    #[test]
    fn known_gains() {
        let c = RotationWeight::cosine();
        assert!((c.gain(1, 2) - PI / 4.0).abs() < 1e-12);
        assert!((c.gain(1, 3) - 2.0 / 3.0).abs() < 1e-12);
        let k = RotationWeight::constant();
        assert!((k.gain(1, 2) - 2.0 / PI).abs() < 1e-12);
        assert!((k.gain(1, 3) - 0.5).abs() < 1e-12);
        assert!((k.gain(2, 2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_increasing_table() {
        assert!(RotationWeight::new(RotationFamily::Table { values: vec![0.5, 1.0] }).is_err());
        assert!(RotationWeight::new(RotationFamily::Table { values: vec![1.0, -0.1] }).is_err());
    }

    #[test]
    fn even_and_zero_outside() {
        let c = RotationWeight::cosine();
        assert_eq!(c.eval(0.3), c.eval(-0.3));
        assert_eq!(c.eval(2.0), 0.0);
        assert_eq!(c.eval(0.0), 0.5);
    }
}
