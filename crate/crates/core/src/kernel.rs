//! Kernel functions `w(t)` on `(0, W]`.
//!
//! A kernel is normalized to unit integral and checked against three
//! constraints: unit integral with positivity (C1), monotone decay (C2) and
//! monotone convexity of the induced smooth operator `S(x) = int_|x|^W w` (C3).

use serde::{Deserialize, Serialize};

use crate::error::{Result, TgdError};
use crate::quad::{simpson, PANELS};

/// Relative decay required of `S` and `S'` at the support edge.
pub const C3_EDGE_DECAY: f64 = 0.05;
/// Tolerance on the unit integral.
pub const C1_TOL: f64 = 1e-6;
/// Relative slack when comparing consecutive grid samples.
const GRID_SLACK: f64 = 1e-12;

/// Kernel family with resolved parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `exp(-t^2 / 2 delta^2)`.
    Gaussian { delta: f64 },
    /// `-k t - c`.
    Linear { k: f64, c: f64 },
    /// `exp(-t / delta^2)`.
    Exponential { delta: f64 },
    /// `(1 - t^2 / tau^2)^n`.
    Landau { tau: f64, n: f64 },
    /// Weibull density `(k / lambda) (t / lambda)^(k - 1) exp(-(t / lambda)^k)`.
    Weibull { k: f64, lambda: f64 },
    /// Samples on the uniform grid `t_j = W j / (len - 1)`, linearly interpolated.
    Table { values: Vec<f64> },
    /// `t^k`, the Lanczos kernel for `k = 1`. Violates C2 and ships only as a
    /// counterexample.
    Lanczos { k: f64 },
}

/// Family names accepted in kernel definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Gaussian,
    Linear,
    Exponential,
    Landau,
    Weibull,
    Table,
    Lanczos,
}

impl FamilyName {
    pub const SHIPPED: [FamilyName; 6] = [
        FamilyName::Gaussian,
        FamilyName::Linear,
        FamilyName::Exponential,
        FamilyName::Landau,
        FamilyName::Weibull,
        FamilyName::Table,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Gaussian => "gaussian",
            FamilyName::Linear => "linear",
            FamilyName::Exponential => "exponential",
            FamilyName::Landau => "landau",
            FamilyName::Weibull => "weibull",
            FamilyName::Table => "table",
            FamilyName::Lanczos => "lanczos",
        }
    }
}

impl std::str::FromStr for FamilyName {
    type Err = TgdError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "gaussian" => FamilyName::Gaussian,
            "linear" => FamilyName::Linear,
            "exponential" => FamilyName::Exponential,
            "landau" => FamilyName::Landau,
            "weibull" => FamilyName::Weibull,
            "table" => FamilyName::Table,
            "lanczos" | "ld" => FamilyName::Lanczos,
            other => return Err(TgdError::InvalidParam(format!("unknown kernel family '{other}'"))),
        })
    }
}

/// Linear intercept: a number, or `"auto"` for `c = -k W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Intercept {
    Value(f64),
    Auto(String),
}

/// Named kernel parameters. Omitted values take family defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Intercept>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// Serializable kernel definition `{family, params, W}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDef {
    pub family: FamilyName,
    #[serde(default)]
    pub params: Params,
    #[serde(rename = "W")]
    pub w: f64,
}

impl KernelDef {
    pub fn build(&self) -> Result<KernelSpec> {
        make_kernel(self.family, &self.params, self.w)
    }
}

/// A normalized kernel. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub family: Family,
    /// Support half-width.
    pub w: f64,
    /// Multiplier giving unit integral over `(0, W]`.
    pub norm_coeff: f64,
}

/// Per-constraint worst violation. `magnitude <= 0` means no violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub magnitude: f64,
    pub at: Option<f64>,
}

impl Violation {
    fn none() -> Self {
        Violation { magnitude: 0.0, at: None }
    }

    fn record(&mut self, magnitude: f64, at: f64) {
        if magnitude > self.magnitude {
            self.magnitude = magnitude;
            self.at = Some(at);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub c1_ok: bool,
    pub c2_ok: bool,
    pub c3_ok: bool,
    pub c1: Violation,
    pub c2: Violation,
    pub c3: Violation,
}

impl ConstraintReport {
    pub fn all_ok(&self) -> bool {
        self.c1_ok && self.c2_ok && self.c3_ok
    }
}

fn invalid(msg: impl Into<String>) -> TgdError {
    TgdError::InvalidParam(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Default table kernel: Gaussian-like decay sampled on 33 points.
pub fn default_table() -> Vec<f64> {
    (0..33).map(|j| (-4.5 * (j as f64 / 32.0).powi(2)).exp()).collect()
}

/// Builds a kernel and sets `norm_coeff` so that `int_0^W w = 1`.
///
/// Defaults: gaussian `delta = W/3`; linear `k = 1`, `c = -kW`;
/// exponential `delta^2 = W/4`; landau `tau = W`, `n = 2`;
/// weibull `k = 0.8`, `lambda = W/4`; lanczos `k = 1`.
pub fn make_kernel(name: FamilyName, p: &Params, w: f64) -> Result<KernelSpec> {
    if !(w.is_finite() && w > 0.0) {
        return Err(TgdError::NonPositiveSupport(w));
    }
    let family = match name {
        FamilyName::Gaussian => Family::Gaussian {
            delta: positive("delta", p.delta.unwrap_or(w / 3.0))?,
        },
        FamilyName::Linear => {
            let k = positive("k", p.k.unwrap_or(1.0))?;
            let c = match &p.c {
                None => -k * w,
                Some(Intercept::Value(c)) => *c,
                Some(Intercept::Auto(s)) if s.eq_ignore_ascii_case("auto") => -k * w,
                Some(Intercept::Auto(s)) => return Err(invalid(format!("c must be a number or \"auto\", got '{s}'"))),
            };
            if !(c.is_finite() && c < 0.0) {
                return Err(invalid(format!("linear c must be negative, got {c}")));
            }
            if c > -k * w * (1.0 - 1e-12) {
                return Err(invalid(format!("linear c must satisfy c <= -kW = {}, got {c}", -k * w)));
            }
            Family::Linear { k, c }
        }
        FamilyName::Exponential => Family::Exponential {
            delta: positive("delta", p.delta.unwrap_or((w / 4.0).sqrt()))?,
        },
        FamilyName::Landau => {
            let tau = positive("tau", p.tau.unwrap_or(w))?;
            let n = positive("n", p.n.unwrap_or(2.0))?;
            if tau < w * (1.0 - 1e-12) {
                return Err(invalid(format!("landau tau must be >= W = {w}, got {tau}")));
            }
            Family::Landau { tau, n }
        }
        FamilyName::Weibull => {
            let k = positive("k", p.k.unwrap_or(0.8))?;
            if k > 1.0 {
                return Err(invalid(format!("weibull k must lie in (0, 1], got {k}")));
            }
            Family::Weibull {
                k,
                lambda: positive("lambda", p.lambda.unwrap_or(w / 4.0))?,
            }
        }
        FamilyName::Table => {
            let values = p
                .values
                .clone()
                .ok_or_else(|| invalid("table kernel needs 'values'"))?;
            if values.len() < 2 {
                return Err(invalid("table kernel needs at least two values"));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(invalid("table values must be finite"));
            }
            Family::Table { values }
        }
        FamilyName::Lanczos => Family::Lanczos {
            k: positive("k", p.k.unwrap_or(1.0))?,
        },
    };
    KernelSpec::new(family, w)
}

impl KernelSpec {
    /// Builds a kernel from resolved parameters without family validation.
    pub fn new(family: Family, w: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0) {
            return Err(TgdError::NonPositiveSupport(w));
        }
        let mut spec = KernelSpec { family, w, norm_coeff: 1.0 };
        let total = spec.raw_integral(0.0, w, 0);
        if !(total.is_finite() && total > 0.0) {
            return Err(invalid(format!("kernel integral must be positive, got {total}")));
        }
        spec.norm_coeff = 1.0 / total;
        Ok(spec)
    }

    /// Gaussian kernel with explicit `delta`.
    pub fn gaussian(delta: f64, w: f64) -> Result<Self> {
        make_kernel(FamilyName::Gaussian, &Params { delta: Some(delta), ..Params::default() }, w)
    }

    /// Family defaults for support `w`.
    pub fn default_for(name: FamilyName, w: f64) -> Result<Self> {
        let mut p = Params::default();
        if name == FamilyName::Table {
            p.values = Some(default_table());
        }
        make_kernel(name, &p, w)
    }

    pub fn name(&self) -> FamilyName {
        match self.family {
            Family::Gaussian { .. } => FamilyName::Gaussian,
            Family::Linear { .. } => FamilyName::Linear,
            Family::Exponential { .. } => FamilyName::Exponential,
            Family::Landau { .. } => FamilyName::Landau,
            Family::Weibull { .. } => FamilyName::Weibull,
            Family::Table { .. } => FamilyName::Table,
            Family::Lanczos { .. } => FamilyName::Lanczos,
        }
    }

    /// Same family on a different support. Widths (`delta`, `lambda`) are
    /// kept; the linear intercept, the Landau `tau` and table grids scale
    /// with the support.
    pub fn with_support(&self, w: f64) -> Result<Self> {
        let family = match &self.family {
            Family::Linear { k, c } => Family::Linear { k: *k, c: c * w / self.w },
            Family::Landau { tau, n } => Family::Landau { tau: tau * w / self.w, n: *n },
            f => f.clone(),
        };
        KernelSpec::new(family, w)
    }

    pub fn to_def(&self) -> KernelDef {
        let mut p = Params::default();
        match &self.family {
            Family::Gaussian { delta } | Family::Exponential { delta } => p.delta = Some(*delta),
            Family::Linear { k, c } => {
                p.k = Some(*k);
                p.c = Some(Intercept::Value(*c));
            }
            Family::Landau { tau, n } => {
                p.tau = Some(*tau);
                p.n = Some(*n);
            }
            Family::Weibull { k, lambda } => {
                p.k = Some(*k);
                p.lambda = Some(*lambda);
            }
            Family::Table { values } => p.values = Some(values.clone()),
            Family::Lanczos { k } => p.k = Some(*k),
        }
        KernelDef { family: self.name(), params: p, w: self.w }
    }

    fn raw(&self, t: f64) -> f64 {
        match &self.family {
            Family::Gaussian { delta } => (-t * t / (2.0 * delta * delta)).exp(),
            Family::Linear { k, c } => -k * t - c,
            Family::Exponential { delta } => (-t / (delta * delta)).exp(),
            Family::Landau { tau, n } => (1.0 - t * t / (tau * tau)).max(0.0).powf(*n),
            Family::Weibull { k, lambda } => {
                let u = t / lambda;
                k / lambda * u.powf(k - 1.0) * (-u.powf(*k)).exp()
            }
            Family::Table { values } => {
                let (j, frac) = self.table_cell(values.len(), t);
                values[j] + frac * (values[j + 1] - values[j])
            }
            Family::Lanczos { k } => t.powf(*k),
        }
    }

    fn raw_deriv(&self, t: f64) -> f64 {
        match &self.family {
            Family::Gaussian { delta } => -t / (delta * delta) * self.raw(t),
            Family::Linear { k, .. } => -k,
            Family::Exponential { delta } => -self.raw(t) / (delta * delta),
            Family::Landau { tau, n } => {
                let q = 1.0 - t * t / (tau * tau);
                if q <= 0.0 {
                    0.0
                } else {
                    n * q.powf(n - 1.0) * (-2.0 * t / (tau * tau))
                }
            }
            Family::Weibull { k, lambda } => {
                self.raw(t) * ((k - 1.0) / t - k * t.powf(k - 1.0) / lambda.powf(*k))
            }
            Family::Table { values } => {
                let (j, _) = self.table_cell(values.len(), t);
                (values[j + 1] - values[j]) * (values.len() - 1) as f64 / self.w
            }
            Family::Lanczos { k } => k * t.powf(k - 1.0),
        }
    }

    fn table_cell(&self, len: usize, t: f64) -> (usize, f64) {
        let x = (t / self.w * (len - 1) as f64).clamp(0.0, (len - 1) as f64);
        let j = (x.floor() as usize).min(len - 2);
        (j, x - j as f64)
    }

    /// `int_a^b t^p raw(t) dt` with `[a, b]` clipped to `[0, W]`.
    fn raw_integral(&self, a: f64, b: f64, p: i32) -> f64 {
        let a = a.max(0.0);
        let b = b.min(self.w);
        if b <= a {
            return 0.0;
        }
        match &self.family {
            // s = (t / lambda)^k removes the singularity at t = 0 for k < 1
            Family::Weibull { k, lambda } => {
                let sa = (a / lambda).powf(*k);
                let sb = (b / lambda).powf(*k);
                let q = p as f64 / k;
                lambda.powi(p) * simpson(|s| s.powf(q) * (-s).exp(), sa, sb, PANELS)
            }
            _ => simpson(|t| t.powi(p) * self.raw(t), a, b, PANELS),
        }
    }

    /// `w(t)`: zero outside `(0, W]`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 || t > self.w {
            0.0
        } else {
            self.norm_coeff * self.raw(t)
        }
    }

    /// `w'(t)` inside the support, zero outside.
    pub fn eval_deriv(&self, t: f64) -> f64 {
        if t <= 0.0 || t > self.w {
            0.0
        } else {
            self.norm_coeff * self.raw_deriv(t)
        }
    }

    /// `int_a^b t^p w(t) dt` over the part of `[a, b]` inside `(0, W]`.
    pub fn integral(&self, a: f64, b: f64, p: i32) -> f64 {
        self.norm_coeff * self.raw_integral(a, b, p)
    }

    /// `int_0^W t^p w(t) dt` for `p` in `{0, 1, 2}`.
    pub fn moment(&self, p: u32) -> Result<f64> {
        if p > 2 {
            return Err(TgdError::UnsupportedMoment(p));
        }
        Ok(self.integral(0.0, self.w, p as i32))
    }

    /// Mass the smooth operator carries beyond the support edge.
    ///
    /// Zero for every family except the Gaussian, whose smooth operator is
    /// `k (1 - erf(x / sqrt(2) delta))` and keeps the untruncated tail.
    pub fn smooth_tail(&self) -> f64 {
        match self.family {
            Family::Gaussian { delta } => {
                let erfc = 1.0 - libm::erf(self.w / (std::f64::consts::SQRT_2 * delta));
                self.norm_coeff * (std::f64::consts::PI / 2.0).sqrt() * delta * erfc
            }
            _ => 0.0,
        }
    }

    /// Unnormalized smooth operator `int_|x|^W w + tail` on `[-W, W]`.
    pub fn smooth_raw(&self, x: f64) -> f64 {
        let a = x.abs();
        if a > self.w {
            return 0.0;
        }
        self.integral(a, self.w, 0) + self.smooth_tail()
    }

    /// `int_{-W}^{W}` of [`smooth_raw`](Self::smooth_raw).
    pub fn smooth_mass(&self) -> f64 {
        2.0 * (self.integral(0.0, self.w, 1) + self.w * self.smooth_tail())
    }

    /// `int_a^b` of [`smooth_raw`](Self::smooth_raw) for `0 <= a < b`.
    pub fn smooth_raw_integral(&self, a: f64, b: f64) -> f64 {
        let b = b.min(self.w);
        if b <= a {
            return 0.0;
        }
        let inner = self.integral(a, b, 1) - a * self.integral(a, b, 0);
        inner + (b - a) * (self.integral(b, self.w, 0) + self.smooth_tail())
    }

    /// Checks C1, C2 and C3 on a 4096-point grid.
    pub fn validate(&self) -> ConstraintReport {
        let w = self.w;
        let grid: Vec<f64> = (1..=PANELS).map(|j| w * j as f64 / PANELS as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        let wmax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));

        let mut c1 = Violation::none();
        let m0 = self.moment(0).unwrap_or(f64::NAN);
        let dev = (m0 - 1.0).abs();
        if dev.is_nan() || dev > C1_TOL {
            c1.record(if dev.is_nan() { f64::INFINITY } else { dev }, w);
        }
        for (i, (&t, &v)) in grid.iter().zip(&vals).enumerate() {
            let edge = i + 1 == grid.len();
            if v < 0.0 || (!edge && v <= 0.0) {
                c1.record(v.abs().max(f64::MIN_POSITIVE), t);
            }
        }

        let mut c2 = Violation::none();
        for j in 1..vals.len() {
            let rise = vals[j] - vals[j - 1];
            if rise > GRID_SLACK * wmax {
                c2.record(rise, grid[j]);
            }
        }

        // S' = -w and S'' = -w' inside the support
        let mut c3 = Violation::none();
        let dmax = grid[..grid.len() - 1]
            .iter()
            .fold(0.0f64, |m, &t| m.max(self.eval_deriv(t).abs()));
        for (&t, &v) in grid[..grid.len() - 1].iter().zip(&vals) {
            if v <= 0.0 {
                c3.record(v.abs().max(f64::MIN_POSITIVE), t);
            }
            let d = self.eval_deriv(t);
            if d >= 0.0 {
                c3.record(d.abs().max(GRID_SLACK * dmax).max(f64::MIN_POSITIVE), t);
            }
        }
        let smax = self.smooth_raw(0.0);
        let s_edge = self.smooth_raw(w) / smax;
        let ds_edge = self.eval(w) / wmax;
        for excess in [s_edge - C3_EDGE_DECAY, ds_edge - C3_EDGE_DECAY] {
            if excess > 0.0 {
                c3.record(excess, w);
            }
        }

        ConstraintReport {
            c1_ok: c1.magnitude == 0.0,
            c2_ok: c2.magnitude == 0.0,
            c3_ok: c3.magnitude == 0.0,
            c1,
            c2,
            c3,
        }
    }
}

/// Free-function form of [`KernelSpec::eval`].
pub fn eval_kernel(kernel: &KernelSpec, t: f64) -> f64 {
    kernel.eval(t)
}

/// Free-function form of [`KernelSpec::moment`].
pub fn kernel_moment(kernel: &KernelSpec, p: u32) -> Result<f64> {
    kernel.moment(p)
}

/// Free-function form of [`KernelSpec::validate`].
pub fn validate_constraints(kernel: &KernelSpec) -> ConstraintReport {
    kernel.validate()
}

/// Checks C3 on an arbitrary even smooth operator given on `[0, W]`.
///
/// Derivatives are central differences on the 4096-panel grid; `S'' > 0` is
/// required up to a relative slack of `1e-9`.
pub fn check_smooth_operator<F: Fn(f64) -> f64>(s: F, w: f64) -> (bool, Violation) {
    let h = w / PANELS as f64;
    let mut v = Violation::none();
    let d1: Vec<f64> = (1..PANELS).map(|j| (s(h * (j + 1) as f64) - s(h * (j - 1) as f64)) / (2.0 * h)).collect();
    let d2: Vec<f64> = (1..PANELS)
        .map(|j| (s(h * (j + 1) as f64) - 2.0 * s(h * j as f64) + s(h * (j - 1) as f64)) / (h * h))
        .collect();
    let smax = (0..=PANELS).fold(0.0f64, |m, j| m.max(s(h * j as f64).abs()));
    let d1max = d1.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let d2max = d2.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (j, (&a, &b)) in d1.iter().zip(&d2).enumerate() {
        let t = h * (j + 1) as f64;
        if a >= 0.0 {
            v.record(a.max(f64::MIN_POSITIVE), t);
        }
        if b <= -1e-9 * d2max {
            v.record(-b, t);
        }
    }
    let s_edge = s(w).abs() / smax;
    let ds_edge = ((s(w) - s(w - h)) / h).abs() / d1max;
    for excess in [s_edge - C3_EDGE_DECAY, ds_edge - C3_EDGE_DECAY] {
        if excess > 0.0 {
            v.record(excess, w);
        }
    }
    (v.magnitude == 0.0, v)
}
