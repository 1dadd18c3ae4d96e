//! Young functions: evaluation, construction from a density, axiom checks,
//! convex conjugation and Δ₂ diagnostics.

mod conjugate;
mod delta2;

use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::funcspace::{Evaluator, Integrability, Interval, RealFunction};
use crate::gauge::{henstock_integrate, NeumaierSum};

pub use conjugate::{conjugate, young_gap, ConjugateError, ConjugatePair};
pub use delta2::{delta2_check, Delta2Report};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum YoungError {
    #[error("unknown Young function `{0}`")]
    UnknownName(String),
    #[error("invalid parameter for `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("density rejected at t = {at}: {reason}")]
    InvalidDensity { at: f64, reason: &'static str },
}

/// Names accepted by [`YoungFunction::from_name`] besides `power:p`.
pub const REGISTRY: [&str; 3] = ["exp2m1", "expm1ms", "quad_half"];

/// An even Young function `θ`, stored on `[0, ∞)` and applied to `|u|`.
#[derive(Clone)]
pub struct YoungFunction {
    name: String,
    params: Vec<f64>,
    theta: Evaluator,
    /// `ln θ(u)` for `u > 0`, for growth too fast for `f64`.
    log_theta: Option<Evaluator>,
    density: Option<Evaluator>,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction").field("name", &self.name).field("params", &self.params).finish_non_exhaustive()
    }
}

impl YoungFunction {
    /// Wraps an arbitrary `θ` on `[0, ∞)`. No axioms are checked.
    pub fn new<F>(name: impl Into<String>, theta: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        YoungFunction { name: name.into(), params: Vec::new(), theta: Arc::new(theta), log_theta: None, density: None }
    }

    fn with_log<F>(mut self, log_theta: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.log_theta = Some(Arc::new(log_theta));
        self
    }

    fn with_density<F>(mut self, m: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.density = Some(Arc::new(m));
        self
    }

    fn with_params(mut self, params: Vec<f64>) -> Self {
        self.params = params;
        self
    }

    /// `θ(u) = |u|^p`, `p ≥ 1`.
    pub fn power(p: f64) -> Result<Self, YoungError> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(YoungError::InvalidParameter { name: format!("power:{p}"), reason: "p must be a finite number ≥ 1".into() });
        }
        let y = if p == 1.0 {
            YoungFunction::new("power:1", |u| u).with_log(f64::ln).with_density(|u| if u > 0.0 { 1.0 } else { 0.0 })
        } else if p == 2.0 {
            YoungFunction::new("power:2", |u| u * u).with_log(|u| 2.0 * u.ln()).with_density(|u| 2.0 * u)
        } else {
            YoungFunction::new(format!("power:{p}"), move |u| u.powf(p))
                .with_log(move |u| p * u.ln())
                .with_density(move |u| p * u.powf(p - 1.0))
        };
        Ok(y.with_params(vec![p]))
    }

    /// `θ(u) = e^{u²} − 1`.
    pub fn exp2m1() -> Self {
        YoungFunction::new("exp2m1", |u| (u * u).exp_m1())
            .with_log(|u| {
                let v = u * u;
                if u > 3.0 {
                    v + (-(-v).exp()).ln_1p()
                } else {
                    v.exp_m1().ln()
                }
            })
            .with_density(|u| 2.0 * u * (u * u).exp())
    }

    /// `θ(s) = e^s − s − 1`.
    pub fn expm1ms() -> Self {
        YoungFunction::new("expm1ms", expm1_minus)
            .with_log(|s| if s > 30.0 { s + (-(s + 1.0) * (-s).exp()).ln_1p() } else { expm1_minus(s).ln() })
            .with_density(f64::exp_m1)
    }

    /// `θ(s) = s²/2`.
    pub fn quad_half() -> Self {
        YoungFunction::new("quad_half", |s| 0.5 * s * s).with_log(|s| 2.0 * s.ln() - std::f64::consts::LN_2).with_density(|s| s)
    }

    /// Looks up `power:p`, `exp2m1`, `expm1ms` or `quad_half`.
    pub fn from_name(name: &str) -> Result<Self, YoungError> {
        if let Some(p) = name.strip_prefix("power:") {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| YoungError::InvalidParameter { name: name.into(), reason: "exponent is not a number".into() })?;
            return YoungFunction::power(p);
        }
        match name {
            "exp2m1" => Ok(YoungFunction::exp2m1()),
            "expm1ms" => Ok(YoungFunction::expm1ms()),
            "quad_half" => Ok(YoungFunction::quad_half()),
            _ => Err(YoungError::UnknownName(name.into())),
        }
    }

    /// `θ(u) = ∫_0^{|u|} m`, integrated to `grid_tol` and memoised on a grid
    /// that grows on demand.
    ///
    /// `m` must be non-negative, non-decreasing and vanish at 0 on the check
    /// grid `[0, 64]`.
    pub fn from_density<F>(name: impl Into<String>, m: F, grid_tol: f64) -> Result<Self, YoungError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!(grid_tol > 0.0, "grid_tol must be positive");
        let m: Evaluator = Arc::new(m);
        check_density(&*m)?;
        let memo = Arc::new(DensityMemo { m: m.clone(), cell_tol: grid_tol * MEMO_STEP / MEMO_END, table: RwLock::new(vec![0.0]) });
        let theta = move |u: f64| memo.theta(u);
        let mut y = YoungFunction::new(name, theta);
        y.density = Some(m);
        Ok(y)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn density(&self) -> Option<&Evaluator> {
        self.density.as_ref()
    }

    /// `θ(|u|)`, possibly `+∞`.
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        let u = u.abs();
        if u == 0.0 {
            0.0
        } else {
            (self.theta)(u)
        }
    }

    /// `ln θ(|u|)`; `−∞` at 0.
    pub fn log_eval(&self, u: f64) -> f64 {
        let u = u.abs();
        if u == 0.0 {
            return f64::NEG_INFINITY;
        }
        match &self.log_theta {
            Some(l) => l(u),
            None => (self.theta)(u).ln(),
        }
    }

    /// `θ` is finite at every point of a grid on `[0, hi]`.
    pub fn is_finite_on(&self, hi: f64) -> bool {
        (0..=1024).all(|i| self.eval(hi * i as f64 / 1024.0).is_finite())
    }

    /// Midpoint and quarter-point convexity on a uniform grid of `[0, hi]`,
    /// `θ(0) = 0` and monotonicity.
    pub fn check_axioms(&self, hi: f64, n: usize) -> bool {
        if self.eval(0.0) != 0.0 {
            return false;
        }
        let xs: Vec<f64> = (0..=n).map(|i| hi * i as f64 / n as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        if vals.windows(2).any(|w| w[1] < w[0]) {
            return false;
        }
        for i in 0..xs.len() {
            for j in (i + 1..xs.len()).step_by((n / 32).max(1)) {
                if !(vals[i].is_finite() && vals[j].is_finite()) {
                    continue;
                }
                for lambda in [0.25, 0.5, 0.75] {
                    let lhs = self.eval(lambda * xs[i] + (1.0 - lambda) * xs[j]);
                    let rhs = lambda * vals[i] + (1.0 - lambda) * vals[j];
                    if lhs > rhs + 1e-12 * (1.0 + rhs.abs()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `θ ∘ |f|` as a function, for modulars.
    pub fn compose(&self, f: &RealFunction) -> RealFunction {
        let y = self.clone();
        let g = f.map(format!("{}(|{}|)", self.name, f.name()), move |v| y.eval(v));
        match f.tag() {
            Integrability::BoundedCompactSupport { bound } => g.with_tag(Integrability::BoundedCompactSupport { bound: self.eval(bound) }),
            _ => g,
        }
    }
}

/// `e^s − s − 1` without cancellation near 0.
fn expm1_minus(s: f64) -> f64 {
    if s.abs() < 1e-3 {
        s * s * (0.5 + s * (1.0 / 6.0 + s * (1.0 / 24.0 + s / 120.0)))
    } else {
        s.exp_m1() - s
    }
}

const CHECK_POINTS: usize = 1024;
const CHECK_END: f64 = 64.0;
const MEMO_STEP: f64 = 1.0 / 64.0;
const MEMO_END: f64 = 64.0;

fn check_density(m: &(dyn Fn(f64) -> f64 + Send + Sync)) -> Result<(), YoungError> {
    let m0 = m(0.0);
    if m0 != 0.0 {
        return Err(YoungError::InvalidDensity { at: 0.0, reason: "m(0) must be 0" });
    }
    let mut prev = 0.0f64;
    for i in 1..=CHECK_POINTS {
        let t = CHECK_END * i as f64 / CHECK_POINTS as f64;
        let v = m(t);
        if v.is_nan() || v < 0.0 {
            return Err(YoungError::InvalidDensity { at: t, reason: "m must be non-negative" });
        }
        if v < prev - 1e-12 * prev.abs() {
            return Err(YoungError::InvalidDensity { at: t, reason: "m must be non-decreasing" });
        }
        prev = v;
    }
    Ok(())
}

/// Cumulative integrals of `m` at multiples of [`MEMO_STEP`] up to
/// [`MEMO_END`], appended by whichever caller first needs them.
struct DensityMemo {
    m: Evaluator,
    cell_tol: f64,
    table: RwLock<Vec<f64>>,
}

impl DensityMemo {
    fn integral(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        let m = self.m.clone();
        let f = RealFunction::new("m", Interval::new(a, b), move |t| m(t));
        let r = henstock_integrate(&f, Interval::new(a, b), self.cell_tol);
        if r.converged {
            r.value
        } else {
            f64::INFINITY
        }
    }

    fn node(&self, i: usize) -> f64 {
        {
            let table = self.table.read().expect("memo lock");
            if let Some(&v) = table.get(i) {
                return v;
            }
        }
        let mut table = self.table.write().expect("memo lock");
        while table.len() <= i {
            let k = table.len();
            let last = table[k - 1];
            let cell = self.integral((k - 1) as f64 * MEMO_STEP, k as f64 * MEMO_STEP);
            table.push(last + cell);
        }
        table[i]
    }

    fn theta(&self, u: f64) -> f64 {
        let capped = u.min(MEMO_END);
        let i = (capped / MEMO_STEP).floor() as usize;
        let base = self.node(i);
        let x_i = i as f64 * MEMO_STEP;
        let mut acc = NeumaierSum::new();
        acc.add(base);
        acc.add(self.integral(x_i, capped));
        if u > MEMO_END {
            acc.add(self.integral(MEMO_END, u));
        }
        acc.value()
    }
}

/// `θ(u)/u → 0` at the origin, `→ ∞` at infinity, and grid convexity.
///
/// Along a geometric grid from 1 down to `probe_lo` the ratio must be
/// non-increasing and end below `1e-3` times its value at 1; along a grid up
/// to `probe_hi` it must be non-decreasing and end above `1e3` times it.
pub fn is_n_function(y: &YoungFunction, probe_lo: f64, probe_hi: f64) -> bool {
    assert!(0.0 < probe_lo && probe_lo < probe_hi);
    const N: usize = 200;
    let log_ratio = |u: f64| y.log_eval(u) - u.ln();
    let at_one = log_ratio(1.0);
    let threshold = 1e3f64.ln();
    let tol = 1e-12;

    let leg = |end: f64| -> Vec<f64> {
        (0..=N).map(|i| log_ratio((end.ln() * i as f64 / N as f64).exp())).collect()
    };
    let down = leg(probe_lo.min(1.0));
    let up = leg(probe_hi.max(1.0));
    let heads_to_zero = down.windows(2).all(|w| w[1] <= w[0] + tol * w[0].abs().max(1.0))
        && down[N] < at_one - threshold;
    let heads_to_infinity = up.windows(2).all(|w| w[1] >= w[0] - tol * w[0].abs().max(1.0))
        && up[N] > at_one + threshold;
    let hi = finite_extent(y, probe_hi);
    heads_to_zero && heads_to_infinity && y.check_axioms(hi, 256)
}

/// Largest power of two (capped at `hi`) below which θ stays finite.
fn finite_extent(y: &YoungFunction, hi: f64) -> f64 {
    let mut x = hi;
    while x > 1e-6 && !y.eval(x).is_finite() {
        x *= 0.5;
    }
    x
}
