use std::sync::Arc;

use thiserror::Error;

use super::YoungFunction;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConjugateError {
    /// `s·t − θ(s)` still increases at the cap but turns over before the
    /// probe limit: the supremum is finite and `s_cap` must be raised.
    #[error("sup over s is not reached by s_cap = {s_cap} (t = {t}); retry with s_cap ≥ {suggested}")]
    CapReached { t: f64, s_cap: f64, suggested: f64 },
}

const SCAN_POINTS: usize = 512;
const GOLDEN_REL_WIDTH: f64 = 1e-10;
/// Beyond `s_cap`, the objective is probed at `s_cap · 2^j` for `j ≤` this.
const PROBE_DOUBLINGS: i32 = 20;

/// `Φ(t) = sup_{0 ≤ s ≤ s_cap} (s·t − θ(s))`.
///
/// A 512-point scan brackets the maximiser, then golden-section search
/// narrows it to relative width `1e-10`. When the objective still increases
/// at `s_cap`, it is probed up to `2^20·s_cap`: if it never turns over the
/// result is `Ok(+∞)`, otherwise [`ConjugateError::CapReached`].
pub fn conjugate(y: &YoungFunction, t: f64, s_cap: f64) -> Result<f64, ConjugateError> {
    conjugate_with_argmax(y, t, s_cap).map(|(v, _)| v)
}

pub(crate) fn conjugate_with_argmax(y: &YoungFunction, t: f64, s_cap: f64) -> Result<(f64, f64), ConjugateError> {
    assert!(t >= 0.0 && s_cap > 0.0, "need t ≥ 0 and s_cap > 0");
    let g = |s: f64| {
        let th = y.eval(s);
        if th.is_infinite() {
            f64::NEG_INFINITY
        } else {
            s * t - th
        }
    };
    let h = s_cap / SCAN_POINTS as f64;
    let mut best_i = 0;
    let mut best = 0.0;
    for i in 1..=SCAN_POINTS {
        let v = g(h * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best_i == SCAN_POINTS {
        let mut prev = best;
        for j in 1..=PROBE_DOUBLINGS {
            let s = s_cap * 2f64.powi(j);
            let v = g(s);
            if v <= prev {
                return Err(ConjugateError::CapReached { t, s_cap, suggested: s });
            }
            prev = v;
        }
        return Ok((f64::INFINITY, f64::INFINITY));
    }
    let lo = h * best_i.saturating_sub(1) as f64;
    let hi = h * (best_i + 1) as f64;
    let (s_star, v) = golden_max(&g, lo, hi);
    if v > best {
        Ok((v, s_star))
    } else {
        Ok((best, h * best_i as f64))
    }
}

/// Golden-section maximisation of a unimodal `g` on `[a, b]`.
fn golden_max(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let scale = b.abs().max(f64::MIN_POSITIVE);
    while b - a > GOLDEN_REL_WIDTH * scale {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// `θ` together with a sampled conjugate `Φ`.
///
/// `Φ` is tabulated on `t = i·step`, `0 ≤ t ≤ t_max`, and interpolated by
/// chords. A chord of a convex function lies above it, so the interpolant
/// over-estimates `Φ` between nodes and Young's inequality stays valid.
/// Past `t_max`, `Φ` is computed directly.
#[derive(Debug, Clone)]
pub struct ConjugatePair {
    pub theta: YoungFunction,
    step: f64,
    phi_samples: Vec<(f64, f64)>,
    maximizer_samples: Vec<(f64, f64)>,
}

/// Default table: `t ∈ [0, 64]` in steps of `1/512`.
const DEFAULT_T_MAX: f64 = 64.0;
const DEFAULT_STEP: f64 = 1.0 / 512.0;
const INITIAL_S_CAP: f64 = 64.0;

impl ConjugatePair {
    pub fn new(theta: YoungFunction) -> Self {
        Self::with_grid(theta, DEFAULT_T_MAX, DEFAULT_STEP)
    }

    pub fn with_grid(theta: YoungFunction, t_max: f64, step: f64) -> Self {
        assert!(t_max > 0.0 && step > 0.0);
        let n = (t_max / step).round() as usize;
        let mut phi_samples = Vec::with_capacity(n + 1);
        let mut maximizer_samples = Vec::with_capacity(n + 1);
        let mut s_cap = INITIAL_S_CAP;
        for i in 0..=n {
            let t = i as f64 * step;
            let (v, s) = conjugate_growing(&theta, t, &mut s_cap);
            phi_samples.push((t, v));
            maximizer_samples.push((t, s));
        }
        ConjugatePair { theta, step, phi_samples, maximizer_samples }
    }

    pub fn phi_samples(&self) -> &[(f64, f64)] {
        &self.phi_samples
    }

    pub fn maximizer_samples(&self) -> &[(f64, f64)] {
        &self.maximizer_samples
    }

    pub fn t_max(&self) -> f64 {
        self.phi_samples[self.phi_samples.len() - 1].0
    }

    /// `Φ(|t|)`.
    pub fn phi(&self, t: f64) -> f64 {
        let t = t.abs();
        let n = self.phi_samples.len() - 1;
        if t > self.t_max() {
            let mut s_cap = INITIAL_S_CAP;
            return conjugate_growing(&self.theta, t, &mut s_cap).0;
        }
        let u = t / self.step;
        let i = (u.floor() as usize).min(n - 1);
        let (t0, v0) = self.phi_samples[i];
        let (t1, v1) = self.phi_samples[i + 1];
        if t == t0 {
            return v0;
        }
        if t == t1 || v1.is_infinite() {
            return v1;
        }
        let w = (t - t0) / (t1 - t0);
        v0 + w * (v1 - v0)
    }

    /// `Φ` wrapped as a Young function.
    pub fn as_young(self: &Arc<Self>) -> YoungFunction {
        let pair = Arc::clone(self);
        YoungFunction::new(format!("conj({})", self.theta.name()), move |t| pair.phi(t))
    }
}

/// Conjugate at `t`, raising `s_cap` on demand (kept for the next call).
fn conjugate_growing(theta: &YoungFunction, t: f64, s_cap: &mut f64) -> (f64, f64) {
    loop {
        match conjugate_with_argmax(theta, t, *s_cap) {
            Ok(r) => return r,
            Err(ConjugateError::CapReached { suggested, .. }) => *s_cap = suggested.max(2.0 * *s_cap),
        }
    }
}

/// `θ(s) + Φ(t) − s·t`, non-negative by Young's inequality.
pub fn young_gap(y: &YoungFunction, pair: &ConjugatePair, s: f64, t: f64) -> f64 {
    y.eval(s) + pair.phi(t) - s * t
}
