//! The exponential bump, the mollifier family `M_k(t) = k·M(kt)`,
//! convolution and the density experiment `‖M_k ∗ f − f‖_θ → 0`.

mod pchip;

use std::time::Instant;

use rayon::prelude::*;

use crate::constants::BUMP_NORMALIZATION;
use crate::funcspace::{Integrability, Interval, RealFunction};
use crate::gauge::{DivergenceError, GaugeIntegrator};
use crate::orlicz::luxemburg_norm;
use crate::young::YoungFunction;

pub use pchip::Pchip;

/// `C·exp(−1/(1−t²))` on `(−1, 1)`, zero elsewhere, with unit mass.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        return 0.0;
    }
    BUMP_NORMALIZATION * (-1.0 / (1.0 - t * t)).exp()
}

/// `M_k(t) = k·bump(k·t)`.
pub fn mollifier_eval(k: f64, t: f64) -> f64 {
    assert!(k > 0.0, "k must be positive");
    k * bump(k * t)
}

/// `M_k`, supported on `[−1/k, 1/k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    pub k: f64,
    pub normalization: f64,
}

impl Mollifier {
    pub fn new(k: f64) -> Self {
        assert!(k > 0.0, "k must be positive");
        Mollifier { k, normalization: BUMP_NORMALIZATION }
    }

    pub fn eval(&self, t: f64) -> f64 {
        mollifier_eval(self.k, t)
    }

    pub fn support(&self) -> Interval {
        Interval::new(-1.0 / self.k, 1.0 / self.k)
    }

    pub fn as_function(&self) -> RealFunction {
        let k = self.k;
        RealFunction::new(format!("M_{k}"), self.support().padded(1.0), move |t| mollifier_eval(k, t))
            .with_support(self.support())
            .with_tag(Integrability::BoundedCompactSupport { bound: k * bump(0.0) })
    }
}

/// `(M_k ∗ f)(x) = ∫ f(t)·M_k(x − t) dt` over `supp f ∩ [x − 1/k, x + 1/k]`.
pub fn convolve(f: &RealFunction, k: f64, x: f64, tol: f64) -> Result<f64, DivergenceError> {
    convolve_counted(&GaugeIntegrator::default(), f, k, x, tol).map(|(v, _)| v)
}

fn convolve_counted(integrator: &GaugeIntegrator, f: &RealFunction, k: f64, x: f64, tol: f64) -> Result<(f64, u64), DivergenceError> {
    let window = Interval::new(x - 1.0 / k, x + 1.0 / k);
    let Some(region) = f.support().intersect(&window) else {
        return Ok((0.0, 0));
    };
    // M_k is even, so t ↦ M_k(x − t) is M_k shifted to x.
    let kernel = Mollifier::new(k).as_function().translate(x);
    let integrand = RealFunction::product(f, &kernel);
    let r = integrator.integrate(&integrand, region, tol);
    if r.converged {
        Ok((r.value, r.evaluations))
    } else {
        Err(DivergenceError { interval: region, result: r })
    }
}

/// Samples per unit length of `1/k`; the contract only needs `≥ 8`.
pub const SAMPLES_PER_WIDTH: f64 = 64.0;

/// `M_k ∗ f` sampled on a grid of spacing at most `1/(64k)` over
/// `supp f` padded by `1/k`, interpolated by monotone cubics.
#[derive(Debug, Clone)]
pub struct Mollified {
    pub function: RealFunction,
    pub spacing: f64,
    pub evaluations: u64,
}

pub fn mollified(f: &RealFunction, k: f64, tol: f64) -> Result<Mollified, DivergenceError> {
    let support = f.support();
    assert!(support.is_bounded(), "mollification needs a bounded support");
    let span = support.padded(1.0 / k);
    let n = (span.len() * SAMPLES_PER_WIDTH * k).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { span.hi } else { span.lo + span.len() * i as f64 / n as f64 }).collect();
    let integrator = GaugeIntegrator::default();
    let sampled: Result<Vec<(f64, u64)>, DivergenceError> =
        xs.par_iter().map(|&x| convolve_counted(&integrator, f, k, x, tol)).collect();
    let sampled = sampled?;
    let evaluations = sampled.iter().map(|s| s.1).sum();
    let ys: Vec<f64> = sampled.into_iter().map(|s| s.0).collect();
    let bound = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let interp = Pchip::new(xs, ys);
    let function = RealFunction::new(format!("M_{k}*{}", f.name()), span, move |x| interp.eval(x))
        .with_tag(Integrability::BoundedCompactSupport { bound });
    Ok(Mollified { function, spacing: span.len() / n as f64, evaluations })
}

/// One row of a density experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub k: f64,
    pub norm: f64,
    pub evaluations: u64,
    pub wall_ms: f64,
}

/// `‖M_k ∗ f − f‖_θ` for each `k`, rows in the order of `ks`.
pub fn density_experiment(f: &RealFunction, y: &YoungFunction, ks: &[f64], tol: f64) -> Result<Vec<DensityRow>, DivergenceError> {
    ks.par_iter()
        .map(|&k| {
            let start = Instant::now();
            let smooth = mollified(f, k, tol)?;
            let span = smooth.function.domain();
            let diff = RealFunction::linear_combination(1.0, &smooth.function, -1.0, &zero_extended(f))
                .with_domain(span)
                .with_support(span);
            let norm = luxemburg_norm(&diff, y, span, tol);
            Ok(DensityRow {
                k,
                norm: norm.norm,
                evaluations: smooth.evaluations + norm.evaluations,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

/// `f` on its support, zero elsewhere.
fn zero_extended(f: &RealFunction) -> RealFunction {
    let support = f.support();
    let g = f.clone();
    RealFunction::new(f.name().to_string(), f.domain(), move |x| if support.contains(x) { g.value(x) } else { 0.0 })
        .with_support(support)
        .with_singularities(f.singularities().to_vec())
        .with_tag(f.tag())
}

/// CSV with header `k,norm,evaluations,wall_ms`.
pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut out = String::from("k,norm,evaluations,wall_ms\n");
    for r in rows {
        out.push_str(&format!("{:.16e},{:.16e},{},{:.3}\n", r.k, r.norm, r.evaluations, r.wall_ms));
    }
    out
}
