//! Modulars, Luxemburg norms, membership, distribution functions and the
//! `L¹` embedding, on Lebesgue measure over bounded intervals.

mod distribution;

use std::cell::Cell;

use crate::funcspace::{Interval, RealFunction};
use crate::gauge::{GaugeIntegrator, IntegralResult};
use crate::young::{conjugate, ConjugateError, YoungFunction};

pub use distribution::{distribution, equimeasurable, generalized_inverse, DistributionTable, OSCILLATION_WARNING_CROSSINGS};

/// Outcome of a Luxemburg norm computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuxemburgResult {
    /// `inf{a > 0 : modular(f/a) ≤ 1}`; `0` and `+∞` are explicit encodings.
    pub norm: f64,
    pub bracket: (f64, f64),
    pub modular_at_norm: f64,
    /// Modular evaluations performed.
    pub iterations: usize,
    /// Integrand evaluations across all modulars.
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipVerdict {
    /// `modular(f)` is finite.
    pub in_class: bool,
    /// `modular(α f)` is finite for some probed `α`.
    pub in_space: bool,
    /// Largest probe `α = 2^{-k}` with a finite modular.
    pub alpha_witness: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Embedding {
    pub c: f64,
    pub l1_norm: f64,
    pub luxemburg_norm: f64,
    pub holds: bool,
}

const NORM_FLOOR: f64 = 1e-300;
const NORM_CEILING: f64 = 1e300;
const BISECTION_REL_WIDTH: f64 = 1e-8;
/// Probes `2^0, 2^-1, …, 2^-40` for space membership.
const MEMBERSHIP_PROBES: i32 = 40;
const MEMBERSHIP_TOL: f64 = 1e-8;

/// The part of `iv` where `f` may be non-zero.
fn effective_interval(f: &RealFunction, iv: Interval) -> Option<Interval> {
    iv.intersect(&f.support())
}

/// `∫_I θ(|f|)`. A non-converged result marks the modular as `+∞`.
pub fn modular(f: &RealFunction, y: &YoungFunction, iv: Interval, tol: f64) -> IntegralResult {
    modular_with(&GaugeIntegrator::default(), f, y, iv, tol)
}

pub fn modular_with(integrator: &GaugeIntegrator, f: &RealFunction, y: &YoungFunction, iv: Interval, tol: f64) -> IntegralResult {
    match effective_interval(f, iv) {
        Some(region) => integrator.integrate(&y.compose(f), region, tol),
        None => IntegralResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true, diverged: false },
    }
}

/// Luxemburg norm `inf{a > 0 : ∫ θ(|f|/a) ≤ 1}` by bracketing from `a = 1`
/// and bisecting to relative width `1e-8`. The upper end of the final
/// bracket is returned, so `modular_at_norm ≤ 1` by construction.
pub fn luxemburg_norm(f: &RealFunction, y: &YoungFunction, iv: Interval, tol: f64) -> LuxemburgResult {
    luxemburg_norm_with(&GaugeIntegrator::default(), f, y, iv, tol)
}

pub fn luxemburg_norm_with(integrator: &GaugeIntegrator, f: &RealFunction, y: &YoungFunction, iv: Interval, tol: f64) -> LuxemburgResult {
    let iterations = Cell::new(0usize);
    let evaluations = Cell::new(0u64);
    let m = |a: f64| {
        iterations.set(iterations.get() + 1);
        let r = modular_with(integrator, &f.scale(1.0 / a), y, iv, tol);
        evaluations.set(evaluations.get() + r.evaluations);
        if r.converged {
            r.value
        } else {
            f64::INFINITY
        }
    };

    let (mut lo, mut hi, mut m_hi);
    let m1 = m(1.0);
    if m1 <= 1.0 {
        hi = 1.0;
        m_hi = m1;
        lo = 0.5;
        loop {
            let v = m(lo);
            if v > 1.0 {
                break;
            }
            hi = lo;
            m_hi = v;
            lo *= 0.5;
            if lo < NORM_FLOOR {
                return LuxemburgResult { norm: 0.0, bracket: (0.0, hi), modular_at_norm: m_hi, iterations: iterations.get(), evaluations: evaluations.get() };
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        loop {
            let v = m(hi);
            if v <= 1.0 {
                m_hi = v;
                break;
            }
            lo = hi;
            hi *= 2.0;
            if hi > NORM_CEILING {
                return LuxemburgResult { norm: f64::INFINITY, bracket: (lo, f64::INFINITY), modular_at_norm: f64::INFINITY, iterations: iterations.get(), evaluations: evaluations.get() };
            }
        }
    }

    while hi - lo > BISECTION_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        let v = m(mid);
        if v <= 1.0 {
            hi = mid;
            m_hi = v;
        } else {
            lo = mid;
        }
    }
    LuxemburgResult { norm: hi, bracket: (lo, hi), modular_at_norm: m_hi, iterations: iterations.get(), evaluations: evaluations.get() }
}

/// Class and space membership. The class needs `modular(f) < ∞`; the space
/// needs `modular(α f) < ∞` for a probe `α ∈ {1, 1/2, …, 2^-40}`.
pub fn membership(f: &RealFunction, y: &YoungFunction, iv: Interval) -> MembershipVerdict {
    let integrator = GaugeIntegrator::default();
    for k in 0..=MEMBERSHIP_PROBES {
        let alpha = 2f64.powi(-k);
        let g = if k == 0 { f.clone() } else { f.scale(alpha) };
        let r = modular_with(&integrator, &g, y, iv, MEMBERSHIP_TOL);
        if r.converged {
            return MembershipVerdict { in_class: k == 0, in_space: true, alpha_witness: Some(alpha) };
        }
    }
    MembershipVerdict { in_class: false, in_space: false, alpha_witness: None }
}

/// `c‖f‖₁ ≤ ‖f‖_θ` with the affine minorant `θ(s) ≥ u·s − v`, `u = 1`,
/// `v = Φ(1)`, giving `c = u / (1 + v·μ(I))`.
pub fn l1_embedding_check(f: &RealFunction, y: &YoungFunction, iv: Interval, tol: f64) -> L1Embedding {
    let u = 1.0;
    let v = unit_slope_offset(y);
    let c = u / (1.0 + v * iv.len());
    let l1 = {
        let r = modular(f, &YoungFunction::power(1.0).expect("p = 1 is valid"), iv, tol);
        if r.converged {
            r.value
        } else {
            f64::INFINITY
        }
    };
    let norm = luxemburg_norm(f, y, iv, tol).norm;
    L1Embedding { c, l1_norm: l1, luxemburg_norm: norm, holds: c * l1 <= norm + 1e-9 }
}

/// `Φ(1) = sup_s (s − θ(s))`, the offset of the slope-one minorant.
fn unit_slope_offset(y: &YoungFunction) -> f64 {
    let mut cap = 64.0;
    loop {
        match conjugate(y, 1.0, cap) {
            Ok(v) => return v,
            Err(ConjugateError::CapReached { suggested, .. }) => cap = suggested.max(2.0 * cap),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(lo: f64, hi: f64, c: f64) -> RealFunction {
        RealFunction::indicator(lo, hi, c, Interval::new(-5.0, 5.0))
    }

    #[test]
    fn modular_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        let r = modular(&ind(0.0, 1.0, 1.0), &p2, Interval::new(0.0, 1.0), 1e-10);
        assert!(r.converged && (r.value - 1.0).abs() < 1e-10);
        let x = RealFunction::new("x", Interval::new(0.0, 1.0), |x| x);
        let r = modular(&x, &p2, Interval::new(0.0, 1.0), 1e-10);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn luxemburg_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        let wide = Interval::new(-1.0, 5.0);
        let n = luxemburg_norm(&ind(0.0, 1.0, 1.0), &p2, wide, 1e-10);
        assert!((n.norm - 1.0).abs() < 1e-7, "{n:?}");
        assert!(n.modular_at_norm <= 1.0);
        assert!((n.bracket.1 - n.bracket.0) / n.norm <= 1e-8);
        let n = luxemburg_norm(&ind(0.0, 4.0, 2.0), &p2, wide, 1e-10);
        assert!((n.norm - 4.0).abs() < 1e-7, "{n:?}");
        let n = luxemburg_norm(&ind(0.0, 1.0, 1.0), &YoungFunction::exp2m1(), wide, 1e-10);
        assert!((n.norm - 1.201_122_408_786_449_8).abs() < 1e-7, "{n:?}");
    }

    #[test]
    fn zero_and_infinite_encodings() {
        let p2 = YoungFunction::power(2.0).unwrap();
        let zero = RealFunction::zero(Interval::new(0.0, 1.0));
        let n = luxemburg_norm(&zero, &p2, Interval::new(0.0, 1.0), 1e-10);
        assert_eq!(n.norm, 0.0);

        let recip = RealFunction::new("1/x", Interval::new(0.0, 1.0), |x| 1.0 / x).with_singularities(vec![0.0]);
        let n = luxemburg_norm(&recip, &YoungFunction::power(1.0).unwrap(), Interval::new(0.0, 1.0), 1e-6);
        assert_eq!(n.norm, f64::INFINITY);
    }

    #[test]
    fn membership_examples() {
        let e = YoungFunction::exp2m1();
        let unit = Interval::new(0.0, 1.0);
        let v = membership(&ind(0.0, 1.0, 1.0), &e, unit);
        assert_eq!(v, MembershipVerdict { in_class: true, in_space: true, alpha_witness: Some(1.0) });
        let v = membership(&RealFunction::zero(unit), &e, unit);
        assert!(v.in_class);

        // θ(α·sqrt(ln 1/x)) = x^{-α²} − 1: divergent at α = 1, 1/3 at α = 1/2.
        let f = RealFunction::new("sqrt(ln(1/x))", unit, |x| (1.0 / x).ln().sqrt()).with_singularities(vec![0.0]);
        let v = membership(&f, &e, unit);
        assert_eq!(v, MembershipVerdict { in_class: false, in_space: true, alpha_witness: Some(0.5) });
        let r = modular(&f.scale(0.5), &e, unit, 1e-6);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn l1_embedding_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        let unit = Interval::new(0.0, 1.0);
        let e = l1_embedding_check(&ind(0.0, 1.0, 1.0), &p2, unit, 1e-10);
        assert!((e.c - 0.8).abs() < 1e-12 && e.holds, "{e:?}");
        assert!((e.l1_norm - 1.0).abs() < 1e-10 && (e.luxemburg_norm - 1.0).abs() < 1e-7);

        let x = RealFunction::new("x", unit, |x| x);
        let e = l1_embedding_check(&x, &p2, unit, 1e-10);
        assert!((e.l1_norm - 0.5).abs() < 1e-10);
        assert!((e.luxemburg_norm - 1.0 / 3f64.sqrt()).abs() < 1e-7);
        assert!(e.holds);

        let e = l1_embedding_check(&RealFunction::zero(unit), &p2, unit, 1e-10);
        assert!(e.holds && e.l1_norm == 0.0 && e.luxemburg_norm == 0.0);
    }
}
