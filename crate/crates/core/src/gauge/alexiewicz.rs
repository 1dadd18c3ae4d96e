use thiserror::Error;

use super::integrate::{GaugeIntegrator, IntegralResult};
use crate::funcspace::{Interval, RealFunction};

/// A partial integral failed to converge.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("integral over {interval} did not converge (diverged: {})", .result.diverged)]
pub struct DivergenceError {
    pub interval: Interval,
    pub result: IntegralResult,
}

const GRID_CELLS: usize = 256;
const ZOOM_CELLS: usize = 16;
const MAX_ZOOMS: usize = 60;
const FIRST_UPPER: f64 = 16.0;
const MAX_DOUBLINGS: usize = 24;

/// `sup_s |∫_{lo}^s f|` over `s ∈ I`. For `I.hi = +∞` the upper limit is
/// doubled until the supremum stops changing.
pub fn alexiewicz_norm(f: &RealFunction, iv: Interval, tol: f64) -> Result<f64, DivergenceError> {
    alexiewicz_norm_with(&GaugeIntegrator::default(), f, iv, tol)
}

pub fn alexiewicz_norm_with(integrator: &GaugeIntegrator, f: &RealFunction, iv: Interval, tol: f64) -> Result<f64, DivergenceError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let scan = Scanner { integrator, f, lo: iv.lo, tol };
    if iv.is_bounded() {
        return Ok(scan.sup_over(iv.lo, iv.hi, 0.0)?.0);
    }
    let mut hi = iv.lo + FIRST_UPPER;
    let (mut sup, mut end) = scan.sup_over(iv.lo, hi, 0.0)?;
    for _ in 0..MAX_DOUBLINGS {
        let next = iv.lo + 2.0 * (hi - iv.lo);
        let (s, e) = scan.sup_over(hi, next, end)?;
        let grown = s - sup;
        sup = sup.max(s);
        end = e;
        hi = next;
        if grown < tol {
            break;
        }
    }
    Ok(sup)
}

struct Scanner<'a> {
    integrator: &'a GaugeIntegrator,
    f: &'a RealFunction,
    lo: f64,
    tol: f64,
}

impl Scanner<'_> {
    fn integral(&self, a: f64, b: f64, tol: f64) -> Result<f64, DivergenceError> {
        if a == b {
            return Ok(0.0);
        }
        let interval = Interval { lo: a, hi: b };
        let result = self.integrator.integrate(self.f, interval, tol);
        if result.converged {
            Ok(result.value)
        } else {
            Err(DivergenceError { interval, result })
        }
    }

    /// Partial integrals at `n + 1` equispaced points of `[a, b]`, offset by
    /// `base = ∫_{lo}^a f`.
    fn ramp(&self, a: f64, b: f64, n: usize, base: f64, tol: f64) -> Result<Vec<(f64, f64)>, DivergenceError> {
        let mut out = Vec::with_capacity(n + 1);
        out.push((a, base));
        let mut acc = base;
        for i in 0..n {
            let u = a + (b - a) * i as f64 / n as f64;
            let v = if i + 1 == n { b } else { a + (b - a) * (i + 1) as f64 / n as f64 };
            acc += self.integral(u, v, tol)?;
            out.push((v, acc));
        }
        Ok(out)
    }

    /// Supremum of `|P(s)|` over `[a, b]` where `P(a) = base`; also returns
    /// `P(b)`.
    fn sup_over(&self, a: f64, b: f64, base: f64) -> Result<(f64, f64), DivergenceError> {
        let _ = self.lo;
        let cell_tol = self.tol / (4.0 * GRID_CELLS as f64);
        let ramp = self.ramp(a, b, GRID_CELLS, base, cell_tol)?;
        let end = ramp[GRID_CELLS].1;
        let (mut i, mut sup) = argmax(&ramp);

        // Zoom in on the neighbourhood of the running maximiser.
        let mut pts = ramp;
        for _ in 0..MAX_ZOOMS {
            let left = pts[i.saturating_sub(1)];
            let right_idx = (i + 1).min(pts.len() - 1);
            let right = pts[right_idx];
            if right.0 - left.0 <= f64::EPSILON * (1.0 + left.0.abs()) {
                break;
            }
            let zoom_tol = self.tol / (4.0 * ZOOM_CELLS as f64);
            let fine = self.ramp(left.0, right.0, ZOOM_CELLS, left.1, zoom_tol)?;
            let (j, s) = argmax(&fine);
            let change = s - sup;
            sup = sup.max(s);
            i = j;
            pts = fine;
            if change.abs() < 0.25 * self.tol {
                break;
            }
        }
        Ok((sup, end))
    }
}

fn argmax(pts: &[(f64, f64)]) -> (usize, f64) {
    let mut best = (0, pts[0].1.abs());
    for (i, &(_, v)) in pts.iter().enumerate().skip(1) {
        if v.abs() > best.1 {
            best = (i, v.abs());
        }
    }
    best
}
