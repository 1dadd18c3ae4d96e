//! Adaptive gauge integration.
//!
//! The interval is cut at every declared singularity. Away from
//! singularities, panels are bisected until each is fine for the gauge and
//! its refinement error (coarse panel vs. its two halves) is within its
//! length-proportional share of the tolerance. A cell abutting a singularity
//! `s` is tagged at `s` and contributes nothing; each global refinement halves
//! every such cell and integrates the strip it releases. The run converges
//! once two successive global refinements change the sum by less than
//! the tolerance each and the accumulated error estimate is within it.
//!
//! The tolerance is absolute but never tighter than the rounding floor
//! `64ε·∫|f|`, below which no double-precision sum can be certified.

use super::partition::{Gauge, TaggedCell, TaggedPartition};
use super::rule::LobattoRule;
use super::sum::NeumaierSum;
use crate::funcspace::{Interval, RealFunction};

/// Knobs for [`GaugeIntegrator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// A running sum above this magnitude is reported as divergence.
    pub divergence_cap: f64,
    /// Maximum number of panels before giving up.
    pub cell_cap: usize,
    /// Cells per segment in the starting uniform partition.
    pub initial_cells: usize,
    /// Gauge shrink factor near singularities.
    pub shrink_rate: f64,
    /// Maximum number of global refinements of the singular cells.
    pub max_singular_refinements: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            divergence_cap: 1e12,
            cell_cap: 1 << 22,
            initial_cells: 8,
            shrink_rate: 0.5,
            max_singular_refinements: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub diverged: bool,
}

impl IntegralResult {
    /// The value when converged, `+∞`-like `None` otherwise.
    pub fn finite_value(&self) -> Option<f64> {
        self.converged.then_some(self.value)
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Abort {
    Magnitude,
    CellCap,
    NonFinite,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GaugeIntegrator {
    config: IntegratorConfig,
}

/// Integrates with the default configuration.
pub fn henstock_integrate(f: &RealFunction, iv: Interval, tol: f64) -> IntegralResult {
    GaugeIntegrator::default().integrate(f, iv, tol)
}

/// Length of recent refinement history inspected for a non-summable trend.
const TREND_WINDOW: usize = 5;
/// Relative rounding floor, `64ε`.
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;
/// Geometric-mean ratio of successive increments treated as non-summable.
const TREND_RATIO: f64 = 0.95;

impl GaugeIntegrator {
    pub fn new(config: IntegratorConfig) -> Self {
        assert!(config.initial_cells >= 4, "initial_cells must be at least 4");
        GaugeIntegrator { config }
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn integrate(&self, f: &RealFunction, iv: Interval, tol: f64) -> IntegralResult {
        self.run(f, iv, tol, false).0
    }

    /// Like [`integrate`](Self::integrate) but also returns the final tagged
    /// partition and the gauge it was built against.
    pub fn integrate_recorded(&self, f: &RealFunction, iv: Interval, tol: f64) -> (IntegralResult, TaggedPartition, Gauge) {
        let (result, cells, gauge) = self.run(f, iv, tol, true);
        let mut cells = cells.expect("recording requested");
        cells.sort_by(|a, b| a.cell.lo.total_cmp(&b.cell.lo));
        // Adjacent cells share endpoints computed from the same expressions,
        // so re-validating can only fail on a broken run.
        let partition = TaggedPartition::new(cells).expect("integrator produced a valid partition");
        (result, partition, gauge)
    }

    fn run(&self, f: &RealFunction, iv: Interval, tol: f64, record: bool) -> (IntegralResult, Option<Vec<TaggedCell>>, Gauge) {
        assert!(tol > 0.0, "tolerance must be positive");
        let cfg = &self.config;
        let n0 = cfg.initial_cells;
        let singularities = f.singularities_in(&iv);
        let gauge = Gauge::new(2.0 * iv.len() / n0 as f64, singularities.clone(), cfg.shrink_rate);
        if !iv.is_bounded() {
            let r = IntegralResult { value: f64::NAN, error_estimate: f64::INFINITY, evaluations: 0, converged: false, diverged: true };
            return (r, record.then(Vec::new), gauge);
        }

        let mut breaks = vec![iv.lo];
        breaks.extend(singularities.iter().copied().filter(|&s| s > iv.lo && s < iv.hi));
        breaks.push(iv.hi);

        let has_singular_ends = !singularities.is_empty();
        let mut run = Run {
            f,
            rule: LobattoRule::default_rule(),
            gauge: &gauge,
            cfg,
            total_len: iv.len(),
            panel_tol: if has_singular_ends { 0.5 * tol } else { tol },
            abs_floor: tol * 2f64.powi(-20),
            evaluations: 0,
            cells: 0,
            error: 0.0,
            sum_magnitude: 0.0,
            record: record.then(Vec::new),
        };

        // Pieces in positional order: per segment, left strips (filled in
        // reverse), core, right strips.
        let mut segments: Vec<Segment> = Vec::new();
        let mut outcome: Result<(), Abort> = Ok(());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let h = (b - a) / n0 as f64;
            let left = singularities.contains(&a).then_some(SingularEnd { s: a, h, dir: 1.0, strips: Vec::new() });
            let right = singularities.contains(&b).then_some(SingularEnd { s: b, h, dir: -1.0, strips: Vec::new() });
            let first = usize::from(left.is_some());
            let last = n0 - usize::from(right.is_some());
            let mut core = NeumaierSum::new();
            for i in first..last {
                let lo = a + (b - a) * i as f64 / n0 as f64;
                let hi = if i + 1 == n0 { b } else { a + (b - a) * (i + 1) as f64 / n0 as f64 };
                match run.adaptive(lo, hi) {
                    Ok(v) => core.add(v),
                    Err(e) => {
                        outcome = Err(e);
                        break;
                    }
                }
            }
            segments.push(Segment { left, core: core.value(), right });
            if outcome.is_err() {
                break;
            }
        }

        let mut increments: Vec<f64> = Vec::new();
        let mut converged_singular = !has_singular_ends;
        let mut diverging = false;
        if outcome.is_ok() && has_singular_ends {
            'refine: for _ in 0..cfg.max_singular_refinements {
                let mut inc = NeumaierSum::new();
                let mut exhausted = false;
                for seg in segments.iter_mut() {
                    for end in [seg.left.as_mut(), seg.right.as_mut()].into_iter().flatten() {
                        let h2 = 0.5 * end.h;
                        let (lo, hi) = if end.dir > 0.0 { (end.s + h2, end.s + end.h) } else { (end.s - end.h, end.s - h2) };
                        let released = if end.dir > 0.0 { lo > end.s } else { hi < end.s };
                        if !released || lo >= hi {
                            exhausted = true;
                            continue;
                        }
                        match run.adaptive(lo, hi) {
                            Ok(v) => {
                                end.strips.push(v);
                                end.h = h2;
                                inc.add(v);
                            }
                            Err(e) => {
                                outcome = Err(e);
                                break 'refine;
                            }
                        }
                    }
                }
                let inc = inc.value().abs();
                increments.push(inc);
                let k = increments.len();
                // Increments that stopped shrinking geometrically mean a
                // non-summable tail even when each one is below tol.
                diverging = non_summable(&increments);
                let tol = run.effective_tol(tol);
                if diverging && inc >= tol {
                    break;
                }
                if !diverging
                    && k > TREND_WINDOW
                    && increments[k - 1] < tol
                    && increments[k - 2] < tol
                    && run.error + increments[k - 1] + increments[k - 2] <= tol
                {
                    converged_singular = true;
                    break;
                }
                if exhausted {
                    break;
                }
            }
        }

        let mut total = NeumaierSum::new();
        for seg in &segments {
            if let Some(end) = &seg.left {
                end.strips.iter().rev().for_each(|&v| total.add(v));
            }
            total.add(seg.core);
            if let Some(end) = &seg.right {
                end.strips.iter().for_each(|&v| total.add(v));
            }
        }
        let value = total.value();
        if outcome.is_ok() && value.abs() > cfg.divergence_cap {
            outcome = Err(Abort::Magnitude);
        }

        let k = increments.len();
        let tail = match k {
            0 => 0.0,
            1 => increments[0],
            _ => increments[k - 1] + increments[k - 2],
        };
        let error_estimate = run.error + tail;
        let (converged, diverged) = match outcome {
            Err(_) => (false, true),
            Ok(()) => {
                let ok = converged_singular && error_estimate <= run.effective_tol(tol);
                (ok, !ok && diverging)
            }
        };

        if let Some(cells) = run.record.as_mut() {
            for seg in &segments {
                for end in [seg.left.as_ref(), seg.right.as_ref()].into_iter().flatten() {
                    let cell = if end.dir > 0.0 {
                        Interval { lo: end.s, hi: end.s + end.h }
                    } else {
                        Interval { lo: end.s - end.h, hi: end.s }
                    };
                    cells.push(TaggedCell { tag: end.s, cell });
                }
            }
        }

        let result = IntegralResult { value, error_estimate, evaluations: run.evaluations, converged, diverged };
        (result, run.record, gauge)
    }
}

/// Strip contributions that stopped shrinking geometrically.
fn non_summable(increments: &[f64]) -> bool {
    let k = increments.len();
    if k <= TREND_WINDOW {
        return false;
    }
    let recent = &increments[k - TREND_WINDOW - 1..];
    if recent.iter().any(|&v| v <= 0.0) {
        return false;
    }
    let mean_log_ratio = recent.windows(2).map(|w| (w[1] / w[0]).ln()).sum::<f64>() / TREND_WINDOW as f64;
    mean_log_ratio >= TREND_RATIO.ln()
}

struct SingularEnd {
    s: f64,
    /// Current length of the singular cell.
    h: f64,
    /// `+1` when the cell extends to the right of `s`.
    dir: f64,
    strips: Vec<f64>,
}

struct Segment {
    left: Option<SingularEnd>,
    core: f64,
    right: Option<SingularEnd>,
}

struct Run<'a> {
    f: &'a RealFunction,
    rule: &'static LobattoRule,
    gauge: &'a Gauge,
    cfg: &'a IntegratorConfig,
    total_len: f64,
    panel_tol: f64,
    abs_floor: f64,
    evaluations: u64,
    cells: usize,
    error: f64,
    sum_magnitude: f64,
    record: Option<Vec<TaggedCell>>,
}

impl Run<'_> {
    fn effective_tol(&self, tol: f64) -> f64 {
        tol.max(ROUNDOFF * self.sum_magnitude)
    }

    #[inline]
    fn panel(&mut self, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (i, w) in self.rule.weights().iter().enumerate() {
            acc += w * self.f.value(self.rule.node_at(lo, hi, i));
        }
        self.evaluations += self.rule.len() as u64;
        acc * half
    }

    /// Integrates one regular interval left to right.
    fn adaptive(&mut self, lo: f64, hi: f64) -> Result<f64, Abort> {
        let mut acc = NeumaierSum::new();
        let first = self.panel(lo, hi);
        let mut stack = vec![(lo, hi, first)];
        while let Some((a, b, coarse)) = stack.pop() {
            let m = 0.5 * (a + b);
            let l = self.panel(a, m);
            let r = self.panel(m, b);
            let fine = l + r;
            if !fine.is_finite() {
                return Err(Abort::NonFinite);
            }
            let err = (coarse - fine).abs();
            let len = b - a;
            let iv = Interval { lo: a, hi: b };
            let fine_enough = 0.5 * len < self.gauge.delta_over(&iv);
            let share = self.panel_tol * len / self.total_len;
            let unresolvable = m <= a || m >= b || len <= 64.0 * f64::EPSILON * a.abs().max(b.abs()) || len < 1e-300;
            let floor = self.abs_floor.max(ROUNDOFF * (l.abs() + r.abs()));
            if (fine_enough && (err <= share || err <= floor)) || unresolvable {
                acc.add(l);
                acc.add(r);
                self.error += err;
                self.cells += 1;
                self.sum_magnitude += fine.abs();
                if acc.value().abs() > self.cfg.divergence_cap {
                    return Err(Abort::Magnitude);
                }
                if let Some(cells) = self.record.as_mut() {
                    for (lo, hi) in [(a, m), (m, b)] {
                        cells.extend(self.rule.tagged_cells(lo, hi).map(|(tag, cell)| TaggedCell { tag, cell }));
                    }
                }
            } else {
                if self.cells + stack.len() + 2 > self.cfg.cell_cap {
                    return Err(Abort::CellCap);
                }
                stack.push((m, b, r));
                stack.push((a, m, l));
            }
        }
        Ok(acc.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::corpus_entry;
    use crate::gauge::partition::{is_delta_fine, riemann_sum};

    fn unit() -> Interval {
        Interval::new(0.0, 1.0)
    }

    #[test]
    fn polynomials() {
        let f = RealFunction::new("x", unit(), |x| x);
        let r = henstock_integrate(&f, unit(), 1e-9);
        assert!(r.converged && !r.diverged);
        assert!((r.value - 0.5).abs() < 1e-9);

        let f = RealFunction::new("x^2", unit(), |x| x * x);
        let r = henstock_integrate(&f, unit(), 1e-9);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-9);
        assert!(r.error_estimate <= 1e-9);
    }

    #[test]
    fn jumps_are_resolved() {
        let f = RealFunction::indicator(0.0, 1.0, 1.0, Interval::new(-5.0, 5.0));
        let r = henstock_integrate(&f, Interval::new(-1.0, 2.0), 1e-10);
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1.0).abs() < 1e-10);
        let f = RealFunction::indicator(0.1, 0.7, 1.0, Interval::new(-5.0, 5.0));
        let r = henstock_integrate(&f, Interval::new(-std::f64::consts::E, 2.0), 1e-10);
        assert!(r.converged && (r.value - 0.6).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn oscillating_derivative_recovers_antiderivative() {
        let c4 = corpus_entry("c4").unwrap().function;
        let r = henstock_integrate(&c4, unit(), 1e-6);
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1f64.sin()).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn reciprocal_diverges() {
        let f = RealFunction::new("1/x", unit(), |x| 1.0 / x).with_singularities(vec![0.0]);
        let r = henstock_integrate(&f, unit(), 1e-6);
        assert!(r.diverged && !r.converged, "{r:?}");
    }

    #[test]
    fn integrable_point_singularities() {
        let f = RealFunction::new("x^-1/2", unit(), |x| 1.0 / x.sqrt()).with_singularities(vec![0.0]);
        let r = henstock_integrate(&f, unit(), 1e-8);
        assert!(r.converged, "{r:?}");
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");

        // Interior singularity, both sides.
        let f = RealFunction::new("|x-1/3|^-1/2", unit(), |x| 1.0 / (x - 1.0 / 3.0).abs().sqrt())
            .with_singularities(vec![1.0 / 3.0]);
        let r = henstock_integrate(&f, unit(), 1e-6);
        let exact = 2.0 * (1.0f64 / 3.0).sqrt() + 2.0 * (2.0f64 / 3.0).sqrt();
        assert!(r.converged && (r.value - exact).abs() < 1e-6, "{r:?}");

        // The singular cell cannot shrink below an ulp of 1/3, whose
        // missing mass is ~1e-8: a tighter request is honestly unmet.
        let r = henstock_integrate(&f, unit(), 1e-10);
        assert!(!r.converged && !r.diverged, "{r:?}");
        assert!((r.value - exact).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn non_finite_values_are_divergence() {
        let f = RealFunction::new("1/x undeclared", Interval::new(-1.0, 1.0), |x| 1.0 / x);
        let r = henstock_integrate(&f, Interval::new(-1.0, 1.0), 1e-6);
        // No node lands on 0 exactly for this symmetric rule? The midpoint
        // bisection does not evaluate endpoints, so the run either blows
        // past the caps or reports non-convergence.
        assert!(!r.converged);
    }

    #[test]
    fn cell_cap_is_honoured() {
        let c4 = corpus_entry("c4").unwrap().function;
        let integrator = GaugeIntegrator::new(IntegratorConfig { cell_cap: 1000, ..Default::default() });
        let r = integrator.integrate(&c4, unit(), 1e-6);
        assert!(r.diverged && !r.converged);
    }

    #[test]
    fn recorded_partition_is_fine_and_reproduces_sum() {
        let cases = [
            RealFunction::new("x^2", unit(), |x| x * x),
            RealFunction::new("x^-1/2", unit(), |x| 1.0 / x.sqrt()).with_singularities(vec![0.0]),
            RealFunction::indicator(0.25, 0.5, 2.0, unit()),
        ];
        for f in &cases {
            let (r, p, g) = GaugeIntegrator::default().integrate_recorded(f, unit(), 1e-6);
            assert!(r.converged);
            assert_eq!(p.span(), unit());
            assert!(is_delta_fine(&p, &g), "{}", f.name());
            let s = riemann_sum(f, &p);
            assert!((s - r.value).abs() < 1e-12 * (1.0 + r.value.abs()), "{} {s} {}", f.name(), r.value);
        }
    }

    #[test]
    fn deterministic() {
        let c4 = corpus_entry("c3").unwrap().function;
        let a = henstock_integrate(&c4, unit(), 1e-10);
        let b = henstock_integrate(&c4, unit(), 1e-10);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a, b);
    }
}
