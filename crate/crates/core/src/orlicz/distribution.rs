use crate::funcspace::{Interval, RealFunction};

/// More sign changes than this at one level suggests the scan is too coarse.
pub const OSCILLATION_WARNING_CROSSINGS: usize = 1024;
const SCAN_CELLS: usize = 4096;
const CROSSING_TOL: f64 = 1e-12;
const INVERSE_BISECTIONS: usize = 200;
const EQUIMEASURABLE_TOL: f64 = 1e-6;

/// `t ↦ μ{x ∈ I : |f(x)| > t}` sampled at `ts`.
#[derive(Debug, Clone)]
pub struct DistributionTable {
    pub ts: Vec<f64>,
    pub measures: Vec<f64>,
    /// Sign changes of `|f| − t` seen by the scan, per level.
    pub crossings: Vec<usize>,
    /// Some level had more than [`OSCILLATION_WARNING_CROSSINGS`] crossings.
    pub oscillation_warning: bool,
    source: Option<Source>,
}

#[derive(Debug, Clone)]
struct Source {
    f: RealFunction,
    scan: Vec<(f64, f64)>,
}

impl DistributionTable {
    /// A table built from known values; the inverse then works on the grid
    /// alone.
    pub fn from_samples(ts: Vec<f64>, measures: Vec<f64>) -> Self {
        assert_eq!(ts.len(), measures.len());
        let n = ts.len();
        DistributionTable { ts, measures, crossings: vec![0; n], oscillation_warning: false, source: None }
    }

    /// The table keeps its function and can refine between grid points.
    pub fn inverse_ready(&self) -> bool {
        self.source.is_some()
    }

    /// `η(t)` at an arbitrary level, when the source function is kept.
    pub fn measure_at(&self, t: f64) -> Option<f64> {
        self.source.as_ref().map(|s| superlevel(&s.f, &s.scan, t).0)
    }
}

/// Distribution of `|f|` over `I` at the sorted non-negative levels `ts`.
///
/// `|f| − t` is scanned on 4096 cells and each sign change is located by
/// bisection to `1e-12`. Features narrower than a scan cell can be missed;
/// `oscillation_warning` flags levels where the scan looks too coarse.
pub fn distribution(f: &RealFunction, iv: Interval, ts: &[f64]) -> DistributionTable {
    assert!(iv.is_bounded(), "distribution needs a bounded interval");
    assert!(ts.windows(2).all(|w| w[0] <= w[1]) && ts.iter().all(|&t| t >= 0.0), "levels must be sorted and non-negative");
    let scan: Vec<(f64, f64)> = (0..=SCAN_CELLS)
        .map(|j| {
            let x = if j == SCAN_CELLS { iv.hi } else { iv.lo + iv.len() * j as f64 / SCAN_CELLS as f64 };
            (x, abs_value(f, x))
        })
        .collect();
    let mut measures = Vec::with_capacity(ts.len());
    let mut crossings = Vec::with_capacity(ts.len());
    for &t in ts {
        let (m, c) = superlevel(f, &scan, t);
        measures.push(m);
        crossings.push(c);
    }
    let oscillation_warning = crossings.iter().any(|&c| c > OSCILLATION_WARNING_CROSSINGS);
    DistributionTable { ts: ts.to_vec(), measures, crossings, oscillation_warning, source: Some(Source { f: f.clone(), scan }) }
}

/// `|f(x)|`, with declared singularities above every level.
fn abs_value(f: &RealFunction, x: f64) -> f64 {
    if f.is_singular(x) {
        f64::INFINITY
    } else {
        f.value(x).abs()
    }
}

fn superlevel(f: &RealFunction, scan: &[(f64, f64)], t: f64) -> (f64, usize) {
    let mut measure = 0.0;
    let mut crossings = 0;
    for w in scan.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let (above_a, above_b) = (fa > t, fb > t);
        if above_a && above_b {
            measure += b - a;
        } else if above_a != above_b {
            crossings += 1;
            let (mut lo, mut hi) = (a, b);
            while hi - lo > CROSSING_TOL {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (abs_value(f, mid) > t) == above_a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let c = 0.5 * (lo + hi);
            measure += if above_a { c - a } else { b - c };
        }
    }
    (measure, crossings)
}

/// `η⁻¹(x) = inf{t ≥ 0 : η(t) ≤ x}`.
///
/// Finds the first grid level with `η(t) ≤ x` and, when the source is kept,
/// bisects between it and its predecessor. Returns `+∞` when no level
/// qualifies.
pub fn generalized_inverse(table: &DistributionTable, x: f64) -> f64 {
    assert!(x >= 0.0, "x must be non-negative");
    let Some(i) = table.measures.iter().position(|&m| m <= x) else {
        return f64::INFINITY;
    };
    if i == 0 || table.source.is_none() {
        return table.ts[i];
    }
    let (mut lo, mut hi) = (table.ts[i - 1], table.ts[i]);
    for _ in 0..INVERSE_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let m = table.measure_at(mid).expect("source kept");
        if m <= x {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Distribution tables agree within `1e-6` at every level.
pub fn equimeasurable(f: &RealFunction, g: &RealFunction, iv_f: Interval, iv_g: Interval, ts: &[f64]) -> bool {
    let a = distribution(f, iv_f, ts);
    let b = distribution(g, iv_g, ts);
    a.measures.iter().zip(&b.measures).all(|(x, y)| (x - y).abs() <= EQUIMEASURABLE_TOL)
}
