use super::YoungFunction;

/// Evidence for (or against) `θ(2x) ≤ k·θ(x)` on `[x_threshold, x_max]`.
///
/// The check is grid-bounded: a satisfied report is evidence at scale
/// `x_max`, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Report {
    pub satisfied: bool,
    pub witness_k: Option<f64>,
    /// Grid points of the last decade where the ratio set a new high.
    pub violation_xs: Vec<f64>,
    pub x_max: f64,
    /// `ln sup θ(2x)/θ(x)` over the grid.
    pub log_sup_ratio: f64,
    /// `ln θ(2x_max)/θ(x_max)`.
    pub log_ratio_at_max: f64,
}

const REL_SLACK: f64 = 1e-9;

/// Samples `ln θ(2x) − ln θ(x)` on a geometric grid of `grid_n` points.
///
/// Satisfied iff the supremum is not attained at `x_max` and the ratio is
/// non-increasing across the last decade of the grid (the whole grid when it
/// spans less than a decade).
pub fn delta2_check(y: &YoungFunction, x_threshold: f64, x_max: f64, grid_n: usize) -> Delta2Report {
    assert!(0.0 < x_threshold && x_threshold < x_max && grid_n >= 2);
    let (l0, l1) = (x_threshold.ln(), x_max.ln());
    let xs: Vec<f64> = (0..grid_n)
        .map(|i| if i + 1 == grid_n { x_max } else { (l0 + (l1 - l0) * i as f64 / (grid_n - 1) as f64).exp() })
        .collect();
    let lr: Vec<f64> = xs.iter().map(|&x| y.log_eval(2.0 * x) - y.log_eval(x)).collect();

    let slack = |v: f64| REL_SLACK * v.abs().max(1.0);
    let sup = lr.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let first_at_sup = lr.iter().position(|&v| v >= sup - slack(sup)).unwrap_or(0);

    let decade_start = xs.iter().position(|&x| x >= x_max / 10.0).unwrap_or(0).min(grid_n - 2);
    let mut violation_xs = Vec::new();
    for i in decade_start + 1..grid_n {
        if lr[i] > lr[i - 1] + slack(lr[i - 1]) {
            violation_xs.push(xs[i]);
        }
    }
    let satisfied = sup.is_finite() && first_at_sup + 1 < grid_n && violation_xs.is_empty();
    Delta2Report {
        satisfied,
        witness_k: satisfied.then(|| sup.exp() * (1.0 + 1e-6)),
        violation_xs,
        x_max,
        log_sup_ratio: sup,
        log_ratio_at_max: lr[grid_n - 1],
    }
}
