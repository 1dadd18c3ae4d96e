use crate::funcspace::{Integrability, Interval, RealFunction};

/// `θ_j = (j+1)²/(2j+1)`, chosen so that `θ_j·w_j = 1/j²` for the step
/// widths `w_j = 1/j² − 1/(j+1)²`.
fn level_theta(j: f64) -> f64 {
    (j + 1.0) * (j + 1.0) / (2.0 * j + 1.0)
}

fn width(j: f64) -> f64 {
    1.0 / (j * j) - 1.0 / ((j + 1.0) * (j + 1.0))
}

/// Step index of `x ∈ (0, 1]`: the `j` with `1/(j+1)² ≤ x < 1/j²`, and
/// `j = 1` at `x = 1`.
fn step_index(x: f64) -> f64 {
    let mut j = (1.0 / x.sqrt()).floor().max(1.0);
    while j > 1.0 && x >= 1.0 / (j * j) {
        j -= 1.0;
    }
    while x < 1.0 / ((j + 1.0) * (j + 1.0)) {
        j += 1.0;
    }
    j
}

/// Unbounded staircase on `(0, 1]` with levels `x_j = sqrt(ln(1 + θ_j))`.
///
/// Under `θ(u) = e^{u²} − 1` its modular is `Σ 1/j² = π²/6`, while the
/// modular of `2f` has terms `((1+θ_j)⁴ − 1)·w_j ~ j/8` and diverges.
pub fn staircase() -> RealFunction {
    let unit = Interval::new(0.0, 1.0);
    RealFunction::new("staircase", unit, |x| {
        if x > 0.0 && x <= 1.0 {
            level_theta(step_index(x)).ln_1p().sqrt()
        } else {
            0.0
        }
    })
    .with_singularities(vec![0.0])
    .with_tag(Integrability::Lebesgue)
}

/// `Σ_{j ≤ n} 1/j²`, the modular of the staircase restricted to
/// `[1/(n+1)², 1]`.
pub fn staircase_partial_sum(n: usize) -> f64 {
    (1..=n).rev().map(|j| 1.0 / (j as f64 * j as f64)).sum()
}

/// `Σ_{j ≤ n} ((1+θ_j)⁴ − 1)·w_j`, the same for `2f`.
pub fn staircase_doubled_partial_sum(n: usize) -> f64 {
    (1..=n)
        .map(|j| {
            let j = j as f64;
            ((1.0 + level_theta(j)).powi(4) - 1.0) * width(j)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_indices() {
        assert_eq!(step_index(1.0), 1.0);
        assert_eq!(step_index(0.3), 1.0);
        assert_eq!(step_index(0.25), 1.0);
        assert_eq!(step_index(0.2), 2.0);
        assert_eq!(step_index(1.0 / 9.0), 2.0);
        assert_eq!(step_index(0.1), 3.0);
        assert_eq!(step_index(1.1e-6), 953.0);
    }

    #[test]
    fn levels_match_the_target_terms() {
        for j in 1..50 {
            let j = j as f64;
            let x = level_theta(j).ln_1p().sqrt();
            assert!(((x * x).exp_m1() * width(j) * j * j - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_sums() {
        assert!((staircase_partial_sum(1_000_000) - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-6);
        // The doubled terms grow linearly, so the sums grow quadratically.
        let (a, b) = (staircase_doubled_partial_sum(1000), staircase_doubled_partial_sum(2000));
        assert!(b > 3.5 * a, "{a} {b}");
    }
}
