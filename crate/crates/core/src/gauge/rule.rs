//! Gauss–Lobatto panels viewed as tagged partitions.
//!
//! For a Lobatto rule with nodes `-1 = x_1 < … < x_n = 1` and positive
//! weights, the partial weight sums interlace with the nodes
//! (Chebyshev–Markov–Stieltjes separation): `−1 + Σ_{j<i} w_j ≤ x_i ≤ −1 + Σ_{j≤i} w_j`,
//! strictly for interior nodes. Cutting the panel at those partial sums
//! therefore yields cells `I_i` with `x_i ∈ I_i` and `l(I_i) = w_i`, so the
//! quadrature value *is* the Riemann sum of a tagged partition.
//!
//! The endpoints are nodes so that a jump cannot hide between the outermost
//! node and the panel end at every bisection level.

use std::sync::OnceLock;

use crate::funcspace::Interval;

/// Nodes per panel.
pub const PANEL_NODES: usize = 10;

#[derive(Debug, Clone)]
pub struct LobattoRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `cuts[i]` is the left end of cell `i` on `[-1, 1]`; `cuts[n] = 1`.
    cuts: Vec<f64>,
}

impl LobattoRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let m = n - 1;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        nodes[0] = -1.0;
        nodes[m] = 1.0;
        let scale = 2.0 / (n * m) as f64;
        weights[0] = scale;
        weights[m] = scale;
        // Interior nodes are the roots of P'_m. Newton from the
        // Chebyshev–Lobatto points, with P''_m from Legendre's equation.
        for i in 1..n.div_ceil(2) {
            let mut x = -(std::f64::consts::PI * i as f64 / m as f64).cos();
            for _ in 0..100 {
                let (p, d) = legendre(m, x);
                let d2 = (2.0 * x * d - (m * n) as f64 * p) / (1.0 - x * x);
                let dx = d / d2;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, _) = legendre(m, x);
            let w = scale / (p * p);
            nodes[i] = x;
            nodes[m - i] = -x;
            weights[i] = w;
            weights[m - i] = w;
        }
        if n % 2 == 1 {
            let (p, _) = legendre(m, 0.0);
            nodes[n / 2] = 0.0;
            weights[n / 2] = scale / (p * p);
        }
        let total: f64 = weights.iter().sum();
        let mut cuts = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cuts.push(-1.0);
        for w in &weights[..n - 1] {
            acc += w;
            cuts.push(-1.0 + 2.0 * acc / total);
        }
        cuts.push(1.0);
        LobattoRule { nodes, weights, cuts }
    }

    pub fn default_rule() -> &'static LobattoRule {
        static RULE: OnceLock<LobattoRule> = OnceLock::new();
        RULE.get_or_init(|| LobattoRule::new(PANEL_NODES))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Node `i` mapped onto `[lo, hi]`, endpoints exact.
    #[inline]
    pub fn node_at(&self, lo: f64, hi: f64, i: usize) -> f64 {
        if i == 0 {
            lo
        } else if i + 1 == self.nodes.len() {
            hi
        } else {
            lo + 0.5 * (hi - lo) * (self.nodes[i] + 1.0)
        }
    }

    /// Tagged cells of the panel `[lo, hi]`.
    pub fn tagged_cells(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, Interval)> + '_ {
        let half = 0.5 * (hi - lo);
        let map = move |u: f64| lo + half * (u + 1.0);
        (0..self.len()).map(move |i| {
            let cell_lo = if i == 0 { lo } else { map(self.cuts[i]) };
            let cell_hi = if i + 1 == self.len() { hi } else { map(self.cuts[i + 1]) };
            (self.node_at(lo, hi, i), Interval { lo: cell_lo, hi: cell_hi })
        })
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [2, 3, 5, 10, 16] {
            let r = LobattoRule::new(n);
            for deg in 0..(2 * n - 2) {
                let q: f64 = r.nodes().iter().zip(r.weights()).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg} q={q}");
            }
        }
    }

    #[test]
    fn nodes_interlace_with_partial_weights() {
        for n in 2..=20 {
            let r = LobattoRule::new(n);
            let cells: Vec<_> = r.tagged_cells(-1.0, 1.0).collect();
            for (i, (t, cell)) in cells.iter().enumerate() {
                if i == 0 || i + 1 == n {
                    assert!(cell.contains(*t));
                } else {
                    assert!(cell.lo < *t && *t < cell.hi, "n={n} i={i} t={t} cell={cell}");
                }
                assert!((cell.len() - r.weights()[i]).abs() < 1e-13);
            }
            assert_eq!(cells[0].0, -1.0);
            assert_eq!(cells[n - 1].0, 1.0);
            assert_eq!(cells[n - 1].1.hi, 1.0);
        }
    }
}
