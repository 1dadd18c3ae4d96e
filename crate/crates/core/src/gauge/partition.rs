use thiserror::Error;

use super::sum::NeumaierSum;
use crate::funcspace::{Interval, RealFunction};

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("partition has no cells")]
    Empty,
    #[error("cell {index} is not adjacent to its predecessor")]
    Gap { index: usize },
    #[error("tag {tag} of cell {index} lies outside {cell}")]
    TagOutsideCell { index: usize, tag: f64, cell: Interval },
}

/// One tagged cell `(t, [u, v])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedCell {
    pub tag: f64,
    pub cell: Interval,
}

/// Finite tagged subdivision of an interval, cells in left-to-right order.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedPartition {
    cells: Vec<TaggedCell>,
}

impl TaggedPartition {
    /// Validates contiguity and tag placement.
    pub fn new(cells: Vec<TaggedCell>) -> Result<Self, PartitionError> {
        if cells.is_empty() {
            return Err(PartitionError::Empty);
        }
        for (index, c) in cells.iter().enumerate() {
            if !c.cell.contains(c.tag) {
                return Err(PartitionError::TagOutsideCell { index, tag: c.tag, cell: c.cell });
            }
            if index > 0 && cells[index - 1].cell.hi != c.cell.lo {
                return Err(PartitionError::Gap { index });
            }
        }
        Ok(TaggedPartition { cells })
    }

    /// Uniform partition into `n` cells, tagged by `tag(cell)`.
    pub fn uniform(iv: Interval, n: usize, tag: impl Fn(Interval) -> f64) -> Self {
        assert!(n > 0);
        let cells = (0..n)
            .map(|i| {
                let lo = iv.lo + iv.len() * i as f64 / n as f64;
                let hi = if i + 1 == n { iv.hi } else { iv.lo + iv.len() * (i + 1) as f64 / n as f64 };
                let cell = Interval { lo, hi };
                TaggedCell { tag: tag(cell), cell }
            })
            .collect();
        TaggedPartition::new(cells).expect("uniform partition is valid")
    }

    pub fn cells(&self) -> &[TaggedCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The interval this partition covers.
    pub fn span(&self) -> Interval {
        Interval { lo: self.cells[0].cell.lo, hi: self.cells[self.cells.len() - 1].cell.hi }
    }
}

/// Point-dependent fineness `δ(t) = min(base_delta, shrink_rate · dist(t, S))`,
/// with `δ(s) = base_delta` at each declared singularity `s ∈ S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gauge {
    pub base_delta: f64,
    pub singularities: Vec<f64>,
    pub shrink_rate: f64,
}

impl Gauge {
    pub fn new(base_delta: f64, singularities: Vec<f64>, shrink_rate: f64) -> Self {
        assert!(base_delta > 0.0, "base_delta must be positive");
        assert!(shrink_rate > 0.0 && shrink_rate <= 1.0, "shrink_rate must lie in (0, 1]");
        Gauge { base_delta, singularities, shrink_rate }
    }

    /// Constant gauge.
    pub fn uniform(base_delta: f64) -> Self {
        Gauge::new(base_delta, Vec::new(), 1.0)
    }

    pub fn delta(&self, t: f64) -> f64 {
        let mut dist = f64::INFINITY;
        for &s in &self.singularities {
            if s == t {
                return self.base_delta;
            }
            dist = dist.min((t - s).abs());
        }
        self.base_delta.min(self.shrink_rate * dist)
    }

    /// Smallest `δ` over a closed interval, used to size cells.
    pub(crate) fn delta_over(&self, iv: &Interval) -> f64 {
        let mut dist = f64::INFINITY;
        for &s in &self.singularities {
            let d = if iv.contains(s) { 0.0 } else { (iv.lo - s).abs().min((iv.hi - s).abs()) };
            dist = dist.min(d);
        }
        self.base_delta.min(self.shrink_rate * dist)
    }
}

/// `Σ f(t_i) · l(I_i)`, left to right with compensation. Cells tagged at a
/// declared singularity of `f` contribute zero.
pub fn riemann_sum(f: &RealFunction, partition: &TaggedPartition) -> f64 {
    let mut acc = NeumaierSum::new();
    for c in partition.cells() {
        if f.is_singular(c.tag) {
            continue;
        }
        acc.add(f.value(c.tag) * c.cell.len());
    }
    acc.value()
}

/// Every cell sits inside the open interval `(t − δ(t), t + δ(t))`.
pub fn is_delta_fine(partition: &TaggedPartition, gauge: &Gauge) -> bool {
    partition.cells().iter().all(|c| {
        let d = gauge.delta(c.tag);
        c.tag - d < c.cell.lo && c.cell.hi < c.tag + d
    })
}
