//! Real functions of one real variable.
//!
//! A [`RealFunction`] bundles an evaluator with the metadata the integrator
//! and the Orlicz layer need: where the function lives, where it can be
//! non-zero, which points must never be sampled, and (optionally) a closed
//! form antiderivative used as an oracle in tests.
//!
//! Evaluators are total on the real line except at declared singularities.
//! Functions tagged [`Integrability::BoundedCompactSupport`] evaluate to zero
//! outside their support, so they can be combined freely.

mod corpus;
mod expr;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use corpus::{corpus, corpus_entry, CorpusEntry, KnownQuantity, KnownValue};
pub use expr::{parse_expr, BuiltinFn, Expr, ParseError};

/// Shared evaluator type.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A closed interval `[lo, hi]`. `hi` may be `+∞` for Alexiewicz domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Panics unless `lo < hi` and `lo` is finite.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).unwrap_or_else(|| panic!("invalid interval [{lo}, {hi}]"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        if lo.is_finite() && !hi.is_nan() && hi != f64::NEG_INFINITY && lo < hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊂ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::try_new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn shifted(&self, t: f64) -> Interval {
        Interval { lo: self.lo + t, hi: self.hi + t }
    }

    /// Grows the interval by `pad` on both sides.
    pub fn padded(&self, pad: f64) -> Interval {
        Interval { lo: self.lo - pad, hi: self.hi + pad }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Integrability class of a function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrability {
    /// Absolutely integrable.
    Lebesgue,
    /// Integrable only in the non-absolute (gauge) sense.
    HkOnly,
    /// Bounded by `bound` on its support and zero outside it.
    BoundedCompactSupport { bound: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation at declared singularity {0}")]
    Singular(f64),
    #[error("{x} lies outside the domain {domain}")]
    OutOfDomain { x: f64, domain: Interval },
}

/// A real function with integrability metadata.
#[derive(Clone)]
pub struct RealFunction {
    name: String,
    evaluator: Evaluator,
    domain: Interval,
    support: Interval,
    singularities: Vec<f64>,
    antiderivative: Option<Evaluator>,
    tag: Integrability,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("support", &self.support)
            .field("singularities", &self.singularities)
            .field("antiderivative", &self.antiderivative.is_some())
            .field("tag", &self.tag)
            .finish()
    }
}

impl RealFunction {
    /// A function on `domain` with support equal to the domain and
    /// [`Integrability::Lebesgue`] tag. Use the `with_*` builders to refine.
    pub fn new<F>(name: impl Into<String>, domain: Interval, evaluator: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RealFunction {
            name: name.into(),
            evaluator: Arc::new(evaluator),
            domain,
            support: domain,
            singularities: Vec::new(),
            antiderivative: None,
            tag: Integrability::Lebesgue,
        }
    }

    /// The zero function on `domain`.
    pub fn zero(domain: Interval) -> Self {
        RealFunction::new("0", domain, |_| 0.0)
            .with_tag(Integrability::BoundedCompactSupport { bound: 0.0 })
            .with_antiderivative(|_| 0.0)
    }

    /// `c · 1_{[lo, hi)}` viewed on `domain`.
    pub fn indicator(lo: f64, hi: f64, c: f64, domain: Interval) -> Self {
        let support = Interval::new(lo, hi);
        RealFunction::new(format!("{c}*ind({lo},{hi})"), domain, move |x| {
            if lo <= x && x < hi {
                c
            } else {
                0.0
            }
        })
        .with_support(support)
        .with_tag(Integrability::BoundedCompactSupport { bound: c.abs() })
        .with_antiderivative(move |x| c * (x.clamp(lo, hi) - lo))
    }

    pub fn with_support(mut self, support: Interval) -> Self {
        self.support = support;
        self
    }

    pub fn with_singularities(mut self, mut singularities: Vec<f64>) -> Self {
        singularities.sort_by(f64::total_cmp);
        singularities.dedup();
        self.singularities = singularities;
        self
    }

    pub fn with_antiderivative<F>(mut self, antiderivative: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.antiderivative = Some(Arc::new(antiderivative));
        self
    }

    pub fn with_tag(mut self, tag: Integrability) -> Self {
        self.tag = tag;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    pub fn tag(&self) -> Integrability {
        self.tag
    }

    pub fn bound(&self) -> Option<f64> {
        match self.tag {
            Integrability::BoundedCompactSupport { bound } => Some(bound),
            _ => None,
        }
    }

    pub fn has_compact_support(&self) -> bool {
        matches!(self.tag, Integrability::BoundedCompactSupport { .. })
    }

    pub fn is_singular(&self, x: f64) -> bool {
        self.singularities.iter().any(|&s| s == x)
    }

    /// Checked evaluation.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        if self.is_singular(x) {
            return Err(EvalError::Singular(x));
        }
        if !self.domain.contains(x) {
            return Err(EvalError::OutOfDomain { x, domain: self.domain });
        }
        Ok((self.evaluator)(x))
    }

    /// Unchecked evaluation; callers keep away from singularities.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    pub fn antiderivative(&self, x: f64) -> Option<f64> {
        self.antiderivative.as_ref().map(|g| g(x))
    }

    pub fn has_antiderivative(&self) -> bool {
        self.antiderivative.is_some()
    }

    /// `g(x) = f(x − t)`.
    pub fn translate(&self, t: f64) -> RealFunction {
        let inner = Arc::clone(&self.evaluator);
        let anti = self.antiderivative.clone();
        RealFunction {
            name: format!("({})(x-{t})", self.name),
            evaluator: Arc::new(move |x| inner(x - t)),
            domain: self.domain.shifted(t),
            support: self.support.shifted(t),
            singularities: self.singularities.iter().map(|s| s + t).collect(),
            antiderivative: anti.map(|g| -> Evaluator { Arc::new(move |x| g(x - t)) }),
            tag: self.tag,
        }
    }

    /// `g(x) = f(2c − x)`, the mirror image about `c`.
    pub fn reflect(&self, center: f64) -> RealFunction {
        let inner = Arc::clone(&self.evaluator);
        let anti = self.antiderivative.clone();
        let mirror = |iv: Interval| Interval { lo: 2.0 * center - iv.hi, hi: 2.0 * center - iv.lo };
        let mut singularities: Vec<f64> =
            self.singularities.iter().map(|s| 2.0 * center - s).collect();
        singularities.sort_by(f64::total_cmp);
        RealFunction {
            name: format!("({})(reflect {center})", self.name),
            evaluator: Arc::new(move |x| inner(2.0 * center - x)),
            domain: mirror(self.domain),
            support: mirror(self.support),
            singularities,
            antiderivative: anti.map(|g| -> Evaluator { Arc::new(move |x| -g(2.0 * center - x)) }),
            tag: self.tag,
        }
    }

    /// `c · f`.
    pub fn scale(&self, c: f64) -> RealFunction {
        let inner = Arc::clone(&self.evaluator);
        let anti = self.antiderivative.clone();
        RealFunction {
            name: format!("{c}*({})", self.name),
            evaluator: Arc::new(move |x| c * inner(x)),
            domain: self.domain,
            support: self.support,
            singularities: self.singularities.clone(),
            antiderivative: anti.map(|g| -> Evaluator { Arc::new(move |x| c * g(x)) }),
            tag: match self.tag {
                Integrability::BoundedCompactSupport { bound } => {
                    Integrability::BoundedCompactSupport { bound: bound * c.abs() }
                }
                t => t,
            },
        }
    }

    /// `|f|`. The antiderivative is dropped and an HK-only tag is demoted to
    /// Lebesgue, which is a claim the integrator will test rather than trust.
    pub fn abs(&self) -> RealFunction {
        self.map(format!("|{}|", self.name), f64::abs)
    }

    /// `x ↦ op(f(x))`, keeping domain, support and singularities. The caller
    /// guarantees `op(0) = 0` if the support is meant to survive.
    pub fn map<F>(&self, name: impl Into<String>, op: F) -> RealFunction
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let inner = Arc::clone(&self.evaluator);
        RealFunction {
            name: name.into(),
            evaluator: Arc::new(move |x| op(inner(x))),
            domain: self.domain,
            support: self.support,
            singularities: self.singularities.clone(),
            antiderivative: None,
            tag: match self.tag {
                Integrability::HkOnly => Integrability::Lebesgue,
                t => t,
            },
        }
    }

    /// `α f + β g`.
    pub fn linear_combination(alpha: f64, f: &RealFunction, beta: f64, g: &RealFunction) -> RealFunction {
        let (fe, ge) = (Arc::clone(&f.evaluator), Arc::clone(&g.evaluator));
        let antiderivative = match (&f.antiderivative, &g.antiderivative) {
            (Some(fa), Some(ga)) => {
                let (fa, ga) = (Arc::clone(fa), Arc::clone(ga));
                Some(Arc::new(move |x| alpha * fa(x) + beta * ga(x)) as Evaluator)
            }
            _ => None,
        };
        let tag = match (f.tag, g.tag) {
            (
                Integrability::BoundedCompactSupport { bound: bf },
                Integrability::BoundedCompactSupport { bound: bg },
            ) => Integrability::BoundedCompactSupport { bound: alpha.abs() * bf + beta.abs() * bg },
            (Integrability::HkOnly, _) | (_, Integrability::HkOnly) => Integrability::HkOnly,
            _ => Integrability::Lebesgue,
        };
        let mut singularities = f.singularities.clone();
        singularities.extend_from_slice(&g.singularities);
        RealFunction {
            name: format!("{alpha}*({}) + {beta}*({})", f.name, g.name),
            evaluator: Arc::new(move |x| alpha * fe(x) + beta * ge(x)),
            domain: f.domain.hull(&g.domain),
            support: f.support.hull(&g.support),
            singularities: Vec::new(),
            antiderivative,
            tag,
        }
        .with_singularities(singularities)
    }

    /// Pointwise product `f · g`.
    pub fn product(f: &RealFunction, g: &RealFunction) -> RealFunction {
        let (fe, ge) = (Arc::clone(&f.evaluator), Arc::clone(&g.evaluator));
        let tag = match (f.tag, g.tag) {
            (
                Integrability::BoundedCompactSupport { bound: bf },
                Integrability::BoundedCompactSupport { bound: bg },
            ) => Integrability::BoundedCompactSupport { bound: bf * bg },
            _ => Integrability::Lebesgue,
        };
        let support = if f.has_compact_support() && g.has_compact_support() {
            f.support.intersect(&g.support).unwrap_or(f.support)
        } else {
            f.support.hull(&g.support)
        };
        let mut singularities = f.singularities.clone();
        singularities.extend_from_slice(&g.singularities);
        RealFunction {
            name: format!("({})*({})", f.name, g.name),
            evaluator: Arc::new(move |x| fe(x) * ge(x)),
            domain: f.domain.hull(&g.domain),
            support,
            singularities: Vec::new(),
            antiderivative: None,
            tag,
        }
        .with_singularities(singularities)
    }

    /// Singularities lying in the closed interval `iv`.
    pub fn singularities_in(&self, iv: &Interval) -> Vec<f64> {
        self.singularities.iter().copied().filter(|s| iv.contains(*s)).collect()
    }
}
