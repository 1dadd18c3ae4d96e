//! Built-in test functions with independently known quantities.

use super::{Integrability, Interval, RealFunction};

/// A quantity attached to a corpus entry.
#[derive(Debug, Clone, PartialEq)]
pub enum KnownQuantity {
    /// `∫_a^b f`.
    Integral { a: f64, b: f64 },
    /// `sup_s |∫_a^s f|` over `s ∈ [a, b]`.
    Alexiewicz { a: f64, b: f64 },
    /// Luxemburg norm over the support for the named Young function.
    Luxemburg { young: &'static str },
    /// `F(x)` from the antiderivative oracle.
    Antiderivative { x: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownValue {
    pub quantity: KnownQuantity,
    pub value: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub function: RealFunction,
    pub known_values: Vec<KnownValue>,
}

fn known(quantity: KnownQuantity, value: f64, note: &'static str) -> KnownValue {
    KnownValue { quantity, value, note }
}

/// `F(x) = x² sin(1/x²)` with `F(0) = 0`.
pub(crate) fn oscillating_antiderivative(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x * (1.0 / (x * x)).sin()
    }
}

/// `F′(x) = 2x sin(1/x²) − (2/x) cos(1/x²)`, set to 0 at the origin.
pub(crate) fn oscillating_derivative(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let u = 1.0 / (x * x);
    2.0 * x * u.sin() - 2.0 / x * u.cos()
}

/// Piecewise-constant function on `[breaks[0], breaks[n])` with
/// `values[i]` on `[breaks[i], breaks[i+1])`.
fn step_function(name: &'static str, breaks: &'static [f64], values: &'static [f64], domain: Interval) -> RealFunction {
    assert_eq!(breaks.len(), values.len() + 1);
    let bound = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let support = Interval::new(breaks[0], breaks[breaks.len() - 1]);
    let eval = move |x: f64| {
        if x < breaks[0] || x >= breaks[breaks.len() - 1] {
            return 0.0;
        }
        let i = breaks.partition_point(|&b| b <= x) - 1;
        values[i]
    };
    let anti = move |x: f64| {
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            let (lo, hi) = (breaks[i], breaks[i + 1]);
            if x <= lo {
                break;
            }
            acc += v * (x.min(hi) - lo);
        }
        acc
    };
    RealFunction::new(name, domain, eval)
        .with_support(support)
        .with_tag(Integrability::BoundedCompactSupport { bound })
        .with_antiderivative(anti)
}

const C6A_BREAKS: [f64; 4] = [0.0, 1.0 / 3.0, 0.5, 1.0];
const C6A_VALUES: [f64; 3] = [0.5, 1.5, -1.0];
const C6B_BREAKS: [f64; 3] = [-0.25, 0.25, 0.75];
const C6B_VALUES: [f64; 2] = [2.0, -0.75];

/// The default corpus.
///
/// | name | function | tag |
/// |------|----------|-----|
/// | c1 | `x` on `[0,1]` | bounded, compact support |
/// | c2 | `1_{[0,1)}` on `[-5,5]` | bounded, compact support |
/// | c3 | `sin(πx)` on `[0,1]` | bounded, compact support |
/// | c4 | `F′`, `F(x) = x² sin(1/x²)`, on `[0,1]` | HK only |
/// | c5 | `sin(x)/x` on `[0,∞)` | HK only |
/// | c6a, c6b | step functions with rational jumps | bounded, compact support |
pub fn corpus() -> Vec<CorpusEntry> {
    use std::f64::consts::PI;
    let unit = Interval::new(0.0, 1.0);

    let c1 = RealFunction::new("c1", unit, |x| if (0.0..=1.0).contains(&x) { x } else { 0.0 })
        .with_tag(Integrability::BoundedCompactSupport { bound: 1.0 })
        .with_antiderivative(|x| 0.5 * x.clamp(0.0, 1.0).powi(2));

    let c2 = RealFunction::indicator(0.0, 1.0, 1.0, Interval::new(-5.0, 5.0)).with_name("c2");

    let c3 = RealFunction::new("c3", unit, |x| if (0.0..=1.0).contains(&x) { (PI * x).sin() } else { 0.0 })
        .with_tag(Integrability::BoundedCompactSupport { bound: 1.0 })
        .with_antiderivative(|x| (1.0 - (PI * x.clamp(0.0, 1.0)).cos()) / PI);

    let c4 = RealFunction::new("c4", unit, oscillating_derivative)
        .with_singularities(vec![0.0])
        .with_antiderivative(oscillating_antiderivative)
        .with_tag(Integrability::HkOnly);

    let c5 = RealFunction::new("c5", Interval { lo: 0.0, hi: f64::INFINITY }, |x| if x == 0.0 { 1.0 } else { x.sin() / x })
        .with_tag(Integrability::HkOnly);

    let c6a = step_function("c6a", &C6A_BREAKS, &C6A_VALUES, unit);
    let c6b = step_function("c6b", &C6B_BREAKS, &C6B_VALUES, Interval::new(-1.0, 1.0));

    vec![
        CorpusEntry {
            name: "c1",
            function: c1,
            known_values: vec![
                known(KnownQuantity::Integral { a: 0.0, b: 1.0 }, 0.5, "closed form"),
                known(KnownQuantity::Luxemburg { young: "power:2" }, 1.0 / 3f64.sqrt(), "modular 1/(3a²)"),
            ],
        },
        CorpusEntry {
            name: "c2",
            function: c2,
            known_values: vec![
                known(KnownQuantity::Integral { a: -1.0, b: 2.0 }, 1.0, "length of [0,1)"),
                known(KnownQuantity::Luxemburg { young: "power:2" }, 1.0, "modular 1/a²"),
                known(KnownQuantity::Luxemburg { young: "exp2m1" }, 1.201_122_408_786_449_8, "root of e^(1/a²) = 2"),
                known(KnownQuantity::Alexiewicz { a: -2.0, b: 2.0 }, 1.0, "ramp to 1"),
            ],
        },
        CorpusEntry {
            name: "c3",
            function: c3,
            known_values: vec![
                known(KnownQuantity::Integral { a: 0.0, b: 1.0 }, 2.0 / PI, "closed form"),
                known(KnownQuantity::Luxemburg { young: "power:2" }, std::f64::consts::FRAC_1_SQRT_2, "∫sin² = 1/2"),
            ],
        },
        CorpusEntry {
            name: "c4",
            function: c4,
            known_values: vec![
                known(KnownQuantity::Antiderivative { x: 1.0 }, 0.841_470_984_807_896_5, "F(1) = sin 1"),
                known(KnownQuantity::Integral { a: 0.0, b: 1.0 }, 0.841_470_984_807_896_5, "F(1) - F(0)"),
            ],
        },
        CorpusEntry {
            name: "c5",
            function: c5,
            known_values: vec![known(
                KnownQuantity::Alexiewicz { a: 0.0, b: 20.0 },
                1.851_937_051_982_466_2,
                "Si(π), first maximum of the sine integral",
            )],
        },
        CorpusEntry {
            name: "c6a",
            function: c6a,
            known_values: vec![known(KnownQuantity::Integral { a: 0.0, b: 1.0 }, 1.0 / 6.0 + 0.25 - 0.5, "sum of steps")],
        },
        CorpusEntry {
            name: "c6b",
            function: c6b,
            known_values: vec![known(KnownQuantity::Integral { a: -1.0, b: 1.0 }, 1.0 - 0.375, "sum of steps")],
        },
    ]
}

/// Looks up a corpus entry by name.
pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
