use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{span, staircase, staircase_doubled_partial_sum, staircase_partial_sum, CaseResult, SuiteReport};
use crate::constants::INDICATOR_DENSITY_L2;
use crate::funcspace::{Integrability, Interval, RealFunction};
use crate::gauge::henstock_integrate;
use crate::mollify::density_experiment;
use crate::orlicz::{distribution, equimeasurable, l1_embedding_check, luxemburg_norm, modular};
use crate::young::{young_gap, ConjugatePair, YoungFunction};

/// Hölder constant the suite checks unless told otherwise.
pub const HOLDER_DEFAULT_CONSTANT: f64 = 2.0;

const NORM_TOL: f64 = 1e-10;
const ZERO_LEVEL: f64 = 1e-12;
const HOMOGENEITY_ALPHAS: [f64; 4] = [-2.0, -0.5, 0.5, 3.0];
const RANDOM_SCALINGS: usize = 50;
const RANDOM_STEP_PAIRS: usize = 10;
const CONJUGATE_REGISTRY: [&str; 5] = ["power:2", "power:3", "quad_half", "expm1ms", "exp2m1"];

type Job<'a> = Box<dyn Fn() -> CaseResult + Send + Sync + 'a>;

fn run_jobs(suite: &str, seed: u64, jobs: Vec<Job<'_>>) -> SuiteReport {
    let results = jobs.par_iter().map(|job| job()).collect();
    SuiteReport::from_results(suite, seed, results)
}

fn young(name: &str) -> YoungFunction {
    YoungFunction::from_name(name).expect("registry names parse")
}

/// Each suite draws from its own stream.
fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn norm(f: &RealFunction, y: &YoungFunction) -> f64 {
    luxemburg_norm(f, y, span(f), NORM_TOL).norm
}

fn modular_value(f: &RealFunction, y: &YoungFunction, tol: f64) -> f64 {
    let r = modular(f, y, span(f), tol);
    if r.converged {
        r.value
    } else {
        f64::INFINITY
    }
}

/// `|a − b| / |b|`, or `0` when both vanish.
fn relative_difference(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// A step function on `[0, 1]` with breaks on the grid `1/64` and values
/// on the grid `1/8` in `[−2, 2]`.
fn random_step(rng: &mut ChaCha8Rng, name: String) -> RealFunction {
    let pieces = rng.gen_range(2..=6);
    let mut breaks: Vec<f64> = (0..=pieces).map(|_| rng.gen_range(0..=64) as f64 / 64.0).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    if breaks.len() < 2 {
        breaks = vec![0.0, 1.0];
    }
    let values: Vec<f64> = (1..breaks.len()).map(|_| rng.gen_range(-16..=16) as f64 / 8.0).collect();
    let bound = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let support = Interval::new(breaks[0], breaks[breaks.len() - 1]);
    let domain = Interval::new(0.0, 1.0);
    RealFunction::new(name, domain, move |x| {
        if x < breaks[0] || x >= breaks[breaks.len() - 1] {
            return 0.0;
        }
        values[breaks.partition_point(|&b| b <= x) - 1]
    })
    .with_support(support)
    .with_tag(Integrability::BoundedCompactSupport { bound })
}

fn homogeneity_case(f: &RealFunction, y: &YoungFunction, base: f64, alpha: f64) -> CaseResult {
    let scaled = norm(&f.scale(alpha), y);
    CaseResult::new(
        format!("homogeneity {} {} alpha={alpha}", f.name(), y.name()),
        relative_difference(scaled, alpha.abs() * base),
        1e-7,
    )
}

/// `norms[i][j] = ‖fs[i]‖` under `ys[j]`.
fn norm_table(fs: &[RealFunction], ys: &[YoungFunction]) -> Vec<Vec<f64>> {
    fs.par_iter().map(|f| ys.iter().map(|y| norm(f, y)).collect()).collect()
}

/// Zero law, homogeneity and the triangle inequality of the Luxemburg norm.
pub fn run_axioms(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let youngs = ["power:2", "power:3", "exp2m1"].map(young);
    let base = norm_table(corpus, &youngs);
    let base = &base;
    let mut jobs: Vec<Job> = Vec::new();
    for (i, f) in corpus.iter().enumerate() {
        for (j, y) in youngs.iter().enumerate() {
            jobs.push(Box::new(move || {
                let eta = distribution(f, span(f), &[ZERO_LEVEL]).measures[0];
                CaseResult::check(format!("zero law {} {}", f.name(), y.name()), (base[i][j] == 0.0) == (eta == 0.0))
            }));
            for alpha in HOMOGENEITY_ALPHAS {
                jobs.push(Box::new(move || homogeneity_case(f, y, base[i][j], alpha)));
            }
        }
    }
    for (i, f) in corpus.iter().enumerate() {
        for (k, g) in corpus.iter().enumerate().skip(i) {
            for (j, y) in youngs.iter().enumerate() {
                jobs.push(Box::new(move || {
                    let sum = RealFunction::linear_combination(1.0, f, 1.0, g);
                    let lhs = norm(&sum, y);
                    CaseResult::new(format!("triangle {} {} {}", f.name(), g.name(), y.name()), lhs - base[i][j] - base[k][j], 1e-7)
                }));
            }
        }
    }
    if !corpus.is_empty() {
        let mut rng = rng(seed, 1);
        for _ in 0..RANDOM_SCALINGS {
            let i = rng.gen_range(0..corpus.len());
            let j = rng.gen_range(0..youngs.len());
            let alpha: f64 = rng.gen_range(-5.0..5.0);
            let (f, y) = (&corpus[i], &youngs[j]);
            jobs.push(Box::new(move || homogeneity_case(f, y, base[i][j], alpha)));
        }
    }
    run_jobs("axioms", seed, jobs)
}

fn conjugate_registry() -> Vec<(YoungFunction, Arc<ConjugatePair>)> {
    CONJUGATE_REGISTRY
        .par_iter()
        .map(|name| {
            let theta = young(name);
            (theta.clone(), Arc::new(ConjugatePair::new(theta)))
        })
        .collect()
}

/// `∫|fg| ≤ constant·‖f‖_θ·‖g‖_Φ` over corpus pairs and seeded random step
/// pairs. Metrics: the empirical best constant and the number of cases
/// violating the constant-one form.
pub fn run_holder(corpus: &[RealFunction], seed: u64, constant: f64) -> SuiteReport {
    assert!(constant > 0.0, "the constant must be positive");
    let registry = conjugate_registry();
    let thetas: Vec<YoungFunction> = registry.iter().map(|r| r.0.clone()).collect();
    let phis: Vec<YoungFunction> = registry.iter().map(|r| r.1.as_young()).collect();
    let mut rng = rng(seed, 2);
    let mut left: Vec<RealFunction> = corpus.to_vec();
    let mut right: Vec<RealFunction> = corpus.to_vec();
    let mut pairs: Vec<(usize, usize)> = (0..corpus.len()).flat_map(|i| (0..corpus.len()).map(move |k| (i, k))).collect();
    for i in 0..RANDOM_STEP_PAIRS {
        left.push(random_step(&mut rng, format!("step{i}a")));
        right.push(random_step(&mut rng, format!("step{i}b")));
        pairs.push((left.len() - 1, right.len() - 1));
    }
    let left_norms = norm_table(&left, &thetas);
    let right_norms = norm_table(&right, &phis);
    let cases: Vec<(usize, usize, usize)> = pairs.iter().flat_map(|&(i, k)| (0..registry.len()).map(move |j| (i, k, j))).collect();
    // (result, ratio, lhs, ‖f‖·‖g‖)
    let rows: Vec<(CaseResult, f64, f64, f64)> = cases
        .par_iter()
        .map(|&(i, k, j)| {
            let (f, g) = (&left[i], &right[k]);
            let product = RealFunction::product(f, g).abs();
            let lhs = henstock_integrate(&product, product.support(), NORM_TOL).value;
            let scale = left_norms[i][j] * right_norms[k][j];
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / scale };
            let description = format!("holder {} {} {}", f.name(), g.name(), thetas[j].name());
            (CaseResult::new(description, lhs - constant * scale, 1e-8), ratio, lhs, scale)
        })
        .collect();
    let best = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
    let constant_one_violations = rows.iter().filter(|r| r.2 > r.3 + 1e-8).count();
    SuiteReport::from_results("holder", seed, rows.into_iter().map(|r| r.0).collect())
        .with_metric("best_constant", best)
        .with_metric("constant_one_violations", constant_one_violations as f64)
}

const YOUNG_GRID: usize = 200;
const YOUNG_RANDOM: usize = 1000;
const YOUNG_S_MAX: f64 = 4.0;
const YOUNG_T_MAX: f64 = 16.0;

/// Young's inequality `θ(s) + Φ(t) ≥ st` on a grid and at random points,
/// with the equality case `(2, 2)` for `s²/2`. The gap of a batch is the
/// largest `−(θ(s) + Φ(t) − st)`.
pub fn run_young(seed: u64) -> SuiteReport {
    let registry = conjugate_registry();
    let mut rng = rng(seed, 3);
    let mut jobs: Vec<Job> = Vec::new();
    for (theta, pair) in &registry {
        let pair: &ConjugatePair = pair;
        jobs.push(Box::new(move || {
            let step = |n: f64, i: usize| n * i as f64 / (YOUNG_GRID - 1) as f64;
            let (mut worst, mut at) = (f64::NEG_INFINITY, (0.0, 0.0));
            for i in 0..YOUNG_GRID {
                for j in 0..YOUNG_GRID {
                    let (s, t) = (step(YOUNG_S_MAX, i), step(YOUNG_T_MAX, j));
                    let v = -young_gap(theta, pair, s, t);
                    if v > worst {
                        (worst, at) = (v, (s, t));
                    }
                }
            }
            CaseResult::new(format!("young grid {} worst at s={} t={}", theta.name(), at.0, at.1), worst, 1e-9)
        }));
        // Random points reach past the tabulated range of Φ.
        let points: Vec<(f64, f64)> =
            (0..YOUNG_RANDOM).map(|_| (rng.gen_range(0.0..YOUNG_S_MAX), rng.gen_range(0.0..1.25 * pair.t_max()))).collect();
        jobs.push(Box::new(move || {
            let worst = points.iter().map(|&(s, t)| -young_gap(theta, pair, s, t)).fold(f64::NEG_INFINITY, f64::max);
            CaseResult::new(format!("young random {}", theta.name()), worst, 1e-9)
        }));
        if theta.name() == "quad_half" {
            jobs.push(Box::new(move || CaseResult::new("young equality quad_half s=2 t=2", young_gap(theta, pair, 2.0, 2.0).abs(), 1e-10)));
        }
    }
    run_jobs("young", seed, jobs)
}

const EQUIV_AS: [f64; 4] = [0.5, 1.0, 2.0, 10.0];
const EQUIV_MAX_POWER: i32 = 14;
const EQUIV_MODULAR_TOL: f64 = 1e-14;
/// "Tends to zero" means the last value is at most this fraction of the
/// value at the start of the tail.
const VANISHING_RATIO: f64 = 1e-2;

/// Largest relative increase along a sequence that should not increase,
/// as a gap against `1e-9`.
fn increase_gap(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| if w[1] <= w[0] { -1e-9 } else { (w[1] - w[0]) / w[0].abs().max(f64::MIN_POSITIVE) - 1e-9 })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn vanishing_gap(first: f64, last: f64) -> f64 {
    if first == 0.0 && last == 0.0 {
        -VANISHING_RATIO
    } else {
        last / first - VANISHING_RATIO
    }
}

/// On `f_n = g/n`, `n = 1, 2, 4, …, 2^14`: the norm tends to zero, every
/// `modular(a f_n)` stays at most 1 past `n = 64a`, and tends to zero there.
/// The gap is the largest violation of any of the three trends.
pub fn run_modular_equiv(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let youngs = ["power:2", "exp2m1"].map(young);
    let ns: Vec<f64> = (0..=EQUIV_MAX_POWER).map(|k| 2f64.powi(k)).collect();
    let mut jobs: Vec<Job> = Vec::new();
    for g in corpus {
        for y in &youngs {
            let ns = &ns;
            jobs.push(Box::new(move || {
                let norms: Vec<f64> = ns.iter().map(|n| norm(&g.scale(1.0 / n), y)).collect();
                let mut gap = increase_gap(&norms).max(vanishing_gap(norms[0], norms[norms.len() - 1]));
                for a in EQUIV_AS {
                    let tail: Vec<f64> = ns
                        .iter()
                        .filter(|&&n| n >= 64.0 * a)
                        .map(|n| modular_value(&g.scale(a / n), y, EQUIV_MODULAR_TOL))
                        .collect();
                    let limsup = tail.iter().copied().fold(0.0f64, f64::max);
                    gap = gap.max(limsup - 1.0).max(increase_gap(&tail)).max(vanishing_gap(tail[0], tail[tail.len() - 1]));
                }
                CaseResult::new(format!("modular equivalence {} {}", g.name(), y.name()), gap, 0.0)
            }));
        }
    }
    run_jobs("modular_equiv", seed, jobs)
}

const STAIRCASE_TRUNCATION: usize = 20;
const STAIRCASE_TOL: f64 = 1e-4;

/// Closure of the modular class: convex combinations, doubling under
/// `power:p`, and doubling blow-up under `exp2m1` for an unbounded
/// staircase while bounded functions stay finite.
pub fn run_class_closure(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let youngs = ["power:2", "power:3", "exp2m1"].map(young);
    let exp2m1 = young("exp2m1");
    let mut rng = rng(seed, 5);
    let mut jobs: Vec<Job> = Vec::new();
    for (i, f) in corpus.iter().enumerate() {
        for g in &corpus[i..] {
            let alpha: f64 = rng.gen_range(-1.0..1.0);
            let beta = (1.0 - alpha.abs()) * rng.gen_range(-1.0..1.0);
            for y in &youngs {
                for (a, b) in [(0.5, 0.5), (alpha, beta)] {
                    // θ(|a f + b g|) ≤ |a| θ(|f|) + |b| θ(|g|) when |a| + |b| ≤ 1.
                    jobs.push(Box::new(move || {
                        let mix = RealFunction::linear_combination(a, f, b, g);
                        let lhs = modular_value(&mix, y, NORM_TOL);
                        let rhs = a.abs() * modular_value(f, y, NORM_TOL) + b.abs() * modular_value(g, y, NORM_TOL);
                        CaseResult::new(format!("convex {a}*{} + {b}*{} {}", f.name(), g.name(), y.name()), lhs - rhs, 1e-9)
                    }));
                }
            }
        }
    }
    for f in corpus {
        for p in [2.0, 3.0] {
            let y = &youngs[if p == 2.0 { 0 } else { 1 }];
            jobs.push(Box::new(move || {
                let doubled = modular_value(&f.scale(2.0), y, NORM_TOL);
                let bound = 2f64.powf(p) * modular_value(f, y, NORM_TOL);
                CaseResult::new(format!("doubling {} {}", f.name(), y.name()), doubled - bound, 1e-9 * (1.0 + bound))
            }));
        }
        let e = &exp2m1;
        jobs.push(Box::new(move || {
            let r = modular(&f.scale(2.0), e, span(f), NORM_TOL);
            CaseResult::check(format!("bounded {} stays finite under exp2m1 doubling", f.name()), r.converged)
        }));
    }
    let e = &exp2m1;
    jobs.push(Box::new(move || {
        let f = RealFunction::indicator(0.0, 1.0, 1.0, Interval::new(-1.0, 2.0));
        let r = modular(&f.scale(2.0), e, span(&f), NORM_TOL);
        let gap = if r.converged { (r.value - 4f64.exp_m1()).abs() } else { f64::INFINITY };
        CaseResult::new("indicator doubled under exp2m1 is e^4-1", gap, 1e-6)
    }));
    let truncated = Interval::new(1.0 / ((STAIRCASE_TRUNCATION + 1) as f64).powi(2), 1.0);
    for (c, oracle) in [(1.0, staircase_partial_sum(STAIRCASE_TRUNCATION)), (2.0, staircase_doubled_partial_sum(STAIRCASE_TRUNCATION))] {
        jobs.push(Box::new(move || {
            let r = modular(&staircase().scale(c), e, truncated, NORM_TOL);
            CaseResult::new(format!("staircase x{c} truncated at j={STAIRCASE_TRUNCATION} against series"), relative_difference(r.value, oracle), 1e-8)
        }));
    }
    jobs.push(Box::new(move || {
        let f = staircase();
        let unit = Interval::new(0.0, 1.0);
        let base = modular(&f, e, unit, STAIRCASE_TOL);
        let doubled = modular(&f.scale(2.0), e, unit, STAIRCASE_TOL);
        let target = std::f64::consts::PI.powi(2) / 6.0;
        let ok = base.converged && (base.value - target).abs() <= 10.0 * STAIRCASE_TOL && doubled.diverged;
        CaseResult::check("staircase: modular finite and doubled modular diverges", ok)
    }));
    run_jobs("class_closure", seed, jobs)
}

const SOLIDITY_GRID: usize = 4096;

/// `|f| ≤ |g|` at the midpoints of a fine grid over both supports.
fn dominated(f: &RealFunction, g: &RealFunction) -> bool {
    let iv = f.support().hull(&g.support());
    (0..SOLIDITY_GRID).all(|i| {
        let x = iv.lo + iv.len() * (i as f64 + 0.5) / SOLIDITY_GRID as f64;
        f.value(x).abs() <= g.value(x).abs()
    })
}

/// Solidity and rearrangement invariance of the norm.
pub fn run_lattice(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let youngs = ["power:2", "exp2m1"].map(young);
    let mut rng = rng(seed, 6);
    let mut pairs: Vec<(RealFunction, RealFunction)> = Vec::new();
    for f in corpus {
        for lambda in [0.25, 0.9] {
            pairs.push((f.scale(lambda), f.clone()));
        }
        let s = f.support();
        let cut = RealFunction::indicator(s.lo, s.mid(), 1.0, f.domain());
        pairs.push((RealFunction::product(f, &cut).with_name(format!("{} on left half", f.name())), f.clone()));
        for g in corpus {
            if f.name() != g.name() && dominated(f, g) {
                pairs.push((f.clone(), g.clone()));
            }
        }
    }
    let mut images: Vec<(RealFunction, RealFunction)> = Vec::new();
    for f in corpus {
        let s = f.support();
        images.push((f.clone(), f.reflect(s.mid())));
        let center: f64 = rng.gen_range(-2.0..2.0);
        images.push((f.clone(), f.reflect(center)));
        let shift: f64 = rng.gen_range(-3.0..3.0);
        images.push((f.clone(), f.translate(shift)));
    }
    let mut jobs: Vec<Job> = Vec::new();
    for y in &youngs {
        for (f, g) in &pairs {
            jobs.push(Box::new(move || CaseResult::new(format!("solidity {} <= {} {}", f.name(), g.name(), y.name()), norm(f, y) - norm(g, y), 1e-8)));
        }
        for (f, g) in &images {
            jobs.push(Box::new(move || {
                let top = f.bound().unwrap_or(1.0).max(f64::MIN_POSITIVE);
                let ts: Vec<f64> = (0..=32).map(|i| top * i as f64 / 32.0).collect();
                let gap = if equimeasurable(f, g, span(f), span(g), &ts) { relative_difference(norm(g, y), norm(f, y)) } else { f64::INFINITY };
                CaseResult::new(format!("symmetry {} {}", g.name(), y.name()), gap, 1e-6)
            }));
        }
    }
    run_jobs("lattice", seed, jobs)
}

const CIRCLED_LAMBDAS: [f64; 4] = [-1.0, -0.5, 0.3, 0.9];

/// `modular(f/‖f‖) ≤ 1` and the unit set is circled: `modular(λu) ≤ 1`
/// for `|λ| ≤ 1` when `modular(u) ≤ 1`.
pub fn run_unit_ball(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let youngs = CONJUGATE_REGISTRY.map(young);
    let mut jobs: Vec<Job> = Vec::new();
    for f in corpus {
        for y in &youngs {
            jobs.push(Box::new(move || {
                let n = norm(f, y);
                let gap = if n > 0.0 && n.is_finite() { modular_value(&f.scale(1.0 / n), y, NORM_TOL) - 1.0 } else { -1.0 };
                CaseResult::new(format!("modular at unit norm {} {}", f.name(), y.name()), gap, 1e-8)
            }));
            for lambda in CIRCLED_LAMBDAS {
                jobs.push(Box::new(move || {
                    let n = norm(f, y);
                    let u = if n > 0.0 && n.is_finite() { f.scale(1.0 / n) } else { f.clone() };
                    let gap = modular_value(&u.scale(lambda), y, NORM_TOL) - 1.0;
                    CaseResult::new(format!("circled {} {} lambda={lambda}", f.name(), y.name()), gap, 1e-9)
                }));
            }
        }
    }
    run_jobs("unit_ball", seed, jobs)
}

/// `c‖f‖₁ ≤ ‖f‖_θ` with `c = 1/(1 + Φ(1)·μ(I))`.
pub fn run_l1_embedding(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let youngs = CONJUGATE_REGISTRY.map(young);
    let mut jobs: Vec<Job> = Vec::new();
    for f in corpus {
        for y in &youngs {
            jobs.push(Box::new(move || {
                let e = l1_embedding_check(f, y, span(f), NORM_TOL);
                CaseResult::new(format!("l1 embedding {} {}", f.name(), y.name()), e.c * e.l1_norm - e.luxemburg_norm, 1e-9)
            }));
        }
    }
    run_jobs("l1_embedding", seed, jobs)
}

const DENSITY_KS: [f64; 5] = [2.0, 4.0, 8.0, 16.0, 32.0];
const DENSITY_TOL: f64 = 1e-9;

/// `‖M_k ∗ f − f‖` under `power:2` decreases in `k` and halves between the
/// first and last `k`; the indicator of `[0, 1]` also matches its oracle
/// table within 5%.
pub fn run_density(corpus: &[RealFunction], seed: u64) -> SuiteReport {
    let p2 = young("power:2");
    let y = &p2;
    let mut jobs: Vec<Job> = Vec::new();
    for f in corpus {
        jobs.push(Box::new(move || {
            let gap = match density_experiment(f, y, &DENSITY_KS, DENSITY_TOL) {
                Ok(rows) => {
                    let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
                    let rises = norms.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
                    rises.max(norms[norms.len() - 1] - 0.5 * norms[0])
                }
                Err(_) => f64::INFINITY,
            };
            CaseResult::new(format!("density decay {}", f.name()), gap, 0.0)
        }));
    }
    jobs.push(Box::new(move || {
        let ind = RealFunction::indicator(0.0, 1.0, 1.0, Interval::new(-1.0, 2.0));
        let gap = match density_experiment(&ind, y, &DENSITY_KS, DENSITY_TOL) {
            Ok(rows) => rows.iter().zip(INDICATOR_DENSITY_L2).map(|(r, (_, want))| relative_difference(r.norm, want)).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        CaseResult::new("density indicator against oracle table", gap, 0.05)
    }));
    run_jobs("density", seed, jobs)
}
