//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use henstock_orlicz::constants::INDICATOR_DENSITY_L2;
use henstock_orlicz::mollify::density_experiment;
use henstock_orlicz::orlicz::{distribution, equimeasurable, generalized_inverse, luxemburg_norm, modular};
use henstock_orlicz::verify::{default_corpus, run_axioms, run_holder, run_l1_embedding, run_modular_equiv, run_young};
use henstock_orlicz::young::{conjugate, delta2_check, young_gap};
use henstock_orlicz::{corpus_entry, henstock_integrate, ConjugatePair, Interval, RealFunction, YoungFunction};

const SEED: u64 = 42;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn c1_integrator_accuracy() -> Verdict {
    let unit = Interval::new(0.0, 1.0);
    let mut worst = (0.0f64, 0.0f64);
    for (f, want) in [
        (RealFunction::new("x", unit, |x| x), 0.5),
        (RealFunction::new("x^2", unit, |x| x * x), 1.0 / 3.0),
    ] {
        let start = Instant::now();
        let r = henstock_integrate(&f, unit, 1e-10);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        worst = (worst.0.max((r.value - want).abs()), worst.1.max(ms));
    }
    verdict(worst.0 <= 1e-9 && worst.1 < 50.0, format!("max error {:.1e}, slowest {:.2} ms", worst.0, worst.1))
}

fn c2_non_absolute() -> Verdict {
    let c4 = corpus_entry("c4").unwrap().function;
    let unit = Interval::new(0.0, 1.0);
    let start = Instant::now();
    let r = henstock_integrate(&c4, unit, 1e-6);
    let abs = modular(&c4, &YoungFunction::power(1.0).unwrap(), unit, 1e-6);
    let secs = start.elapsed().as_secs_f64();
    let err = (r.value - 1f64.sin()).abs();
    verdict(
        r.converged && err <= 1e-6 && abs.diverged && secs < 10.0,
        format!("value {:.10}, error {err:.1e}, |F'| diverged={}, {secs:.2} s", r.value, abs.diverged),
    )
}

fn c3_closed_form_norms() -> Verdict {
    let wide = Interval::new(-1.0, 5.0);
    let mut worst = 0.0f64;
    for (c, l, p) in [(1.0, 1.0, 2.0), (2.0, 4.0, 2.0), (1.0, 1.0, 3.0)] {
        let f = RealFunction::indicator(0.0, l, c, wide);
        let got = luxemburg_norm(&f, &YoungFunction::power(p).unwrap(), wide, 1e-10).norm;
        worst = worst.max((got - c * l.powf(1.0 / p)).abs());
    }
    let ind = RealFunction::indicator(0.0, 1.0, 1.0, wide);
    let got = luxemburg_norm(&ind, &YoungFunction::exp2m1(), wide, 1e-10).norm;
    worst = worst.max((got - 1.0 / std::f64::consts::LN_2.sqrt()).abs());
    verdict(worst <= 1e-7, format!("max error {worst:.1e}"))
}

fn c4_norm_axioms(corpus: &[RealFunction]) -> Verdict {
    let r = run_axioms(corpus, SEED);
    verdict(r.all_pass() && r.worst_gap <= 1e-7, r.summary_line())
}

fn c5_modular_at_norm(corpus: &[RealFunction]) -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for f in corpus {
        for name in ["power:2", "power:3", "exp2m1", "expm1ms", "quad_half"] {
            let y = YoungFunction::from_name(name).unwrap();
            let n = luxemburg_norm(f, &y, f.support(), 1e-10).norm;
            if n > 0.0 && n.is_finite() {
                worst = worst.max(modular(&f.scale(1.0 / n), &y, f.support(), 1e-10).value);
            }
        }
    }
    verdict(worst <= 1.0 + 1e-8, format!("max modular(f/|f|) = {worst:.12}"))
}

fn c6_holder(corpus: &[RealFunction]) -> Verdict {
    let two = run_holder(corpus, SEED, 2.0);
    let violations = two.metric("constant_one_violations").unwrap_or(0.0);

    // f = g = 1_{[0,1]}, θ(x) = x²: ∫fg = 1, ‖f‖_θ = 1, ‖g‖_Φ = 1/2.
    let wide = Interval::new(-1.0, 2.0);
    let ind = RealFunction::indicator(0.0, 1.0, 1.0, wide);
    let theta = YoungFunction::power(2.0).unwrap();
    let phi = Arc::new(ConjugatePair::new(theta.clone())).as_young();
    let lhs = henstock_integrate(&RealFunction::product(&ind, &ind), wide, 1e-12).value;
    let ratio = lhs / (luxemburg_norm(&ind, &theta, wide, 1e-12).norm * luxemburg_norm(&ind, &phi, wide, 1e-12).norm);

    verdict(
        two.all_pass() && (ratio - 2.0).abs() <= 1e-6 && violations >= 1.0,
        format!("constant 2: {}/{} pass; ratio-2 case {ratio:.9}; constant-1 violations {violations}", two.passes, two.cases),
    )
}

fn c7_young_inequality() -> Verdict {
    let r = run_young(SEED);
    let q = ConjugatePair::new(YoungFunction::quad_half());
    let eq = young_gap(&q.theta, &q, 2.0, 2.0).abs();
    verdict(r.all_pass() && eq <= 1e-10, format!("{}; equality gap {eq:.1e}", r.summary_line()))
}

fn c8_delta2() -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for p in [2.0, 3.0] {
        let r = delta2_check(&YoungFunction::power(p).unwrap(), 1.0, 1e4, 400);
        let k = r.witness_k.unwrap_or(f64::NAN);
        pass &= r.satisfied && (k / 2f64.powf(p) - 1.0).abs() < 0.01;
        detail.push(format!("power:{p} k={k:.6}"));
    }
    let e = delta2_check(&YoungFunction::exp2m1(), 1.0, 10.0, 400);
    pass &= !e.satisfied;
    detail.push(format!("exp2m1 satisfied={} ln ratio at 10 = {:.1}", e.satisfied, e.log_ratio_at_max));
    verdict(pass, detail.join(", "))
}

fn c9_conjugation() -> Verdict {
    let cases: [(YoungFunction, fn(f64) -> f64); 3] = [
        (YoungFunction::quad_half(), |t| 0.5 * t * t),
        (YoungFunction::power(3.0).unwrap(), |t| 2.0 * (t / 3.0).powf(1.5)),
        (YoungFunction::expm1ms(), |t| (1.0 + t) * t.ln_1p() - t),
    ];
    let mut worst = 0.0f64;
    for (y, phi) in &cases {
        for i in 0..50 {
            let t = 0.1 + 0.2 * i as f64;
            worst = worst.max((conjugate(y, t, 1e3).unwrap() - phi(t)).abs());
        }
    }
    verdict(worst <= 1e-6, format!("max error {worst:.1e} over 150 points"))
}

fn c10_distribution() -> Verdict {
    let s = RealFunction::new("sin", Interval::new(0.0, 1.0), |x| (std::f64::consts::PI * x).sin());
    let eta = distribution(&s, Interval::new(0.0, 1.0), &[0.5]).measures[0];
    let c1 = corpus_entry("c1").unwrap().function;
    let ts: Vec<f64> = (0..=128).map(|i| i as f64 / 128.0).collect();
    let table = distribution(&c1, c1.support(), &ts);
    let round_trip = (0..=20)
        .map(|i| {
            let x = i as f64 / 20.0;
            (table.measure_at(generalized_inverse(&table, x)).unwrap() - x).abs()
        })
        .fold(0.0, f64::max);
    verdict(
        (eta - 2.0 / 3.0).abs() <= 1e-6 && round_trip <= 1.0 / 128.0,
        format!("eta(1/2) = {eta:.10}, round-trip error {round_trip:.1e}"),
    )
}

fn c11_symmetry(corpus: &[RealFunction]) -> Verdict {
    let ts: Vec<f64> = (0..=20).map(|i| i as f64 / 10.0).collect();
    let mut worst = 0.0f64;
    let mut equi = true;
    for f in corpus {
        for y in [YoungFunction::power(2.0).unwrap(), YoungFunction::exp2m1()] {
            let base = luxemburg_norm(f, &y, f.support(), 1e-10).norm;
            for g in [f.reflect(0.5), f.translate(3.25)] {
                equi &= equimeasurable(f, &g, f.support(), g.support(), &ts);
                worst = worst.max((luxemburg_norm(&g, &y, g.support(), 1e-10).norm - base).abs());
            }
        }
    }
    verdict(equi && worst <= 1e-6, format!("max norm difference {worst:.1e}"))
}

fn c12_density() -> Verdict {
    let ind = RealFunction::indicator(0.0, 1.0, 1.0, Interval::new(-5.0, 5.0));
    let ks: Vec<f64> = INDICATOR_DENSITY_L2.iter().map(|r| r.0).collect();
    let start = Instant::now();
    let rows = match density_experiment(&ind, &YoungFunction::power(2.0).unwrap(), &ks, 1e-9) {
        Ok(rows) => rows,
        Err(e) => return verdict(false, e.to_string()),
    };
    let secs = start.elapsed().as_secs_f64();
    let decreasing = rows.windows(2).all(|w| w[1].norm < w[0].norm);
    let worst = rows.iter().zip(INDICATOR_DENSITY_L2).map(|(r, (_, want))| (r.norm / want - 1.0).abs()).fold(0.0, f64::max);
    verdict(
        decreasing && rows[4].norm < rows[0].norm / 2.0 && worst <= 0.05 && secs < 60.0,
        format!("norms {:.4} .. {:.4}, max oracle deviation {:.2}%, {secs:.2} s", rows[0].norm, rows[4].norm, 100.0 * worst),
    )
}

fn c13_equivalence_and_embedding(corpus: &[RealFunction]) -> Verdict {
    let eq = run_modular_equiv(corpus, SEED);
    let l1 = run_l1_embedding(corpus, SEED);
    verdict(eq.all_pass() && l1.all_pass(), format!("{} | {}", eq.summary_line(), l1.summary_line()))
}

fn c14_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("verify{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_hkorlicz"))
            .args(["verify", "--seed", "42", "--out"])
            .arg(&out)
            .output()
            .expect("run hkorlicz")
            .status;
        if status.code() != Some(0) {
            return verdict(false, format!("verify exited with {status}"));
        }
        csvs.push(std::fs::read(&out).unwrap());
    }
    verdict(csvs[0] == csvs[1], format!("{} bytes, identical={}", csvs[0].len(), csvs[0] == csvs[1]))
}

fn main() {
    let corpus = default_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("integrator accuracy", Box::new(c1_integrator_accuracy)),
        ("non-absolute integrand", Box::new(c2_non_absolute)),
        ("Luxemburg closed forms", Box::new(c3_closed_form_norms)),
        ("norm axioms", Box::new(|| c4_norm_axioms(&corpus))),
        ("modular at the norm", Box::new(|| c5_modular_at_norm(&corpus))),
        ("Hölder inequality", Box::new(|| c6_holder(&corpus))),
        ("Young's inequality", Box::new(c7_young_inequality)),
        ("Δ₂ diagnostics", Box::new(c8_delta2)),
        ("conjugation", Box::new(c9_conjugation)),
        ("distribution and inverse", Box::new(c10_distribution)),
        ("symmetry", Box::new(|| c11_symmetry(&corpus))),
        ("density", Box::new(c12_density)),
        ("modular-norm equivalence and L1 embedding", Box::new(|| c13_equivalence_and_embedding(&corpus))),
        ("determinism", Box::new(c14_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.pass);
        println!("criterion {:>2} {}: {} ({})", i + 1, if v.pass { "PASS" } else { "FAIL" }, name, v.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
