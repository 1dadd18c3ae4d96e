use std::fmt::Write as _;
use std::io::Write as _;

use henstock_orlicz::gauge::alexiewicz_norm_with;
use henstock_orlicz::mollify::{density_csv, density_experiment};
use henstock_orlicz::orlicz::{distribution, luxemburg_norm_with};
use henstock_orlicz::verify::{default_corpus, reports_csv, run_all};
use henstock_orlicz::young::{conjugate, ConjugateError};
use henstock_orlicz::{corpus_entry, parse_expr, GaugeIntegrator, Interval, RealFunction, YoungFunction};

use crate::config::Config;

/// Exit codes.
pub const OK: u8 = 0;
pub const USAGE: u8 = 1;
pub const DIVERGED: u8 = 2;

pub type Outcome = Result<u8, String>;

/// `--fn` with its interval flags.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    pub text: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub singularities: Vec<f64>,
}

impl FunctionSpec {
    fn interval(&self) -> Result<Interval, String> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => Interval::try_new(a, b).ok_or_else(|| format!("need a < b, got a={a} b={b}")),
            _ => Err("--a and --b are required".into()),
        }
    }

    fn given_interval(&self) -> Result<Option<Interval>, String> {
        match (self.a, self.b) {
            (None, None) => Ok(None),
            _ => self.interval().map(Some),
        }
    }

    /// The function, viewed on `domain` when it is an expression.
    fn resolve(&self, domain: Interval) -> Result<RealFunction, String> {
        if let Some(name) = self.text.strip_prefix("corpus:") {
            let entry = corpus_entry(name).ok_or_else(|| format!("unknown corpus entry `{name}`"))?;
            let mut extra = entry.function.singularities().to_vec();
            extra.extend_from_slice(&self.singularities);
            return Ok(entry.function.with_singularities(extra));
        }
        let expr = parse_expr(&self.text).map_err(|e| format!("cannot parse `{}`: {e}", self.text))?;
        Ok(expr.to_function(domain, self.singularities.clone()))
    }

    /// Where the function may be non-zero: a corpus support, the hint of an
    /// expression, or else `[a, b]`.
    fn inferred_support(&self) -> Result<Interval, String> {
        if let Some(name) = self.text.strip_prefix("corpus:") {
            let entry = corpus_entry(name).ok_or_else(|| format!("unknown corpus entry `{name}`"))?;
            let s = entry.function.support();
            return if s.is_bounded() { Ok(s) } else { Err(format!("corpus entry `{name}` has unbounded support")) };
        }
        let expr = parse_expr(&self.text).map_err(|e| format!("cannot parse `{}`: {e}", self.text))?;
        match (expr.support_hint(), self.given_interval()?) {
            (Some(hint), Some(iv)) => hint.intersect(&iv).ok_or_else(|| "the support lies outside [a, b]".to_string()),
            (Some(hint), None) => Ok(hint),
            (None, Some(iv)) => Ok(iv),
            (None, None) => Err("cannot infer the support; pass --a and --b".into()),
        }
    }
}

fn young(name: &str) -> Result<YoungFunction, String> {
    YoungFunction::from_name(name).map_err(|e| e.to_string())
}

fn emit(cfg: &Config, text: &str) -> Result<(), String> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| format!("cannot write output: {e}"))
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn integrate(cfg: &Config, spec: &FunctionSpec) -> Outcome {
    let iv = spec.interval()?;
    let f = spec.resolve(iv)?;
    let r = GaugeIntegrator::new(cfg.integrator()).integrate(&f, iv, cfg.tol);
    let text = format!(
        "value,error_estimate,evaluations,converged,diverged\n{},{},{},{},{}\n",
        num(r.value),
        num(r.error_estimate),
        r.evaluations,
        r.converged,
        r.diverged
    );
    emit(cfg, &text)?;
    Ok(if r.converged { OK } else { DIVERGED })
}

pub fn norm(cfg: &Config, spec: &FunctionSpec, kind: &str, young_name: Option<&str>) -> Outcome {
    let iv = spec.interval()?;
    let integrator = GaugeIntegrator::new(cfg.integrator());
    match kind {
        "luxemburg" => {
            let y = young(young_name.ok_or("--young is required for a Luxemburg norm")?)?;
            let f = spec.resolve(iv)?;
            let r = luxemburg_norm_with(&integrator, &f, &y, iv, cfg.tol);
            emit(cfg, &format!("norm,modular_at_norm\n{},{}\n", num(r.norm), num(r.modular_at_norm)))?;
            Ok(if r.norm.is_finite() { OK } else { DIVERGED })
        }
        "alexiewicz" => {
            let f = spec.resolve(iv)?;
            match alexiewicz_norm_with(&integrator, &f, iv, cfg.tol) {
                Ok(v) => {
                    emit(cfg, &format!("norm\n{}\n", num(v)))?;
                    Ok(OK)
                }
                Err(e) => {
                    eprintln!("hkorlicz: {e}");
                    Ok(DIVERGED)
                }
            }
        }
        other => Err(format!("unknown norm type `{other}`; expected luxemburg or alexiewicz")),
    }
}

/// `Φ(t)` by numeric conjugation, widening the search range as needed.
fn conjugate_value(y: &YoungFunction, t: f64) -> f64 {
    let mut cap = 64.0;
    loop {
        match conjugate(y, t, cap) {
            Ok(v) => return v,
            Err(ConjugateError::CapReached { suggested, .. }) => cap = suggested.max(2.0 * cap),
        }
    }
}

pub fn conjugate_cmd(cfg: &Config, young_name: &str, ts: &[f64]) -> Outcome {
    let y = young(young_name)?;
    if ts.is_empty() {
        return Err("--t needs at least one value".into());
    }
    let mut text = String::from("t,phi\n");
    for &t in ts {
        let _ = writeln!(text, "{},{}", num(t), num(conjugate_value(&y, t)));
    }
    emit(cfg, &text)?;
    Ok(OK)
}

pub fn distribution_cmd(cfg: &Config, spec: &FunctionSpec, ts: &[f64]) -> Outcome {
    let iv = spec.interval()?;
    let mut ts = ts.to_vec();
    if ts.is_empty() || ts.iter().any(|t| !(*t >= 0.0)) {
        return Err("--ts needs non-negative levels".into());
    }
    ts.sort_by(f64::total_cmp);
    let f = spec.resolve(iv)?;
    let table = distribution(&f, iv, &ts);
    if table.oscillation_warning {
        eprintln!("hkorlicz: warning: the level scan saw many crossings; results may miss narrow features");
    }
    let mut text = String::from("t,measure,crossings\n");
    for ((t, m), c) in table.ts.iter().zip(&table.measures).zip(&table.crossings) {
        let _ = writeln!(text, "{},{},{c}", num(*t), num(*m));
    }
    emit(cfg, &text)?;
    Ok(OK)
}

pub fn mollify(cfg: &Config, spec: &FunctionSpec, young_name: &str, ks: &[f64]) -> Outcome {
    let y = young(young_name)?;
    if ks.is_empty() || ks.iter().any(|k| !(*k > 0.0)) {
        return Err("--ks needs positive values".into());
    }
    let support = spec.inferred_support()?;
    let f = spec.resolve(support.padded(1.0))?.with_support(support);
    match density_experiment(&f, &y, ks, cfg.tol) {
        Ok(rows) => {
            emit(cfg, &density_csv(&rows))?;
            Ok(OK)
        }
        Err(e) => {
            eprintln!("hkorlicz: {e}");
            Ok(DIVERGED)
        }
    }
}

/// CSV goes to `--out` with summaries on standard output, or to standard
/// output with summaries on standard error.
pub fn verify(cfg: &Config) -> Outcome {
    let reports = run_all(&default_corpus(), cfg.seed);
    let csv = reports_csv(&reports);
    emit(cfg, &csv)?;
    for r in &reports {
        if cfg.output_path.is_some() {
            println!("{}", r.summary_line());
        } else {
            eprintln!("{}", r.summary_line());
        }
    }
    Ok(if reports.iter().all(|r| r.all_pass()) { OK } else { DIVERGED })
}
