//! Batch property suites over a corpus and the Young-function registry.
//!
//! Every case reduces to a signed `gap` (the amount by which the checked
//! inequality is violated; negative is margin) and a per-case tolerance.
//! Cases fan out over rayon but are collected in index order, so a report is
//! a pure function of the corpus and the seed.

mod staircase;
mod suites;

use std::fmt::Write as _;

use crate::funcspace::{corpus, Integrability, Interval, RealFunction};

pub use staircase::{staircase, staircase_doubled_partial_sum, staircase_partial_sum};
pub use suites::{
    run_axioms, run_class_closure, run_density, run_holder, run_l1_embedding, run_lattice, run_modular_equiv, run_unit_ball,
    run_young, HOLDER_DEFAULT_CONSTANT,
};

/// One checked instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub description: String,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseResult {
    pub fn new(description: impl Into<String>, gap: f64, tolerance: f64) -> Self {
        // NaN never passes.
        let pass = gap <= tolerance;
        CaseResult { description: description.into(), gap, tolerance, pass }
    }

    /// A yes/no observation: gap `0` for pass, `1` for fail.
    pub fn check(description: impl Into<String>, ok: bool) -> Self {
        CaseResult::new(description, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub passes: usize,
    /// Largest gap; `−∞` for an empty suite.
    pub worst_gap: f64,
    pub worst_case: String,
    pub seed: u64,
    /// Suite-specific figures, e.g. the Hölder best constant.
    pub metrics: Vec<(String, f64)>,
    pub results: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn from_results(suite: &str, seed: u64, results: Vec<CaseResult>) -> Self {
        let passes = results.iter().filter(|r| r.pass).count();
        let mut worst_gap = f64::NEG_INFINITY;
        let mut worst_case = String::new();
        for r in &results {
            if r.gap > worst_gap || r.gap.is_nan() && !worst_gap.is_nan() {
                worst_gap = r.gap;
                worst_case = r.description.clone();
            }
        }
        SuiteReport { suite: suite.to_string(), cases: results.len(), passes, worst_gap, worst_case, seed, metrics: Vec::new(), results }
    }

    pub fn with_metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.push((name.to_string(), value));
        self
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.0 == name).map(|m| m.1)
    }

    pub fn all_pass(&self) -> bool {
        self.passes == self.cases
    }

    /// `suite: passes/cases pass, worst_gap=…, worst_case=…` plus metrics.
    pub fn summary_line(&self) -> String {
        let mut s = format!(
            "{}: {}/{} pass, worst_gap={:.6e}, worst_case={}",
            self.suite, self.passes, self.cases, self.worst_gap, self.worst_case
        );
        for (name, value) in &self.metrics {
            let _ = write!(s, ", {name}={value:.9}");
        }
        s
    }
}

/// Column header of [`reports_csv`].
pub const CSV_HEADER: &str = "suite,case_id,description,gap,pass";

/// One row per case; numbers with 17 significant digits.
pub fn reports_csv(reports: &[SuiteReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for rep in reports {
        for (i, r) in rep.results.iter().enumerate() {
            let description = r.description.replace([',', '\n', '\r'], ";");
            let _ = writeln!(out, "{},{},{},{:.16e},{}", rep.suite, i, description, r.gap, r.pass);
        }
    }
    out
}

/// The bounded, compactly supported corpus entries.
pub fn default_corpus() -> Vec<RealFunction> {
    corpus()
        .into_iter()
        .filter(|e| matches!(e.function.tag(), Integrability::BoundedCompactSupport { .. }))
        .map(|e| e.function)
        .collect()
}

/// All nine suites, in a fixed order.
pub fn run_all(corpus: &[RealFunction], seed: u64) -> Vec<SuiteReport> {
    vec![
        run_axioms(corpus, seed),
        run_holder(corpus, seed, HOLDER_DEFAULT_CONSTANT),
        run_young(seed),
        run_modular_equiv(corpus, seed),
        run_class_closure(corpus, seed),
        run_lattice(corpus, seed),
        run_unit_ball(corpus, seed),
        run_l1_embedding(corpus, seed),
        run_density(corpus, seed),
    ]
}

/// Where a function's norm is computed.
pub(crate) fn span(f: &RealFunction) -> Interval {
    f.support()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aggregation() {
        let r = SuiteReport::from_results(
            "demo",
            7,
            vec![CaseResult::new("a", -1.0, 0.0), CaseResult::new("b, c", 0.5, 1.0), CaseResult::new("d", 2.0, 1.0)],
        );
        assert_eq!((r.cases, r.passes), (3, 2));
        assert_eq!(r.worst_gap, 2.0);
        assert_eq!(r.worst_case, "d");
        let csv = reports_csv(&[r]);
        assert!(csv.starts_with("suite,case_id,description,gap,pass\n"));
        assert!(csv.contains("demo,1,b; c,5.0000000000000000e-1,true\n"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn empty_suite() {
        let r = SuiteReport::from_results("empty", 0, vec![]);
        assert_eq!((r.cases, r.passes), (0, 0));
        assert!(r.all_pass());
    }

    #[test]
    fn nan_gaps_fail() {
        assert!(!CaseResult::new("nan", f64::NAN, 1.0).pass);
    }

    #[test]
    fn default_corpus_is_bounded() {
        let names: Vec<String> = default_corpus().iter().map(|f| f.name().to_string()).collect();
        assert_eq!(names, ["c1", "c2", "c3", "c6a", "c6b"]);
    }
}
