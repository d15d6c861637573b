//! Suite configuration, execution and CSV output.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::generate::generate_instance;
use super::instance::{Grid, CHECKERS};
use super::rng::instance_seed;
use crate::error::{Error, Result};
use crate::inequalities::BoundReport;
use crate::quadrature::QuadratureSpec;
use crate::sets::Exponent;

/// Everything that determines a suite run. Field names double as the config
/// file keys (TOML or JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Generated instances per checker.
    pub instances: usize,
    pub checkers: Vec<String>,
    pub k_values: Vec<f64>,
    pub p_values: Vec<Exponent>,
    pub b_values: Vec<f64>,
    /// Inclusive range for the number of atoms.
    pub atom_count_range: [usize; 2],
    /// Range for atom moduli.
    pub radius_range: [f64; 2],
    /// Upper bound on the number of intervals in generated sets.
    pub max_pieces: usize,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub out: Option<String>,
    /// Evaluate instances on the rayon pool; the output is identical either way.
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 10,
            checkers: CHECKERS.iter().map(|s| s.to_string()).collect(),
            k_values: vec![1.5, 2.0, 4.0],
            p_values: vec![
                Exponent::new(2.0).expect("valid"),
                Exponent::new(4.0).expect("valid"),
                Exponent::INFINITY,
            ],
            b_values: vec![0.5, 1.0],
            atom_count_range: [1, 8],
            radius_range: [0.1, 5.0],
            max_pieces: 10,
            rel_tol: None,
            abs_tol: None,
            out: None,
            parallel: true,
        }
    }
}

impl SuiteConfig {
    /// Reads a `.toml` file, or JSON for any other extension.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
        } else {
            Ok(serde_json::from_str(&text)?)
        }
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        let d = QuadratureSpec::default();
        QuadratureSpec::with_tolerances(self.rel_tol.unwrap_or(d.rel_tol), self.abs_tol.unwrap_or(d.abs_tol))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.checkers.iter().find(|c| !CHECKERS.contains(&c.as_str())) {
            return Err(Error::UnknownChecker(bad.clone()));
        }
        let [lo, hi] = self.atom_count_range;
        if lo > hi || hi == 0 {
            return Err(Error::arg(format!("bad atom_count_range [{lo}, {hi}]")));
        }
        let [rlo, rhi] = self.radius_range;
        if !(rlo > 0.0 && rlo < rhi && rhi.is_finite()) {
            return Err(Error::arg(format!("bad radius_range [{rlo}, {rhi}]")));
        }
        if self.k_values.is_empty() || self.k_values.iter().any(|&k| !(k > 1.0 && k.is_finite())) {
            return Err(Error::arg("k_values must be nonempty and > 1"));
        }
        if self.p_values.is_empty() {
            return Err(Error::arg("p_values must be nonempty"));
        }
        if self.b_values.is_empty() || self.b_values.iter().any(|&b| !(b > 0.0 && b <= 1.0)) {
            return Err(Error::arg("b_values must be nonempty and lie in (0, 1]"));
        }
        if self.max_pieces == 0 {
            return Err(Error::arg("max_pieces must be positive"));
        }
        for tol in [self.rel_tol, self.abs_tol].into_iter().flatten() {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::arg(format!("tolerances must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    fn grid(&self) -> Grid<'_> {
        Grid {
            k_values: &self.k_values,
            p_values: &self.p_values,
            b_values: &self.b_values,
        }
    }
}

/// One evaluated parameter combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub seed: u64,
    pub report: BoundReport,
}

/// A generation or evaluation failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub checker: String,
    pub index: usize,
    pub seed: u64,
    pub message: String,
}

/// Per-checker aggregates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckerSummary {
    pub rows: usize,
    pub violations: usize,
    pub failures: usize,
    pub degenerate: usize,
    /// Largest finite ratio.
    pub max_ratio: f64,
    pub infinite_ratios: usize,
    /// Largest `a_min` (small-intervals probe only).
    pub max_constant: Option<f64>,
}

/// Process exit status of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Violation = 1,
    NumericalFailures = 2,
    BadInput = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub rows: Vec<Row>,
    pub failures: Vec<Failure>,
    pub summary: BTreeMap<String, CheckerSummary>,
}

impl SuiteOutcome {
    pub fn violations(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.report.holds())
    }

    /// Violation beats the failure budget; more than 1% failed evaluations
    /// (counted against rows plus failures) gives `NumericalFailures`.
    pub fn status(&self) -> ExitStatus {
        if self.violations().next().is_some() {
            return ExitStatus::Violation;
        }
        let attempts = self.rows.len() + self.failures.len();
        if attempts > 0 && self.failures.len() as f64 > 0.01 * attempts as f64 {
            return ExitStatus::NumericalFailures;
        }
        ExitStatus::Success
    }

    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "seed", "lhs", "rhs", "ratio", "holds", "err", "params"])?;
        for row in &self.rows {
            let r = &row.report;
            w.write_record([
                r.name.clone(),
                row.seed.to_string(),
                num(r.lhs),
                num(r.rhs),
                num(r.ratio),
                r.holds().to_string(),
                num(r.error_estimate),
                r.params_json(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        crate::extended_str(x).to_string()
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {:>6} {:>6} {:>6} {:>6} {:>14} {:>6} {:>12}",
            "checker", "rows", "viol", "fail", "degen", "max ratio", "inf", "max a"
        )?;
        for (name, s) in &self.summary {
            let a = s.max_constant.map_or("-".to_string(), |a| format!("{a:.6}"));
            writeln!(
                f,
                "{:<22} {:>6} {:>6} {:>6} {:>6} {:>14.6e} {:>6} {:>12}",
                name, s.rows, s.violations, s.failures, s.degenerate, s.max_ratio, s.infinite_ratios, a
            )?;
        }
        for fail in &self.failures {
            writeln!(f, "failed: {} #{} (seed {}): {}", fail.checker, fail.index, fail.seed, fail.message)?;
        }
        write!(f, "status: {:?}", self.status())
    }
}

type Evaluated = (u64, std::result::Result<Vec<Result<BoundReport>>, Error>);

fn evaluate_one(config: &SuiteConfig, quad: &QuadratureSpec, checker: &str, index: usize) -> Evaluated {
    let seed = instance_seed(config.seed, checker, index as u64);
    let result = generate_instance(seed, checker, config).and_then(|inst| inst.run_grid(&config.grid(), quad));
    (seed, result)
}

/// Generates and evaluates `instances` instances per checker. Rows come out
/// ordered by checker (config order), then instance index, then parameter
/// combination, independent of scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    config.validate()?;
    let quad = config.quadrature();
    let jobs: Vec<(&str, usize)> = config
        .checkers
        .iter()
        .flat_map(|c| (0..config.instances).map(move |i| (c.as_str(), i)))
        .collect();

    let evaluated: Vec<Evaluated> = run_jobs(config, &quad, &jobs);

    let mut outcome = SuiteOutcome {
        rows: Vec::new(),
        failures: Vec::new(),
        summary: BTreeMap::new(),
    };
    for checker in &config.checkers {
        outcome.summary.entry(checker.clone()).or_default();
    }
    for (&(checker, index), (seed, result)) in jobs.iter().zip(evaluated) {
        let summary = outcome.summary.get_mut(checker).expect("registered");
        let results = match result {
            Ok(results) => results,
            Err(e) => vec![Err(e)],
        };
        for res in results {
            match res {
                Ok(report) => {
                    summary.rows += 1;
                    if !report.holds() {
                        summary.violations += 1;
                    }
                    if report.degenerate {
                        summary.degenerate += 1;
                    }
                    if report.ratio == f64::INFINITY {
                        summary.infinite_ratios += 1;
                    } else if report.ratio.is_finite() {
                        summary.max_ratio = summary.max_ratio.max(report.ratio);
                    }
                    if let Some(&a) = report.params.get("a_min") {
                        summary.max_constant = Some(summary.max_constant.map_or(a, |m: f64| m.max(a)));
                    }
                    outcome.rows.push(Row { seed, report });
                }
                Err(e) => {
                    summary.failures += 1;
                    outcome.failures.push(Failure {
                        checker: checker.to_string(),
                        index,
                        seed,
                        message: e.to_string(),
                    });
                }
            }
        }
    }
    Ok(outcome)
}

#[cfg(feature = "parallel")]
fn run_jobs(config: &SuiteConfig, quad: &QuadratureSpec, jobs: &[(&str, usize)]) -> Vec<Evaluated> {
    use rayon::prelude::*;
    if config.parallel {
        jobs.par_iter()
            .map(|&(c, i)| evaluate_one(config, quad, c, i))
            .collect()
    } else {
        jobs.iter().map(|&(c, i)| evaluate_one(config, quad, c, i)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(config: &SuiteConfig, quad: &QuadratureSpec, jobs: &[(&str, usize)]) -> Vec<Evaluated> {
    jobs.iter().map(|&(c, i)| evaluate_one(config, quad, c, i)).collect()
}
