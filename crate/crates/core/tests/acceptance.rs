//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach the
//! test output. Exits nonzero on any unexpected failure. Checks that cannot
//! hold as literally stated are printed as `FAIL (known)` with the reason and
//! do not change the exit status.

use std::collections::BTreeSet;
use std::f64::consts::E;
use std::process::ExitCode;
use std::time::Instant;

use statrs::function::gamma::{gamma, gamma_ur};
use subharm::harness::counterexample::averaged_log_max;
use subharm::harness::rng::instance_seed;
use subharm::harness::{counterexample, generate_instance, run_suite, Instance, SuiteConfig, SuiteOutcome};
use subharm::inequalities::{lemma3_check, nevanlinna_ratio};
use subharm::{QuadratureSpec, RationalFunctionSpec};

#[derive(Default)]
struct Tally {
    failed: usize,
    known: usize,
}

impl Tally {
    fn line(&mut self, id: &str, ok: bool, detail: &str) {
        if !ok {
            self.failed += 1;
        }
        println!("[{}] {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    }

    fn known_failure(&mut self, id: &str, detail: &str) {
        self.known += 1;
        println!("[FAIL (known)] {id}: {detail}");
    }
}

fn config(seed: u64, instances: usize, checker: &str) -> SuiteConfig {
    SuiteConfig {
        seed,
        instances,
        checkers: vec![checker.into()],
        ..SuiteConfig::default()
    }
}

fn run(cfg: &SuiteConfig) -> (SuiteOutcome, f64) {
    let start = Instant::now();
    let outcome = run_suite(cfg).expect("suite runs");
    (outcome, start.elapsed().as_secs_f64())
}

fn holds_line(t: &mut Tally, id: &str, outcome: &SuiteOutcome, instances: usize, secs: f64) {
    let rows = outcome.rows.len();
    let violations = outcome.violations().count();
    let failures = outcome.failures.len();
    t.line(
        id,
        violations == 0 && failures == 0 && rows > 0,
        &format!("{instances} instances, {rows} rows, {violations} violations, {failures} failures ({secs:.1} s)"),
    );
}

fn ac1(t: &mut Tally) {
    let start = Instant::now();
    let rep = counterexample(&QuadratureSpec::default()).expect("counterexample runs");
    let secs = start.elapsed().as_secs_f64();
    let worst = |prefix: &str| {
        rep.comparisons
            .iter()
            .filter(|c| c.quantity.starts_with(prefix))
            .map(|c| if c.expected == c.actual { 0.0 } else { (c.actual - c.expected).abs() })
            .fold(0.0f64, f64::max)
    };
    t.line(
        "AC1 counterexample f = 1/z",
        rep.passed() && secs < 5.0,
        &format!(
            "{} comparisons at r = 0.1, 0.5, 1, 2, 10; max |diff| M,m,N,T = {:.1e} (tol 1e-9), \
             averaged ln+M = {:.1e} (tol 1e-6); ratio +inf at r = 1/(2k), k = 2, 4; {secs:.2} s (< 5 s)",
            rep.comparisons.len(),
            ["M(", "m(", "N(", "T("].iter().map(|p| worst(p)).fold(0.0, f64::max),
            worst("(1/r)"),
        ),
    );
    // The stated closed form 1 + ln+(1/r) only holds for r <= 1; beyond,
    // the integrand vanishes on (1, r) and the average is 1/r.
    let f = RationalFunctionSpec::reciprocal();
    for r in [2.0, 10.0] {
        let lhs = nevanlinna_ratio(&f, r, 2.0, &QuadratureSpec::default()).unwrap().lhs;
        let stated = 1.0 + (1.0 / r).ln().max(0.0);
        if (lhs - stated).abs() <= 1e-6 {
            t.line("AC1 literal 1 + ln+(1/r)", true, &format!("r = {r}: {lhs}"));
        } else {
            t.known_failure(
                "AC1 literal 1 + ln+(1/r)",
                &format!(
                    "r = {r}: computed {lhs:.12} vs stated {stated}; exact value is 1/r = {:.12} (|diff| {:.1e})",
                    averaged_log_max(r),
                    (lhs - averaged_log_max(r)).abs()
                ),
            );
        }
    }
}

fn ac2(t: &mut Tally) {
    let cfg = config(2, 200, "poisson_jensen_check");
    let (outcome, secs) = run(&cfg);
    let worst = outcome
        .rows
        .iter()
        .map(|r| (r.report.lhs - r.report.rhs).abs() / (1.0 + r.report.rhs.abs()))
        .fold(0.0f64, f64::max);
    holds_line(t, "AC2 Poisson-Jensen identity", &outcome, 200, secs);
    println!("       max |lhs - rhs| / (1 + |rhs|) = {worst:.2e} (tol 1e-8 abs + 1e-8 rel)");
}

/// Distinct atom and piece counts over the generated theorem instances.
fn coverage(cfg: &SuiteConfig, checker: &str) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut atoms = BTreeSet::new();
    let mut pieces = BTreeSet::new();
    for i in 0..cfg.instances {
        let inst = generate_instance(instance_seed(cfg.seed, checker, i as u64), checker, cfg).unwrap();
        match inst {
            Instance::MainTheoremT { function, set, .. } => {
                let c = function.canonicalize();
                atoms.insert(c.plus.charge.atoms().len() + c.minus.charge.atoms().len());
                pieces.insert(set.intervals().len());
            }
            Instance::MainTheoremM { potential, set, .. } => {
                atoms.insert(potential.charge.atoms().len());
                pieces.insert(set.intervals().len());
            }
            _ => unreachable!(),
        }
    }
    (atoms, pieces)
}

fn range(s: &BTreeSet<usize>) -> String {
    format!("{}..={}", s.first().unwrap_or(&0), s.last().unwrap_or(&0))
}

fn theorem(t: &mut Tally, id: &str, checker: &str, seed: u64, strict_ratio: bool) {
    let cfg = config(seed, 1000, checker);
    let (outcome, secs) = run(&cfg);
    holds_line(t, id, &outcome, cfg.instances, secs);
    let mut combos = BTreeSet::new();
    let mut max_ratio = 0.0f64;
    let mut max_with_margin = 0.0f64;
    for row in &outcome.rows {
        let rep = &row.report;
        combos.insert((format!("{:?}", rep.params["p"]), format!("{:?}", rep.params["k"])));
        if rep.degenerate {
            continue;
        }
        max_ratio = max_ratio.max(rep.ratio);
        max_with_margin = max_with_margin.max((rep.lhs + rep.margin()) / rep.rhs);
    }
    let (atoms, pieces) = coverage(&cfg, checker);
    let degenerate = outcome.rows.iter().filter(|r| r.report.degenerate).count();
    println!(
        "       {} (p, k) combinations, atom counts {}, pieces {}, {degenerate} rows 0/0",
        combos.len(),
        range(&atoms),
        range(&pieces)
    );
    let spans = combos.len() == 9 && atoms.contains(&1) && atoms.contains(&8) && pieces.contains(&1) && pieces.contains(&10);
    t.line(&format!("{id} parameter coverage"), spans, "p in {2, 4, inf} x k in {1.5, 2, 4}, atoms 1-8, pieces 1-10");
    let detail = format!("max ratio {max_ratio:.6e}, with error margin {max_with_margin:.6e}");
    if strict_ratio {
        t.line(&format!("{id} max ratio < 1 - 1e-6"), max_with_margin < 1.0 - 1e-6, &detail);
        t.line(&format!("{id} runtime"), secs < 600.0, &format!("{secs:.1} s (< 10 min)"));
    } else {
        println!("       {detail}");
    }
}

/// `∫_0^a ln^q(A/x) dx = A Γ(q+1, ln(A/a))`, independent of the quadrature.
fn lemma3_oracle(q: f64, big_a: f64, a: f64) -> f64 {
    big_a * gamma(q + 1.0) * gamma_ur(q + 1.0, (big_a / a).ln())
}

fn ac5(t: &mut Tally) {
    for (i, checker) in ["lemma2_check", "lemma3_check", "lemma4_check", "lemma_a_check", "main_lemma_check"]
        .into_iter()
        .enumerate()
    {
        let (outcome, secs) = run(&config(50 + i as u64, 500, checker));
        let max = outcome.summary[checker].max_ratio;
        if checker != "lemma3_check" {
            holds_line(t, &format!("AC5 {checker}"), &outcome, 500, secs);
            println!("       max ratio {max:.6e}");
            continue;
        }
        // The bound is false for some q in (0, 1): its last step uses
        // q^{⌊q⌋+1} ≤ q^{q+1}, which needs q ≥ 1. A violation is accepted as
        // that known gap only if q < 1 and the closed form confirms it.
        let (mut confirmed, mut other) = (Vec::new(), 0);
        for row in outcome.violations() {
            let p = &row.report.params;
            let exact = lemma3_oracle(p["q"], p["A"], p["a"]);
            if p["q"] < 1.0 && exact > row.report.rhs * (1.0 + 1e-9) {
                confirmed.push((p["q"], exact / row.report.rhs));
            } else {
                other += 1;
            }
        }
        let q_ge_1 = outcome.rows.iter().filter(|r| r.report.params["q"] >= 1.0);
        let (n_ge_1, held_ge_1) = q_ge_1.fold((0, 0), |(n, h), r| (n + 1, h + r.report.holds() as usize));
        let detail = format!(
            "500 instances, {} violations ({} unexplained), {} failures; q >= 1: {held_ge_1}/{n_ge_1} hold; max ratio {max:.6e} ({secs:.1} s)",
            confirmed.len() + other,
            other,
            outcome.failures.len(),
        );
        if other > 0 || !outcome.failures.is_empty() || held_ge_1 != n_ge_1 {
            t.line("AC5 lemma3_check", false, &detail);
        } else if confirmed.is_empty() {
            t.line("AC5 lemma3_check", true, &detail);
        } else {
            t.known_failure("AC5 lemma3_check 100% holds", &detail);
            for (q, ratio) in confirmed {
                println!("       q = {q:.6}: exact lhs / rhs = {ratio:.6} (closed-form oracle)");
            }
        }
    }
    let rep = lemma3_check(1.0, E, 1.0, &QuadratureSpec::default()).unwrap();
    t.line(
        "AC5 lemma 3 equality case q = 1, A = e, a = 1",
        (rep.ratio - 1.0).abs() <= 1e-10,
        &format!("ratio {:.15} (|ratio - 1| = {:.1e}, tol 1e-10)", rep.ratio, (rep.ratio - 1.0).abs()),
    );
}

fn ac6(t: &mut Tally) {
    let f = RationalFunctionSpec::reciprocal();
    for k in [2.0, 4.0] {
        let rep = nevanlinna_ratio(&f, 1.0 / (2.0 * k), k, &QuadratureSpec::default()).unwrap();
        t.line(
            &format!("AC6 ratio for 1/z at r = 1/(2k), k = {k}"),
            rep.ratio == f64::INFINITY,
            &format!("lhs {:.6}, T(kr) {}, ratio {}", rep.lhs, rep.rhs, rep.ratio),
        );
    }
    let cfg = config(6, 200, "nevanlinna_ratio");
    let (outcome, secs) = run(&cfg);
    let mut per_k: Vec<(f64, f64, usize)> = Vec::new();
    for &k in &cfg.k_values {
        let ratios: Vec<f64> = outcome
            .rows
            .iter()
            .filter(|r| r.report.params["k"] == k)
            .map(|r| r.report.ratio)
            .collect();
        let max = ratios.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);
        let infinite = ratios.iter().filter(|x| !x.is_finite()).count();
        per_k.push((k, max, infinite));
    }
    let finite = per_k.iter().all(|&(_, _, inf)| inf == 0) && outcome.failures.is_empty();
    let report: Vec<String> = per_k.iter().map(|(k, c, _)| format!("C({k}) ~ {c:.4}")).collect();
    t.line(
        "AC6 empirical C(k) for r >= 1",
        finite,
        &format!("200 rational instances, {} rows: {} ({secs:.1} s)", outcome.rows.len(), report.join(", ")),
    );
}

fn ac7(t: &mut Tally) {
    let (outcome, secs) = run(&config(7, 300, "small_intervals_ratio"));
    let constants: Vec<f64> = outcome.rows.iter().map(|r| r.report.params["a_min"]).collect();
    let a = constants.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let kappa = outcome.rows.iter().map(|r| r.report.ratio).fold(0.0f64, f64::max);
    t.line(
        "AC7 small-intervals constant a",
        a.is_finite() && a >= 1.0 && constants.len() == 300 && outcome.failures.is_empty(),
        &format!("300 instances, max minimal a = {a:.6}, max ratio {kappa:.6e} ({secs:.1} s)"),
    );
}

fn ac8(t: &mut Tally) {
    let cfg = SuiteConfig {
        seed: 8,
        instances: 5,
        ..SuiteConfig::default()
    };
    let first = run_suite(&cfg).unwrap().csv().unwrap();
    let second = run_suite(&cfg).unwrap().csv().unwrap();
    let serial = run_suite(&SuiteConfig {
        parallel: false,
        ..cfg.clone()
    })
    .unwrap()
    .csv()
    .unwrap();
    t.line(
        "AC8 byte-identical CSV",
        first == second && first == serial,
        &format!(
            "all checkers x 5 instances, {} bytes, repeat equal: {}, serial equal: {}",
            first.len(),
            first == second,
            first == serial
        ),
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut t = Tally::default();
    ac1(&mut t);
    ac2(&mut t);
    theorem(&mut t, "AC3 main theorem (T form)", "main_theorem_T", 3, true);
    theorem(&mut t, "AC4 main theorem (M form)", "main_theorem_M", 4, false);
    ac5(&mut t);
    ac6(&mut t);
    ac7(&mut t);
    ac8(&mut t);
    println!(
        "acceptance: {} unexpected failures, {} known, {:.1} s",
        t.failed,
        t.known,
        start.elapsed().as_secs_f64()
    );
    if t.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
