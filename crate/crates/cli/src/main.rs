//! `subharm`: characteristics, single checks, seeded suites and the `1/z`
//! counterexample from the command line.
//!
//! Exit codes: 0 success, 1 violation or mismatch, 2 numerical failure,
//! 3 bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use subharm::characteristics::{
    characteristic_t, circle_mean, circle_mean_nonlinear, counting_integral, max_of_part, nevanlinna, radial_count,
};
use subharm::harness::{counterexample, run_suite, ExitStatus, Instance, SuiteConfig};
use subharm::{DeltaSubharmonicFn, Error, Part, QuadratureSpec, RationalFunctionSpec};

#[derive(Parser)]
#[command(name = "subharm", version, about = "Characteristics and small-set bound checkers for log-potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print characteristics of a function file (δ-subharmonic or rational).
    Compute {
        #[arg(long = "fn", value_name = "FILE")]
        function: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long = "R")]
        big_r: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        /// Relative quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run one checker on an instance file and print its report.
    Check {
        name: String,
        #[arg(long, value_name = "FILE")]
        instance: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Generate and check seeded instances; writes CSV.
    Suite {
        /// Config file (.toml, otherwise JSON); flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        instances: Option<usize>,
        /// Comma-separated checker names.
        #[arg(long, value_delimiter = ',')]
        checkers: Option<Vec<String>>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        /// Evaluate instances on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Reproduce the f = 1/z closed forms and the infinite ratio.
    Counterexample,
}

fn status_of(err: &Error) -> ExitStatus {
    match err {
        Error::Quadrature { .. } | Error::Generation { .. } => ExitStatus::NumericalFailures,
        _ => ExitStatus::BadInput,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(status_of(&err).code() as u8)
}

fn quadrature(tol: Option<f64>) -> Result<QuadratureSpec, Error> {
    let mut quad = QuadratureSpec::default();
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("--tol must be positive, got {t}")));
        }
        quad.rel_tol = t;
    }
    Ok(quad)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Accepts a function document, or a rational spec (converted via `ln|f|`).
fn load_function(text: &str) -> Result<(DeltaSubharmonicFn, Option<RationalFunctionSpec>), Error> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("zeros").is_some() || value.get("poles").is_some() {
        let f: RationalFunctionSpec = serde_json::from_value(value)?;
        Ok((f.ln_abs(), Some(f)))
    } else {
        Ok((serde_json::from_value(value)?, None))
    }
}

fn ext(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn compute(
    path: &Path,
    r: f64,
    r0: Option<f64>,
    big_r: Option<f64>,
    k: Option<f64>,
    tol: Option<f64>,
) -> Result<Value, Error> {
    let quad = quadrature(tol)?;
    let (u, rational) = load_function(&read(path)?)?;
    let canonical = u.canonicalize();
    let mut out = Map::new();
    out.insert("r".into(), json!(r));
    out.insert("M_U".into(), ext(max_of_part(&u, Part::Identity, r)?.value));
    out.insert("M_U+".into(), ext(max_of_part(&u, Part::Positive, r)?.value));
    out.insert("M_|U|".into(), ext(max_of_part(&u, Part::Abs, r)?.value));
    out.insert("C_U".into(), ext(circle_mean(&u, r)?.value));
    if r > 0.0 {
        for (key, part) in [("C_U+", Part::Positive), ("C_U-", Part::Negative), ("C_|U|", Part::Abs)] {
            out.insert(key.into(), ext(circle_mean_nonlinear(&u, part, r, &quad)?.value));
        }
    }
    out.insert("plus_rad".into(), json!(radial_count(&canonical.plus.charge, r)));
    out.insert("minus_rad".into(), json!(radial_count(&canonical.minus.charge, r)));
    if let Some(big_r) = big_r {
        out.insert("R".into(), json!(big_r));
        out.insert("N_minus(r,R)".into(), ext(counting_integral(&canonical.minus.charge, r, big_r)?));
        out.insert("N_plus(r,R)".into(), ext(counting_integral(&canonical.plus.charge, r, big_r)?));
        out.insert("T_U(r,R)".into(), ext(characteristic_t(&u, r, big_r, &quad)?.value));
    }
    if let Some(r0) = r0 {
        out.insert("r0".into(), json!(r0));
        out.insert("T_U(r0,r)".into(), ext(characteristic_t(&u, r0, r, &quad)?.value));
        if let Some(k) = k {
            out.insert("k".into(), json!(k));
            out.insert("T_U(r0,kr)".into(), ext(characteristic_t(&u, r0, k * r, &quad)?.value));
        }
    }
    if let Some(f) = rational {
        let nv = nevanlinna(&f, r, &quad)?;
        out.insert(
            "nevanlinna".into(),
            json!({
                "M": ext(nv.max_modulus),
                "m": ext(nv.proximity),
                "N": ext(nv.counting),
                "T": ext(nv.characteristic),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn check(name: &str, path: &Path, tol: Option<f64>) -> Result<ExitStatus, Error> {
    let quad = quadrature(tol)?;
    let inst = Instance::from_json(&read(path)?, Some(name))?;
    let report = inst.run(&quad)?;
    let mut doc = serde_json::to_value(&report)?;
    let obj = doc.as_object_mut().expect("report is an object");
    // serde_json writes non-finite floats as null.
    for (key, x) in [
        ("lhs", report.lhs),
        ("rhs", report.rhs),
        ("ratio", report.ratio),
        ("error_estimate", report.error_estimate),
    ] {
        obj.insert(key.into(), ext(x));
    }
    obj.insert("params".into(), serde_json::from_str(&report.params_json())?);
    obj.insert("holds".into(), json!(report.holds()));
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if report.holds() {
        ExitStatus::Success
    } else {
        ExitStatus::Violation
    })
}

#[allow(clippy::too_many_arguments)]
fn suite(
    config: Option<PathBuf>,
    seed: Option<u64>,
    instances: Option<usize>,
    checkers: Option<Vec<String>>,
    out: Option<PathBuf>,
    tol: Option<f64>,
    serial: bool,
) -> Result<ExitStatus, Error> {
    let mut cfg = match config {
        Some(path) => SuiteConfig::from_file(&path)?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = instances {
        cfg.instances = n;
    }
    if let Some(c) = checkers {
        cfg.checkers = c.into_iter().filter(|s| !s.is_empty()).collect();
    }
    if let Some(o) = out {
        cfg.out = Some(o.to_string_lossy().into_owned());
    }
    if tol.is_some() {
        cfg.rel_tol = tol;
    }
    if serial {
        cfg.parallel = false;
    }
    let outcome = run_suite(&cfg)?;
    let csv = outcome.csv()?;
    match &cfg.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Error::Io(format!("{path}: {e}")))?,
        None => print!("{csv}"),
    }
    eprintln!("{outcome}");
    Ok(outcome.status())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::BadInput.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match cli.command {
        Command::Compute {
            function,
            r,
            r0,
            big_r,
            k,
            tol,
        } => compute(&function, r, r0, big_r, k, tol).map(|v| {
            println!("{}", serde_json::to_string_pretty(&v).expect("JSON"));
            ExitStatus::Success
        }),
        Command::Check { name, instance, tol } => check(&name, &instance, tol),
        Command::Suite {
            config,
            seed,
            instances,
            checkers,
            out,
            tol,
            serial,
        } => suite(config, seed, instances, checkers, out, tol, serial),
        Command::Counterexample => counterexample(&QuadratureSpec::default()).map(|rep| {
            println!("{rep}");
            if rep.passed() {
                ExitStatus::Success
            } else {
                ExitStatus::Violation
            }
        }),
    };
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => fail(e),
    }
}
