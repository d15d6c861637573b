//! Reproduction of the `f = 1/z` counterexample to an averaged
//! maximum-modulus bound by `C(k) T(kr, f)`.
//!
//! For `f = 1/z`: `M(r) = 1/r`, `m(r) = ln⁺(1/r)`, `N(r) = ln r`,
//! `T(r) = ln⁺ r`, and `(1/r)∫_0^r ln⁺M(t) dt` is `1 + ln(1/r)` for `r ≤ 1`
//! and `1/r` for `r ≥ 1`. For `r ≤ 1/k` the right side `T(kr)` vanishes while
//! the left side is at least 1.

use std::fmt;

use crate::characteristics::nevanlinna;
use crate::error::Result;
use crate::inequalities::nevanlinna_ratio;
use crate::model::RationalFunctionSpec;
use crate::quadrature::QuadratureSpec;

pub const RADII: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
pub const RATIO_KS: [f64; 2] = [2.0, 4.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub quantity: String,
    pub r: f64,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
}

impl Comparison {
    pub fn ok(&self) -> bool {
        if self.expected.is_infinite() || self.actual.is_infinite() {
            self.expected == self.actual
        } else {
            (self.actual - self.expected).abs() <= self.tolerance
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub comparisons: Vec<Comparison>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(Comparison::ok)
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<24} {:>8} {:>22} {:>22} {:>10} {:>5}",
            "quantity", "r", "expected", "actual", "diff", "ok"
        )?;
        for c in &self.comparisons {
            let diff = if c.expected == c.actual { 0.0 } else { (c.actual - c.expected).abs() };
            writeln!(
                f,
                "{:<24} {:>8} {:>22.15e} {:>22.15e} {:>10.2e} {:>5}",
                c.quantity,
                c.r,
                c.expected,
                c.actual,
                diff,
                if c.ok() { "yes" } else { "NO" }
            )?;
        }
        write!(f, "{}", if self.passed() { "counterexample reproduced" } else { "MISMATCH" })
    }
}

fn ln_plus(x: f64) -> f64 {
    x.ln().max(0.0)
}

/// `(1/r)∫_0^r ln⁺(1/t) dt`; the integrand vanishes beyond `t = 1`.
pub fn averaged_log_max(r: f64) -> f64 {
    if r <= 1.0 {
        1.0 + (1.0 / r).ln()
    } else {
        1.0 / r
    }
}

pub fn counterexample(quad: &QuadratureSpec) -> Result<CounterexampleReport> {
    let f = RationalFunctionSpec::reciprocal();
    let mut comparisons = Vec::new();
    let mut push = |quantity: &str, r: f64, expected: f64, actual: f64, tolerance: f64| {
        comparisons.push(Comparison {
            quantity: quantity.into(),
            r,
            expected,
            actual,
            tolerance,
        })
    };
    for r in RADII {
        let nv = nevanlinna(&f, r, quad)?;
        push("M(r,f)", r, 1.0 / r, nv.max_modulus, 1e-9);
        push("m(r,f)", r, ln_plus(1.0 / r), nv.proximity, 1e-9);
        push("N(r,f)", r, r.ln(), nv.counting, 1e-9);
        push("T(r,f)", r, ln_plus(r), nv.characteristic, 1e-9);
        let avg = nevanlinna_ratio(&f, r, 2.0, quad)?;
        push("(1/r)int ln+M(t,f)dt", r, averaged_log_max(r), avg.lhs, 1e-6);
    }
    for k in RATIO_KS {
        let r = 1.0 / (2.0 * k);
        let rep = nevanlinna_ratio(&f, r, k, quad)?;
        push(&format!("ratio at k={k}"), r, f64::INFINITY, rep.ratio, 0.0);
    }
    Ok(CounterexampleReport { comparisons })
}
