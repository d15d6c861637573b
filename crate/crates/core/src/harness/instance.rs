//! Serialized checker instances.
//!
//! An instance is a JSON object tagged by `"checker"`; the remaining fields
//! are the checker's arguments. Functions use the
//! `plus_atoms/minus_atoms/plus_const/minus_const` layout, potentials
//! `atoms/const`, rational functions `zeros/poles/scale`, sets a list of
//! `[a, b]` pairs and weights a list of `{interval, coeffs, p}` pieces.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::inequalities::{self as ineq, BoundReport, DecreasingProfile};
use crate::model::{AtomicMeasure, DeltaSubharmonicFn, RationalFunctionSpec, SubharmonicPotential};
use crate::quadrature::QuadratureSpec;
use crate::sets::{Exponent, IntervalSet, Weight};

/// Every checker the harness knows, in the order used for defaults.
pub const CHECKERS: [&str; 11] = [
    "lemma2_check",
    "lemma3_check",
    "lemma4_check",
    "lemma_a_check",
    "lemma1_check",
    "main_lemma_check",
    "main_theorem_T",
    "main_theorem_M",
    "poisson_jensen_check",
    "nevanlinna_ratio",
    "small_intervals_ratio",
];

/// Checkers that report measurements rather than pass/fail.
pub fn is_probe(checker: &str) -> bool {
    matches!(checker, "nevanlinna_ratio" | "small_intervals_ratio")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "checker", deny_unknown_fields)]
pub enum Instance {
    #[serde(rename = "lemma2_check")]
    Lemma2 {
        measure: AtomicMeasure,
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    #[serde(rename = "lemma3_check")]
    Lemma3 {
        q: f64,
        #[serde(rename = "A")]
        big_a: f64,
        a: f64,
    },
    #[serde(rename = "lemma4_check")]
    Lemma4 {
        set: IntervalSet,
        x: f64,
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
        q: f64,
    },
    #[serde(rename = "lemma_a_check")]
    LemmaA {
        profile: DecreasingProfile,
        set: IntervalSet,
        a: f64,
    },
    #[serde(rename = "lemma1_check")]
    Lemma1 {
        function: DeltaSubharmonicFn,
        set: IntervalSet,
        weight: Weight,
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    #[serde(rename = "main_lemma_check")]
    MainLemma {
        function: DeltaSubharmonicFn,
        set: IntervalSet,
        weight: Weight,
        r: f64,
        b: f64,
    },
    #[serde(rename = "main_theorem_T")]
    MainTheoremT {
        function: DeltaSubharmonicFn,
        set: IntervalSet,
        weight: Weight,
        r: f64,
        r0: f64,
        k: f64,
    },
    #[serde(rename = "main_theorem_M")]
    MainTheoremM {
        potential: SubharmonicPotential,
        set: IntervalSet,
        weight: Weight,
        r: f64,
        r0: f64,
        k: f64,
    },
    #[serde(rename = "poisson_jensen_check")]
    PoissonJensen {
        potential: SubharmonicPotential,
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    #[serde(rename = "nevanlinna_ratio")]
    NevanlinnaRatio { rational: RationalFunctionSpec, r: f64, k: f64 },
    #[serde(rename = "small_intervals_ratio")]
    SmallIntervals {
        potential: SubharmonicPotential,
        set: IntervalSet,
        weight: Weight,
        r0: f64,
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
        b: f64,
    },
}

/// Parameter grids applied to a single instance by the suite runner.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<'a> {
    pub k_values: &'a [f64],
    pub p_values: &'a [Exponent],
    pub b_values: &'a [f64],
}

impl Instance {
    pub fn checker(&self) -> &'static str {
        match self {
            Instance::Lemma2 { .. } => "lemma2_check",
            Instance::Lemma3 { .. } => "lemma3_check",
            Instance::Lemma4 { .. } => "lemma4_check",
            Instance::LemmaA { .. } => "lemma_a_check",
            Instance::Lemma1 { .. } => "lemma1_check",
            Instance::MainLemma { .. } => "main_lemma_check",
            Instance::MainTheoremT { .. } => "main_theorem_T",
            Instance::MainTheoremM { .. } => "main_theorem_M",
            Instance::PoissonJensen { .. } => "poisson_jensen_check",
            Instance::NevanlinnaRatio { .. } => "nevanlinna_ratio",
            Instance::SmallIntervals { .. } => "small_intervals_ratio",
        }
    }

    /// Parses an instance document. When `checker` is given it fills in a
    /// missing `"checker"` tag and must agree with an existing one.
    pub fn from_json(text: &str, checker: Option<&str>) -> Result<Instance> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Parse("an instance must be a JSON object".into()))?;
        if let Some(name) = checker {
            if !CHECKERS.contains(&name) {
                return Err(Error::UnknownChecker(name.into()));
            }
            match obj.get("checker").and_then(|v| v.as_str()) {
                Some(tag) if tag != name => {
                    return Err(Error::Parse(format!("instance is tagged {tag:?}, not {name:?}")));
                }
                _ => {
                    obj.insert("checker".into(), name.into());
                }
            }
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances serialize")
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON form.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Runs the checker with the instance's own parameters.
    pub fn run(&self, quad: &QuadratureSpec) -> Result<BoundReport> {
        let report = match self {
            Instance::Lemma2 { measure, r, big_r } => ineq::lemma2_check(measure, *r, *big_r),
            Instance::Lemma3 { q, big_a, a } => ineq::lemma3_check(*q, *big_a, *a, quad),
            Instance::Lemma4 { set, x, r, big_r, q } => ineq::lemma4_check(set, *x, *r, *big_r, *q, quad),
            Instance::LemmaA { profile, set, a } => ineq::lemma_a_check(profile, set, *a, quad),
            Instance::Lemma1 {
                function,
                set,
                weight,
                r,
                big_r,
            } => ineq::lemma1_check(function, set, weight, *r, *big_r, quad),
            Instance::MainLemma {
                function,
                set,
                weight,
                r,
                b,
            } => ineq::main_lemma_check(function, set, weight, *r, *b, quad),
            Instance::MainTheoremT {
                function,
                set,
                weight,
                r,
                r0,
                k,
            } => ineq::main_theorem_t(function, set, weight, *r, *r0, *k, quad),
            Instance::MainTheoremM {
                potential,
                set,
                weight,
                r,
                r0,
                k,
            } => ineq::main_theorem_m(potential, set, weight, *r, *r0, *k, quad),
            Instance::PoissonJensen { potential, r, big_r } => {
                ineq::poisson_jensen_check(potential, *r, *big_r, quad)
            }
            Instance::NevanlinnaRatio { rational, r, k } => ineq::nevanlinna_ratio(rational, *r, *k, quad),
            Instance::SmallIntervals {
                potential,
                set,
                weight,
                r0,
                r,
                big_r,
                b,
            } => ineq::small_intervals_ratio(potential, set, weight, *r0, *r, *big_r, *b, quad),
        }?;
        Ok(report.with_fingerprint(self.fingerprint()))
    }

    /// Runs the checker over the parameter grids it is swept on: `p` for
    /// Lemma 1, `p × b` for the Main Lemma, `p × k` for both Main Theorem
    /// forms, `k` for the Nevanlinna probe. Other checkers give one report.
    ///
    /// An `Err` at the outer level means nothing could be evaluated; inner
    /// errors belong to single combinations.
    pub fn run_grid(&self, grid: &Grid<'_>, quad: &QuadratureSpec) -> Result<Vec<Result<BoundReport>>> {
        let fingerprint = self.fingerprint();
        let stamp = |rows: Vec<Result<BoundReport>>| -> Vec<Result<BoundReport>> {
            rows.into_iter()
                .map(|r| r.map(|rep| rep.with_fingerprint(fingerprint.clone())))
                .collect()
        };
        match self {
            Instance::Lemma1 {
                function,
                set,
                weight,
                r,
                big_r,
            } => Ok(stamp(
                grid.p_values
                    .iter()
                    .map(|&p| ineq::lemma1_check(function, set, &weight.with_exponent(p), *r, *big_r, quad))
                    .collect(),
            )),
            Instance::MainLemma {
                function,
                set,
                weight,
                r,
                ..
            } => Ok(stamp(ineq::main_lemma_grid(
                function,
                set,
                weight,
                *r,
                grid.b_values,
                grid.p_values,
                quad,
            )?)),
            Instance::MainTheoremT {
                function,
                set,
                weight,
                r,
                r0,
                ..
            } => Ok(stamp(ineq::main_theorem_t_grid(
                function,
                set,
                weight,
                *r,
                *r0,
                grid.k_values,
                grid.p_values,
                quad,
            )?)),
            Instance::MainTheoremM {
                potential,
                set,
                weight,
                r,
                r0,
                ..
            } => Ok(stamp(ineq::main_theorem_m_grid(
                potential,
                set,
                weight,
                *r,
                *r0,
                grid.k_values,
                grid.p_values,
                quad,
            )?)),
            Instance::NevanlinnaRatio { rational, r, .. } => {
                Ok(stamp(ineq::nevanlinna_ratio_grid(rational, *r, grid.k_values, quad)?))
            }
            _ => Ok(vec![self.run(quad)]),
        }
    }
}
