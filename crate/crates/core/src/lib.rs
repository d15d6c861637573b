//! Potential-theoretic characteristics of subharmonic and δ-subharmonic
//! functions with finite atomic Riesz charges, and numerical checkers for
//! weighted small-set integral bounds on circle maxima.
//!
//! - [`model`]: atomic measures, log-potentials, δ-subharmonic pairs, `ln|f|`
//!   for rational `f`.
//! - [`characteristics`]: `M_v(r)`, `C_v(r)`, `μ^rad`, `N_μ(r, R)`, `T_U(r, R)`
//!   and the Nevanlinna `M, m, N, T`.
//! - [`sets`]: interval unions, piecewise-polynomial weights, `L^p` norms.
//! - [`inequalities`]: lhs/rhs evaluation of each bound as a [`BoundReport`].
//! - [`harness`]: seeded instance generation, suite runs, CSV output and the
//!   `f = 1/z` reproduction.

pub mod characteristics;
pub mod error;
pub mod harness;
pub mod inequalities;
pub mod model;
pub mod quadrature;
pub mod sets;

pub use characteristics::{CharacteristicValue, Method, Part, RadialProfile};
pub use error::{Error, Result};
pub use inequalities::{BoundReport, Relation};
pub use model::{Atom, AtomicMeasure, DeltaSubharmonicFn, RationalFunctionSpec, SubharmonicPotential};
pub use quadrature::{Estimate, QuadratureSpec};
pub use sets::{Exponent, IntervalSet, Polynomial, Weight, WeightPiece};

use serde::{de, Deserialize, Deserializer, Serializer};

/// Extended reals go to JSON as numbers, or as `"inf"`, `"-inf"`, `"nan"`.
pub(crate) fn serialize_extended<S: Serializer>(x: f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(x)
    } else {
        s.serialize_str(extended_str(x))
    }
}

pub(crate) fn extended_str(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

pub(crate) fn deserialize_extended<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }
    match Repr::deserialize(d)? {
        Repr::Num(x) => Ok(x),
        Repr::Str(s) => match s.as_str() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => other.parse().map_err(de::Error::custom),
        },
    }
}
