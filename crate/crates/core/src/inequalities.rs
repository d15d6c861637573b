//! Both sides of each small-set bound, the rearrangement lemma, the
//! Poisson–Jensen identity, the `1/z` counterexample probe and the
//! empirical-constant probe for the small-intervals estimate.
//!
//! Every checker returns a [`BoundReport`]. Theorems are exact statements, so
//! `holds()` only allows slack for the quadrature error estimates.

use std::collections::BTreeMap;
use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::characteristics::{characteristic_t_profile, counting_integral, radial_count, Part, RadialProfile};
use crate::error::{Error, Result};
use crate::model::{AtomicMeasure, DeltaSubharmonicFn, RationalFunctionSpec, SubharmonicPotential};
use crate::quadrature::{golden_max, integrate, Estimate, QuadratureSpec};
use crate::sets::{integrate_weighted, lp_norm, lq_norm_of, rearranged_majorant, Exponent, IntervalSet, Weight};

/// How `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs` up to the error margin.
    AtMost,
    /// `|lhs - rhs| ≤ abs_tol + rel_tol |rhs|`.
    Equal { abs_tol: f64, rel_tol: f64 },
    /// Measurement only, never fails.
    Probe,
}

/// Evaluated sides of one inequality on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs` with `x/0 = +∞` for `x > 0`, `x/∞ = 0` and `0/0 = 0`.
    pub ratio: f64,
    pub params: BTreeMap<String, f64>,
    pub error_estimate: f64,
    pub instance_fingerprint: String,
    /// Set when the ratio is a `0/0` (or `∞/∞`) convention.
    pub degenerate: bool,
    pub relation: Relation,
}

/// Ratio under the extended-real division conventions; the flag marks `0/0`.
pub fn extended_ratio(lhs: f64, rhs: f64) -> (f64, bool) {
    if lhs == 0.0 && rhs == 0.0 {
        (0.0, true)
    } else if rhs == 0.0 {
        (if lhs > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY }, false)
    } else if rhs.is_infinite() && lhs.is_infinite() {
        (f64::NAN, true)
    } else if rhs.is_infinite() {
        (0.0, false)
    } else {
        (lhs / rhs, false)
    }
}

/// `x^{1/q} ln(scale / x)`, read as `0` at `x = 0`.
fn small_set_factor(mes: f64, q: f64, scale: f64) -> f64 {
    if mes == 0.0 {
        0.0
    } else {
        mes.powf(1.0 / q) * (scale / mes).ln()
    }
}

/// `0 · ∞ = 0`.
fn times(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl BoundReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, error_estimate: f64, relation: Relation) -> Self {
        let (ratio, degenerate) = extended_ratio(lhs, rhs);
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            ratio,
            params: BTreeMap::new(),
            error_estimate,
            instance_fingerprint: String::new(),
            degenerate,
            relation,
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_fingerprint(mut self, fingerprint: impl Into<String>) -> Self {
        self.instance_fingerprint = fingerprint.into();
        self
    }

    /// Slack allowed on top of `rhs`.
    pub fn margin(&self) -> f64 {
        self.error_estimate + 1e-12 * (1.0 + self.rhs.abs())
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.lhs <= self.rhs + self.margin(),
            Relation::Equal { abs_tol, rel_tol } => {
                (self.lhs - self.rhs).abs() <= abs_tol + rel_tol * self.rhs.abs()
            }
            Relation::Probe => true,
        }
    }

    /// Params as compact JSON with sorted keys; non-finite values as strings.
    pub fn params_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .params
            .iter()
            .map(|(k, &v)| {
                let val = if v.is_finite() {
                    serde_json::json!(v)
                } else {
                    serde_json::Value::String(crate::extended_str(v).into())
                };
                (k.clone(), val)
            })
            .collect();
        serde_json::Value::Object(map).to_string()
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

fn require_subset(e: &IntervalSet, lo: f64, hi: f64) -> Result<()> {
    require(e.contained_in(lo, hi), || format!("E must lie in [{lo}, {hi}]"))
}

/// `∫_E M_{part(U)}(t) g(t) dt`, with hints at every atom modulus (where the
/// circle maximum of a part can blow up logarithmically).
pub fn integral_of_circle_max(
    profile: &RadialProfile,
    part: Part,
    e: &IntervalSet,
    g: &Weight,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let hints = profile.atom_moduli();
    integrate_weighted(|t| profile.max(part, t).value, g, e, quad, &hints)
}

/// `‖ln(2R/|· - x|)‖_{L^q(E)}`.
pub fn log_kernel_norm(e: &IntervalSet, x: f64, big_r: f64, q: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    let spec = quad.with_hints(vec![x]);
    lq_norm_of(|t| (2.0 * big_r / (t - x).abs()).ln(), q, e, &spec)
}

/// `sup_{0 ≤ x ≤ R} ‖ln(2R/|· - x|)‖_{L^q(E)}` from a 256-point grid in `x`
/// refined by golden-section search around the best node.
pub fn sup_log_kernel_norm(e: &IntervalSet, big_r: f64, q: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    const NODES: usize = 256;
    if e.is_empty() {
        return Ok(Estimate::ZERO);
    }
    let mut best = (0.0, Estimate::ZERO);
    for i in 0..=NODES {
        let x = big_r * i as f64 / NODES as f64;
        let est = log_kernel_norm(e, x, big_r, q, quad)?;
        if est.value > best.1.value {
            best = (x, est);
        }
    }
    let h = big_r / NODES as f64;
    let (lo, hi) = ((best.0 - h).max(0.0), (best.0 + h).min(big_r));
    let failure = std::cell::RefCell::new(None);
    let (x, _) = golden_max(
        |x| match log_kernel_norm(e, x, big_r, q, quad) {
            Ok(est) => est.value,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        1e-9 * big_r,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let refined = log_kernel_norm(e, x, big_r, q, quad)?;
    Ok(if refined.value > best.1.value { refined } else { best.1 })
}

/// `μ^rad(r) ≤ R/(R-r) · N_μ(r, R)` for `μ` supported in `D̄(R)`, `0 ≤ r < R`.
pub fn lemma2_check(mu: &AtomicMeasure, r: f64, big_r: f64) -> Result<BoundReport> {
    require(r >= 0.0 && r < big_r && big_r.is_finite(), || {
        format!("need 0 <= r < R, got r = {r}, R = {big_r}")
    })?;
    require(mu.moduli().all(|m| m <= big_r), || "μ must be supported in the closed disc of radius R".into())?;
    let lhs = radial_count(mu, r);
    let n = counting_integral(mu, r, big_r)?;
    let rhs = times(big_r / (big_r - r), n);
    Ok(BoundReport::new("lemma2_check", lhs, rhs, 0.0, Relation::AtMost)
        .param("r", r)
        .param("R", big_r)
        .param("mass", mu.total_mass()))
}

/// `∫_0^a ln^q(A/x) dx ≤ (1 + q^{q+1}) a ln^q(A/a)` for `0 < a ≤ A/e`.
///
/// The quadrature runs at `rel_tol ≤ 1e-12` so the equality case resolves.
pub fn lemma3_check(q: f64, big_a: f64, a: f64, quad: &QuadratureSpec) -> Result<BoundReport> {
    require(q >= 0.0 && q.is_finite(), || format!("q must be >= 0, got {q}"))?;
    require(big_a > 0.0 && big_a.is_finite(), || format!("A must be > 0, got {big_a}"))?;
    require(a > 0.0 && a <= big_a / E, || format!("need 0 < a <= A/e, got a = {a}, A = {big_a}"))?;
    let spec = QuadratureSpec {
        rel_tol: quad.rel_tol.min(1e-12),
        abs_tol: quad.abs_tol.min(1e-15),
        max_panels: quad.max_panels,
        singularity_hints: vec![0.0],
    };
    let lhs = integrate(|x| (big_a / x).ln().powf(q), 0.0, a, &spec)?;
    let rhs = (1.0 + q.powf(q + 1.0)) * a * (big_a / a).ln().powf(q);
    Ok(BoundReport::new("lemma3_check", lhs.value, rhs, lhs.error, Relation::AtMost)
        .param("q", q)
        .param("A", big_a)
        .param("a", a))
}

/// `‖ln(2R/|· - x|)‖_{L^q(E)} ≤ 2q (mes E)^{1/q} ln(4R / mes E)` for
/// `E ⊂ [0, r] ⊂ [0, R]`, `0 ≤ x ≤ R`, `q ≥ 1`.
pub fn lemma4_check(
    e: &IntervalSet,
    x: f64,
    r: f64,
    big_r: f64,
    q: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    require(r > 0.0 && r <= big_r && big_r.is_finite(), || format!("need 0 < r <= R, got r = {r}, R = {big_r}"))?;
    require((0.0..=big_r).contains(&x), || format!("x must lie in [0, R], got {x}"))?;
    require(q >= 1.0 && q.is_finite(), || format!("q must be >= 1, got {q}"))?;
    require_subset(e, 0.0, r)?;
    let mes = e.measure();
    let lhs = log_kernel_norm(e, x, big_r, q, quad)?;
    let rhs = 2.0 * q * small_set_factor(mes, q, 4.0 * big_r);
    Ok(BoundReport::new("lemma4_check", lhs.value, rhs, lhs.error, Relation::AtMost)
        .param("x", x)
        .param("r", r)
        .param("R", big_r)
        .param("q", q)
        .param("mes_E", mes))
}

/// Even profiles, decreasing on `(0, a)`, used with the rearrangement bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecreasingProfile {
    /// `1 - |t|/a`
    Tent { a: f64 },
    /// `exp(-c|t|)`
    Exponential { c: f64 },
    /// `|t|^{-alpha}`, `0 < alpha < 1`
    Power { alpha: f64 },
    /// `ln^q(s/|t|)` with `s ≥ a`
    LogPower { s: f64, q: f64 },
}

impl DecreasingProfile {
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        match *self {
            DecreasingProfile::Tent { a } => 1.0 - t / a,
            DecreasingProfile::Exponential { c } => (-c * t).exp(),
            DecreasingProfile::Power { alpha } => t.powf(-alpha),
            DecreasingProfile::LogPower { s, q } => (s / t).ln().powf(q),
        }
    }
}

/// `∫_E f ≤ 2 ∫_0^{λ(E)/2} f` for even `f` decreasing on `(0, a)`, `E ⊂ (-a, a)`.
pub fn lemma_a_check(
    f: &DecreasingProfile,
    e: &IntervalSet,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    let sides = rearranged_majorant(|t| f.eval(t), e, a, quad)?;
    Ok(BoundReport::new("lemma_a_check", sides.lhs, sides.rhs, sides.error, Relation::AtMost)
        .param("a", a)
        .param("mes_E", e.measure()))
}

/// Lemma 1 bound: `∫_E M_U⁺ g ≤ ((R+r)/(R-r) C_{U⁺}(R) (mes E)^{1/q}
/// + Δ_v^rad(R) sup_x ‖ln(2R/|·-x|)‖_{L^q(E)}) ‖g‖_{L^p(E)}`,
/// evaluated in the canonical representation.
pub fn lemma1_check(
    u: &DeltaSubharmonicFn,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    big_r: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    require(r >= 0.0 && r < big_r && big_r.is_finite(), || format!("need 0 <= r < R, got r = {r}, R = {big_r}"))?;
    require_subset(e, 0.0, r)?;
    let profile = RadialProfile::new(u);
    let q = g.conjugate();
    let mes = e.measure();
    let lhs = integral_of_circle_max(&profile, Part::Positive, e, g, quad)?;
    let c_plus = profile.mean_by_quadrature(Part::Positive, big_r, quad)?;
    let minus_mass = radial_count(&profile.canonical().minus.charge, big_r);
    let sup = if minus_mass > 0.0 {
        sup_log_kernel_norm(e, big_r, q, quad)?
    } else {
        Estimate::ZERO
    };
    let g_norm = lp_norm(g, e)?;
    let poisson = (big_r + r) / (big_r - r);
    let inner = poisson * c_plus.value * mes.powf(1.0 / q) + minus_mass * sup.value;
    let rhs = inner * g_norm.value;
    let err = lhs.error
        + (poisson * c_plus.error_estimate * mes.powf(1.0 / q) + minus_mass * sup.error) * g_norm.value
        + inner * g_norm.error;
    Ok(BoundReport::new("lemma1_check", lhs.value, rhs, err, Relation::AtMost)
        .param("r", r)
        .param("R", big_r)
        .param("p", g.exponent().value())
        .param("q", q)
        .param("mes_E", mes)
        .param("C_U+(R)", c_plus.value)
        .param("minus_mass", minus_mass)
        .param("sup_kernel_norm", sup.value)
        .param("g_norm", g_norm.value))
}

/// Main Lemma bound with `R = (1+b) r`:
/// `∫_E M_U⁺ g ≤ q (2+b)/b (C_{U⁺}((1+b)r) + N_{Δ_v}((1+b)r, (1+b)²r))
/// ‖g‖_p (mes E)^{1/q} ln(4(1+b)r / mes E)`.
pub fn main_lemma_check(
    u: &DeltaSubharmonicFn,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    b: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    main_lemma_grid(u, e, g, r, &[b], &[g.exponent()], quad)?
        .pop()
        .expect("one combination")
}

/// [`main_lemma_check`] over `b × p` sharing the left side; output ordered by
/// `p` then `b`.
pub fn main_lemma_grid(
    u: &DeltaSubharmonicFn,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    bs: &[f64],
    ps: &[Exponent],
    quad: &QuadratureSpec,
) -> Result<Vec<Result<BoundReport>>> {
    require(r > 0.0 && r.is_finite(), || format!("need r > 0, got {r}"))?;
    require(bs.iter().all(|&b| b > 0.0 && b.is_finite()), || "b must be positive".into())?;
    require_subset(e, 0.0, r)?;
    let profile = RadialProfile::new(u);
    let mes = e.measure();
    let lhs = integral_of_circle_max(&profile, Part::Positive, e, g, quad)?;
    let minus = &profile.canonical().minus.charge;
    let mut out = Vec::new();
    for &p in ps {
        let g = g.with_exponent(p);
        let q = p.conjugate();
        let g_norm = lp_norm(&g, e)?;
        for &b in bs {
            let report = (|| {
                let r1 = (1.0 + b) * r;
                let r2 = (1.0 + b) * r1;
                let c_plus = profile.mean_by_quadrature(Part::Positive, r1, quad)?;
                let n = counting_integral(minus, r1, r2)?;
                let lead = q * (2.0 + b) / b;
                let set = g_norm.value * small_set_factor(mes, q, 4.0 * r1);
                let rhs = lead * (c_plus.value + n) * set;
                let err = lhs.error
                    + lead * c_plus.error_estimate * set
                    + lead * (c_plus.value + n) * g_norm.error * small_set_factor(mes, q, 4.0 * r1);
                Ok(BoundReport::new("main_lemma_check", lhs.value, rhs, err, Relation::AtMost)
                    .param("r", r)
                    .param("b", b)
                    .param("p", p.value())
                    .param("q", q)
                    .param("mes_E", mes)
                    .param("C_U+((1+b)r)", c_plus.value)
                    .param("N_v", n)
                    .param("g_norm", g_norm.value))
            })();
            out.push(report);
        }
    }
    Ok(out)
}

/// Main Theorem, `T` form:
/// `(1/r)∫_E M_U⁺ g ≤ 4q k/(k-1) (T_U(r₀, kr) + C_{U⁺}(r₀)) ‖g‖_p
/// ((mes E)^{1/q}/r) ln(4kr / mes E)`.
pub fn main_theorem_t(
    u: &DeltaSubharmonicFn,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    r0: f64,
    k: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    main_theorem_t_grid(u, e, g, r, r0, &[k], &[g.exponent()], quad)?
        .pop()
        .expect("one combination")
}

fn check_theorem_args(e: &IntervalSet, r: f64, r0: f64, ks: &[f64]) -> Result<()> {
    require(r0 > 0.0 && r0 < r && r.is_finite(), || format!("need 0 < r0 < r, got r0 = {r0}, r = {r}"))?;
    require(ks.iter().all(|&k| k > 1.0 && k.is_finite()), || "k must exceed 1".into())?;
    require_subset(e, 0.0, r)
}

/// [`main_theorem_t`] over `k × p` sharing the left side; output ordered by
/// `p` then `k`.
#[allow(clippy::too_many_arguments)]
pub fn main_theorem_t_grid(
    u: &DeltaSubharmonicFn,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    r0: f64,
    ks: &[f64],
    ps: &[Exponent],
    quad: &QuadratureSpec,
) -> Result<Vec<Result<BoundReport>>> {
    check_theorem_args(e, r, r0, ks)?;
    let profile = RadialProfile::new(u);
    let mes = e.measure();
    let lhs = integral_of_circle_max(&profile, Part::Positive, e, g, quad)?.scale(1.0 / r);
    let c0 = profile.mean_by_quadrature(Part::Positive, r0, quad)?;
    let ts: Vec<Result<_>> = ks
        .iter()
        .map(|&k| characteristic_t_profile(&profile, r0, k * r, quad))
        .collect();
    let mut out = Vec::new();
    for &p in ps {
        let g = g.with_exponent(p);
        let q = p.conjugate();
        let g_norm = lp_norm(&g, e)?;
        for (&k, t) in ks.iter().zip(&ts) {
            let report = t.clone().map(|t| {
                let lead = 4.0 * q * k / (k - 1.0);
                let set = small_set_factor(mes, q, 4.0 * k * r) / r;
                let rhs = lead * (t.value + c0.value) * g_norm.value * set;
                let err = lhs.error
                    + lead * (t.error_estimate + c0.error_estimate) * g_norm.value * set
                    + lead * (t.value + c0.value) * g_norm.error * set;
                BoundReport::new("main_theorem_T", lhs.value, rhs, err, Relation::AtMost)
                    .param("r", r)
                    .param("r0", r0)
                    .param("k", k)
                    .param("p", p.value())
                    .param("q", q)
                    .param("mes_E", mes)
                    .param("T_U(r0,kr)", t.value)
                    .param("C_U+(r0)", c0.value)
                    .param("g_norm", g_norm.value)
            });
            out.push(report);
        }
    }
    Ok(out)
}

/// Main Theorem, `M` form for subharmonic `u`:
/// `(1/r)∫_E M_{|u|} g ≤ 5q k/(k-1) (M_{u⁺}(kr) + C_{u⁻}(r₀)) ‖g‖_p
/// ((mes E)^{1/q}/r) ln(4kr / mes E)`.
///
/// The left side uses the direct maximum of `|u|`; the decomposition
/// `M_{u⁺} + M_{u⁻}` is recorded as `lhs_decomposition`.
pub fn main_theorem_m(
    u: &SubharmonicPotential,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    r0: f64,
    k: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    main_theorem_m_grid(u, e, g, r, r0, &[k], &[g.exponent()], quad)?
        .pop()
        .expect("one combination")
}

#[allow(clippy::too_many_arguments)]
pub fn main_theorem_m_grid(
    u: &SubharmonicPotential,
    e: &IntervalSet,
    g: &Weight,
    r: f64,
    r0: f64,
    ks: &[f64],
    ps: &[Exponent],
    quad: &QuadratureSpec,
) -> Result<Vec<Result<BoundReport>>> {
    check_theorem_args(e, r, r0, ks)?;
    let profile = RadialProfile::new(u);
    let mes = e.measure();
    let direct = integral_of_circle_max(&profile, Part::Abs, e, g, quad)?.scale(1.0 / r);
    let pos = integral_of_circle_max(&profile, Part::Positive, e, g, quad)?;
    let neg = integral_of_circle_max(&profile, Part::Negative, e, g, quad)?;
    let decomposition = pos.combine(neg).scale(1.0 / r);
    let c_minus = profile.mean_by_quadrature(Part::Negative, r0, quad)?;
    let mut out = Vec::new();
    for &p in ps {
        let g = g.with_exponent(p);
        let q = p.conjugate();
        let g_norm = lp_norm(&g, e)?;
        for &k in ks {
            let m_plus = profile.max(Part::Positive, k * r);
            let lead = 5.0 * q * k / (k - 1.0);
            let set = small_set_factor(mes, q, 4.0 * k * r) / r;
            let bracket = m_plus.value + c_minus.value;
            let rhs = lead * bracket * g_norm.value * set;
            let err = direct.error
                + lead * (m_plus.error_estimate + c_minus.error_estimate) * g_norm.value * set
                + lead * bracket * g_norm.error * set;
            out.push(Ok(BoundReport::new("main_theorem_M", direct.value, rhs, err, Relation::AtMost)
                .param("r", r)
                .param("r0", r0)
                .param("k", k)
                .param("p", p.value())
                .param("q", q)
                .param("mes_E", mes)
                .param("M_u+(kr)", m_plus.value)
                .param("C_u-(r0)", c_minus.value)
                .param("lhs_decomposition", decomposition.value)
                .param("g_norm", g_norm.value)));
        }
    }
    Ok(out)
}

/// `(1/r)∫_0^r ln⁺M(t, f) dt` against `T(kr, f)`; the ratio is an empirical
/// lower bound for a constant `C(k)`. A probe: it never fails.
pub fn nevanlinna_ratio(f: &RationalFunctionSpec, r: f64, k: f64, quad: &QuadratureSpec) -> Result<BoundReport> {
    nevanlinna_ratio_grid(f, r, &[k], quad)?.pop().expect("one combination")
}

/// [`nevanlinna_ratio`] for several `k`, sharing the left side.
pub fn nevanlinna_ratio_grid(
    f: &RationalFunctionSpec,
    r: f64,
    ks: &[f64],
    quad: &QuadratureSpec,
) -> Result<Vec<Result<BoundReport>>> {
    require(r > 0.0 && r.is_finite(), || format!("need r > 0, got {r}"))?;
    require(ks.iter().all(|&k| k > 1.0 && k.is_finite()), || "k must exceed 1".into())?;
    let u = f.ln_abs();
    let profile = RadialProfile::new(&u);
    let mut hints = profile.atom_moduli();
    hints.push(0.0);
    let spec = quad.with_hints(hints);
    let lhs = integrate(|t| profile.max(Part::Positive, t).value, 0.0, r, &spec)?.scale(1.0 / r);
    Ok(ks
        .iter()
        .map(|&k| {
            let nv = crate::characteristics::nevanlinna(f, k * r, quad)?;
            // T(kr, f) is a sum of a quadrature and a closed form; a value
            // within their combined error of zero is zero.
            let noise = nv.error_estimate + 4.0 * f64::EPSILON * (nv.proximity.abs() + nv.counting.abs());
            let t = if nv.characteristic.abs() <= noise {
                0.0
            } else {
                nv.characteristic
            };
            Ok(
                BoundReport::new("nevanlinna_ratio", lhs.value, t, lhs.error + nv.error_estimate, Relation::Probe)
                    .param("r", r)
                    .param("k", k)
                    .param("M(kr,f)", nv.max_modulus)
                    .param("m(kr,f)", nv.proximity)
                    .param("N(kr,f)", nv.counting),
            )
        })
        .collect())
}

/// Smallest `a ≥ 1` with `(a/b) ln(a/b) ≥ kappa`, for `b ∈ (0, 1]`.
pub fn minimal_constant(kappa: f64, b: f64) -> f64 {
    let phi = |a: f64| (a / b) * (a / b).ln();
    if kappa.is_nan() || kappa == f64::INFINITY {
        return f64::INFINITY;
    }
    if phi(1.0) >= kappa {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while phi(hi) < kappa {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) >= kappa {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Small-intervals probe: `lhs = ∫_E M_{|u|} g` against the structure
/// `S = (M_u((1+b)R) + 2 C_u⁻(r₀)) ‖g‖_∞ m_∞(E; R, b)`; reports
/// `kappa = lhs/S` and the minimal admissible constant `a_min`.
#[allow(clippy::too_many_arguments)]
pub fn small_intervals_ratio(
    u: &SubharmonicPotential,
    e: &IntervalSet,
    g: &Weight,
    r0: f64,
    r: f64,
    big_r: f64,
    b: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    require(r0 >= 0.0 && r0 <= r && r < big_r && big_r.is_finite(), || {
        format!("need 0 <= r0 <= r < R, got r0 = {r0}, r = {r}, R = {big_r}")
    })?;
    require(b > 0.0 && b <= 1.0, || format!("b must lie in (0, 1], got {b}"))?;
    require(g.exponent().is_infinite(), || "the weight must carry p = inf".into())?;
    require_subset(e, r, big_r)?;
    let profile = RadialProfile::new(u);
    let lhs = integral_of_circle_max(&profile, Part::Abs, e, g, quad)?;
    let m_big = profile.max(Part::Identity, (1.0 + b) * big_r);
    let c_minus = profile.mean_by_quadrature(Part::Negative, r0, quad)?;
    let g_sup = lp_norm(g, e)?.value;
    let mes = e.measure();
    let small = mes.min(3.0 * b * big_r);
    let m_inf = if mes == 0.0 {
        0.0
    } else {
        mes + small * (3.0 * E * b * big_r / small).ln()
    };
    let structure = times(m_big.value + 2.0 * c_minus.value, times(g_sup, m_inf));
    let (kappa, degenerate) = extended_ratio(lhs.value, structure);
    let a_min = if degenerate { 1.0 } else { minimal_constant(kappa, b) };
    let mut report = BoundReport::new("small_intervals_ratio", lhs.value, structure, lhs.error, Relation::Probe)
        .param("r0", r0)
        .param("r", r)
        .param("R", big_r)
        .param("b", b)
        .param("mes_E", mes)
        .param("m_inf", m_inf)
        .param("M_u((1+b)R)", m_big.value)
        .param("C_u-(r0)", c_minus.value)
        .param("a_min", a_min);
    report.degenerate |= structure == 0.0 && lhs.value > 0.0;
    Ok(report)
}

/// `C_v(r, R) = N_{Δ_v}(r, R)` with the mean difference computed by quadrature
/// and the counting integral in closed form.
pub fn poisson_jensen_check(
    v: &SubharmonicPotential,
    r: f64,
    big_r: f64,
    quad: &QuadratureSpec,
) -> Result<BoundReport> {
    require(r > 0.0 && r < big_r && big_r.is_finite(), || format!("need 0 < r < R, got r = {r}, R = {big_r}"))?;
    let profile = RadialProfile::new(v);
    let hi = profile.mean_by_quadrature(Part::Identity, big_r, quad)?;
    let lo = profile.mean_by_quadrature(Part::Identity, r, quad)?;
    let n = counting_integral(&v.charge, r, big_r)?;
    Ok(BoundReport::new(
        "poisson_jensen_check",
        hi.value - lo.value,
        n,
        hi.error_estimate + lo.error_estimate,
        Relation::Equal {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
        },
    )
    .param("r", r)
    .param("R", big_r)
    .param("mass", v.charge.total_mass()))
}
