//! Radial characteristics: circle maxima `M_v(r)`, circle means `C_v(r)`,
//! radial counting `μ^rad(r)`, counting integrals `N_μ(r, R)`, the
//! two-variable characteristic `T_U(r, R)` and the classical Nevanlinna
//! quantities of a rational function.
//!
//! Means of potentials use the closed form
//! `C_v(r) = c + Σ m_j ln max(r, |a_j|)`. Means of nonlinear parts (`U⁺`,
//! `U⁻`, `|U|`) go through adaptive quadrature in the angle, with hints at the
//! angles of nearby atoms and at the zero crossings of `U` on the circle.
//! Maxima are found on a 1024-node angular grid (plus atom angles and their
//! antipodes), refined around the best local maxima by safeguarded Newton
//! steps on the analytic angular derivative.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AtomicMeasure, DeltaSubharmonicFn, RationalFunctionSpec, SubharmonicPotential};
use crate::quadrature::{golden_max, integrate, QuadratureSpec};

const GRID_NODES: usize = 1024;
const REFINED_CANDIDATES: usize = 6;
const ANGULAR_WIDTH: f64 = 1e-12;
/// Squared relative distance below which [`RadialProfile::at`] switches to
/// the polar distance formula.
const NEAR_ATOM: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    GridMax,
}

/// A computed characteristic with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicValue {
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
}

impl CharacteristicValue {
    pub fn closed(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            method: Method::ClosedForm,
        }
    }
}

/// Pointwise transform applied before taking a mean or a maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    /// `U` itself.
    Identity,
    /// `U⁺ = max(U, 0)`; for `U = ln|f|` this is `ln⁺|f|`.
    Positive,
    /// `U⁻ = max(-U, 0)`.
    Negative,
    /// `|U| = U⁺ + U⁻`.
    Abs,
}

impl Part {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Part::Identity => x,
            Part::Positive => x.max(0.0),
            Part::Negative => (-x).max(0.0),
            Part::Abs => x.abs(),
        }
    }
}

/// Something that can be viewed as a δ-subharmonic function.
pub trait AsDelta {
    fn as_delta(&self) -> DeltaSubharmonicFn;
}

impl AsDelta for SubharmonicPotential {
    fn as_delta(&self) -> DeltaSubharmonicFn {
        self.to_delta()
    }
}

impl AsDelta for DeltaSubharmonicFn {
    fn as_delta(&self) -> DeltaSubharmonicFn {
        self.clone()
    }
}

#[derive(Debug, Clone, Copy)]
struct SignedAtom {
    re: f64,
    im: f64,
    mass: f64,
    modulus: f64,
    angle: f64,
}

/// Canonical, flattened form of `U` tuned for repeated evaluation on circles.
///
/// Atoms carry signed masses (positive from `u_U`, negative from `v_U`), so the
/// value is `c + Σ m_j ln|z - a_j|` with no `∞ - ∞` cases.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    atoms: Vec<SignedAtom>,
    constant: f64,
    canonical: DeltaSubharmonicFn,
    /// Angular grid and its cosines and sines.
    nodes: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// `ln x` to about `1e-9` absolute for normal positive finite `x`; used only
/// to screen grid values. Branch-free so the grid loop vectorizes. Zero maps
/// to about `-709` instead of `-∞`.
#[inline]
fn screening_ln(x: f64) -> f64 {
    let bits = x.to_bits();
    let biased = (bits >> 52) & 0x7ff;
    let mant = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | 0x3ff0_0000_0000_0000);
    let high = mant > std::f64::consts::SQRT_2;
    let m = if high { 0.5 * mant } else { mant };
    let e = biased as f64 - 1023.0 + if high { 1.0 } else { 0.0 };
    // ln m = 2 atanh(s), |s| ≤ 0.172
    let s = (m - 1.0) / (m + 1.0);
    let s2 = s * s;
    let series = 1.0 + s2 * (1.0 / 3.0 + s2 * (0.2 + s2 * (1.0 / 7.0 + s2 * (1.0 / 9.0))));
    e * std::f64::consts::LN_2 + 2.0 * s * series
}

/// Angular grid: uniform nodes plus every atom angle and its antipode.
fn grid(atoms: &[SignedAtom]) -> Vec<f64> {
    let mut nodes: Vec<f64> = (0..GRID_NODES)
        .map(|i| TAU * i as f64 / GRID_NODES as f64)
        .collect();
    for a in atoms.iter().filter(|a| a.modulus > 0.0) {
        nodes.push(a.angle);
        nodes.push(normalize_angle(a.angle + PI));
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

fn normalize_angle(t: f64) -> f64 {
    let t = t.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl RadialProfile {
    pub fn new<F: AsDelta + ?Sized>(f: &F) -> Self {
        let canonical = f.as_delta().canonicalize();
        let signed = |m: &AtomicMeasure, sign: f64| {
            m.atoms()
                .iter()
                .map(|a| SignedAtom {
                    re: a.re,
                    im: a.im,
                    mass: sign * a.mass,
                    modulus: a.modulus(),
                    angle: normalize_angle(a.im.atan2(a.re)),
                })
                .collect::<Vec<_>>()
        };
        let mut atoms = signed(&canonical.plus.charge, 1.0);
        atoms.extend(signed(&canonical.minus.charge, -1.0));
        let nodes = grid(&atoms);
        let (sin, cos) = nodes.iter().map(|t| t.sin_cos()).unzip();
        Self {
            atoms,
            constant: canonical.net_constant(),
            canonical,
            nodes,
            cos,
            sin,
        }
    }

    pub fn canonical(&self) -> &DeltaSubharmonicFn {
        &self.canonical
    }

    /// `U(z)` in the canonical representation.
    #[inline]
    pub fn value(&self, z: Complex64) -> f64 {
        let mut acc = self.constant;
        for a in &self.atoms {
            let dx = z.re - a.re;
            let dy = z.im - a.im;
            acc += a.mass * 0.5 * (dx * dx + dy * dy).ln();
        }
        acc
    }

    /// Approximate `sign · U` on the grid nodes.
    fn screen(&self, r: f64, sign: f64) -> Vec<f64> {
        let mut vals = vec![sign * self.constant; self.nodes.len()];
        for a in &self.atoms {
            let h = 0.5 * sign * a.mass;
            for ((v, &c), &s) in vals.iter_mut().zip(&self.cos).zip(&self.sin) {
                let dx = r * c - a.re;
                let dy = r * s - a.im;
                *v += h * screening_ln(dx * dx + dy * dy);
            }
        }
        vals
    }

    /// `U(re^{iθ})`. Near an atom the Cartesian distance loses relative
    /// accuracy to the rounding of `re^{iθ}`, so close atoms use
    /// `|z - a|² = (r - ρ)² + 4rρ sin²((θ - φ)/2)` when `|θ - φ| ≤ π`.
    #[inline]
    fn at(&self, r: f64, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (x, y) = (r * c, r * s);
        let mut acc = self.constant;
        for a in &self.atoms {
            let dx = x - a.re;
            let dy = y - a.im;
            let mut d = dx * dx + dy * dy;
            let diff = theta - a.angle;
            // Only unwrapped angles: reducing θ - φ by 2π costs the very
            // digits this is meant to keep.
            if d < NEAR_ATOM * r * a.modulus && diff.abs() <= PI {
                let h = (0.5 * diff).sin();
                let dr = r - a.modulus;
                d = dr * dr + 4.0 * r * a.modulus * h * h;
            }
            acc += a.mass * 0.5 * d.ln();
        }
        acc
    }

    /// Moduli of the atoms of `v_U` (where `U = +∞`).
    pub fn minus_moduli(&self) -> Vec<f64> {
        self.atoms.iter().filter(|a| a.mass < 0.0).map(|a| a.modulus).collect()
    }

    pub fn atom_moduli(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.modulus).collect()
    }

    /// `(d/dθ, d²/dθ²)` of `U(re^{iθ})`.
    fn angular_derivatives(&self, r: f64, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        let (mut d1, mut d2) = (0.0, 0.0);
        for a in &self.atoms {
            let dx = r * c - a.re;
            let dy = r * s - a.im;
            let d = dx * dx + dy * dy;
            let w = a.re * s - a.im * c;
            let v = a.re * c + a.im * s;
            d1 += a.mass * r * w / d;
            d2 += a.mass * r * (v / d - 2.0 * r * w * w / (d * d));
        }
        (d1, d2)
    }

    /// Local maximum of `sign · U(re^{iθ})` for `θ ∈ [lo, hi]`: Newton steps
    /// on the derivative kept inside a sign-change bracket, with golden-section
    /// search when the endpoints do not bracket a critical point.
    fn refine_peak(&self, r: f64, sign: f64, lo: f64, hi: f64) -> f64 {
        let f = |t: f64| sign * self.at(r, t);
        let df = |t: f64| {
            let (d1, d2) = self.angular_derivatives(r, t);
            (sign * d1, sign * d2)
        };
        let (g_lo, _) = df(lo);
        let (g_hi, _) = df(hi);
        if !(g_lo > 0.0 && g_hi < 0.0) {
            return golden_max(f, lo, hi, ANGULAR_WIDTH).1;
        }
        let (mut a, mut b) = (lo, hi);
        let mut t = 0.5 * (a + b);
        for _ in 0..100 {
            let (g, h) = df(t);
            if g == 0.0 || !g.is_finite() {
                break;
            }
            if g > 0.0 {
                a = t;
            } else {
                b = t;
            }
            let newton = t - g / h;
            let next = if h < 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            let step = (next - t).abs();
            t = next;
            if step <= ANGULAR_WIDTH || b - a <= ANGULAR_WIDTH {
                break;
            }
        }
        f(t).max(f(a)).max(f(b))
    }

    /// `sup_{|z| = r} sign · U(z)` with a rounding-level error estimate.
    fn signed_sup(&self, r: f64, sign: f64) -> (f64, f64) {
        if r == 0.0 {
            return (sign * self.value(Complex64::new(0.0, 0.0)), 0.0);
        }
        // An atom of the opposite sign on the circle makes the supremum +∞.
        if self.atoms.iter().any(|a| a.mass * sign < 0.0 && a.modulus == r) {
            return (f64::INFINITY, 0.0);
        }
        let nodes = &self.nodes;
        let n = nodes.len();
        let vals = self.screen(r, sign);

        let mut peaks: Vec<usize> = (0..n)
            .filter(|&i| {
                let prev = vals[(i + n - 1) % n];
                let next = vals[(i + 1) % n];
                vals[i] >= prev && vals[i] >= next
            })
            .collect();
        peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
        peaks.truncate(REFINED_CANDIDATES);

        let mut best = f64::NEG_INFINITY;
        for i in peaks {
            best = best.max(sign * self.at(r, nodes[i]));
            let lo = if i == 0 { nodes[n - 1] - TAU } else { nodes[i - 1] };
            let hi = if i + 1 == n { nodes[0] + TAU } else { nodes[i + 1] };
            let v = self.refine_peak(r, sign, lo, hi);
            if v > best {
                best = v;
            }
        }
        let scale = self.constant.abs()
            + self
                .atoms
                .iter()
                .map(|a| a.mass.abs() * (1.0 + (r + a.modulus).ln().abs()))
                .sum::<f64>();
        (best, 1e-14 * (1.0 + scale))
    }

    /// `M_w(r)` for `w = part(U)`.
    pub fn max(&self, part: Part, r: f64) -> CharacteristicValue {
        let (value, err) = match part {
            Part::Identity => self.signed_sup(r, 1.0),
            Part::Positive => {
                let (m, e) = self.signed_sup(r, 1.0);
                (m.max(0.0), e)
            }
            Part::Negative => {
                let (m, e) = self.signed_sup(r, -1.0);
                (m.max(0.0), e)
            }
            Part::Abs => {
                let (hi, e1) = self.signed_sup(r, 1.0);
                let (lo, e2) = self.signed_sup(r, -1.0);
                (hi.max(lo), e1.max(e2))
            }
        };
        CharacteristicValue {
            value,
            error_estimate: err,
            method: if r == 0.0 { Method::ClosedForm } else { Method::GridMax },
        }
    }

    /// Closed-form `C_U(r)`; `U(0)` at `r = 0`.
    pub fn mean(&self, r: f64) -> CharacteristicValue {
        if r == 0.0 {
            return CharacteristicValue::closed(self.value(Complex64::new(0.0, 0.0)));
        }
        let v = self.constant
            + self
                .atoms
                .iter()
                .map(|a| a.mass * r.max(a.modulus).ln())
                .sum::<f64>();
        CharacteristicValue::closed(v)
    }

    /// Angles in `[0, 2π)` where `U` changes sign on the circle.
    fn zero_crossings(&self, r: f64) -> Vec<f64> {
        let nodes = &self.nodes;
        let n = nodes.len();
        let vals: Vec<f64> = self
            .cos
            .iter()
            .zip(&self.sin)
            .map(|(&c, &s)| self.value(Complex64::new(r * c, r * s)))
            .collect();
        let mut out = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            let (mut lo, mut hi) = (nodes[i], if j == 0 { nodes[0] + TAU } else { nodes[j] });
            let (flo, fhi) = (vals[i], vals[j]);
            if flo == 0.0 {
                out.push(lo);
                continue;
            }
            if !(flo.signum() != fhi.signum() && fhi != 0.0) || flo.is_nan() || fhi.is_nan() {
                continue;
            }
            let neg_lo = flo < 0.0;
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (self.at(r, mid) < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(normalize_angle(0.5 * (lo + hi)));
        }
        out
    }

    /// `C_w(r)` for `w = part(U)` by adaptive quadrature in the angle.
    pub fn mean_by_quadrature(
        &self,
        part: Part,
        r: f64,
        quad: &QuadratureSpec,
    ) -> Result<CharacteristicValue> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::arg(format!("radius must be nonnegative, got {r}")));
        }
        if r == 0.0 {
            let v = part.apply(self.value(Complex64::new(0.0, 0.0)));
            return Ok(CharacteristicValue::closed(v));
        }
        let mut hints: Vec<f64> = self
            .atoms
            .iter()
            .filter(|a| a.modulus > 0.0 && (a.modulus - r).abs() <= 0.5 * r)
            .map(|a| a.angle)
            .collect();
        if part != Part::Identity {
            hints.extend(self.zero_crossings(r));
        }
        hints.extend(quad.singularity_hints.iter().map(|&h| normalize_angle(h)));
        hints.sort_by(f64::total_cmp);
        hints.dedup();

        // Start the period in the middle of the widest gap between hints so no
        // hint falls on the seam.
        let start = if hints.is_empty() {
            0.0
        } else {
            let mut best = (hints[0] + TAU - hints[hints.len() - 1], hints[hints.len() - 1]);
            for w in hints.windows(2) {
                if w[1] - w[0] > best.0 {
                    best = (w[1] - w[0], w[0]);
                }
            }
            best.1 + 0.5 * best.0
        };
        let lifted: Vec<f64> = hints
            .iter()
            .map(|&h| if h < start { h + TAU } else { h })
            .collect();
        let spec = quad.with_hints(lifted);
        let est = integrate(|t| part.apply(self.at(r, t)), start, start + TAU, &spec)?;
        Ok(CharacteristicValue {
            value: est.value / TAU,
            error_estimate: est.error / TAU,
            method: Method::Quadrature,
        })
    }
}

/// `M_v(r) = sup_{|z| = r} v(z)`; `+∞` when an atom of the minus component lies
/// on the circle, `v(0)` at `r = 0`.
pub fn max_on_circle<F: AsDelta + ?Sized>(v: &F, r: f64) -> Result<CharacteristicValue> {
    check_radius(r)?;
    Ok(RadialProfile::new(v).max(Part::Identity, r))
}

/// `M_w(r)` for `w = part(v)`, e.g. `M_{U⁺}` or `M_{|u|}`.
pub fn max_of_part<F: AsDelta + ?Sized>(v: &F, part: Part, r: f64) -> Result<CharacteristicValue> {
    check_radius(r)?;
    Ok(RadialProfile::new(v).max(part, r))
}

/// `C_v(r)` in closed form (difference of component means for `U = u - v`).
pub fn circle_mean<F: AsDelta + ?Sized>(v: &F, r: f64) -> Result<CharacteristicValue> {
    check_radius(r)?;
    let d = v.as_delta();
    Ok(CharacteristicValue::closed(
        potential_mean(&d.plus, r) - potential_mean(&d.minus, r),
    ))
}

fn potential_mean(p: &SubharmonicPotential, r: f64) -> f64 {
    if r == 0.0 {
        return p.value(Complex64::new(0.0, 0.0));
    }
    p.constant
        + p.charge
            .atoms()
            .iter()
            .map(|a| a.mass * r.max(a.modulus()).ln())
            .sum::<f64>()
}

/// `C_v(r)` computed by quadrature of `v` on the circle, bypassing the closed form.
pub fn circle_mean_quadrature<F: AsDelta + ?Sized>(
    v: &F,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<CharacteristicValue> {
    RadialProfile::new(v).mean_by_quadrature(Part::Identity, r, quad)
}

/// `C_w(r) = (1/2π) ∫ w(re^{is}) ds` for `w = part(U)`.
pub fn circle_mean_nonlinear<F: AsDelta + ?Sized>(
    u: &F,
    part: Part,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<CharacteristicValue> {
    if r <= 0.0 {
        return Err(Error::arg(format!("circle mean needs r > 0, got {r}")));
    }
    RadialProfile::new(u).mean_by_quadrature(part, r, quad)
}

/// `μ^rad(r) = μ(D̄(r))`.
pub fn radial_count(mu: &AtomicMeasure, r: f64) -> f64 {
    mu.atoms()
        .iter()
        .filter(|a| a.modulus() <= r)
        .map(|a| a.mass)
        .sum()
}

/// `N_μ(r, R) = ∫_r^R μ^rad(t)/t dt = Σ_{|a| ≤ R} m ln(R / max(r, |a|))`.
///
/// `+∞` when an atom sits at the origin and `r = 0 < R`.
pub fn counting_integral(mu: &AtomicMeasure, r: f64, big_r: f64) -> Result<f64> {
    if !(r >= 0.0 && r <= big_r) || !big_r.is_finite() {
        return Err(Error::arg(format!("need 0 <= r <= R, got r = {r}, R = {big_r}")));
    }
    if r == big_r {
        return Ok(0.0);
    }
    Ok(mu
        .atoms()
        .iter()
        .filter(|a| a.modulus() <= big_r)
        .map(|a| {
            let lower = r.max(a.modulus());
            if lower == 0.0 {
                f64::INFINITY
            } else {
                a.mass * (big_r / lower).ln()
            }
        })
        .sum())
}

/// `C_v(r, R) = C_v(R) - C_v(r)`.
pub fn circle_mean_diff<F: AsDelta + ?Sized>(v: &F, r: f64, big_r: f64) -> Result<CharacteristicValue> {
    if !(r > 0.0 && r <= big_r) {
        return Err(Error::arg(format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    let hi = circle_mean(v, big_r)?;
    let lo = circle_mean(v, r)?;
    Ok(CharacteristicValue::closed(hi.value - lo.value))
}

/// `T_U(r, R) = C_{U⁺}(r, R) + N_{Δ_U⁻}(r, R)` in the canonical representation.
pub fn characteristic_t(
    u: &DeltaSubharmonicFn,
    r: f64,
    big_r: f64,
    quad: &QuadratureSpec,
) -> Result<CharacteristicValue> {
    characteristic_t_profile(&RadialProfile::new(u), r, big_r, quad)
}

pub(crate) fn characteristic_t_profile(
    profile: &RadialProfile,
    r: f64,
    big_r: f64,
    quad: &QuadratureSpec,
) -> Result<CharacteristicValue> {
    if !(r > 0.0 && r <= big_r && big_r.is_finite()) {
        return Err(Error::arg(format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    if r == big_r {
        return Ok(CharacteristicValue::closed(0.0));
    }
    let hi = profile.mean_by_quadrature(Part::Positive, big_r, quad)?;
    let lo = profile.mean_by_quadrature(Part::Positive, r, quad)?;
    let n = counting_integral(&profile.canonical().minus.charge, r, big_r)?;
    Ok(CharacteristicValue {
        value: hi.value - lo.value + n,
        error_estimate: hi.error_estimate + lo.error_estimate,
        method: Method::Quadrature,
    })
}

/// Classical Nevanlinna quantities of a rational function at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaValues {
    /// `M(r, f) = max_{|z| = r} |f(z)|`
    pub max_modulus: f64,
    /// `m(r, f)`, mean of `ln⁺|f|`
    pub proximity: f64,
    /// `N(r, f)`
    pub counting: f64,
    /// `T(r, f) = m(r, f) + N(r, f)`
    pub characteristic: f64,
    pub error_estimate: f64,
}

/// `M, m, N, T` for a rational function; `N` includes `n(0, f) ln r` verbatim,
/// so it is negative for `r < 1` when `f` has a pole at the origin.
pub fn nevanlinna(f: &RationalFunctionSpec, r: f64, quad: &QuadratureSpec) -> Result<NevanlinnaValues> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::arg(format!("need r > 0, got {r}")));
    }
    let profile = RadialProfile::new(&f.ln_abs());
    let max = profile.max(Part::Identity, r);
    let m = profile.mean_by_quadrature(Part::Positive, r, quad)?;
    let at_origin = f.pole_count(0.0);
    let counting = f
        .poles()
        .atoms()
        .iter()
        .filter(|a| a.modulus() > 0.0 && a.modulus() <= r)
        .map(|a| a.mass * (r / a.modulus()).ln())
        .sum::<f64>()
        + at_origin * r.ln();
    Ok(NevanlinnaValues {
        max_modulus: max.value.exp(),
        proximity: m.value,
        counting,
        characteristic: m.value + counting,
        error_estimate: m.error_estimate,
    })
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("radius must be nonnegative and finite, got {r}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Atom;
    use std::f64::consts::{E, LN_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-11, 1e-14)
    }

    fn reciprocal() -> DeltaSubharmonicFn {
        SubharmonicPotential::log_modulus(&[c(0.0, 0.0)]).negated()
    }

    fn ln_abs_z() -> DeltaSubharmonicFn {
        SubharmonicPotential::log_modulus(&[c(0.0, 0.0)]).to_delta()
    }

    #[test]
    fn circle_values_stay_accurate_next_to_an_atom() {
        let a = Complex64::from_polar(2.237244979216299, 2.5);
        let u = SubharmonicPotential::new(AtomicMeasure::new(vec![Atom::new(a, 0.7)]).unwrap(), 0.0);
        let profile = RadialProfile::new(&u);
        let rho = a.norm();
        for k in [6, 9, 12, 14] {
            let r = rho * (1.0 + 10f64.powi(-k));
            // On the ray through the atom, |z - a| = r - ρ exactly.
            let exact = 0.7 * (r - rho).ln();
            let v = profile.at(r, profile.atoms[0].angle);
            assert!((v - exact).abs() <= 1e-12 * exact.abs(), "k = {k}: {v} vs {exact}");
            let m = profile.max(Part::Negative, r).value;
            assert!((m + exact).abs() <= 1e-12 * exact.abs(), "k = {k}: {m} vs {}", -exact);
        }
    }

    #[test]
    fn screening_ln_is_accurate() {
        for x in [1e-300, 1e-12, 1e-5, 0.3, 0.7071, 1.0, 1.4142, 1.5, 2.0, 7.3, 1e9, 1e300] {
            assert!((screening_ln(x) - x.ln()).abs() < 2e-9, "{x}");
        }
        assert!(screening_ln(0.0) < -700.0);
    }

    #[test]
    fn max_on_circle_examples() {
        let v = SubharmonicPotential::log_modulus(&[c(2.0, 0.0)]);
        let m = max_on_circle(&v, 1.0).unwrap();
        assert!((m.value - 3f64.ln()).abs() < 1e-12);
        assert_eq!(m.method, Method::GridMax);

        assert!((max_on_circle(&reciprocal(), 0.5).unwrap().value - LN_2).abs() < 1e-14);
        assert_eq!(
            max_on_circle(&SubharmonicPotential::log_modulus(&[c(0.0, 0.0)]), 0.0).unwrap().value,
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn max_is_infinite_when_minus_atom_on_circle() {
        let u = SubharmonicPotential::log_modulus(&[c(0.0, 1.0)]).negated();
        assert_eq!(max_on_circle(&u, 1.0).unwrap().value, f64::INFINITY);
        // A plus atom on the circle only pulls the minimum down.
        let v = SubharmonicPotential::log_modulus(&[c(0.0, 1.0)]);
        assert!((max_on_circle(&v, 1.0).unwrap().value - LN_2).abs() < 1e-12);
    }

    #[test]
    fn narrow_peak_is_found() {
        // Minus atom 1e-3 outside the unit circle at an off-grid angle.
        let a = c(1.001 * 0.3f64.cos(), 1.001 * 0.3f64.sin());
        let u = SubharmonicPotential::log_modulus(&[a]).negated();
        let m = max_on_circle(&u, 1.0).unwrap().value;
        assert!((m - (-(0.001f64).ln())).abs() < 1e-9, "{m}");
    }

    #[test]
    fn circle_mean_examples() {
        let v = SubharmonicPotential::log_modulus(&[c(2.0, 0.0)]);
        assert!((circle_mean(&v, 1.0).unwrap().value - LN_2).abs() < 1e-15);
        let w = SubharmonicPotential::log_modulus(&[c(0.0, 0.0)]);
        assert!((circle_mean(&w, E).unwrap().value - 1.0).abs() < 1e-15);
        let s = SubharmonicPotential::log_modulus(&[c(1.0, 0.0)]);
        assert_eq!(circle_mean(&s, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn circle_mean_matches_brute_force_oracle_on_the_atom() {
        // Oracle: midpoint rule with 10^6 nodes for (1/2π)∫ ln|e^{is} - 1| ds.
        let n = 1_000_000;
        let h = TAU / n as f64;
        let oracle: f64 = (0..n)
            .map(|i| {
                let s = (i as f64 + 0.5) * h;
                (c(s.cos(), s.sin()) - c(1.0, 0.0)).norm().ln()
            })
            .sum::<f64>()
            / n as f64;
        assert!(oracle.abs() < 1e-5);
        let s = SubharmonicPotential::log_modulus(&[c(1.0, 0.0)]);
        let q = circle_mean_quadrature(&s, 1.0, &quad()).unwrap();
        assert!(q.value.abs() < 1e-10, "{q:?}");
        assert!((q.value - oracle).abs() < 1e-5);
    }

    #[test]
    fn circle_mean_nonlinear_examples() {
        let m = circle_mean_nonlinear(&reciprocal(), Part::Positive, 0.5, &quad()).unwrap();
        assert!((m.value - LN_2).abs() < 1e-12);
        let z = circle_mean_nonlinear(&ln_abs_z(), Part::Positive, 0.5, &quad()).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn abs_mean_is_twice_positive_mean_when_mean_vanishes() {
        let u = SubharmonicPotential::log_modulus(&[c(1.0, 0.0)]).to_delta();
        let q = quad();
        let abs = circle_mean_nonlinear(&u, Part::Abs, 1.0, &q).unwrap().value;
        let pos = circle_mean_nonlinear(&u, Part::Positive, 1.0, &q).unwrap().value;
        // Oracle: trapezoid with 10^6 nodes, shifted off the singular angle.
        let n = 1_000_000;
        let oracle: f64 = (0..n)
            .map(|i| {
                let s = (i as f64 + 0.5) * TAU / n as f64;
                (c(s.cos(), s.sin()) - c(1.0, 0.0)).norm().ln().abs()
            })
            .sum::<f64>()
            / n as f64;
        assert!((abs - 2.0 * pos).abs() < 1e-9);
        assert!((abs - oracle).abs() < 1e-5, "{abs} vs {oracle}");
    }

    #[test]
    fn radial_count_examples() {
        assert_eq!(radial_count(&AtomicMeasure::unit_atoms(&[c(0.0, 0.0)]), 0.0), 1.0);
        let mu = AtomicMeasure::new(vec![Atom::new(c(2.0, 0.0), 1.0), Atom::new(c(3.0, 0.0), 2.0)]).unwrap();
        assert_eq!(radial_count(&mu, 2.5), 1.0);
        assert_eq!(radial_count(&AtomicMeasure::empty(), 7.0), 0.0);
    }

    #[test]
    fn counting_integral_examples() {
        let at0 = AtomicMeasure::unit_atoms(&[c(0.0, 0.0)]);
        assert!((counting_integral(&at0, 1.0, E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(counting_integral(&at0, 0.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(counting_integral(&at0, 0.0, 0.0).unwrap(), 0.0);
        assert!(counting_integral(&at0, 2.0, 1.0).is_err());

        // Oracle: μ^rad(t) = 1 on [2, 4], so N = ∫_2^4 dt/t.
        let a2 = AtomicMeasure::unit_atoms(&[c(0.0, 2.0)]);
        let oracle = integrate(|t| if t >= 2.0 { 1.0 / t } else { 0.0 }, 1.0, 4.0, &quad().with_hints(vec![2.0]))
            .unwrap()
            .value;
        let n = counting_integral(&a2, 1.0, 4.0).unwrap();
        assert!((n - LN_2).abs() < 1e-15);
        assert!((n - oracle).abs() < 1e-12);
    }

    #[test]
    fn circle_mean_diff_examples() {
        let w = SubharmonicPotential::log_modulus(&[c(0.0, 0.0)]);
        assert!((circle_mean_diff(&w, 1.0, E).unwrap().value - 1.0).abs() < 1e-15);
        assert_eq!(circle_mean_diff(&w, 1.3, 1.3).unwrap().value, 0.0);
        let v = SubharmonicPotential::log_modulus(&[c(2.0, 0.0)]);
        assert!((circle_mean_diff(&v, 1.0, 4.0).unwrap().value - LN_2).abs() < 1e-15);
    }

    #[test]
    fn characteristic_t_examples() {
        let t = characteristic_t(&reciprocal(), 0.1, E, &quad()).unwrap();
        assert!((t.value - 1.0).abs() < 1e-10, "{t:?}");
        let zero = characteristic_t(&DeltaSubharmonicFn::zero(), 0.3, 2.0, &quad()).unwrap();
        assert_eq!(zero.value, 0.0);
        let t2 = characteristic_t(&ln_abs_z(), 1.0, E, &quad()).unwrap();
        assert!((t2.value - 1.0).abs() < 1e-10);
        assert_eq!(characteristic_t(&ln_abs_z(), 2.0, 2.0, &quad()).unwrap().value, 0.0);
        assert!(characteristic_t(&ln_abs_z(), 2.0, 1.0, &quad()).is_err());
    }

    #[test]
    fn nevanlinna_of_reciprocal() {
        let f = RationalFunctionSpec::reciprocal();
        let at2 = nevanlinna(&f, 2.0, &quad()).unwrap();
        assert!((at2.max_modulus - 0.5).abs() < 1e-14);
        assert!(at2.proximity.abs() < 1e-14);
        assert!((at2.counting - LN_2).abs() < 1e-15);
        assert!((at2.characteristic - LN_2).abs() < 1e-14);

        let half = nevanlinna(&f, 0.5, &quad()).unwrap();
        assert!((half.proximity - LN_2).abs() < 1e-12);
        assert!((half.counting + LN_2).abs() < 1e-15);
        assert!(half.characteristic.abs() < 1e-12);
    }

    #[test]
    fn nevanlinna_of_identity() {
        let f = RationalFunctionSpec::new(AtomicMeasure::unit_atoms(&[c(0.0, 0.0)]), AtomicMeasure::empty(), 1.0).unwrap();
        for r in [0.3, 1.0, 4.0] {
            let v = nevanlinna(&f, r, &quad()).unwrap();
            assert_eq!(v.counting, 0.0);
            assert!((v.characteristic - r.ln().max(0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn positive_part_of_max_is_max_of_positive_part() {
        let u = DeltaSubharmonicFn::new(
            SubharmonicPotential::new(AtomicMeasure::unit_atoms(&[c(0.5, 0.2), c(-1.0, 1.0)]), -0.4),
            SubharmonicPotential::new(AtomicMeasure::unit_atoms(&[c(2.0, -1.0)]), 0.3),
        );
        let p = RadialProfile::new(&u);
        for r in [0.1, 0.4, 0.9, 1.7, 3.0] {
            let m = p.max(Part::Identity, r).value;
            assert_eq!(m.max(0.0), p.max(Part::Positive, r).value);
            assert!(p.max(Part::Abs, r).value <= p.max(Part::Positive, r).value + p.max(Part::Negative, r).value);
        }
    }
}
