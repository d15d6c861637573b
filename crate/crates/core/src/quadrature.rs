//! Adaptive Gauss-Kronrod quadrature for integrands with integrable
//! logarithmic singularities and kinks at known abscissae.
//!
//! Every hinted abscissa becomes a mandatory panel boundary, and the panels on
//! either side of a hint are pre-split geometrically toward it. From there the
//! largest-error panel is bisected until the global estimate meets
//! `max(abs_tol, rel_tol * |value|)`. The 21-point Kronrod rule never samples
//! panel endpoints, so an integrand that is infinite exactly at a hint is fine.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy contract and singularity information for one integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Abscissae where the integrand has an integrable log singularity or a kink.
    #[serde(default)]
    pub singularity_hints: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_panels: 1 << 16,
            singularity_hints: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    /// Same tolerances, different hints.
    pub fn with_hints(&self, hints: Vec<f64>) -> Self {
        Self {
            singularity_hints: hints,
            ..self.clone()
        }
    }

    /// Error level at which a value is accepted.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A converged integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: 0.0,
        error: 0.0,
        panels: 0,
        evaluations: 0,
    };

    /// Sum of two independent estimates.
    pub fn combine(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            panels: self.panels + other.panels,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, s: f64) -> Estimate {
        Estimate {
            value: self.value * s,
            error: self.error * s.abs(),
            ..self
        }
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_057_355,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], ..., XGK[9]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Number of geometric pre-splits placed on each side of a hint.
const GRADING_LEVELS: i32 = 4;
const GRADING_RATIO: f64 = 0.25;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || error.is_nan() {
        error = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error,
        abs: res_abs,
    }
}

fn initial_breakpoints(a: f64, b: f64, hints: &[f64]) -> Vec<f64> {
    let mut fixed: Vec<f64> = hints
        .iter()
        .copied()
        .filter(|h| h.is_finite() && *h >= a && *h <= b)
        .collect();
    fixed.push(a);
    fixed.push(b);
    fixed.sort_by(f64::total_cmp);
    fixed.dedup();

    let hinted = |x: f64| hints.iter().any(|h| *h == x);
    let mut points = fixed.clone();
    for (i, &x) in fixed.iter().enumerate() {
        if !hinted(x) {
            continue;
        }
        if i > 0 {
            let d = x - fixed[i - 1];
            points.extend((1..=GRADING_LEVELS).map(|j| x - d * GRADING_RATIO.powi(j)));
        }
        if i + 1 < fixed.len() {
            let d = fixed[i + 1] - x;
            points.extend((1..=GRADING_LEVELS).map(|j| x + d * GRADING_RATIO.powi(j)));
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

#[derive(Debug, Default)]
struct Sums {
    value: f64,
    error: f64,
    abs: f64,
}

impl Sums {
    fn of<'a>(panels: impl Iterator<Item = &'a Panel>) -> Self {
        let mut s = Sums::default();
        for p in panels {
            s.add(p, 1.0);
        }
        s
    }

    fn add(&mut self, p: &Panel, sign: f64) {
        self.value += sign * p.value;
        self.error += sign * p.error;
        self.abs += sign * p.abs;
    }

    /// Accepts at the requested tolerance, or once the error estimate is down
    /// to the rounding floor of `∫|f|` (e.g. integrals that vanish exactly).
    fn converged(&self, spec: &QuadratureSpec) -> bool {
        self.value.is_finite()
            && self.error <= spec.target(self.value).max(100.0 * f64::EPSILON * self.abs)
    }
}

/// Integrates `f` over `[a, b]` to the accuracy requested by `spec`.
///
/// Reversed limits flip the sign. On failure the error carries the best
/// estimate reached within `spec.max_panels` panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::arg(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate::ZERO);
    }
    if a > b {
        return integrate(f, b, a, spec).map(|e| e.scale(-1.0));
    }

    let points = initial_breakpoints(a, b, &spec.singularity_hints);
    let mut heap = BinaryHeap::with_capacity(points.len() * 2);
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evaluations = 0usize;
    let mut sums = Sums::default();
    for w in points.windows(2) {
        let p = gk21(&f, w[0], w[1]);
        evaluations += 21;
        sums.add(&p, 1.0);
        heap.push(p);
    }

    let mut iterations = 0usize;
    loop {
        if iterations % 32 == 0 {
            // Refresh running sums to stop cancellation drift.
            sums = Sums::of(heap.iter().chain(frozen.iter()));
        }
        iterations += 1;
        if sums.converged(spec) {
            break;
        }
        let panel_count = heap.len() + frozen.len();
        let Some(worst) = heap.pop() else {
            return Err(Error::Quadrature {
                estimate: sums.value,
                error_estimate: sums.error,
                panels: panel_count,
            });
        };
        if panel_count >= spec.max_panels {
            heap.push(worst);
            sums = Sums::of(heap.iter().chain(frozen.iter()));
            if sums.converged(spec) {
                break;
            }
            return Err(Error::Quadrature {
                estimate: sums.value,
                error_estimate: sums.error,
                panels: panel_count,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 1e-15 * worst.a.abs().max(worst.b.abs())
        {
            frozen.push(worst);
            continue;
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        evaluations += 42;
        sums.add(&left, 1.0);
        sums.add(&right, 1.0);
        sums.add(&worst, -1.0);
        heap.push(left);
        heap.push(right);
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    if !value.is_finite() {
        return Err(Error::Quadrature {
            estimate: value,
            error_estimate: error,
            panels: panels.len(),
        });
    }
    Ok(Estimate {
        value,
        error,
        panels: panels.len(),
        evaluations,
    })
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `width`. Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}
