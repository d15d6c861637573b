//! Measurable sets on the line as finite unions of intervals, and nonnegative
//! piecewise-polynomial weights with their `L^p` norms.
//!
//! All intervals are stored closed. Every quantity here is measure-theoretic,
//! so whether an endpoint belongs to the set never matters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Estimate, QuadratureSpec};

/// Finite union of disjoint closed intervals, sorted, with `b_i < a_{i+1}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl TryFrom<Vec<[f64; 2]>> for IntervalSet {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        IntervalSet::new(v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<IntervalSet> for Vec<[f64; 2]> {
    fn from(s: IntervalSet) -> Self {
        s.intervals.into_iter().map(|(a, b)| [a, b]).collect()
    }
}

impl IntervalSet {
    /// Normalizes: overlapping or touching intervals merge, zero-length ones
    /// are dropped.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && a <= b) {
                return Err(Error::arg(format!("bad interval [{a}, {b}]")));
            }
        }
        intervals.retain(|(a, b)| b > a);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Ok(Self { intervals: out })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contained_in(&self, lo: f64, hi: f64) -> bool {
        self.intervals.iter().all(|&(a, b)| a >= lo && b <= hi)
    }

    /// `E ∩ [lo, hi]`.
    pub fn intersect(&self, lo: f64, hi: f64) -> IntervalSet {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (b > a).then_some((a, b))
            })
            .collect();
        IntervalSet { intervals }
    }

    /// `E(r) = E ∩ [1, r)`.
    pub fn truncate(&self, r: f64) -> Result<IntervalSet> {
        if !(r >= 1.0) {
            return Err(Error::arg(format!("truncation radius must be >= 1, got {r}")));
        }
        Ok(self.intersect(1.0, r))
    }

    pub fn shifted(&self, dx: f64) -> IntervalSet {
        IntervalSet {
            intervals: self.intervals.iter().map(|&(a, b)| (a + dx, b + dx)).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> IntervalSet {
        IntervalSet {
            intervals: self.intervals.iter().map(|&(a, b)| (a * s, b * s)).collect(),
        }
    }
}

/// Dense polynomial `c0 + c1 t + c2 t² + ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::constant(0.0);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    /// Real roots in `[a, b]`, found by isolating monotone pieces between the
    /// critical points and bisecting sign changes.
    pub fn roots_in(&self, a: f64, b: f64) -> Vec<f64> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let mut knots = vec![a];
        knots.extend(self.derivative().roots_in(a, b));
        knots.push(b);
        let mut roots = Vec::new();
        for w in knots.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval(lo), self.eval(hi));
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if fhi == 0.0 || flo.signum() == fhi.signum() {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.eval(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        if self.eval(b) == 0.0 {
            roots.push(b);
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }

    /// `(min, max)` over `[a, b]`, exact up to root isolation.
    pub fn range_on(&self, a: f64, b: f64) -> (f64, f64) {
        let mut pts = vec![a, b];
        pts.extend(self.derivative().roots_in(a, b));
        pts.iter().map(|&t| self.eval(t)).fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), v| (lo.min(v), hi.max(v)),
        )
    }
}

/// Exponent `p ∈ (1, ∞]`; serialized as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p > 1.0 {
            Ok(Exponent(p))
        } else {
            Err(Error::arg(format!("exponent p must lie in (1, inf], got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `q = p/(p-1)`, and `q = 1` for `p = ∞`.
    pub fn conjugate(self) -> f64 {
        if self.is_infinite() {
            1.0
        } else {
            self.0 / (self.0 - 1.0)
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serialize_extended(self.0, s)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = crate::deserialize_extended(d)?;
        Exponent::new(p).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightPiece {
    pub lo: f64,
    pub hi: f64,
    pub poly: Polynomial,
}

/// Nonnegative piecewise-polynomial weight `g` with an exponent `p`.
///
/// `g` vanishes outside its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pieces: Vec<WeightPiece>,
    p: Exponent,
}

#[derive(Serialize, Deserialize)]
struct PieceDoc {
    interval: [f64; 2],
    coeffs: Vec<f64>,
    p: Exponent,
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<PieceDoc> = self
            .pieces
            .iter()
            .map(|pc| PieceDoc {
                interval: [pc.lo, pc.hi],
                coeffs: pc.poly.coeffs().to_vec(),
                p: self.p,
            })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<PieceDoc>::deserialize(d)?;
        let Some(p) = docs.first().map(|doc| doc.p) else {
            return Err(de::Error::custom("a weight needs at least one piece"));
        };
        if docs.iter().any(|doc| doc.p != p) {
            return Err(de::Error::custom("all weight pieces must share the exponent p"));
        }
        let pieces = docs
            .into_iter()
            .map(|doc| WeightPiece {
                lo: doc.interval[0],
                hi: doc.interval[1],
                poly: Polynomial::new(doc.coeffs),
            })
            .collect();
        Weight::new(pieces, p).map_err(de::Error::custom)
    }
}

impl Weight {
    /// Pieces must be nonempty, sorted, with disjoint interiors, and each
    /// polynomial nonnegative on its piece.
    pub fn new(mut pieces: Vec<WeightPiece>, p: Exponent) -> Result<Self> {
        pieces.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        for pc in &pieces {
            if !(pc.lo.is_finite() && pc.hi.is_finite() && pc.lo < pc.hi) {
                return Err(Error::arg(format!("bad weight piece [{}, {}]", pc.lo, pc.hi)));
            }
            if pc.poly.coeffs().iter().any(|c| !c.is_finite()) {
                return Err(Error::arg("weight coefficients must be finite"));
            }
            let (min, max) = pc.poly.range_on(pc.lo, pc.hi);
            if min < -1e-12 * (1.0 + max.abs()) {
                return Err(Error::arg(format!(
                    "weight is negative on [{}, {}] (min {min:e})",
                    pc.lo, pc.hi
                )));
            }
        }
        if pieces.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::arg("weight pieces overlap"));
        }
        Ok(Self { pieces, p })
    }

    /// `g ≡ c` on `[lo, hi]`.
    pub fn constant(c: f64, lo: f64, hi: f64, p: Exponent) -> Result<Self> {
        Self::new(
            vec![WeightPiece {
                lo,
                hi,
                poly: Polynomial::constant(c),
            }],
            p,
        )
    }

    pub fn pieces(&self) -> &[WeightPiece] {
        &self.pieces
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    pub fn conjugate(&self) -> f64 {
        self.p.conjugate()
    }

    pub fn with_exponent(&self, p: Exponent) -> Weight {
        Weight {
            pieces: self.pieces.clone(),
            p,
        }
    }

    /// `g(t)`, clamped at zero against rounding.
    pub fn eval(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .find(|pc| t >= pc.lo && t <= pc.hi)
            .map_or(0.0, |pc| pc.poly.eval(t).max(0.0))
    }

    /// `g(t / s)` as a weight on the scaled line.
    pub fn rescaled(&self, s: f64) -> Weight {
        let pieces = self
            .pieces
            .iter()
            .map(|pc| WeightPiece {
                lo: pc.lo * s,
                hi: pc.hi * s,
                poly: Polynomial::new(
                    pc.poly
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c / s.powi(i as i32))
                        .collect(),
                ),
            })
            .collect();
        Weight { pieces, p: self.p }
    }

    /// Segments of `E ∩ piece` with their polynomial.
    fn overlaps<'a>(&'a self, e: &'a IntervalSet) -> impl Iterator<Item = (f64, f64, &'a Polynomial)> + 'a {
        e.intervals().iter().flat_map(move |&(a, b)| {
            self.pieces.iter().filter_map(move |pc| {
                let (lo, hi) = (a.max(pc.lo), b.min(pc.hi));
                (hi > lo).then_some((lo, hi, &pc.poly))
            })
        })
    }
}

/// `‖g‖_{L^p(E)}`: quadrature of `g^p` for finite `p`, the exact maximum over
/// `E` for `p = ∞`.
pub fn lp_norm(g: &Weight, e: &IntervalSet) -> Result<Estimate> {
    if g.p.is_infinite() {
        let max = g
            .overlaps(e)
            .map(|(lo, hi, poly)| poly.range_on(lo, hi).1)
            .fold(0.0f64, f64::max);
        return Ok(Estimate {
            value: max,
            ..Estimate::ZERO
        });
    }
    let p = g.p.value();
    let spec = QuadratureSpec::with_tolerances(1e-12, 1e-300);
    let mut total = Estimate::ZERO;
    for (lo, hi, poly) in g.overlaps(e) {
        let hints = poly.roots_in(lo, hi);
        let est = integrate(|t| poly.eval(t).max(0.0).powf(p), lo, hi, &spec.with_hints(hints))?;
        total = total.combine(est);
    }
    let value = total.value.max(0.0).powf(1.0 / p);
    // d(x^{1/p}) = x^{1/p - 1}/p dx
    let error = if total.value > 0.0 {
        value / (p * total.value) * total.error
    } else {
        total.error.powf(1.0 / p)
    };
    Ok(Estimate { value, error, ..total })
}

/// `‖h‖_{L^q(E)}` for a pointwise function `h ≥ 0`, `q ∈ [1, ∞)`.
pub fn lq_norm_of<H: Fn(f64) -> f64>(
    h: H,
    q: f64,
    e: &IntervalSet,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let mut total = Estimate::ZERO;
    for &(a, b) in e.intervals() {
        let est = integrate(|t| h(t).abs().powf(q), a, b, quad)?;
        total = total.combine(est);
    }
    let value = total.value.max(0.0).powf(1.0 / q);
    let error = if total.value > 0.0 {
        value / (q * total.value) * total.error
    } else {
        0.0
    };
    Ok(Estimate { value, error, ..total })
}

/// `∫_E h g dλ` with panel breaks at interval ends, piece ends and `hints`.
pub fn integrate_weighted<H: Fn(f64) -> f64>(
    h: H,
    g: &Weight,
    e: &IntervalSet,
    quad: &QuadratureSpec,
    hints: &[f64],
) -> Result<Estimate> {
    let mut total = Estimate::ZERO;
    for (lo, hi, poly) in g.overlaps(e) {
        let local: Vec<f64> = hints
            .iter()
            .chain(quad.singularity_hints.iter())
            .copied()
            .filter(|&x| x >= lo && x <= hi)
            .collect();
        let spec = quad.with_hints(local);
        let est = integrate(|t| h(t) * poly.eval(t).max(0.0), lo, hi, &spec)?;
        total = total.combine(est);
    }
    Ok(total)
}

/// Both sides of the rearrangement bound `∫_E f ≤ 2 ∫_0^{λ(E)/2} f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantSides {
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
}

/// For `f` even and decreasing on `(0, a)` (given through its values on
/// `[0, a)`; `f(t)` is evaluated at `|t|`) and `E ⊂ (-a, a)`.
pub fn rearranged_majorant<F: Fn(f64) -> f64>(
    f: F,
    e: &IntervalSet,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<MajorantSides> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::arg(format!("half-width must be positive, got {a}")));
    }
    if !e.contained_in(-a, a) {
        return Err(Error::arg("E must lie in (-a, a)"));
    }
    const SAMPLES: usize = 1000;
    let grid: Vec<f64> = (1..=SAMPLES).map(|i| a * i as f64 / (SAMPLES + 1) as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    if let Some(w) = vals
        .windows(2)
        .find(|w| w[1] > w[0] + 1e-12 * (1.0 + w[0].abs()))
    {
        return Err(Error::arg(format!(
            "f is not decreasing on (0, a): {} < {}",
            w[0], w[1]
        )));
    }
    let spec = quad.with_hints(vec![0.0]);
    let mut lhs = Estimate::ZERO;
    for &(lo, hi) in e.intervals() {
        lhs = lhs.combine(integrate(|t| f(t.abs()), lo, hi, &spec)?);
    }
    let rhs = integrate(&f, 0.0, 0.5 * e.measure(), &spec)?.scale(2.0);
    Ok(MajorantSides {
        lhs: lhs.value,
        rhs: rhs.value,
        error: lhs.error + rhs.error,
    })
}

/// Random `E ⊂ [0, r]` with `mes E = target` and at most `max_pieces` pieces.
pub fn random_interval_set(seed: u64, r: f64, target: f64, max_pieces: usize) -> Result<IntervalSet> {
    random_interval_set_with(&mut ChaCha8Rng::seed_from_u64(seed), r, target, max_pieces)
}

pub fn random_interval_set_with<R: Rng + ?Sized>(
    rng: &mut R,
    r: f64,
    target: f64,
    max_pieces: usize,
) -> Result<IntervalSet> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::arg(format!("r must be positive, got {r}")));
    }
    if !(target >= 0.0 && target <= r) {
        return Err(Error::arg(format!("target measure {target} is not in [0, {r}]")));
    }
    if target == 0.0 {
        return Ok(IntervalSet::empty());
    }
    if max_pieces == 0 {
        return Err(Error::arg("need at least one piece for a positive measure"));
    }
    if target == r {
        return IntervalSet::interval(0.0, r);
    }
    let n = rng.random_range(1..=max_pieces);
    let lengths: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let gaps: Vec<f64> = (0..=n).map(|_| rng.random_range(0.0..1.0)).collect();
    let lsum: f64 = lengths.iter().sum();
    let gsum: f64 = gaps.iter().sum();
    let slack = r - target;

    let mut intervals = Vec::with_capacity(n);
    let mut x = slack * gaps[0] / gsum;
    let mut placed = 0.0;
    for i in 0..n {
        let len = if i + 1 == n {
            target - placed
        } else {
            target * lengths[i] / lsum
        };
        intervals.push((x, x + len));
        placed += len;
        x += len + slack * gaps[i + 1] / gsum;
    }
    // Keep the last interval inside [0, r] without changing its length.
    if let Some(last) = intervals.last_mut() {
        if last.1 > r {
            let over = last.1 - r;
            *last = (last.0 - over, r);
        }
    }
    IntervalSet::new(intervals)
}
