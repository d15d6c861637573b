//! Seeded generation of admissible checker instances.

use std::f64::consts::{E, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::instance::{Instance, CHECKERS};
use super::rng::{log_uniform, stream};
use super::suite::SuiteConfig;
use crate::error::{Error, Result};
use crate::inequalities::DecreasingProfile;
use crate::model::{Atom, AtomicMeasure, DeltaSubharmonicFn, RationalFunctionSpec, SubharmonicPotential};
use crate::sets::{random_interval_set_with, Exponent, IntervalSet, Polynomial, Weight, WeightPiece};

const MAX_ATTEMPTS: u64 = 1000;
/// Minimal distance between atom moduli and the radii a checker probes.
const PROBE_GAP: f64 = 1e-3;

/// Draws an admissible instance of `checker`. Attempt `j` uses the stream
/// keyed by `(seed, checker, j)`, so the result depends only on its inputs.
pub fn generate_instance(seed: u64, checker: &str, config: &SuiteConfig) -> Result<Instance> {
    if !CHECKERS.contains(&checker) {
        return Err(Error::UnknownChecker(checker.into()));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream(seed, checker, attempt);
        let mut g = Generator { rng: &mut rng, config };
        if let Some(inst) = g.draw(checker)? {
            return Ok(inst);
        }
    }
    Err(Error::Generation {
        checker: checker.into(),
        attempts: MAX_ATTEMPTS as usize,
    })
}

struct Generator<'a> {
    rng: &'a mut ChaCha20Rng,
    config: &'a SuiteConfig,
}

fn clear_of(moduli: impl IntoIterator<Item = f64>, radii: &[f64]) -> bool {
    moduli
        .into_iter()
        .all(|m| radii.iter().all(|&r| (m - r).abs() >= PROBE_GAP))
}

fn delta_moduli(u: &DeltaSubharmonicFn) -> Vec<f64> {
    u.plus.charge.moduli().chain(u.minus.charge.moduli()).collect()
}

impl Generator<'_> {
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn atom_count(&mut self) -> usize {
        let [lo, hi] = self.config.atom_count_range;
        self.rng.random_range(lo..=hi)
    }

    fn point(&mut self, modulus: f64) -> Complex64 {
        Complex64::from_polar(modulus, self.uniform(0.0, TAU))
    }

    fn modulus(&mut self) -> f64 {
        let [lo, hi] = self.config.radius_range;
        self.uniform(lo, hi)
    }

    fn measure(&mut self, count: usize) -> Result<AtomicMeasure> {
        let atoms = (0..count)
            .map(|_| {
                let m = self.modulus();
                let mass = self.uniform(0.2, 2.0);
                Atom::new(self.point(m), mass)
            })
            .collect();
        AtomicMeasure::new(atoms)
    }

    fn potential(&mut self, count: usize) -> Result<SubharmonicPotential> {
        let charge = self.measure(count)?;
        Ok(SubharmonicPotential::new(charge, self.uniform(-2.0, 2.0)))
    }

    /// Random split of the atoms between the two components.
    fn delta(&mut self) -> Result<DeltaSubharmonicFn> {
        let n = self.atom_count();
        let plus = (0..n).filter(|_| self.rng.random_bool(0.5)).count();
        Ok(DeltaSubharmonicFn::new(self.potential(plus)?, self.potential(n - plus)?))
    }

    /// `E ⊂ [lo, hi]` with measure log-uniform in `[1e-3, 1]·(hi - lo)`.
    fn set(&mut self, lo: f64, hi: f64) -> Result<IntervalSet> {
        let len = hi - lo;
        let target = len * log_uniform(self.rng, 1e-3, 1.0);
        Ok(random_interval_set_with(self.rng, len, target, self.config.max_pieces)?.shifted(lo))
    }

    /// Nonnegative piecewise polynomial on `[lo, hi]`: 1–3 pieces, degree ≤ 2,
    /// nonnegative coefficients in the local variable `t - piece start`
    /// expanded into the global variable.
    fn weight(&mut self, lo: f64, hi: f64, p: Exponent) -> Result<Weight> {
        let n = self.rng.random_range(1..=3usize);
        let mut cuts: Vec<f64> = (1..n).map(|_| self.uniform(lo, hi)).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.insert(0, lo);
        cuts.push(hi);
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let degree = self.rng.random_range(0..=2usize);
            let local: Vec<f64> = (0..=degree).map(|_| self.uniform(0.0, 2.0)).collect();
            pieces.push(WeightPiece {
                lo: w[0],
                hi: w[1],
                poly: shift_polynomial(&local, w[0]),
            });
        }
        Weight::new(pieces, p)
    }

    fn draw(&mut self, checker: &str) -> Result<Option<Instance>> {
        let ks = self.config.k_values.clone();
        let bs = self.config.b_values.clone();
        let p0 = self.config.p_values[0];
        let inst = match checker {
            "lemma2_check" => {
                let big_r = self.uniform(0.5, 5.0);
                let n = self.atom_count();
                let atoms = (0..n)
                    .map(|_| {
                        let m = self.uniform(0.0, big_r);
                        let mass = self.uniform(0.2, 2.0);
                        Atom::new(self.point(m), mass)
                    })
                    .collect();
                let measure = AtomicMeasure::new(atoms)?;
                let r = self.uniform(0.0, big_r);
                Instance::Lemma2 { measure, r, big_r }
            }
            "lemma3_check" => {
                let q = self.uniform(0.0, 6.0);
                let big_a = log_uniform(self.rng, 0.1, 100.0);
                let a = big_a / E * log_uniform(self.rng, 1e-6, 1.0);
                Instance::Lemma3 { q, big_a, a }
            }
            "lemma4_check" => {
                let big_r = self.uniform(0.5, 5.0);
                let r = big_r * self.uniform(0.1, 1.0);
                let set = self.set(0.0, r)?;
                let x = self.uniform(0.0, big_r);
                let q = self.uniform(1.0, 5.0);
                Instance::Lemma4 { set, x, r, big_r, q }
            }
            "lemma_a_check" => {
                let a = self.uniform(0.5, 3.0);
                let inner = a * (1.0 - 1e-6);
                let set = self.set(-inner, inner)?;
                let profile = match self.rng.random_range(0..4u8) {
                    0 => DecreasingProfile::Tent { a },
                    1 => DecreasingProfile::Exponential {
                        c: self.uniform(0.1, 5.0),
                    },
                    2 => DecreasingProfile::Power {
                        alpha: self.uniform(0.1, 0.9),
                    },
                    _ => DecreasingProfile::LogPower {
                        s: a * self.uniform(1.0, 3.0),
                        q: self.uniform(0.5, 3.0),
                    },
                };
                Instance::LemmaA { profile, set, a }
            }
            "lemma1_check" => {
                let function = self.delta()?;
                let r = self.uniform(0.5, 3.0);
                let big_r = r * self.uniform(1.1, 3.0);
                if !clear_of(delta_moduli(&function), &[r, big_r]) {
                    return Ok(None);
                }
                let set = self.set(0.0, r)?;
                let weight = self.weight(0.0, r, p0)?;
                Instance::Lemma1 {
                    function,
                    set,
                    weight,
                    r,
                    big_r,
                }
            }
            "main_lemma_check" => {
                let function = self.delta()?;
                let r = self.uniform(0.5, 3.0);
                let mut radii = vec![r];
                for &b in &bs {
                    radii.extend([(1.0 + b) * r, (1.0 + b) * (1.0 + b) * r]);
                }
                if !clear_of(delta_moduli(&function), &radii) {
                    return Ok(None);
                }
                let set = self.set(0.0, r)?;
                let weight = self.weight(0.0, r, p0)?;
                Instance::MainLemma {
                    function,
                    set,
                    weight,
                    r,
                    b: bs[0],
                }
            }
            "main_theorem_T" | "main_theorem_M" => {
                let r = self.uniform(0.5, 3.0);
                let r0 = r * self.uniform(0.05, 0.9);
                let mut radii = vec![r0, r];
                for &k in &ks {
                    radii.extend([k.sqrt() * r, k * r]);
                }
                let set = self.set(0.0, r)?;
                let weight = self.weight(0.0, r, p0)?;
                if checker == "main_theorem_T" {
                    let function = self.delta()?;
                    let moduli = delta_moduli(&function);
                    if moduli.is_empty() || !clear_of(moduli, &radii) {
                        return Ok(None);
                    }
                    Instance::MainTheoremT {
                        function,
                        set,
                        weight,
                        r,
                        r0,
                        k: ks[0],
                    }
                } else {
                    let n = self.atom_count();
                    let potential = self.potential(n)?;
                    if !clear_of(potential.charge.moduli(), &radii) {
                        return Ok(None);
                    }
                    Instance::MainTheoremM {
                        potential,
                        set,
                        weight,
                        r,
                        r0,
                        k: ks[0],
                    }
                }
            }
            "poisson_jensen_check" => {
                let n = self.atom_count();
                let potential = self.potential(n)?;
                let r = self.uniform(0.1, 5.0);
                let big_r = r * self.uniform(1.1, 4.0);
                if !clear_of(potential.charge.moduli(), &[r, big_r]) {
                    return Ok(None);
                }
                Instance::PoissonJensen { potential, r, big_r }
            }
            "nevanlinna_ratio" => {
                let rational = self.rational()?;
                let r = self.uniform(1.0, 5.0);
                let moduli: Vec<f64> = rational.zeros().moduli().chain(rational.poles().moduli()).collect();
                let mut radii = vec![r];
                radii.extend(ks.iter().map(|k| k * r));
                if moduli.is_empty() || !clear_of(moduli, &radii) {
                    return Ok(None);
                }
                Instance::NevanlinnaRatio { rational, r, k: ks[0] }
            }
            "small_intervals_ratio" => {
                let n = self.atom_count();
                let potential = self.potential(n)?;
                let r = self.uniform(0.5, 2.0);
                let big_r = r * self.uniform(1.2, 3.0);
                let r0 = r * self.uniform(0.0, 1.0);
                let b = self.uniform(0.05, 1.0);
                if !clear_of(potential.charge.moduli(), &[r0, r, big_r, (1.0 + b) * big_r]) {
                    return Ok(None);
                }
                let set = self.set(r, big_r)?;
                let weight = self.weight(r, big_r, Exponent::INFINITY)?;
                Instance::SmallIntervals {
                    potential,
                    set,
                    weight,
                    r0,
                    r,
                    big_r,
                    b,
                }
            }
            other => return Err(Error::UnknownChecker(other.into())),
        };
        Ok(Some(inst))
    }

    /// Rational function with 0–4 zeros and 0–4 poles (at least one of
    /// either), integer multiplicities 1–3.
    fn rational(&mut self) -> Result<RationalFunctionSpec> {
        let side = |g: &mut Self| -> Result<AtomicMeasure> {
            let n = g.rng.random_range(0..=4usize);
            let atoms = (0..n)
                .map(|_| {
                    let m = g.modulus();
                    let mass = g.rng.random_range(1..=3u32) as f64;
                    Atom::new(g.point(m), mass)
                })
                .collect();
            AtomicMeasure::new(atoms)
        };
        let zeros = side(self)?;
        let poles = side(self)?;
        let scale = log_uniform(self.rng, 0.1, 10.0);
        RationalFunctionSpec::new(zeros, poles, scale)
    }
}

/// Coefficients of `Σ c_i (t - t0)^i` in powers of `t`.
fn shift_polynomial(local: &[f64], t0: f64) -> Polynomial {
    let mut out = vec![0.0; local.len()];
    for (i, &c) in local.iter().enumerate() {
        // (t - t0)^i = Σ_j C(i, j) t^j (-t0)^{i-j}
        let mut binom = 1.0;
        for j in 0..=i {
            out[j] += c * binom * (-t0).powi((i - j) as i32);
            binom = binom * (i - j) as f64 / (j + 1) as f64;
        }
    }
    Polynomial::new(out)
}
