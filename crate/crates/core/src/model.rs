//! Subharmonic and δ-subharmonic test functions built from finite atomic
//! Riesz charges.
//!
//! A [`SubharmonicPotential`] is `c + Σ m_j ln|z - a_j|`; its Riesz measure is
//! the atomic measure `Σ m_j δ_{a_j}`. A [`DeltaSubharmonicFn`] is an ordered
//! pair `(u, v)` standing for `U = u - v`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub re: f64,
    pub im: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(center: Complex64, mass: f64) -> Self {
        Self {
            re: center.re,
            im: center.im,
            mass,
        }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `ln|z - a|`, `-inf` at the center.
    #[inline]
    pub fn log_distance(&self, z: Complex64) -> f64 {
        let dx = z.re - self.re;
        let dy = z.im - self.im;
        0.5 * (dx * dx + dy * dy).ln()
    }

    fn same_center(&self, other: &Atom) -> bool {
        self.re == other.re && self.im == other.im
    }
}

/// Finite positive point-mass measure on the plane.
///
/// Atoms are kept sorted by center with strictly positive masses; atoms with
/// exactly equal centers are merged by adding their masses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<Vec<Atom>> for AtomicMeasure {
    type Error = Error;
    fn try_from(atoms: Vec<Atom>) -> Result<Self> {
        AtomicMeasure::new(atoms)
    }
}

impl From<AtomicMeasure> for Vec<Atom> {
    fn from(m: AtomicMeasure) -> Self {
        m.atoms
    }
}

fn sort_and_merge(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match merged.last_mut() {
            Some(last) if last.same_center(&a) => last.mass += a.mass,
            _ => merged.push(a),
        }
    }
    merged
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::arg(format!("atom center must be finite: {a:?}")));
            }
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::arg(format!("atom mass must be positive and finite: {a:?}")));
            }
        }
        Ok(Self {
            atoms: sort_and_merge(atoms),
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Unit masses at the given centers.
    pub fn unit_atoms(centers: &[Complex64]) -> Self {
        Self {
            atoms: sort_and_merge(centers.iter().map(|c| Atom::new(*c, 1.0)).collect()),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Mass at exactly this center.
    pub fn mass_at(&self, z: Complex64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.re == z.re && a.im == z.im)
            .map(|a| a.mass)
            .sum()
    }

    /// `Σ m_j ln|z - a_j|`.
    #[inline]
    pub fn log_potential(&self, z: Complex64) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.log_distance(z)).sum()
    }

    /// Image under `z ↦ s z`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            atoms: sort_and_merge(
                self.atoms
                    .iter()
                    .map(|a| Atom {
                        re: a.re * s,
                        im: a.im * s,
                        mass: a.mass,
                    })
                    .collect(),
            ),
        }
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(Atom::modulus)
    }
}

/// `const + Σ m_j ln|z - a_j|`, a subharmonic function `≢ -∞` whose Riesz
/// measure is `charge`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SubharmonicPotential {
    #[serde(rename = "atoms")]
    pub charge: AtomicMeasure,
    #[serde(rename = "const", default)]
    pub constant: f64,
}

impl SubharmonicPotential {
    pub fn new(charge: AtomicMeasure, constant: f64) -> Self {
        Self { charge, constant }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(AtomicMeasure::empty(), c)
    }

    /// `ln|z - a|` for each center, unit masses.
    pub fn log_modulus(centers: &[Complex64]) -> Self {
        Self::new(AtomicMeasure::unit_atoms(centers), 0.0)
    }

    /// Value at `z`; `-inf` exactly at atom centers.
    #[inline]
    pub fn value(&self, z: Complex64) -> f64 {
        self.constant + self.charge.log_potential(z)
    }

    pub fn riesz_measure(&self) -> &AtomicMeasure {
        &self.charge
    }

    /// As the δ-subharmonic function `(self, 0)`.
    pub fn to_delta(&self) -> DeltaSubharmonicFn {
        DeltaSubharmonicFn::new(self.clone(), SubharmonicPotential::default())
    }

    /// `-self` as the δ-subharmonic function `(0, self)`.
    pub fn negated(&self) -> DeltaSubharmonicFn {
        DeltaSubharmonicFn::new(SubharmonicPotential::default(), self.clone())
    }
}

/// `U = plus - minus` for two subharmonic potentials.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionDoc", into = "FunctionDoc")]
pub struct DeltaSubharmonicFn {
    pub plus: SubharmonicPotential,
    pub minus: SubharmonicPotential,
}

/// Flat on-disk form of a [`DeltaSubharmonicFn`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FunctionDoc {
    #[serde(default)]
    pub plus_atoms: Vec<Atom>,
    #[serde(default)]
    pub minus_atoms: Vec<Atom>,
    #[serde(default)]
    pub plus_const: f64,
    #[serde(default)]
    pub minus_const: f64,
}

impl TryFrom<FunctionDoc> for DeltaSubharmonicFn {
    type Error = Error;
    fn try_from(doc: FunctionDoc) -> Result<Self> {
        Ok(DeltaSubharmonicFn::new(
            SubharmonicPotential::new(AtomicMeasure::new(doc.plus_atoms)?, doc.plus_const),
            SubharmonicPotential::new(AtomicMeasure::new(doc.minus_atoms)?, doc.minus_const),
        ))
    }
}

impl From<DeltaSubharmonicFn> for FunctionDoc {
    fn from(f: DeltaSubharmonicFn) -> Self {
        FunctionDoc {
            plus_atoms: f.plus.charge.atoms,
            minus_atoms: f.minus.charge.atoms,
            plus_const: f.plus.constant,
            minus_const: f.minus.constant,
        }
    }
}

impl DeltaSubharmonicFn {
    pub fn new(plus: SubharmonicPotential, minus: SubharmonicPotential) -> Self {
        Self { plus, minus }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `plus(z) - minus(z)`; `-inf` at atoms of `plus` only, `+inf` at atoms of
    /// `minus` only.
    ///
    /// A point carrying atoms of both components is `(-inf) - (-inf)` and is
    /// reported as degenerate; canonicalize first to evaluate such points.
    pub fn evaluate(&self, z: Complex64) -> Result<f64> {
        let u = self.plus.value(z);
        let v = self.minus.value(z);
        if u == f64::NEG_INFINITY && v == f64::NEG_INFINITY {
            return Err(Error::Degenerate(format!(
                "{z} is an atom of both components"
            )));
        }
        Ok(u - v)
    }

    /// Jordan decomposition of the atomic charge: common-center masses cancel so
    /// the two components have disjoint atom sets. Constants are left as they
    /// are, except that when both components end up atomless their difference
    /// moves onto `plus`.
    pub fn canonicalize(&self) -> DeltaSubharmonicFn {
        let mut signed: Vec<Atom> = self.plus.charge.atoms.clone();
        signed.extend(self.minus.charge.atoms.iter().map(|a| Atom {
            mass: -a.mass,
            ..*a
        }));
        let merged = sort_and_merge(signed);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for a in merged {
            if a.mass > 0.0 {
                pos.push(a);
            } else if a.mass < 0.0 {
                neg.push(Atom { mass: -a.mass, ..a });
            }
        }
        let (cp, cm) = if pos.is_empty() && neg.is_empty() {
            (self.plus.constant - self.minus.constant, 0.0)
        } else {
            (self.plus.constant, self.minus.constant)
        };
        DeltaSubharmonicFn {
            plus: SubharmonicPotential::new(AtomicMeasure { atoms: pos }, cp),
            minus: SubharmonicPotential::new(AtomicMeasure { atoms: neg }, cm),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.plus
            .charge
            .atoms
            .iter()
            .all(|a| self.minus.charge.mass_at(a.center()) == 0.0)
    }

    /// Net constant `plus.const - minus.const`.
    pub fn net_constant(&self) -> f64 {
        self.plus.constant - self.minus.constant
    }

    /// Adds `c` to both components; `U` itself is unchanged.
    pub fn with_common_shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.plus.constant += c;
        out.minus.constant += c;
        out
    }

    /// `U_s(z) = U(z / s)`: centers scaled by `s`, constants compensated.
    pub fn rescaled(&self, s: f64) -> Self {
        let ln_s = s.ln();
        let rescale = |p: &SubharmonicPotential| {
            SubharmonicPotential::new(
                p.charge.scaled(s),
                p.constant - p.charge.total_mass() * ln_s,
            )
        };
        Self::new(rescale(&self.plus), rescale(&self.minus))
    }
}

/// `|f|` for a rational function `f = scale · Π(z - zero)^m / Π(z - pole)^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalDoc", into = "RationalDoc")]
pub struct RationalFunctionSpec {
    zeros: AtomicMeasure,
    poles: AtomicMeasure,
    scale: f64,
}

/// Integer-multiplicity point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalAtom {
    pub re: f64,
    pub im: f64,
    pub mass: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalDoc {
    #[serde(default)]
    pub zeros: Vec<RationalAtom>,
    #[serde(default)]
    pub poles: Vec<RationalAtom>,
    pub scale: f64,
}

fn to_measure(list: &[RationalAtom]) -> Result<AtomicMeasure> {
    AtomicMeasure::new(
        list.iter()
            .map(|a| Atom {
                re: a.re,
                im: a.im,
                mass: a.mass as f64,
            })
            .collect(),
    )
}

fn from_measure(m: &AtomicMeasure) -> Vec<RationalAtom> {
    m.atoms()
        .iter()
        .map(|a| RationalAtom {
            re: a.re,
            im: a.im,
            mass: a.mass as u32,
        })
        .collect()
}

impl TryFrom<RationalDoc> for RationalFunctionSpec {
    type Error = Error;
    fn try_from(doc: RationalDoc) -> Result<Self> {
        RationalFunctionSpec::new(to_measure(&doc.zeros)?, to_measure(&doc.poles)?, doc.scale)
    }
}

impl From<RationalFunctionSpec> for RationalDoc {
    fn from(f: RationalFunctionSpec) -> Self {
        RationalDoc {
            zeros: from_measure(&f.zeros),
            poles: from_measure(&f.poles),
            scale: f.scale,
        }
    }
}

impl RationalFunctionSpec {
    /// Masses must be positive integers; zeros and poles must not share a center.
    pub fn new(zeros: AtomicMeasure, poles: AtomicMeasure, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::arg(format!("|c| must be positive, got {scale}")));
        }
        for a in zeros.atoms().iter().chain(poles.atoms()) {
            if a.mass.fract() != 0.0 {
                return Err(Error::arg(format!("multiplicity must be an integer: {a:?}")));
            }
        }
        if let Some(a) = zeros.atoms().iter().find(|a| poles.mass_at(a.center()) > 0.0) {
            return Err(Error::arg(format!(
                "zero and pole share the center {}",
                a.center()
            )));
        }
        Ok(Self { zeros, poles, scale })
    }

    pub fn zeros(&self) -> &AtomicMeasure {
        &self.zeros
    }

    pub fn poles(&self) -> &AtomicMeasure {
        &self.poles
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `f(z) = 1/z`.
    pub fn reciprocal() -> Self {
        Self::new(
            AtomicMeasure::empty(),
            AtomicMeasure::unit_atoms(&[Complex64::new(0.0, 0.0)]),
            1.0,
        )
        .expect("1/z is a valid rational function")
    }

    /// `ln|f|` as `(potential(zeros, ln scale), potential(poles, 0))`.
    pub fn ln_abs(&self) -> DeltaSubharmonicFn {
        DeltaSubharmonicFn::new(
            SubharmonicPotential::new(self.zeros.clone(), self.scale.ln()),
            SubharmonicPotential::new(self.poles.clone(), 0.0),
        )
    }

    /// Number of poles in the closed disc of radius `r`, with multiplicity.
    pub fn pole_count(&self, r: f64) -> f64 {
        self.poles
            .atoms()
            .iter()
            .filter(|a| a.modulus() <= r)
            .map(|a| a.mass)
            .sum()
    }
}
