//! Invariants of the model, the characteristics, the set/weight layer and the
//! checkers on randomized inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use subharm::characteristics::{
    characteristic_t, circle_mean, circle_mean_quadrature, counting_integral, max_of_part, max_on_circle,
    nevanlinna,
};
use subharm::harness::{generate_instance, Instance, SuiteConfig};
use subharm::inequalities::{lemma3_check, lemma_a_check, main_theorem_t, DecreasingProfile};
use subharm::sets::{integrate_weighted, lp_norm, lq_norm_of};
use subharm::{
    Atom, AtomicMeasure, DeltaSubharmonicFn, Exponent, IntervalSet, Part, Polynomial, QuadratureSpec,
    RationalFunctionSpec, SubharmonicPotential, Weight, WeightPiece,
};

fn atom(max_modulus: f64) -> impl Strategy<Value = Atom> {
    (0.05..max_modulus, 0.0..std::f64::consts::TAU, 0.2..2.0f64)
        .prop_map(|(m, t, mass)| Atom::new(Complex64::from_polar(m, t), mass))
}

fn measure(max_atoms: usize) -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec(atom(4.0), 0..=max_atoms)
}

fn potential() -> impl Strategy<Value = SubharmonicPotential> {
    (measure(5), -2.0..2.0f64)
        .prop_map(|(atoms, c)| SubharmonicPotential::new(AtomicMeasure::new(atoms).unwrap(), c))
}

/// Pairs that share some atoms, so canonicalization has something to cancel.
fn delta() -> impl Strategy<Value = DeltaSubharmonicFn> {
    (measure(4), measure(4), measure(2), -2.0..2.0f64, -2.0..2.0f64).prop_map(|(p, m, shared, cp, cm)| {
        let plus: Vec<Atom> = p.into_iter().chain(shared.iter().copied()).collect();
        let minus: Vec<Atom> = m.into_iter().chain(shared).collect();
        DeltaSubharmonicFn::new(
            SubharmonicPotential::new(AtomicMeasure::new(plus).unwrap(), cp),
            SubharmonicPotential::new(AtomicMeasure::new(minus).unwrap(), cm),
        )
    })
}

fn rational() -> impl Strategy<Value = RationalFunctionSpec> {
    let part = prop::collection::vec(
        (0.1..4.0f64, 0.0..std::f64::consts::TAU, 1u32..=3)
            .prop_map(|(m, t, k)| Atom::new(Complex64::from_polar(m, t), k as f64)),
        0..=4,
    );
    (part.clone(), part, 0.1..10.0f64).prop_map(|(z, p, s)| {
        RationalFunctionSpec::new(AtomicMeasure::new(z).unwrap(), AtomicMeasure::new(p).unwrap(), s).unwrap()
    })
}

fn interval_set(lo: f64, hi: f64) -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((lo..hi, 0.0..1.0f64), 1..=4).prop_map(move |v| {
        let intervals = v.into_iter().map(|(a, w)| (a, (a + w * (hi - lo) * 0.2).min(hi))).collect();
        IntervalSet::new(intervals).unwrap()
    })
}

fn far_from_atoms(z: Complex64, atoms: &[Atom]) -> bool {
    atoms.iter().all(|a| (z - a.center()).norm() > 1e-6)
}

fn all_atoms(u: &DeltaSubharmonicFn) -> Vec<Atom> {
    u.plus.charge.atoms().iter().chain(u.minus.charge.atoms()).copied().collect()
}

fn close(a: f64, b: f64, abs: f64, rel: f64) -> bool {
    (a - b).abs() <= abs + rel * a.abs().max(b.abs())
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_preserves_values(
        u in delta(),
        points in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 100),
    ) {
        let c = u.canonicalize();
        let atoms = all_atoms(&u);
        for (x, y) in points {
            let z = Complex64::new(x, y);
            if !far_from_atoms(z, &atoms) {
                continue;
            }
            let raw = u.evaluate(z).unwrap();
            let canon = c.evaluate(z).unwrap();
            // The raw pair sums larger terms; its rounding scales with them.
            let scale = 1.0 + u.plus.value(z).abs() + u.minus.value(z).abs();
            prop_assert!((raw - canon).abs() <= 1e-12 * scale, "{raw} vs {canon} at {z}");
        }
    }

    #[test]
    fn canonical_components_have_disjoint_atoms(u in delta()) {
        let c = u.canonicalize();
        for a in c.plus.charge.atoms() {
            prop_assert!(c.minus.charge.atoms().iter().all(|b| b.center() != a.center()));
        }
        prop_assert!(c.is_canonical());
    }

    #[test]
    fn ln_abs_matches_direct_modulus(
        f in rational(),
        points in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 50),
    ) {
        let u = f.ln_abs();
        let atoms = all_atoms(&u);
        for (x, y) in points {
            let z = Complex64::new(x, y);
            if !far_from_atoms(z, &atoms) {
                continue;
            }
            let mut w = Complex64::new(f.scale(), 0.0);
            for a in f.zeros().atoms() {
                w *= (z - a.center()).powi(a.mass as i32);
            }
            for a in f.poles().atoms() {
                w /= (z - a.center()).powi(a.mass as i32);
            }
            let direct = w.norm().ln();
            let value = u.evaluate(z).unwrap();
            prop_assert!(close(value, direct, 1e-10, 1e-10), "{value} vs {direct}");
        }
    }

    #[test]
    fn poisson_jensen_identity(v in potential(), r in 0.1..3.0f64, ratio in 1.1..3.0f64) {
        let big_r = r * ratio;
        prop_assume!(v.charge.moduli().all(|m| (m - r).abs() > 1e-3 && (m - big_r).abs() > 1e-3));
        let hi = circle_mean_quadrature(&v, big_r, &quad()).unwrap();
        let lo = circle_mean_quadrature(&v, r, &quad()).unwrap();
        let lhs = hi.value - lo.value;
        let n = counting_integral(&v.charge, r, big_r).unwrap();
        prop_assert!((lhs - n).abs() <= 1e-8 + 1e-8 * n.abs(), "{lhs} vs {n}");
    }

    #[test]
    fn characteristic_is_monotone_and_log_convex(
        u in delta(),
        r in 0.1..1.0f64,
        s1 in 1.0..3.0f64,
        s2 in 1.0..3.0f64,
    ) {
        let q = quad();
        let (r1, r2) = (r * s1, r * s1 * s2);
        let t1 = characteristic_t(&u, r, r1, &q).unwrap();
        let t2 = characteristic_t(&u, r, r2, &q).unwrap();
        let eps = t1.error_estimate + t2.error_estimate + 1e-12 * (1.0 + t2.value.abs());
        prop_assert!(t1.value <= t2.value + eps, "T(r, R) not increasing in R: {} > {}", t1.value, t2.value);
        let inner = characteristic_t(&u, r1, r2, &q).unwrap();
        let eps = t2.error_estimate + inner.error_estimate + 1e-12 * (1.0 + t2.value.abs());
        prop_assert!(inner.value <= t2.value + eps, "T(r, R) not decreasing in r");

        let (lo, hi) = (r1, r1 * s2 * s2);
        let mid = r1 * s2;
        let t_lo = characteristic_t(&u, r, lo, &q).unwrap();
        let t_mid = characteristic_t(&u, r, mid, &q).unwrap();
        let t_hi = characteristic_t(&u, r, hi, &q).unwrap();
        let eps = t_lo.error_estimate + t_mid.error_estimate + t_hi.error_estimate
            + 1e-12 * (1.0 + t_hi.value.abs());
        prop_assert!(t_mid.value <= 0.5 * (t_lo.value + t_hi.value) + eps, "T not convex in ln R");
    }

    #[test]
    fn potential_maximum_is_nondecreasing_and_dominates_mean(
        v in potential(),
        r in 0.05..4.0f64,
        s in 1.0..2.0f64,
    ) {
        let m1 = max_on_circle(&v, r).unwrap().value;
        let m2 = max_on_circle(&v, r * s).unwrap().value;
        prop_assert!(m1 <= m2 + 1e-9 * (1.0 + m2.abs()), "M({r}) = {m1} > M({}) = {m2}", r * s);
        let c = circle_mean(&v, r).unwrap().value;
        prop_assert!(c <= m1 + 1e-9 * (1.0 + m1.abs()), "C = {c} > M = {m1}");
    }

    #[test]
    fn maximum_of_positive_part_is_positive_part_of_maximum(u in delta(), r in 0.05..5.0f64) {
        let m = max_on_circle(&u, r).unwrap().value;
        let m_plus = max_of_part(&u, Part::Positive, r).unwrap().value;
        prop_assert_eq!(m_plus, m.max(0.0));
    }

    #[test]
    fn nevanlinna_agrees_with_characteristic(f in rational(), r in 0.5..5.0f64) {
        let moduli: Vec<f64> = f.zeros().moduli().chain(f.poles().moduli()).collect();
        prop_assume!(moduli.iter().all(|m| (m - r).abs() > 1e-3));
        let r0 = 0.05;
        let q = quad();
        let nv = nevanlinna(&f, r, &q).unwrap();
        let u = f.ln_abs();
        let t = characteristic_t(&u, r0, r, &q).unwrap().value;
        let c0 = subharm::characteristics::circle_mean_nonlinear(&u, Part::Positive, r0, &q).unwrap().value;
        // All atoms lie outside the disc of radius r0, so N(r0, f) = 0.
        prop_assert!((nv.characteristic - (t + c0)).abs() <= 1e-6, "{} vs {}", nv.characteristic, t + c0);
    }

    #[test]
    fn truncation_measure_bound(e in interval_set(0.0, 6.0), r in 1.0..8.0f64) {
        let t = e.truncate(r).unwrap();
        prop_assert!(t.measure() <= e.measure().min((r - 1.0).max(0.0)) + 1e-12);
    }

    #[test]
    fn holder_inequality(
        e in interval_set(0.0, 2.0),
        c in prop::collection::vec(0.0..2.0f64, 1..=3),
        p in 1.1..6.0f64,
    ) {
        let g = Weight::new(
            vec![WeightPiece { lo: 0.0, hi: 2.0, poly: Polynomial::new(c) }],
            Exponent::new(p).unwrap(),
        )
        .unwrap();
        let h = |t: f64| 1.0 + t * t;
        let q = quad();
        let lhs = integrate_weighted(h, &g, &e, &q, &[]).unwrap();
        let hq = lq_norm_of(h, g.conjugate(), &e, &q).unwrap();
        let gp = lp_norm(&g, &e).unwrap();
        let rhs = hq.value * gp.value;
        prop_assert!(lhs.value <= rhs * (1.0 + 1e-9) + 1e-12, "{} > {rhs}", lhs.value);
    }

    #[test]
    fn lp_norm_grows_with_the_set(
        e in interval_set(0.0, 2.0),
        extra in interval_set(0.0, 2.0),
        p in prop_oneof![Just(f64::INFINITY), 1.0..8.0f64],
    ) {
        let union: Vec<(f64, f64)> = e.intervals().iter().chain(extra.intervals()).copied().collect();
        let big = IntervalSet::new(union).unwrap();
        let g = Weight::new(
            vec![WeightPiece { lo: 0.0, hi: 2.0, poly: Polynomial::new(vec![0.5, 1.0, 0.3]) }],
            Exponent::new(p).unwrap(),
        )
        .unwrap();
        let small = lp_norm(&g, &e).unwrap();
        let large = lp_norm(&g, &big).unwrap();
        prop_assert!(small.value <= large.value + small.error + large.error + 1e-12);
    }

    #[test]
    fn rearrangement_is_exact_for_symmetric_intervals(
        c in 0.01..0.99f64,
        profile in prop_oneof![
            (0.1..5.0f64).prop_map(|c| DecreasingProfile::Exponential { c }),
            (0.1..0.95f64).prop_map(|alpha| DecreasingProfile::Power { alpha }),
        ],
    ) {
        let e = IntervalSet::interval(-c, c).unwrap();
        let rep = lemma_a_check(&profile, &e, 1.0, &quad()).unwrap();
        prop_assert!((rep.lhs - rep.rhs).abs() <= 1e-10 * (1.0 + rep.rhs.abs()), "{} vs {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn lemma3_left_side_matches_incomplete_gamma(q in 0.0..6.0f64, big_a in 0.1..20.0f64, frac in 0.01..1.0f64) {
        let a = frac * big_a / std::f64::consts::E;
        let rep = lemma3_check(q, big_a, a, &quad()).unwrap();
        // Substituting x = A e^{-s}: A Γ(q+1) Q(q+1, ln(A/a)).
        let x = (big_a / a).ln();
        let oracle = big_a * statrs::function::gamma::gamma(q + 1.0) * statrs::function::gamma::gamma_ur(q + 1.0, x);
        prop_assert!(close(rep.lhs, oracle, 1e-12, 1e-9), "{} vs {oracle}", rep.lhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lemma3_holds_for_q_at_least_one(q in 1.0..6.0f64, big_a in 0.1..100.0f64, frac in 1e-6..1.0f64) {
        let rep = lemma3_check(q, big_a, frac * big_a / std::f64::consts::E, &quad()).unwrap();
        prop_assert!(rep.holds(), "ratio {}", rep.ratio);
    }
}

/// Below `q = 1` the constant `1 + q^{q+1}` is too small near `a = A/e`.
#[test]
fn lemma3_bound_fails_for_some_q_below_one() {
    let (q, big_a, a) = (0.7, std::f64::consts::E, 1.0);
    let rep = lemma3_check(q, big_a, a, &quad()).unwrap();
    let exact = big_a * statrs::function::gamma::gamma(q + 1.0) * statrs::function::gamma::gamma_ur(q + 1.0, 1.0);
    assert!(close(rep.lhs, exact, 1e-12, 1e-10));
    assert!((rep.rhs - (1.0 + 0.7f64.powf(1.7))).abs() < 1e-15);
    assert!(!rep.holds() && rep.ratio > 1.028, "ratio {}", rep.ratio);
}

fn theorem_instances(n: usize) -> Vec<Instance> {
    let cfg = SuiteConfig::default();
    (0..n)
        .map(|i| generate_instance(subharm::harness::rng::instance_seed(7, "main_theorem_T", i as u64), "main_theorem_T", &cfg).unwrap())
        .collect()
}

#[test]
fn main_theorem_is_invariant_under_common_shift() {
    let q = quad();
    for inst in theorem_instances(20) {
        let Instance::MainTheoremT { function, set, weight, r, r0, k } = inst else {
            unreachable!()
        };
        let base = main_theorem_t(&function, &set, &weight, r, r0, k, &q).unwrap();
        for c in [-3.0, 0.7, 5.0] {
            let shifted = main_theorem_t(&function.with_common_shift(c), &set, &weight, r, r0, k, &q).unwrap();
            assert!(close(base.lhs, shifted.lhs, 1e-9, 1e-9), "{} vs {}", base.lhs, shifted.lhs);
            assert!(close(base.rhs, shifted.rhs, 1e-9, 1e-9), "{} vs {}", base.rhs, shifted.rhs);
            assert!(close(base.ratio, shifted.ratio, 1e-9, 1e-9));
        }
    }
}

#[test]
fn main_theorem_ratio_is_scale_invariant() {
    let q = QuadratureSpec {
        rel_tol: 1e-12,
        ..QuadratureSpec::default()
    };
    for inst in theorem_instances(20) {
        let Instance::MainTheoremT { function, set, weight, r, r0, k } = inst else {
            unreachable!()
        };
        let base = main_theorem_t(&function, &set, &weight, r, r0, k, &q).unwrap();
        for s in [0.3, 2.5] {
            let scaled = main_theorem_t(
                &function.rescaled(s),
                &set.scaled(s),
                &weight.rescaled(s),
                r * s,
                r0 * s,
                k,
                &q,
            )
            .unwrap();
            if base.ratio.is_finite() {
                assert!(close(base.ratio, scaled.ratio, 1e-12, 1e-9), "s = {s}: {} vs {}", base.ratio, scaled.ratio);
            } else {
                assert_eq!(base.ratio, scaled.ratio);
            }
        }
    }
}

#[test]
fn reciprocal_ratio_is_infinite_at_small_radii_and_finite_at_large() {
    let f = RationalFunctionSpec::reciprocal();
    let q = quad();
    for k in [1.5, 2.0, 4.0] {
        for r in [0.1 / k, 0.5 / k, 1.0 / k] {
            let rep = subharm::inequalities::nevanlinna_ratio(&f, r, k, &q).unwrap();
            assert_eq!(rep.ratio, f64::INFINITY, "k = {k}, r = {r}");
        }
        for r in [1.0, 2.0, 10.0] {
            let rep = subharm::inequalities::nevanlinna_ratio(&f, r, k, &q).unwrap();
            // lhs = 1/r and T(kr) = ln(kr): the ratio is at most 1/ln k.
            assert!(rep.ratio.is_finite() && rep.ratio <= 1.0 / k.ln() + 1e-9, "k = {k}, r = {r}: {}", rep.ratio);
        }
    }
}
