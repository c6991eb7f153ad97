mod common;

use std::collections::BTreeSet;

use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use common::{atomic, atomic_on, point_in, zoo};
use primseq::admissibility::{certify_truncated, check_cm_prefix, hankel_check, Verdict};
use primseq::bounds::{
    cdf_bound, default_tol, moment_bound, recover_extremizer, BoundResult, ConstraintPrefix, Side,
};
use primseq::distzoo::{cdf_eval, eps_atomic, eps_mixture, Distribution, FiniteAtomic, Mixture};
use primseq::exactmath::{
    factorial_q, int, poly_min_on_interval, pow_u, rat, sturm_isolate_roots, Polynomial,
};
use primseq::seqcore::{
    check_elementary, gamma_values, moments_from_primitive, primitive_from_moments, Interval, MomentVector,
};
use primseq::Rational;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(Polynomial::monomial)
}

/// `E[X^n]` by direct summation over atoms.
fn brute_moments(d: &FiniteAtomic, m: usize) -> Vec<Rational> {
    (0..=m)
        .map(|n| d.points().iter().zip(d.weights()).map(|(x, w)| w * pow_u(x, n as u64)).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_additive(p in small_poly(6), q in small_poly(6), x in small_rat()) {
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
    }

    #[test]
    fn reflected_basis_agrees(p in small_poly(5), b in small_rat(), x in small_rat()) {
        let r = p.to_reflected(&b);
        prop_assert_eq!(r.eval(&x), p.eval(&x));
        prop_assert_eq!(r.to_monomial(), p);
    }

    #[test]
    fn min_lower_bound_holds(p in small_poly(6), xs in proptest::collection::vec(0i64..=1000, 10)) {
        let (lo, hi) = (int(-1), int(2));
        let r = poly_min_on_interval(&p, &lo, &hi, &rat(1, 1 << 20));
        prop_assert!(r.value_lower_bound <= r.value_upper);
        for k in xs {
            let x = &lo + (&hi - &lo) * rat(k, 1000);
            prop_assert!(r.value_lower_bound <= p.eval(&x));
        }
    }

    #[test]
    fn sturm_counts_distinct_roots(
        roots in proptest::collection::btree_map(-12i64..=12, 1u32..=3, 0..5),
        extra in proptest::bool::ANY,
    ) {
        // prod (x - k/4)^mult, optionally times x^2 + 1
        let mut p = Polynomial::monomial(vec![int(1)]);
        for (&k, &mult) in &roots {
            for _ in 0..mult {
                p = &p * &Polynomial::monomial(vec![rat(-k, 4), int(1)]);
            }
        }
        if extra {
            p = &p * &Polynomial::monomial(vec![int(1), int(0), int(1)]);
        }
        let (lo, hi) = (rat(-7, 3), rat(5, 2));
        let inside: BTreeSet<i64> = roots.keys().copied().filter(|&k| rat(k, 4) >= lo && rat(k, 4) <= hi).collect();
        let ivs = sturm_isolate_roots(&p, &lo, &hi).unwrap();
        prop_assert_eq!(ivs.len(), inside.len());
        for (iv, k) in ivs.iter().zip(&inside) {
            let r = rat(*k, 4);
            prop_assert!(iv.lo <= r && r <= iv.hi);
            prop_assert_eq!(iv.multiplicity_free, roots[k] == 1);
        }
    }

    #[test]
    fn moment_round_trip(d in atomic(5), m in 0usize..=12) {
        let ps = eps_atomic(&d, m).unwrap();
        let mv = moments_from_primitive(&ps);
        prop_assert_eq!(&mv.moments, &brute_moments(&d, m));
        let back = primitive_from_moments(&MomentVector::new(d.interval().b().clone(), mv.moments.clone()).unwrap(), d.interval().a()).unwrap();
        prop_assert_eq!(back.eps(), ps.eps());
    }

    #[test]
    fn primitive_map_is_affine(d1 in atomic_on(Interval::unit(), 3, 10), d2 in atomic_on(Interval::unit(), 3, 7), l in 1i64..=9) {
        let lam = rat(l, 10);
        let mix = Mixture::new(
            vec![Distribution::FiniteAtomic(d1.clone()), Distribution::FiniteAtomic(d2.clone())],
            vec![lam.clone(), int(1) - &lam],
        ).unwrap();
        let e = eps_mixture(&mix, 8).unwrap();
        let (e1, e2) = (eps_atomic(&d1, 8).unwrap(), eps_atomic(&d2, 8).unwrap());
        for n in 0..=8 {
            prop_assert_eq!(&e.eps()[n], &(&lam * &e1.eps()[n] + (int(1) - &lam) * &e2.eps()[n]));
        }
    }

    #[test]
    fn gamma_tail_inequalities(d in atomic(4), k in 0i64..=12) {
        let iv = d.interval().clone();
        let m = 10;
        let ps = eps_atomic(&d, m).unwrap();
        let g = gamma_values(&ps);
        // gamma_n <= P(X <= delta) + ((b - delta)/(b - a))^n
        let delta = iv.a() + iv.width() * rat(k, 12);
        let f = cdf_eval(&Distribution::FiniteAtomic(d.clone()), &delta).unwrap().value;
        let r = iv.to_unit(&delta);
        for (n, gn) in g.iter().enumerate() {
            prop_assert!(gn <= &(&f + pow_u(&r, n as u64)));
        }
        // eps_n <= (b - a - delta)^n / n! with a + delta the smallest atom
        let lead = &d.points()[0] - iv.a();
        let span = iv.width() - lead;
        for (n, e) in ps.eps().iter().enumerate() {
            prop_assert!(e <= &(pow_u(&span, n as u64) / factorial_q(n as u64)));
        }
        for w in g.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        prop_assert!(check_elementary(&ps).is_empty());
    }

    #[test]
    fn smallest_atom_limit(d in atomic_on(Interval::unit(), 4, 12)) {
        // n! eps_n / (b - c1)^n -> pi_1 from above, within the Ex 3.2 bound
        let pts = d.points();
        prop_assume!(pts.len() >= 2 && pts[0] < int(1));
        let b = int(1);
        let (c1, c2, p1) = (&pts[0], &pts[1], &d.weights()[0]);
        let ps = eps_atomic(&d, 8).unwrap();
        let ratio = (&b - c2) / (&b - c1);
        let rest = int(1) - p1;
        for n in 0..=8u64 {
            let v = &ps.eps()[n as usize] * factorial_q(n) / pow_u(&(&b - c1), n);
            prop_assert!(&v >= p1);
            prop_assert!(&v - p1 <= &rest * pow_u(&ratio, n));
        }
    }

    #[test]
    fn certified_witness_reproduces_prefix(d in atomic(3), m in 1usize..=4) {
        let ps = eps_atomic(&d, m).unwrap();
        let r = certify_truncated(&ps, 4 * m + 1).unwrap();
        prop_assert_ne!(r.verdict, Verdict::Rejected);
        if r.verdict == Verdict::CertifiedTruncated {
            let w = r.witness().unwrap();
            let got = eps_atomic(w, m).unwrap();
            prop_assert_eq!(got.eps(), ps.eps());
        }
    }
}

fn check_extremizer(r: &BoundResult, prefix: &ConstraintPrefix, x0: &Rational) {
    let e = recover_extremizer(r, prefix).unwrap();
    assert!(e.points().len() <= prefix.order() + 1);
    assert_eq!(eps_atomic(&e, prefix.order()).unwrap().eps(), prefix.seq().eps());
    let f = cdf_eval(&Distribution::FiniteAtomic(e), x0).unwrap();
    match r.side {
        Side::Upper => assert_eq!(f.value, r.lo),
        Side::Lower => assert_eq!(f.left_limit, r.hi),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bounds_sandwich_and_extremizer(
        (d, x0) in atomic(3).prop_flat_map(|d| { let iv = d.interval().clone(); (Just(d), point_in(&iv, 9)) }),
        m in 1usize..=4,
    ) {
        let tol = default_tol();
        let prefix = ConstraintPrefix::new(eps_atomic(&d, m).unwrap()).unwrap();
        let f = cdf_eval(&Distribution::FiniteAtomic(d.clone()), &x0).unwrap();
        let up = cdf_bound(&prefix, &x0, Side::Upper, &tol).unwrap();
        let lo = cdf_bound(&prefix, &x0, Side::Lower, &tol).unwrap();
        for r in [&up, &lo] {
            prop_assert!(r.lo <= r.hi);
            prop_assert!(r.width() <= tol);
            check_extremizer(r, &prefix, &x0);
        }
        prop_assert!(!lo.lo.is_negative());
        prop_assert!(lo.lo <= f.left_limit);
        prop_assert!(f.left_limit <= f.value);
        prop_assert!(f.value <= up.hi);
        prop_assert!(up.hi <= int(1));
    }

    #[test]
    fn bounds_monotone_in_order(
        (d, x0) in atomic(3).prop_flat_map(|d| { let iv = d.interval().clone(); (Just(d), point_in(&iv, 7)) }),
    ) {
        let tol = default_tol();
        let slack = &tol * int(2);
        let mut prev: Option<(Rational, Rational)> = None;
        for m in 1..=5 {
            let prefix = ConstraintPrefix::new(eps_atomic(&d, m).unwrap()).unwrap();
            let up = cdf_bound(&prefix, &x0, Side::Upper, &tol).unwrap().hi;
            let lo = cdf_bound(&prefix, &x0, Side::Lower, &tol).unwrap().lo;
            if let Some((pu, pl)) = &prev {
                prop_assert!(up <= pu + &slack, "upper rose at m={}", m);
                prop_assert!(lo >= pl - &slack, "lower fell at m={}", m);
            }
            prev = Some((up, lo));
        }
    }

    #[test]
    fn moment_bounds_bracket_and_pin(d in atomic(3), m in 1usize..=3, extra in 0usize..=2) {
        let tol = default_tol();
        let prefix = ConstraintPrefix::new(eps_atomic(&d, m).unwrap()).unwrap();
        let k = m + extra;
        let truth = eps_atomic(&d, k).unwrap().eps()[k].clone();
        let up = moment_bound(&prefix, k, Side::Upper, &tol).unwrap();
        let lo = moment_bound(&prefix, k, Side::Lower, &tol).unwrap();
        prop_assert!(lo.lo <= truth && truth <= up.hi);
        if extra == 0 {
            prop_assert_eq!((&up.lo, &up.hi, &lo.lo, &lo.hi), (&truth, &truth, &truth, &truth));
        }
    }
}

#[test]
fn zoo_prefixes_pass_screens() {
    for (name, d) in zoo() {
        for m in 1..=10 {
            let ps = d.eps(m).unwrap();
            assert!(check_elementary(&ps).is_empty(), "{name} m={m}");
            let g = primseq::seqcore::normalize_gamma(&ps).unwrap();
            assert!(check_cm_prefix(&g).is_empty(), "{name} m={m}");
            assert!(hankel_check(&g).passes(), "{name} m={m}");
        }
    }
}

#[test]
fn zoo_sandwich() {
    let tol = default_tol();
    for (name, d) in zoo() {
        let iv = d.interval();
        for m in 1..=4 {
            let prefix = ConstraintPrefix::from_distribution(&d, m).unwrap();
            for k in [1, 3, 5] {
                let x0 = iv.a() + iv.width() * rat(k, 6);
                let f = cdf_eval(&d, &x0).unwrap();
                let up = cdf_bound(&prefix, &x0, Side::Upper, &tol).unwrap();
                let lo = cdf_bound(&prefix, &x0, Side::Lower, &tol).unwrap();
                assert!(lo.lo <= f.left_limit && f.value <= up.hi, "{name} m={m} x0={x0}");
                check_extremizer(&up, &prefix, &x0);
                check_extremizer(&lo, &prefix, &x0);
            }
        }
    }
}

/// Uniform random rational in `[a, b]` with denominators up to 10^6.
fn probe(rng: &mut impl Rng, iv: &Interval) -> Rational {
    let d: i64 = rng.gen_range(1..=1_000_000);
    let n: i64 = rng.gen_range(0..=d);
    iv.a() + iv.width() * rat(n, d)
}

#[test]
fn certificates_hold_at_random_probes() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let tol = default_tol();
    let cases: Vec<(&str, usize, Rational)> = vec![
        ("uniform", 3, rat(1, 2)),
        ("uniform", 6, rat(1, 2)),
        ("uniform", 5, rat(2, 7)),
        ("beta 2 3", 4, rat(1, 3)),
        ("atomic[-1,2] -1/3:1/2 5/7:1/4 2:1/4", 4, rat(1, 5)),
        ("pwpoly 0,4 @1/2 4,-4", 5, rat(3, 5)),
    ];
    for (spec, m, x0) in cases {
        let d = primseq::distzoo::parse_dist_spec(spec).unwrap();
        let prefix = ConstraintPrefix::from_distribution(&d, m).unwrap();
        let iv = prefix.interval().clone();
        for side in [Side::Upper, Side::Lower] {
            let r = cdf_bound(&prefix, &x0, side, &tol).unwrap();
            let q = &r.certificate;
            let ok = |x: &Rational| {
                let v = q.eval(x);
                match side {
                    Side::Upper => v >= if x <= &x0 { int(1) } else { int(0) },
                    Side::Lower => v <= if x < &x0 { int(1) } else { int(0) },
                }
            };
            assert!(ok(&x0) && ok(iv.a()) && ok(iv.b()), "{spec} {side} at fixed points");
            for _ in 0..10_000 {
                let x = probe(&mut rng, &iv);
                assert!(ok(&x), "{spec} m={m} {side}: certificate fails at {x}");
            }
            // pairing with the prefix is the certified side
            let pairing: Rational = q
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| c * factorial_q(j as u64) * &prefix.seq().eps()[j])
                .sum();
            assert_eq!(&pairing, r.value());
        }
    }
    // smooth target
    let d = primseq::distzoo::parse_dist_spec("beta 2 3").unwrap();
    let prefix = ConstraintPrefix::from_distribution(&d, 3).unwrap();
    let iv = prefix.interval().clone();
    for side in [Side::Upper, Side::Lower] {
        let r = moment_bound(&prefix, 5, side, &tol).unwrap();
        for _ in 0..10_000 {
            let x = probe(&mut rng, &iv);
            let t = pow_u(&(iv.b() - &x), 5) / factorial_q(5);
            let v = r.certificate.eval(&x);
            assert!(if side == Side::Upper { v >= t } else { v <= t }, "moment {side} at {x}");
        }
    }
}

/// `delta_{x_k}` with `x_k = x + (b - x) / k`: every `eps_n` converges with
/// error at most `|x_k - x| (b - a)^(n-1) / (n-1)!`, and CDF values converge
/// away from `x`.
#[test]
fn point_masses_converge_termwise() {
    let iv = Interval::new(int(-1), int(2)).unwrap();
    let x = rat(1, 3);
    let point = |p: Rational| FiniteAtomic::new(iv.clone(), vec![p], vec![int(1)]).unwrap();
    let m = 8;
    let limit = eps_atomic(&point(x.clone()), m).unwrap();
    let mut prev_err: Vec<Rational> = vec![int(10); m + 1];
    for k in [1i64, 2, 4, 8, 16, 64, 256, 1024] {
        let xk = &x + (iv.b() - &x) / int(k);
        let dk = point(xk.clone());
        let got = eps_atomic(&dk, m).unwrap();
        for n in 0..=m {
            let err = (&got.eps()[n] - &limit.eps()[n]).abs();
            assert!(err <= prev_err[n], "n={n} k={k}");
            if n > 0 {
                let lip = (&xk - &x) * pow_u(&iv.width(), n as u64 - 1) / factorial_q(n as u64 - 1);
                assert!(err <= lip, "n={n} k={k}");
            }
            prev_err[n] = err;
        }
        // 0 and 3/2 are continuity points of the limit
        let fk = |t: Rational| cdf_eval(&Distribution::FiniteAtomic(dk.clone()), &t).unwrap().value;
        assert_eq!(fk(int(0)), int(0));
        if xk < rat(3, 2) {
            assert_eq!(fk(rat(3, 2)), int(1));
        }
    }
    assert!(prev_err.iter().all(|e| e < &rat(1, 100)));
}
