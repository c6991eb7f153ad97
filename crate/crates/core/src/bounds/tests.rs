use super::*;
use crate::distzoo::parse_dist_spec;
use crate::exactmath::{int, rat};

fn tol() -> Rational {
    default_tol()
}

fn prefix(spec: &str, m: usize) -> ConstraintPrefix {
    ConstraintPrefix::from_distribution(&parse_dist_spec(spec).unwrap(), m).unwrap()
}

#[test]
fn uniform_m3_is_exact() {
    let p = prefix("uniform", 3);
    let up = cdf_bound(&p, &rat(1, 2), Side::Upper, &tol()).unwrap();
    assert_eq!((up.lo.clone(), up.hi.clone()), (rat(5, 6), rat(5, 6)));
    // alternative optimum 4y - 5y^2 + 2y^3 is feasible with the same pairing
    for c in [up.certificate.clone(), Polynomial::reflected(int(1), vec![int(0), int(4), int(-5), int(2)])] {
        let shifted = &c - &Polynomial::constant(int(1), c.basis().clone());
        assert!(crate::exactmath::is_nonnegative_on(&c, &rat(1, 2), &int(1)));
        assert!(crate::exactmath::is_nonnegative_on(&shifted, &int(0), &rat(1, 2)));
        let pairing: Rational = (0..4).map(|j| c.coeff(j) * crate::exactmath::factorial_q(j as u64) * &p.seq().eps()[j]).sum();
        assert_eq!(pairing, rat(5, 6));
    }
    let e = recover_extremizer(&up, &p).unwrap();
    assert_eq!(e.points(), &[int(0), rat(1, 2), int(1)]);
    assert_eq!(e.weights(), &[rat(1, 6), rat(2, 3), rat(1, 6)]);

    let lo = cdf_bound(&p, &rat(1, 2), Side::Lower, &tol()).unwrap();
    assert_eq!((lo.lo.clone(), lo.hi.clone()), (rat(1, 6), rat(1, 6)));
    assert_eq!(*lo.value(), rat(1, 6));
}

#[test]
fn x0_at_b() {
    let p = prefix("uniform", 3);
    let up = cdf_bound(&p, &int(1), Side::Upper, &tol()).unwrap();
    assert_eq!(up.hi, int(1));
    assert_eq!(up.lo, int(1));
}

#[test]
fn m1_mean_half() {
    let p = ConstraintPrefix::from_coordinates(Interval::unit(), &[rat(1, 2)]).unwrap();
    let up = cdf_bound(&p, &rat(1, 2), Side::Upper, &tol()).unwrap();
    assert_eq!(up.hi, int(1));
    let e = recover_extremizer(&up, &p).unwrap();
    assert_eq!((e.points(), e.weights()), (&[rat(1, 2)][..], &[int(1)][..]));
    let lo = cdf_bound(&p, &rat(1, 2), Side::Lower, &tol()).unwrap();
    assert_eq!(lo.lo, int(0));
}

#[test]
fn moment_examples() {
    let p = prefix("uniform", 1);
    let up = moment_bound(&p, 2, Side::Upper, &tol()).unwrap();
    assert_eq!((up.lo, up.hi), (rat(1, 4), rat(1, 4)));
    let lo = moment_bound(&p, 2, Side::Lower, &tol()).unwrap();
    assert_eq!((lo.lo, lo.hi), (rat(1, 8), rat(1, 8)));
    let p = prefix("beta 2 3", 4);
    for k in 0..=4 {
        for side in [Side::Upper, Side::Lower] {
            let r = moment_bound(&p, k, side, &tol()).unwrap();
            assert_eq!(r.lo, p.seq().eps()[k]);
            assert_eq!(r.width(), int(0));
        }
    }
}

#[test]
fn moment_bound_brackets_true_value() {
    let d = parse_dist_spec("beta 2 3").unwrap();
    let p = ConstraintPrefix::from_distribution(&d, 3).unwrap();
    let truth = d.eps(5).unwrap().eps()[5].clone();
    let up = moment_bound(&p, 5, Side::Upper, &tol()).unwrap();
    let lo = moment_bound(&p, 5, Side::Lower, &tol()).unwrap();
    assert!(lo.lo <= truth && truth <= up.hi);
    assert!(up.width() <= tol() && lo.width() <= tol());
}

#[test]
fn point_mass_envelope() {
    let d = parse_dist_spec("point 1/2").unwrap();
    let env = envelope_sweep(&d, &rat(1, 2), 4, &tol()).unwrap();
    for p in &env {
        assert_eq!((p.upper.clone(), p.lower.clone()), (int(1), int(0)), "m={}", p.m);
    }
}

#[test]
fn uniform_envelope_small() {
    let d = parse_dist_spec("uniform").unwrap();
    let env = envelope_sweep(&d, &rat(1, 2), 6, &tol()).unwrap();
    assert_eq!((env[0].upper.clone(), env[0].lower.clone()), (int(1), int(0)));
    assert_eq!((env[2].upper.clone(), env[2].lower.clone()), (rat(5, 6), rat(1, 6)));
    for w in env.windows(2) {
        assert!(w[1].upper <= &w[0].upper + &tol() * int(2));
        assert!(w[1].lower >= &w[0].lower - &tol() * int(2));
    }
    for p in &env {
        assert!(sandwiches(&d, &rat(1, 2), p).unwrap());
    }
}

#[test]
fn off_grid_x0_and_interval() {
    let d = parse_dist_spec("pwpoly[-1,1] 1/4 @0 1/4,3/2,-3/4").unwrap();
    let x0 = rat(2, 7);
    for m in [2, 5] {
        let p = ConstraintPrefix::from_distribution(&d, m).unwrap();
        let up = cdf_bound(&p, &x0, Side::Upper, &tol()).unwrap();
        let lo = cdf_bound(&p, &x0, Side::Lower, &tol()).unwrap();
        assert!(up.width() <= tol() && lo.width() <= tol());
        let f = cdf_eval(&d, &x0).unwrap();
        assert!(lo.lo <= f.left_limit && f.value <= up.hi);
        // upper certificate dominates the indicator at sample points
        for i in 0..=40 {
            let x = int(-1) + rat(i, 20);
            let v = up.certificate.eval(&x);
            let ind = if x <= x0 { int(1) } else { int(0) };
            assert!(v >= ind, "x={x}");
            let v = lo.certificate.eval(&x);
            let ind = if x < x0 { int(1) } else { int(0) };
            assert!(v <= ind, "x={x}");
        }
    }
}

#[test]
fn errors() {
    let p = prefix("uniform", 2);
    assert!(matches!(cdf_bound(&p, &int(2), Side::Upper, &tol()), Err(Error::Domain(_))));
    let bad = ConstraintPrefix::from_coordinates(Interval::unit(), &[rat(1, 2), rat(1, 10)]);
    assert!(matches!(bad, Err(Error::InfeasiblePrefix(_))));
    let tight = BoundOptions { max_iterations: 1, ..BoundOptions::default() };
    let p = prefix("beta 2 3", 6);
    let r = cdf_bound_with(&p, &rat(1, 3), Side::Upper, &tight);
    assert!(matches!(r, Err(Error::ToleranceNotReached { .. })), "{r:?}");
}
