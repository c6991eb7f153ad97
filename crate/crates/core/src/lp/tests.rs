use super::*;
use crate::exactmath::{factorial_q, int, pow_u, rat};

fn row(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn min_single_lower_bound() {
    let mut p = LinearProgram::new(Sense::Minimize, row(&[1]));
    p.constrain(row(&[1]), Relation::Ge, int(3));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.primal, vec![int(3)]);
    assert_eq!(s.objective, Some(int(3)));
    assert_eq!(extract_dual(&s).unwrap(), vec![int(1)]);
}

#[test]
fn max_with_redundant_row() {
    let mut p = LinearProgram::new(Sense::Maximize, row(&[1]));
    p.constrain(row(&[1]), Relation::Le, int(0));
    p.constrain(row(&[1]), Relation::Le, int(1));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.objective, Some(int(0)));
    assert_eq!(s.duals, vec![int(1), int(0)]);
}

#[test]
fn dual_is_sensitivity() {
    // min 2x + 3y, x + y >= 4, x <= 3
    let mut p = LinearProgram::new(Sense::Minimize, row(&[2, 3]));
    p.constrain(row(&[1, 1]), Relation::Ge, int(4));
    p.constrain(row(&[1, 0]), Relation::Le, int(3));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.objective, Some(int(9)));
    let base = s.objective.clone().unwrap();
    for i in 0..2 {
        let mut q = p.clone();
        q.constraints[i].rhs += rat(1, 10);
        let t = solve_lp(&q).unwrap();
        assert_eq!(t.objective.unwrap() - &base, &s.duals[i] * rat(1, 10));
    }
}

#[test]
fn infeasible_has_farkas() {
    let mut p = LinearProgram::new(Sense::Minimize, row(&[1, 1]));
    p.constrain(row(&[1, 1]), Relation::Le, int(1));
    p.constrain(row(&[1, 1]), Relation::Ge, int(2));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
    verify_farkas(&p, s.farkas.as_ref().unwrap()).unwrap();
    assert!(extract_dual(&s).is_err());
}

#[test]
fn unbounded_has_ray() {
    let mut p = LinearProgram::new(Sense::Maximize, row(&[1, 1]));
    p.constrain(row(&[1, -1]), Relation::Le, int(1));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Unbounded);
    verify_ray(&p, &s.primal, s.ray.as_ref().unwrap()).unwrap();
}

#[test]
fn free_and_boxed_variables() {
    // min x - y, x free with x >= -5 via a row, y in [1, 3], x + y = 0
    let mut p = LinearProgram::new(Sense::Minimize, row(&[1, -1])).with_bounds(vec![
        VarBound::Free,
        VarBound::Boxed { lo: int(1), hi: int(3) },
    ]);
    p.constrain(row(&[1, 0]), Relation::Ge, int(-5));
    p.constrain(row(&[1, 1]), Relation::Eq, int(0));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.primal, vec![int(-3), int(3)]);
    assert_eq!(s.objective, Some(int(-6)));

    let mut q = LinearProgram::new(Sense::Maximize, row(&[1]))
        .with_bounds(vec![VarBound::Boxed { lo: int(-2), hi: int(-1) }]);
    q.constrain(row(&[1]), Relation::Le, int(7));
    let s = solve_lp(&q).unwrap();
    assert_eq!(s.primal, vec![int(-1)]);

    let mut r = LinearProgram::new(Sense::Minimize, row(&[1]))
        .with_bounds(vec![VarBound::Boxed { lo: int(0), hi: int(1) }]);
    r.constrain(row(&[1]), Relation::Ge, int(2));
    let s = solve_lp(&r).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let mut p = LinearProgram::new(Sense::Minimize, row(&[1, 1]));
    p.constrain(row(&[1]), Relation::Ge, int(0));
    assert!(solve_lp(&p).is_err());
}

#[test]
fn beale_cycling_instance_terminates() {
    let mut p = LinearProgram::new(
        Sense::Minimize,
        vec![rat(-3, 4), int(20), rat(-1, 2), int(6)],
    );
    p.constrain(vec![rat(1, 4), int(-8), int(-1), int(9)], Relation::Le, int(0));
    p.constrain(vec![rat(1, 2), int(-12), rat(-1, 2), int(3)], Relation::Le, int(0));
    p.constrain(row(&[0, 0, 1, 0]), Relation::Le, int(1));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.objective, Some(rat(-5, 4)));
}

#[test]
fn uniform_dual_polynomial_program_on_grid() {
    // min sum alpha_j j! eps_j, p(x) = sum alpha_j (1-x)^j >= 1 on [0,1/2], >= 0 on (1/2,1]
    let m = 3u64;
    let obj: Vec<Rational> = (0..=m)
        .map(|j| factorial_q(j) / factorial_q(j + 1))
        .collect();
    let mut p = LinearProgram::new(Sense::Minimize, obj)
        .with_bounds(vec![VarBound::Free; m as usize + 1]);
    let grid: Vec<Rational> = (0..=40).map(|i| rat(i, 40)).collect();
    for x in &grid {
        let y = int(1) - x;
        let coeffs = (0..=m).map(|j| pow_u(&y, j)).collect();
        let target = if *x <= rat(1, 2) { int(1) } else { int(0) };
        p.constrain(coeffs, Relation::Ge, target);
    }
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.objective, Some(rat(5, 6)));
    let duals = extract_dual(&s).unwrap();
    let support: Vec<(Rational, Rational)> = grid
        .iter()
        .zip(&duals)
        .filter(|(_, w)| !w.is_zero())
        .map(|(x, w)| (x.clone(), w.clone()))
        .collect();
    assert_eq!(
        support,
        vec![(int(0), rat(1, 6)), (rat(1, 2), rat(2, 3)), (int(1), rat(1, 6))]
    );
}

#[test]
fn tableau_dump_renders() {
    let mut p = LinearProgram::new(Sense::Minimize, row(&[1]));
    p.constrain(row(&[1]), Relation::Ge, int(3));
    let d = dump_tableau(&p).unwrap();
    assert!(d.contains("rhs"));
    assert!(d.lines().count() >= 3);
}
