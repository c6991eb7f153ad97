//! Random small LPs and a vertex-enumeration oracle.

use primseq::exactmath::{int, rat};
use primseq::lp::{LinearProgram, LpSolution, LpStatus, Relation, Sense};
use primseq::Rational;
use rand::Rng;

use num_traits::{Signed, Zero};

/// Nonnegative variables plus a bounding row `sum x <= U`, so the feasible
/// set is a polytope and vertices decide the optimum.
pub fn random_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.gen_range(2..=5);
    let rows = rng.gen_range(1..=6);
    let small = |rng: &mut dyn rand::RngCore| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
    let sense = if rng.gen_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    let obj = (0..n).map(|_| small(rng)).collect();
    let mut p = LinearProgram::new(sense, obj);
    for _ in 0..rows {
        let coeffs = (0..n).map(|_| small(rng)).collect();
        let rel = match rng.gen_range(0..10) {
            0..=4 => Relation::Le,
            5..=7 => Relation::Ge,
            _ => Relation::Eq,
        };
        p.constrain(coeffs, rel, small(rng));
    }
    p.constrain(vec![int(1); n], Relation::Le, int(rng.gen_range(1..=10)));
    p
}

/// Solves a square system exactly; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn feasible(p: &LinearProgram, x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative())
        && p.constraints.iter().all(|c| {
            let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
}

/// Best objective over all basic feasible points, `None` if infeasible.
pub fn brute_force(p: &LinearProgram) -> Option<Rational> {
    let n = p.objective.len();
    // candidate active rows: constraints, then x_i = 0
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        p.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = int(1);
        rows.push((e, Rational::zero()));
    }
    let mut best: Option<Rational> = None;
    let mut pick = Vec::with_capacity(n);
    fn rec(
        start: usize,
        pick: &mut Vec<usize>,
        n: usize,
        rows: &[(Vec<Rational>, Rational)],
        p: &LinearProgram,
        best: &mut Option<Rational>,
    ) {
        if pick.len() == n {
            let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
            let b = pick.iter().map(|&i| rows[i].1.clone()).collect();
            if let Some(x) = solve_square(a, b) {
                if feasible(p, &x) {
                    let v: Rational = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    let better = match (best.as_ref(), p.sense) {
                        (None, _) => true,
                        (Some(b), Sense::Minimize) => v < *b,
                        (Some(b), Sense::Maximize) => v > *b,
                    };
                    if better {
                        *best = Some(v);
                    }
                }
            }
            return;
        }
        for i in start..rows.len() {
            pick.push(i);
            rec(i + 1, pick, n, rows, p, best);
            pick.pop();
        }
    }
    rec(0, &mut pick, n, &rows, p, &mut best);
    best
}

/// Exact strong-duality and dual-feasibility check for nonnegative
/// variables: `y . b = c . x`, reduced costs signed for the sense, and row
/// multipliers signed for the relation.
pub fn duality_holds(p: &LinearProgram, s: &LpSolution) -> bool {
    if s.status != LpStatus::Optimal {
        return false;
    }
    let y = &s.duals;
    let dual_obj: Rational = y.iter().zip(&p.constraints).map(|(y, c)| y * &c.rhs).sum();
    if Some(&dual_obj) != s.objective.as_ref() {
        return false;
    }
    let sign = |v: &Rational| -> i8 {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    // for a minimization: c - A^T y >= 0, Ge rows y >= 0, Le rows y <= 0
    let flip = if p.sense == Sense::Minimize { 1 } else { -1 };
    for j in 0..p.objective.len() {
        let at_y: Rational = p.constraints.iter().zip(y).map(|(c, y)| &c.coeffs[j] * y).sum();
        if sign(&(&p.objective[j] - at_y)) * flip < 0 {
            return false;
        }
    }
    p.constraints.iter().zip(y).all(|(c, y)| match c.relation {
        Relation::Ge => sign(y) * flip >= 0,
        Relation::Le => sign(y) * flip <= 0,
        Relation::Eq => true,
    })
}

/// Beale's example, which cycles under the textbook entering rule.
pub fn beale() -> LinearProgram {
    let mut p = LinearProgram::new(Sense::Minimize, vec![rat(-3, 4), int(20), rat(-1, 2), int(6)]);
    p.constrain(vec![rat(1, 4), int(-8), int(-1), int(9)], Relation::Le, int(0));
    p.constrain(vec![rat(1, 2), int(-12), rat(-1, 2), int(3)], Relation::Le, int(0));
    p.constrain(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
    p
}
