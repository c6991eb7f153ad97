//! Exact recovery of a zero-width certificate.
//!
//! At an optimum the dual polynomial touches the target at every atom of the
//! extremal law, and tangentially at interior atoms where the target is
//! smooth. When those contact conditions (plus a few boundary conditions) pin
//! the polynomial down, solving them exactly gives a certificate whose
//! pairing equals the grid value. It is kept only if it is feasible on the
//! continuum.

use num_traits::{One, Zero};

use super::solver::{slack, Region, Target};
use super::Side;
use crate::exactmath::{int, is_nonnegative_on, pow_u, Polynomial, Rational};

const MAX_ATTEMPTS: usize = 48;

type Condition = (Vec<Rational>, Rational);

fn value_row(z: &Rational, m: usize) -> Vec<Rational> {
    (0..=m).map(|j| pow_u(z, j as u64)).collect()
}

fn slope_row(z: &Rational, m: usize) -> Vec<Rational> {
    (0..=m)
        .map(|j| if j == 0 { int(0) } else { int(j as i64) * pow_u(z, j as u64 - 1) })
        .collect()
}

pub(crate) fn polish(
    target: &Target,
    side: Side,
    m: usize,
    gamma: &[Rational],
    regions: &[Region],
    atoms: &[(Rational, Rational)],
    value: &Rational,
) -> Option<Polynomial> {
    let zero = int(0);
    let one = int(1);
    let special = |z: &Rational| *z == zero || *z == one || target.y0() == Some(z);

    let mut base: Vec<Condition> = Vec::new();
    for (z, _) in atoms {
        base.push((value_row(z, m), target.value(z, side)));
        if !special(z) {
            base.push((slope_row(z, m), target.slope(z)));
        }
    }
    let mut extra: Vec<Condition> = Vec::new();
    let mut ends = vec![zero.clone(), one.clone()];
    if let Some(y0) = target.y0() {
        ends.push(y0.clone());
    }
    for z in &ends {
        extra.push((slope_row(z, m), target.slope(z)));
        if !atoms.iter().any(|(a, _)| a == z) {
            extra.push((value_row(z, m), target.value(z, side)));
        }
    }

    let need = (m + 1).saturating_sub(base.len());
    let mut attempts = 0;
    for size in (0..=need.min(extra.len())).rev() {
        for subset in subsets(extra.len(), size) {
            if attempts == MAX_ATTEMPTS {
                return None;
            }
            attempts += 1;
            let mut sys = base.clone();
            sys.extend(subset.iter().map(|&i| extra[i].clone()));
            let Some(beta) = solve_exact(&sys, m + 1) else { continue };
            let pairing: Rational = beta.iter().zip(gamma).map(|(b, g)| b * g).sum();
            if pairing != *value {
                continue;
            }
            let p = Polynomial::monomial(beta);
            if regions.iter().all(|r| is_nonnegative_on(&slack(&p, &r.t, side), &r.lo, &r.hi)) {
                return Some(p);
            }
        }
    }
    None
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gauss-Jordan on `sys`; free unknowns are set to zero. `None` when
/// inconsistent.
fn solve_exact(sys: &[Condition], n: usize) -> Option<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = sys
        .iter()
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    Some(x)
}
