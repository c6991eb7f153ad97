//! Cutting-plane loop for the bound LP.
//!
//! Everything runs in `y = (b - x) / (b - a)`. Grid weights `w_i >= 0` must
//! satisfy `sum_i w_i y_i^j = gamma_j` for `j = 0..=m`; the objective is the
//! target evaluated at the grid points. The LP duals form a polynomial
//! `P(y) = sum_j beta_j y^j` that dominates the target on the grid. Points
//! where it fails to dominate on the continuum become new columns.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::grid_lp::{GridLp, Phase1};
use super::polish::polish;
use super::{BoundKind, BoundResult, ConstraintPrefix, Side};
use crate::distzoo::{eps_atomic, FiniteAtomic};
use crate::error::{Error, Result};
use crate::exactmath::{
    factorial_q, int, local_minima, negative_points, pow_u, rat, simplest_between, to_decimal,
    Polynomial, Rational,
};
use crate::seqcore::gamma_values;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundOptions {
    pub tol: Rational,
    /// Starting grid size in `[a, b]`; `None` means `4m + 1`.
    pub grid_size: Option<usize>,
    pub max_iterations: usize,
}

impl BoundOptions {
    pub fn with_tol(tol: Rational) -> Self {
        BoundOptions { tol, grid_size: None, max_iterations: 200 }
    }
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self::with_tol(super::default_tol())
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Target {
    /// `1{y >= y0}` on the upper side, `1{y > y0}` on the lower side.
    Indicator { y0: Rational },
    /// `scale * y^k`.
    Power { k: usize, scale: Rational },
}

/// A closed piece of `[0, 1]` on which the target is the polynomial `t`.
pub(crate) struct Region {
    pub lo: Rational,
    pub hi: Rational,
    pub t: Polynomial,
}

impl Target {
    pub(crate) fn value(&self, y: &Rational, side: Side) -> Rational {
        match self {
            Target::Indicator { y0 } => {
                let hit = match side {
                    Side::Upper => y >= y0,
                    Side::Lower => y > y0,
                };
                if hit { int(1) } else { int(0) }
            }
            Target::Power { k, scale } => scale * pow_u(y, *k as u64),
        }
    }

    pub(crate) fn slope(&self, y: &Rational) -> Rational {
        match self {
            Target::Indicator { .. } => int(0),
            Target::Power { k: 0, .. } => int(0),
            Target::Power { k, scale } => scale * int(*k as i64) * pow_u(y, *k as u64 - 1),
        }
    }

    pub(crate) fn y0(&self) -> Option<&Rational> {
        match self {
            Target::Indicator { y0 } => Some(y0),
            Target::Power { .. } => None,
        }
    }

    pub(crate) fn regions(&self) -> Vec<Region> {
        let c = |v: i64| Polynomial::monomial(vec![int(v)]);
        match self {
            Target::Indicator { y0 } => vec![
                Region { lo: int(0), hi: y0.clone(), t: c(0) },
                Region { lo: y0.clone(), hi: int(1), t: c(1) },
            ],
            Target::Power { k, scale } => {
                let mut v = vec![Rational::zero(); k + 1];
                v[*k] = scale.clone();
                vec![Region { lo: int(0), hi: int(1), t: Polynomial::monomial(v) }]
            }
        }
    }
}

/// `P - t` on the upper side and `t - P` on the lower side; feasibility of
/// `P` means this is nonnegative on every region.
pub(crate) fn slack(p: &Polynomial, t: &Polynomial, side: Side) -> Polynomial {
    match side {
        Side::Upper => p - t,
        Side::Lower => t - p,
    }
}

pub(crate) fn solve(
    prefix: &ConstraintPrefix,
    kind: BoundKind,
    target: Target,
    side: Side,
    opts: &BoundOptions,
) -> Result<BoundResult> {
    let m = prefix.order();
    let gamma = gamma_values(prefix.seq());
    let n0 = opts.grid_size.unwrap_or(4 * m + 1).max(2);
    let mut ys: Vec<Rational> = (0..n0).map(|i| rat(i as i64, n0 as i64 - 1)).collect();
    if let Some(y0) = target.y0() {
        ys.push(y0.clone());
    }
    ys.sort();
    ys.dedup();
    // the LP minimizes, so the upper side negates the objective
    let cost = |y: &Rational| match side {
        Side::Upper => -target.value(y, side),
        Side::Lower => target.value(y, side),
    };
    let mut t = GridLp::new(ys.clone(), ys.iter().map(cost).collect(), gamma.clone());
    let regions = target.regions();
    let width = if opts.tol < rat(1, 1 << 20) { opts.tol.clone() } else { rat(1, 1 << 20) };
    let mut last = (int(0), int(0));

    for iteration in 1..=opts.max_iterations {
        let mut cuts = Vec::new();
        match t.phase_one()? {
            Phase1::Infeasible(y) => {
                let q = Polynomial::monomial(y.iter().map(|v| -v).collect());
                cuts = negative_points(&q, &int(0), &int(1));
                if cuts.is_empty() {
                    return Err(Error::InfeasiblePrefix(format!(
                        "no law on the interval has this prefix; separating polynomial in y: {q}"
                    )));
                }
            }
            Phase1::Feasible => {
                t.phase_two()?;
                let w = t.primal();
                let value = match side {
                    Side::Upper => -t.objective(),
                    Side::Lower => t.objective(),
                };
                let duals = t.duals();
                if pairing_slice(&duals, &gamma) != t.objective() {
                    return Err(Error::Lp("grid program primal and dual objectives differ".into()));
                }
                let beta: Vec<Rational> = match side {
                    Side::Upper => duals.iter().map(|v| -v).collect(),
                    Side::Lower => duals,
                };
                let p = simplify(Polynomial::monomial(beta));
                let mut violation = Rational::zero();
                for r in &regions {
                    let d = slack(&p, &r.t, side);
                    let (c, v) = separate(&d, &r.lo, &r.hi, &width);
                    cuts.extend(c);
                    if v > violation {
                        violation = v;
                    }
                }
                let atoms: Vec<(Rational, Rational)> = ys
                    .iter()
                    .zip(&w)
                    .filter(|(_, x)| x.is_positive())
                    .map(|(y, x)| (y.clone(), x.clone()))
                    .collect();
                let shift = match side {
                    Side::Upper => violation.clone(),
                    Side::Lower => -&violation,
                };
                let q = &p + &Polynomial::monomial(vec![shift]);
                let gap = (pairing(&q, &gamma) - &value).abs();
                let done = if violation.is_zero() && gap.is_zero() {
                    Some((q, violation))
                } else if let Some(exact) = polish(&target, side, m, &gamma, &regions, &atoms, &value) {
                    Some((exact, Rational::zero()))
                } else if gap <= opts.tol {
                    Some((q, violation))
                } else {
                    None
                };
                if let Some((q, shift)) = done {
                    return finish(prefix, kind, side, q, shift, value, &atoms, iteration, ys.len());
                }
                last = match side {
                    Side::Upper => (value.clone(), &value + &gap),
                    Side::Lower => (&value - &gap, value.clone()),
                };
            }
        }
        let before = ys.len();
        for c in cuts {
            if !ys.contains(&c) {
                t.add_node(c.clone(), cost(&c));
                ys.push(c);
            }
        }
        if ys.len() == before {
            return Err(Error::Lp("cutting plane produced no new grid point".into()));
        }
    }
    Err(Error::ToleranceNotReached {
        iterations: opts.max_iterations,
        lo: to_decimal(&last.0, 12),
        hi: to_decimal(&last.1, 12),
    })
}

fn pairing(q: &Polynomial, gamma: &[Rational]) -> Rational {
    pairing_slice(q.coeffs(), gamma)
}

fn pairing_slice(c: &[Rational], gamma: &[Rational]) -> Rational {
    c.iter().zip(gamma).map(|(c, g)| c * g).sum()
}

/// Exact duals grow to thousands of bits; any polynomial works as a
/// certificate once shifted by its violation, so large ones are rounded to a
/// fine dyadic grid before separation.
fn simplify(p: Polynomial) -> Polynomial {
    const BITS: u64 = 160;
    let big = p.coeffs().iter().any(|c| c.numer().bits() + c.denom().bits() > BITS);
    if !big {
        return p;
    }
    let scale = Rational::from_integer(BigInt::one() << 96u32);
    let coeffs = p.coeffs().iter().map(|c| (c * &scale).round() / &scale).collect();
    Polynomial::monomial(coeffs)
}

/// Cut points where `d < 0` on `[lo, hi]` and a rigorous bound on how far
/// below zero `d` goes.
fn separate(d: &Polynomial, lo: &Rational, hi: &Rational, width: &Rational) -> (Vec<Rational>, Rational) {
    let mut cuts: Vec<Rational> = Vec::new();
    let mut violation = Rational::zero();
    for cand in local_minima(d, lo, hi, width) {
        if !cand.value_lower_bound.is_negative() {
            continue;
        }
        if -&cand.value_lower_bound > violation {
            violation = -cand.value_lower_bound.clone();
        }
        let c = cand.argmin.midpoint();
        let depth = d.eval(&c);
        if !depth.is_negative() {
            continue;
        }
        if let Some(z) = deep_point(d, lo, hi, &c, &cand.argmin.width(), &depth) {
            if !cuts.contains(&z) {
                cuts.push(z);
            }
        }
    }
    (cuts, violation)
}

/// Simplest rational in a shrinking window around `c` where `d` is at least
/// half as negative as at `c`; few bits keep the LP small.
fn deep_point(
    d: &Polynomial,
    lo: &Rational,
    hi: &Rational,
    c: &Rational,
    floor: &Rational,
    depth: &Rational,
) -> Option<Rational> {
    let half = depth / int(2);
    let mut r = (hi - lo) / int(4);
    while &r > floor {
        let wl = if &(c - &r) > lo { c - &r } else { lo.clone() };
        let wh = if &(c + &r) < hi { c + &r } else { hi.clone() };
        let z = simplest_between(&wl, &wh);
        if d.eval(&z) <= half {
            return Some(z);
        }
        r /= int(4);
    }
    let z = simplest_between(&(c - floor), &(c + floor));
    if (lo..=hi).contains(&&z) && d.eval(&z).is_negative() {
        return Some(z);
    }
    Some(c.clone())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    prefix: &ConstraintPrefix,
    kind: BoundKind,
    side: Side,
    q: Polynomial,
    shift: Rational,
    value: Rational,
    atoms: &[(Rational, Rational)],
    iterations: usize,
    grid_points: usize,
) -> Result<BoundResult> {
    let iv = prefix.interval();
    let w = iv.width();
    let alpha: Vec<Rational> = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c / pow_u(&w, j as u64))
        .collect();
    let certificate = Polynomial::reflected(iv.b().clone(), alpha);
    let pairing: Rational = certificate
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c * factorial_q(j as u64) * &prefix.seq().eps()[j])
        .sum();
    let (lo, hi) = match side {
        Side::Upper => (value, pairing),
        Side::Lower => (pairing, value),
    };
    if lo > hi {
        return Err(Error::Lp(format!("enclosure [{lo}, {hi}] is inverted")));
    }
    let mut pts: Vec<(Rational, Rational)> = atoms.iter().map(|(y, p)| (iv.from_unit(y), p.clone())).collect();
    pts.sort();
    let (points, weights) = pts.into_iter().unzip();
    let extremizer = FiniteAtomic::new(iv.clone(), points, weights)?;
    if eps_atomic(&extremizer, prefix.order())?.eps() != prefix.seq().eps() {
        return Err(Error::Lp("extremizer does not reproduce the prefix".into()));
    }
    Ok(BoundResult {
        side,
        kind,
        lo,
        hi,
        certificate,
        shift,
        extremizer,
        iterations,
        grid_points,
    })
}
