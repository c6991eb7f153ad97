//! Sharp bounds on `F(x0)` and on higher primitive coordinates given the first
//! `m` primitive coordinates of an unknown law on `[a, b]`.
//!
//! The dual side is a polynomial `p(x) = sum_j alpha_j (b - x)^j` that
//! majorizes (or minorizes) the target on `[a, b]`; its pairing
//! `sum_j alpha_j j! c_j` bounds the target's expectation. The primal side is
//! an atomic law on a grid. Both come out of one exact LP over grid weights,
//! refined by cutting planes until the certificate is feasible on the whole
//! interval up to `tol`.
//!
//! Closed sides: the upper CDF problem asks `p >= 1` on `[a, x0]`, the lower
//! one `p <= 0` on `[x0, b]`. Polynomials are continuous, so closing the
//! half-open regions changes nothing.

mod grid_lp;
mod polish;
mod solver;

use std::fmt;

use num_traits::{One, Signed};

use crate::admissibility::{check_cm_prefix, hankel_check};
use crate::distzoo::{cdf_eval, eps_atomic, Distribution, FiniteAtomic};
use crate::error::{Error, Result};
use crate::exactmath::{factorial_q, pow_u, rat, Polynomial, Rational};
use crate::seqcore::{gamma_values, Interval, NormalizedSeq, PrimitiveSeq};

pub use solver::BoundOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Cdf { x0: Rational },
    Moment { k: usize },
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Cdf { x0 } => write!(f, "cdf x0={x0}"),
            BoundKind::Moment { k } => write!(f, "moment k={k}"),
        }
    }
}

/// `c_1..c_m` on an interval, screened for admissibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintPrefix {
    seq: PrimitiveSeq,
}

impl ConstraintPrefix {
    /// Rejects prefixes that fail the complete-monotonicity or Hankel screens.
    pub fn new(seq: PrimitiveSeq) -> Result<Self> {
        if seq.order() < 1 {
            return Err(Error::Domain("a constraint prefix needs m >= 1".into()));
        }
        if !seq.eps()[0].is_one() {
            return Err(Error::InfeasiblePrefix(format!("eps_0 = {}, not 1", seq.eps()[0])));
        }
        let g = NormalizedSeq::from_raw(gamma_values(&seq))?;
        if let Some(v) = check_cm_prefix(&g).first() {
            return Err(Error::InfeasiblePrefix(format!("difference test fails: {v}")));
        }
        if let Some(b) = hankel_check(&g).failures().next() {
            return Err(Error::InfeasiblePrefix(format!(
                "{} Hankel block of size {} is not positive semidefinite",
                b.family,
                b.matrix.len()
            )));
        }
        Ok(ConstraintPrefix { seq })
    }

    pub fn from_coordinates(interval: Interval, c: &[Rational]) -> Result<Self> {
        let mut eps = vec![Rational::one()];
        eps.extend_from_slice(c);
        Self::new(PrimitiveSeq::from_raw(interval, eps)?)
    }

    pub fn from_distribution(d: &Distribution, m: usize) -> Result<Self> {
        Self::new(d.eps(m)?)
    }

    pub fn order(&self) -> usize {
        self.seq.order()
    }

    pub fn interval(&self) -> &Interval {
        self.seq.interval()
    }

    pub fn seq(&self) -> &PrimitiveSeq {
        &self.seq
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub side: Side,
    pub kind: BoundKind,
    /// The sharp bound lies in `[lo, hi]`.
    pub lo: Rational,
    pub hi: Rational,
    /// Feasible dual polynomial in the `(b - x)` basis; its pairing with the
    /// prefix is `hi` for upper bounds and `lo` for lower bounds.
    pub certificate: Polynomial,
    /// Amount added to (upper) or removed from (lower) the constant term of
    /// the LP dual to make it feasible on the continuum.
    pub shift: Rational,
    /// Grid-optimal law; its objective is `lo` (upper) or `hi` (lower).
    pub extremizer: FiniteAtomic,
    pub iterations: usize,
    pub grid_points: usize,
}

impl BoundResult {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// The certified side of the enclosure.
    pub fn value(&self) -> &Rational {
        match self.side {
            Side::Upper => &self.hi,
            Side::Lower => &self.lo,
        }
    }
}

/// Sharp bound on `F(x0)` (upper side) or `F(x0-)` (lower side).
pub fn cdf_bound(prefix: &ConstraintPrefix, x0: &Rational, side: Side, tol: &Rational) -> Result<BoundResult> {
    cdf_bound_with(prefix, x0, side, &BoundOptions::with_tol(tol.clone()))
}

pub fn cdf_bound_with(
    prefix: &ConstraintPrefix,
    x0: &Rational,
    side: Side,
    opts: &BoundOptions,
) -> Result<BoundResult> {
    let iv = prefix.interval();
    if !iv.contains(x0) {
        return Err(Error::Domain(format!("x0 = {x0} lies outside {iv}")));
    }
    let target = solver::Target::Indicator { y0: iv.to_unit(x0) };
    solver::solve(prefix, BoundKind::Cdf { x0: x0.clone() }, target, side, opts)
}

/// Sharp bound on `E[(b - X)^k] / k!`. For `k <= m` the value is pinned.
pub fn moment_bound(prefix: &ConstraintPrefix, k: usize, side: Side, tol: &Rational) -> Result<BoundResult> {
    moment_bound_with(prefix, k, side, &BoundOptions::with_tol(tol.clone()))
}

pub fn moment_bound_with(
    prefix: &ConstraintPrefix,
    k: usize,
    side: Side,
    opts: &BoundOptions,
) -> Result<BoundResult> {
    let w = prefix.interval().width();
    let scale = pow_u(&w, k as u64) / factorial_q(k as u64);
    let target = solver::Target::Power { k, scale };
    let r = solver::solve(prefix, BoundKind::Moment { k }, target, side, opts)?;
    if k <= prefix.order() {
        let c = &prefix.seq.eps()[k];
        if r.lo != *c || r.hi != *c {
            return Err(Error::Lp(format!("pinned coordinate c_{k} = {c} not reproduced")));
        }
    }
    Ok(r)
}

/// Returns the extremal atomic law after re-checking that it reproduces the
/// prefix.
pub fn recover_extremizer(result: &BoundResult, prefix: &ConstraintPrefix) -> Result<FiniteAtomic> {
    let got = eps_atomic(&result.extremizer, prefix.order())?;
    if got.eps() != prefix.seq.eps() {
        return Err(Error::Lp("extremizer does not reproduce the prefix".into()));
    }
    Ok(result.extremizer.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopePoint {
    pub m: usize,
    pub upper: Rational,
    pub lower: Rational,
}

pub const DEFAULT_M_MAX: usize = 30;

pub fn default_tol() -> Rational {
    rat(1, 1_000_000_000)
}

/// Upper and lower CDF bounds at `x0` for `m = 1..=m_max`, using the
/// distribution's own prefix. Each point reports the certified sides.
pub fn envelope_sweep(d: &Distribution, x0: &Rational, m_max: usize, tol: &Rational) -> Result<Vec<EnvelopePoint>> {
    if m_max < 1 {
        return Err(Error::Domain("envelope needs m_max >= 1".into()));
    }
    let opts = BoundOptions::with_tol(tol.clone());
    (1..=m_max)
        .map(|m| {
            let prefix = ConstraintPrefix::from_distribution(d, m)?;
            let up = cdf_bound_with(&prefix, x0, Side::Upper, &opts)?;
            let lo = cdf_bound_with(&prefix, x0, Side::Lower, &opts)?;
            Ok(EnvelopePoint { m, upper: up.hi, lower: lo.lo })
        })
        .collect()
}

/// `F(x0-) <= F(x0)` of the generating law sandwiched by an envelope point.
pub fn sandwiches(d: &Distribution, x0: &Rational, p: &EnvelopePoint) -> Result<bool> {
    let f = cdf_eval(d, x0)?;
    Ok(p.lower <= f.left_limit && f.value <= p.upper && !p.lower.is_negative())
}

#[cfg(test)]
mod tests;
