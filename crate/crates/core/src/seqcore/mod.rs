//! Primitive sequences, their normalized form, and conversions to and from
//! raw moments.
//!
//! A [`PrimitiveSeq`] stores a finite prefix `eps_0..eps_m`; nothing here
//! reasons about the infinite tail except the generating-function remainder,
//! which is bounded from the uniform estimate `eps_n <= (b-a)^n / n!`.

mod io;

pub use io::{format_moment_file, format_sequence_file, parse_moment_file, parse_sequence_file};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{factorial_q, int, pow_u, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    a: Rational,
    b: Rational,
}

impl Interval {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return Err(Error::Domain(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    pub fn unit() -> Self {
        Interval {
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn width(&self) -> Rational {
        &self.b - &self.a
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.a <= x && x <= &self.b
    }

    /// `(b - x) / (b - a)`, the coordinate in which the normalized sequence
    /// is a plain moment sequence on `[0, 1]`.
    pub fn to_unit(&self, x: &Rational) -> Rational {
        (&self.b - x) / self.width()
    }

    pub fn from_unit(&self, y: &Rational) -> Rational {
        &self.b - y * self.width()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Interval plus the prefix `eps_0..eps_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveSeq {
    interval: Interval,
    eps: Vec<Rational>,
}

impl PrimitiveSeq {
    /// Validated constructor: `eps_0 = 1` and `0 <= eps_n <= (b-a)^n/n!`.
    pub fn new(interval: Interval, eps: Vec<Rational>) -> Result<Self> {
        let ps = Self::from_raw(interval, eps)?;
        if !ps.eps[0].is_one() {
            return Err(ps.prefix_error(0, "eps_0 must equal 1"));
        }
        let w = ps.interval.width();
        for (n, e) in ps.eps.iter().enumerate() {
            if e.is_negative() {
                return Err(ps.prefix_error(n, "negative term"));
            }
            if *e > pow_u(&w, n as u64) / factorial_q(n as u64) {
                return Err(ps.prefix_error(n, "term exceeds (b-a)^n/n!"));
            }
        }
        Ok(ps)
    }

    /// Unvalidated constructor for diagnostics; only requires a nonempty
    /// prefix.
    pub fn from_raw(interval: Interval, eps: Vec<Rational>) -> Result<Self> {
        if eps.is_empty() {
            return Err(Error::Domain("primitive sequence needs at least eps_0".into()));
        }
        Ok(PrimitiveSeq { interval, eps })
    }

    fn prefix_error(&self, index: usize, reason: &str) -> Error {
        Error::NotAMomentPrefix {
            a: self.interval.a.to_string(),
            b: self.interval.b.to_string(),
            index,
            reason: reason.into(),
        }
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn eps(&self) -> &[Rational] {
        &self.eps
    }

    /// Highest stored index `m`.
    pub fn order(&self) -> usize {
        self.eps.len() - 1
    }

    /// The first `m + 1` terms.
    pub fn truncate(&self, m: usize) -> PrimitiveSeq {
        PrimitiveSeq {
            interval: self.interval.clone(),
            eps: self.eps[..=m.min(self.order())].to_vec(),
        }
    }
}

/// `gamma_n = n! eps_n / (b - a)^n`, the moment sequence of
/// `(b - X)/(b - a)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSeq {
    gamma: Vec<Rational>,
}

impl NormalizedSeq {
    /// Validated: `gamma_0 = 1` and `1 >= gamma_n >= gamma_{n+1} >= 0`.
    pub fn new(gamma: Vec<Rational>) -> Result<Self> {
        let g = Self::from_raw(gamma)?;
        if !g.gamma[0].is_one() {
            return Err(Error::NotAdmissible {
                index: 0,
                reason: "gamma_0 must equal 1".into(),
            });
        }
        for n in 0..g.gamma.len() {
            if g.gamma[n].is_negative() {
                return Err(Error::NotAdmissible {
                    index: n,
                    reason: "negative term".into(),
                });
            }
            if n + 1 < g.gamma.len() && g.gamma[n + 1] > g.gamma[n] {
                return Err(Error::NotAdmissible {
                    index: n + 1,
                    reason: "gamma increases".into(),
                });
            }
        }
        Ok(g)
    }

    pub fn from_raw(gamma: Vec<Rational>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Domain("normalized sequence needs at least gamma_0".into()));
        }
        Ok(NormalizedSeq { gamma })
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }

    pub fn order(&self) -> usize {
        self.gamma.len() - 1
    }
}

/// Raw moments `E[X^0..X^m]` together with the right endpoint `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentVector {
    pub b: Rational,
    pub moments: Vec<Rational>,
}

impl MomentVector {
    pub fn new(b: Rational, moments: Vec<Rational>) -> Result<Self> {
        if moments.first().map_or(true, |m0| !m0.is_one()) {
            return Err(Error::Domain("moment vector must start with E[X^0] = 1".into()));
        }
        Ok(MomentVector { b, moments })
    }
}

/// `eps_n = sum_j (-1)^j b^(n-j) E[X^j] / (j! (n-j)!)`, validated against
/// `[a, b]`.
pub fn primitive_from_moments(mv: &MomentVector, a: &Rational) -> Result<PrimitiveSeq> {
    let interval = Interval::new(a.clone(), mv.b.clone())?;
    if mv.moments.first().map_or(true, |m0| !m0.is_one()) {
        return Err(Error::Domain("moment vector must start with E[X^0] = 1".into()));
    }
    let m = mv.moments.len() - 1;
    let fact: Vec<Rational> = (0..=m as u64).map(factorial_q).collect();
    let bpow: Vec<Rational> = (0..=m as u64).map(|e| pow_u(&mv.b, e)).collect();
    let eps = (0..=m)
        .map(|n| {
            (0..=n).fold(Rational::zero(), |acc, j| {
                let term = &bpow[n - j] * &mv.moments[j] / (&fact[j] * &fact[n - j]);
                if j % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    PrimitiveSeq::new(interval, eps)
}

/// `E[X^n] = sum_j (-1)^j n^(j) b^(n-j) eps_j` with `n^(j)` the falling
/// factorial.
pub fn moments_from_primitive(ps: &PrimitiveSeq) -> MomentVector {
    let b = ps.interval.b.clone();
    let m = ps.order();
    let bpow: Vec<Rational> = (0..=m as u64).map(|e| pow_u(&b, e)).collect();
    let moments = (0..=m)
        .map(|n| {
            let mut falling = Rational::one();
            let mut acc = Rational::zero();
            for j in 0..=n {
                let term = &falling * &bpow[n - j] * &ps.eps[j];
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
                falling *= int((n - j) as i64);
            }
            acc
        })
        .collect();
    MomentVector { b, moments }
}

/// Unchecked rescaling `n! eps_n / (b - a)^n`.
pub fn gamma_values(ps: &PrimitiveSeq) -> Vec<Rational> {
    let w = ps.interval.width();
    ps.eps
        .iter()
        .enumerate()
        .map(|(n, e)| e * factorial_q(n as u64) / pow_u(&w, n as u64))
        .collect()
}

/// Inverse of [`gamma_values`].
pub fn eps_from_gamma(interval: &Interval, gamma: &[Rational]) -> Vec<Rational> {
    let w = interval.width();
    gamma
        .iter()
        .enumerate()
        .map(|(n, g)| g * pow_u(&w, n as u64) / factorial_q(n as u64))
        .collect()
}

pub fn normalize_gamma(ps: &PrimitiveSeq) -> Result<NormalizedSeq> {
    NormalizedSeq::new(gamma_values(ps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `eps_n >= 0`
    Nonnegative,
    /// `eps_n <= (b-a)^n / n!`
    UpperBound,
    /// `(n! eps_n)^2 <= ((n-1)! eps_(n-1)) ((n+1)! eps_(n+1))`
    LogConvex,
    /// `eps_0 = 1`
    Normalization,
    /// `gamma_n - atom >= 0`
    BelowAtom,
    /// `gamma_n - atom <= C k! n / (n-1)^(k+1)`
    HolderRate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {:?}: {}", self.index, self.rule, self.detail)
    }
}

/// Necessary conditions that any primitive sequence satisfies: the
/// normalization, the per-term bounds, and log-convexity of `n! eps_n`.
/// Boundary equality is allowed throughout.
pub fn check_elementary(ps: &PrimitiveSeq) -> Vec<Violation> {
    let mut out = Vec::new();
    if !ps.eps[0].is_one() {
        out.push(Violation {
            index: 0,
            rule: Rule::Normalization,
            detail: format!("eps_0 = {} != 1", ps.eps[0]),
        });
    }
    let w = ps.interval.width();
    for (n, e) in ps.eps.iter().enumerate() {
        if e.is_negative() {
            out.push(Violation {
                index: n,
                rule: Rule::Nonnegative,
                detail: format!("eps_{n} = {e} < 0"),
            });
        }
        let cap = pow_u(&w, n as u64) / factorial_q(n as u64);
        if *e > cap {
            out.push(Violation {
                index: n,
                rule: Rule::UpperBound,
                detail: format!("eps_{n} = {e} > {cap}"),
            });
        }
    }
    let scaled: Vec<Rational> = ps
        .eps
        .iter()
        .enumerate()
        .map(|(n, e)| e * factorial_q(n as u64))
        .collect();
    for n in 1..scaled.len().saturating_sub(1) {
        let lhs = &scaled[n] * &scaled[n];
        let rhs = &scaled[n - 1] * &scaled[n + 1];
        if lhs > rhs {
            out.push(Violation {
                index: n,
                rule: Rule::LogConvex,
                detail: format!("({n}! eps_{n})^2 = {lhs} > {rhs}"),
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomBounds {
    /// `gamma_m`, a certified upper bound on `P(X = a)`.
    pub upper_on_atom_at_a: Rational,
    /// `m eps_m / eps_(m-1)`; tends to `b - a` when `P(X = a) > 0`. Reported
    /// as a diagnostic only.
    pub ratio_diagnostic: Option<Rational>,
}

pub fn atom_mass_bounds(ps: &PrimitiveSeq) -> Result<AtomBounds> {
    let m = ps.order();
    if m < 1 {
        return Err(Error::Domain("atom mass bounds need at least eps_0, eps_1".into()));
    }
    let gamma = gamma_values(ps);
    let prev = &ps.eps[m - 1];
    let ratio = if prev.is_zero() {
        None
    } else {
        Some(int(m as i64) * &ps.eps[m] / prev)
    };
    Ok(AtomBounds {
        upper_on_atom_at_a: gamma[m].clone(),
        ratio_diagnostic: ratio,
    })
}

/// Enclosure of `sum_n eps_n z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgfValue {
    pub partial_sum: Rational,
    pub remainder_bound: Rational,
    pub terms_used: usize,
}

impl EgfValue {
    pub fn lo(&self) -> Rational {
        &self.partial_sum - &self.remainder_bound
    }

    pub fn hi(&self) -> Rational {
        &self.partial_sum + &self.remainder_bound
    }
}

/// Partial sum of the primitive generating function plus a rational bound
/// on the tail. With `t = (b-a)|z|` the tail is at most
/// `t^(m+1)/(m+1)! * e^t`, and `e^t` is replaced by `4^ceil(t)`.
pub fn egf_eval(ps: &PrimitiveSeq, z: &Rational) -> EgfValue {
    let m = ps.order();
    let mut partial = Rational::zero();
    let mut zp = Rational::one();
    for e in &ps.eps {
        partial += e * &zp;
        zp *= z;
    }
    let t = ps.interval.width() * z.abs();
    let remainder_bound = if t.is_zero() {
        Rational::zero()
    } else {
        let exp_cap = pow_u(&int(4), t.ceil().to_integer().try_into().unwrap_or(u64::MAX));
        pow_u(&t, m as u64 + 1) / factorial_q(m as u64 + 1) * exp_cap
    };
    EgfValue {
        partial_sum: partial,
        remainder_bound,
        terms_used: m + 1,
    }
}

/// Checks `0 <= gamma_n - atom <= C kappa! n / (n-1)^(kappa+1)` for
/// `2 <= n <= m`. A violation falsifies the supplied `(kappa, C, atom)`
/// hypothesis about the left tail; only integer `kappa` is supported so the
/// Gamma factor stays rational.
pub fn holder_rate_check(
    ps: &PrimitiveSeq,
    kappa: &Rational,
    c: &Rational,
    atom: &Rational,
) -> Result<Vec<Violation>> {
    if !kappa.is_positive() || !c.is_positive() {
        return Err(Error::Domain("kappa and C must be positive".into()));
    }
    if !kappa.is_integer() {
        return Err(Error::Domain(format!(
            "non-integer kappa = {kappa} is not supported in exact mode"
        )));
    }
    let k: u64 = kappa
        .to_integer()
        .try_into()
        .map_err(|_| Error::Domain("kappa too large".into()))?;
    let gamma = gamma_values(ps);
    let scale = c * factorial_q(k);
    let mut out = Vec::new();
    for (n, g) in gamma.iter().enumerate().skip(2) {
        let excess = g - atom;
        if excess.is_negative() {
            out.push(Violation {
                index: n,
                rule: Rule::BelowAtom,
                detail: format!("gamma_{n} - atom = {excess} < 0"),
            });
        }
        let nn = int(n as i64);
        let bound = &scale * &nn / pow_u(&(&nn - int(1)), k + 1);
        if excess > bound {
            out.push(Violation {
                index: n,
                rule: Rule::HolderRate,
                detail: format!("gamma_{n} - atom = {excess} > {bound}"),
            });
        }
    }
    Ok(out)
}

/// Convenience: `(b - c)^n / n!` for `n = 0..=m`.
pub(crate) fn point_mass_eps(b: &Rational, c: &Rational, m: usize) -> Vec<Rational> {
    let d = b - c;
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = Rational::one();
    for n in 0..=m {
        if n > 0 {
            acc = acc * &d / Rational::from_integer(BigInt::from(n));
        }
        out.push(acc.clone());
    }
    out
}
