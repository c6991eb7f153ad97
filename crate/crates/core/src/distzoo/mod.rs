//! Closed-form primitive sequences and exact CDFs for a few distribution
//! families: point masses, finite atomic laws, Beta laws with rational
//! parameters, piecewise-polynomial densities, and finite mixtures.

mod parse;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{factorial_q, int, is_nonnegative_on, pow_u, Polynomial, Rational};
use crate::seqcore::{point_mass_eps, Interval, PrimitiveSeq};

pub use parse::parse_dist_spec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMass {
    interval: Interval,
    c: Rational,
}

impl PointMass {
    pub fn new(interval: Interval, c: Rational) -> Result<Self> {
        if !interval.contains(&c) {
            return Err(Error::Domain(format!("point {c} lies outside {interval}")));
        }
        Ok(PointMass { interval, c })
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn point(&self) -> &Rational {
        &self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAtomic {
    interval: Interval,
    points: Vec<Rational>,
    weights: Vec<Rational>,
}

impl FiniteAtomic {
    /// Points must be strictly increasing and inside the interval; weights
    /// nonnegative with sum exactly one.
    pub fn new(interval: Interval, points: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::Domain(
                "atomic law needs matching nonempty point and weight lists".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("atom locations must be strictly increasing".into()));
        }
        if let Some(c) = points.iter().find(|c| !interval.contains(c)) {
            return Err(Error::Domain(format!("atom {c} lies outside {interval}")));
        }
        check_weights(&weights)?;
        Ok(FiniteAtomic { interval, points, weights })
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

fn check_weights(weights: &[Rational]) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::Domain(format!("negative weight {w}")));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::Domain(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Beta law on `[0, 1]` with rational shape parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaRational {
    alpha: Rational,
    beta: Rational,
}

impl BetaRational {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if !alpha.is_positive() || !beta.is_positive() {
            return Err(Error::Domain(format!(
                "beta parameters must be positive, got ({alpha}, {beta})"
            )));
        }
        Ok(BetaRational { alpha, beta })
    }

    pub fn uniform() -> Self {
        BetaRational { alpha: int(1), beta: int(1) }
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Density as a polynomial in `x`, available for integer parameters.
    fn density_poly(&self) -> Option<Polynomial> {
        if !self.alpha.is_integer() || !self.beta.is_integer() {
            return None;
        }
        let a = self.alpha.to_integer();
        let b = self.beta.to_integer();
        let (a, b): (u64, u64) = (a.try_into().ok()?, b.try_into().ok()?);
        let x = Polynomial::monomial(vec![int(0), int(1)]);
        let one_minus_x = Polynomial::monomial(vec![int(1), int(-1)]);
        let mut p = Polynomial::constant(int(1), crate::exactmath::Basis::Monomial);
        for _ in 1..a {
            p = &p * &x;
        }
        for _ in 1..b {
            p = &p * &one_minus_x;
        }
        // 1 / B(a, b) = (a + b - 1)! / ((a - 1)! (b - 1)!)
        let norm = factorial_q(a + b - 1) / (factorial_q(a - 1) * factorial_q(b - 1));
        Some(p.scale(&norm))
    }
}

/// Density given by one polynomial in `x` per knot interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePolyDensity {
    knots: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePolyDensity {
    /// `knots` runs `a = xi_0 < ... < xi_k = b`, `pieces[i]` lives on
    /// `[xi_i, xi_{i+1}]`. Each piece must be nonnegative there and the total
    /// integral must be exactly one.
    pub fn new(knots: Vec<Rational>, pieces: Vec<Polynomial>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != pieces.len() + 1 {
            return Err(Error::Domain(format!(
                "{} knots do not fit {} pieces",
                knots.len(),
                pieces.len()
            )));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("knots must be strictly increasing".into()));
        }
        let pieces: Vec<Polynomial> = pieces.iter().map(Polynomial::to_monomial).collect();
        for (i, p) in pieces.iter().enumerate() {
            if !is_nonnegative_on(p, &knots[i], &knots[i + 1]) {
                return Err(Error::Domain(format!(
                    "density piece {i} is negative somewhere on [{}, {}]",
                    knots[i],
                    knots[i + 1]
                )));
            }
        }
        let d = PiecewisePolyDensity { knots, pieces };
        let total = d.mass_below(d.knots.last().unwrap());
        if !total.is_one() {
            return Err(Error::Domain(format!("density integrates to {total}, not 1")));
        }
        Ok(d)
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.knots[0].clone(), self.knots.last().unwrap().clone())
            .expect("knots are increasing")
    }

    pub fn knots(&self) -> &[Rational] {
        &self.knots
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    fn mass_below(&self, x: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let lo = &self.knots[i];
            if x <= lo {
                break;
            }
            let hi = if x < &self.knots[i + 1] { x } else { &self.knots[i + 1] };
            let anti = p.antiderivative();
            total += anti.eval(hi) - anti.eval(lo);
        }
        total
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mixture {
    components: Vec<Distribution>,
    weights: Vec<Rational>,
}

impl Mixture {
    pub fn new(components: Vec<Distribution>, weights: Vec<Rational>) -> Result<Self> {
        if components.is_empty() || components.len() != weights.len() {
            return Err(Error::Domain(
                "mixture needs matching nonempty component and weight lists".into(),
            ));
        }
        check_weights(&weights)?;
        let iv = components[0].interval();
        if let Some(c) = components.iter().find(|c| c.interval() != iv) {
            return Err(Error::Domain(format!(
                "mixture components live on {iv} and {}",
                c.interval()
            )));
        }
        Ok(Mixture { components, weights })
    }

    pub fn components(&self) -> &[Distribution] {
        &self.components
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    PointMass(PointMass),
    FiniteAtomic(FiniteAtomic),
    BetaRational(BetaRational),
    PiecewisePolyDensity(PiecewisePolyDensity),
    Mixture(Mixture),
}

/// `F(x)` and the left limit `F(x-)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdfValue {
    pub value: Rational,
    pub left_limit: Rational,
}

impl Distribution {
    pub fn uniform() -> Self {
        Distribution::BetaRational(BetaRational::uniform())
    }

    pub fn interval(&self) -> Interval {
        match self {
            Distribution::PointMass(d) => d.interval.clone(),
            Distribution::FiniteAtomic(d) => d.interval.clone(),
            Distribution::BetaRational(_) => Interval::unit(),
            Distribution::PiecewisePolyDensity(d) => d.interval(),
            Distribution::Mixture(d) => d.components[0].interval(),
        }
    }

    /// Primitive sequence `eps_0..=eps_m`.
    pub fn eps(&self, m: usize) -> Result<PrimitiveSeq> {
        match self {
            Distribution::PointMass(d) => eps_point_mass(&d.c, &d.interval, m),
            Distribution::FiniteAtomic(d) => eps_atomic(d, m),
            Distribution::BetaRational(d) => eps_beta(&d.alpha, &d.beta, m),
            Distribution::PiecewisePolyDensity(d) => eps_pwpoly(d, m),
            Distribution::Mixture(d) => eps_mixture(d, m),
        }
    }
}

pub fn eps_point_mass(c: &Rational, interval: &Interval, m: usize) -> Result<PrimitiveSeq> {
    if !interval.contains(c) {
        return Err(Error::Domain(format!("point {c} lies outside {interval}")));
    }
    PrimitiveSeq::new(interval.clone(), point_mass_eps(interval.b(), c, m))
}

pub fn eps_atomic(d: &FiniteAtomic, m: usize) -> Result<PrimitiveSeq> {
    let mut eps = vec![Rational::zero(); m + 1];
    for (c, w) in d.points.iter().zip(&d.weights) {
        for (e, v) in eps.iter_mut().zip(point_mass_eps(d.interval.b(), c, m)) {
            *e += w * v;
        }
    }
    PrimitiveSeq::new(d.interval.clone(), eps)
}

/// `eps_n = (1/n!) prod_{k<n} (beta + k) / (alpha + beta + k)`.
pub fn eps_beta(alpha: &Rational, beta: &Rational, m: usize) -> Result<PrimitiveSeq> {
    BetaRational::new(alpha.clone(), beta.clone())?;
    let mut eps = Vec::with_capacity(m + 1);
    let mut acc = Rational::one();
    eps.push(acc.clone());
    for n in 1..=m {
        let k = int(n as i64 - 1);
        acc = acc * (beta + &k) / (alpha + beta + &k) / int(n as i64);
        eps.push(acc.clone());
    }
    PrimitiveSeq::new(Interval::unit(), eps)
}

/// Knot-jump expansion: with `J_{i,j}` the jump of the `j`-th derivative at
/// knot `xi_i` (the left end counts as a jump from zero),
/// `eps_n = sum_{i,j} J_{i,j} (b - xi_i)^{n+j+1} / (n+j+1)!`.
pub fn eps_pwpoly(d: &PiecewisePolyDensity, m: usize) -> Result<PrimitiveSeq> {
    let b = d.knots.last().unwrap();
    let k = d.pieces.len();
    let maxdeg = d.pieces.iter().map(|p| p.degree().max(0) as usize).max().unwrap_or(0);
    // jumps[i][j] at knot i (0..k-1)
    let mut derivs: Vec<Vec<Polynomial>> = Vec::with_capacity(k);
    for p in &d.pieces {
        let mut ds = vec![p.clone()];
        for _ in 0..maxdeg {
            let next = ds.last().unwrap().derivative();
            ds.push(next);
        }
        derivs.push(ds);
    }
    let mut jumps: Vec<(Rational, Vec<Rational>)> = Vec::with_capacity(k);
    for i in 0..k {
        let xi = &d.knots[i];
        let js = (0..=maxdeg)
            .map(|j| {
                let right = derivs[i][j].eval(xi);
                if i == 0 {
                    right
                } else {
                    right - derivs[i - 1][j].eval(xi)
                }
            })
            .collect();
        jumps.push((b - xi, js));
    }
    let eps = (0..=m)
        .map(|n| {
            let mut total = Rational::zero();
            for (dist, js) in &jumps {
                for (j, jump) in js.iter().enumerate() {
                    if jump.is_zero() {
                        continue;
                    }
                    let e = (n + j + 1) as u64;
                    total += jump * pow_u(dist, e) / factorial_q(e);
                }
            }
            total
        })
        .collect();
    PrimitiveSeq::new(d.interval(), eps)
}

pub fn eps_mixture(d: &Mixture, m: usize) -> Result<PrimitiveSeq> {
    let mut eps = vec![Rational::zero(); m + 1];
    for (c, w) in d.components.iter().zip(&d.weights) {
        let ps = c.eps(m)?;
        for (e, v) in eps.iter_mut().zip(ps.eps()) {
            *e += w * v;
        }
    }
    PrimitiveSeq::new(d.components[0].interval(), eps)
}

/// Exact `F(x)` and `F(x-)`. Beta laws need integer parameters here, since
/// otherwise the distribution function is not rational.
pub fn cdf_eval(d: &Distribution, x: &Rational) -> Result<CdfValue> {
    match d {
        Distribution::PointMass(p) => {
            let at = |strict: bool| {
                if (strict && p.c < *x) || (!strict && p.c <= *x) {
                    int(1)
                } else {
                    int(0)
                }
            };
            Ok(CdfValue { value: at(false), left_limit: at(true) })
        }
        Distribution::FiniteAtomic(a) => {
            let mut value = Rational::zero();
            let mut left = Rational::zero();
            for (c, w) in a.points.iter().zip(&a.weights) {
                if c <= x {
                    value += w;
                }
                if c < x {
                    left += w;
                }
            }
            Ok(CdfValue { value, left_limit: left })
        }
        Distribution::BetaRational(bd) => {
            let p = bd.density_poly().ok_or_else(|| {
                Error::Domain(format!(
                    "distribution function of Beta({}, {}) is not rational",
                    bd.alpha, bd.beta
                ))
            })?;
            let dens = PiecewisePolyDensity { knots: vec![int(0), int(1)], pieces: vec![p] };
            let v = dens.mass_below(x);
            Ok(CdfValue { value: v.clone(), left_limit: v })
        }
        Distribution::PiecewisePolyDensity(dens) => {
            let v = dens.mass_below(x);
            Ok(CdfValue { value: v.clone(), left_limit: v })
        }
        Distribution::Mixture(mx) => {
            let mut value = Rational::zero();
            let mut left = Rational::zero();
            for (c, w) in mx.components.iter().zip(&mx.weights) {
                let v = cdf_eval(c, x)?;
                value += w * v.value;
                left += w * v.left_limit;
            }
            Ok(CdfValue { value, left_limit: left })
        }
    }
}

fn fmt_interval_suffix(iv: &Interval, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "[{},{}]", iv.a(), iv.b())
}

/// Renders the spec grammar accepted by [`parse_dist_spec`].
impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::PointMass(p) => {
                f.write_str("point")?;
                fmt_interval_suffix(&p.interval, f)?;
                write!(f, " {}", p.c)
            }
            Distribution::FiniteAtomic(a) => {
                f.write_str("atomic")?;
                fmt_interval_suffix(&a.interval, f)?;
                for (c, w) in a.points.iter().zip(&a.weights) {
                    write!(f, " {c}:{w}")?;
                }
                Ok(())
            }
            Distribution::BetaRational(b) => {
                if b.alpha.is_one() && b.beta.is_one() {
                    f.write_str("uniform")
                } else {
                    write!(f, "beta {} {}", b.alpha, b.beta)
                }
            }
            Distribution::PiecewisePolyDensity(d) => {
                f.write_str("pwpoly")?;
                fmt_interval_suffix(&d.interval(), f)?;
                for (i, p) in d.pieces.iter().enumerate() {
                    if i > 0 {
                        write!(f, " @{}", d.knots[i])?;
                    }
                    let cs: Vec<String> = if p.is_zero() {
                        vec!["0".into()]
                    } else {
                        p.coeffs().iter().map(ToString::to_string).collect()
                    };
                    write!(f, " {}", cs.join(","))?;
                }
                Ok(())
            }
            Distribution::Mixture(m) => {
                f.write_str("mix")?;
                for (c, w) in m.components.iter().zip(&m.weights) {
                    write!(f, " {w}:({c})")?;
                }
                Ok(())
            }
        }
    }
}
