use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{binomial, pow_u, Rational};

/// Which monomials the coefficient vector refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `coeffs[j]` multiplies `x^j`.
    Monomial,
    /// `coeffs[j]` multiplies `(b - x)^j` for the stored anchor `b`.
    Reflected(Rational),
}

/// Dense univariate polynomial with rational coefficients.
///
/// Coefficients are in ascending order of power of the basis variable and
/// trailing zeros are always trimmed, so the zero polynomial has an empty
/// coefficient vector and degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
    basis: Basis,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>, basis: Basis) -> Self {
        let mut p = Polynomial { coeffs, basis };
        p.trim();
        p
    }

    pub fn monomial(coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs, Basis::Monomial)
    }

    pub fn reflected(b: Rational, coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs, Basis::Reflected(b))
    }

    pub fn zero(basis: Basis) -> Self {
        Polynomial { coeffs: Vec::new(), basis }
    }

    pub fn constant(c: Rational, basis: Basis) -> Self {
        Self::new(vec![c], basis)
    }

    /// `t^k` in the basis variable.
    pub fn basis_power(k: usize, basis: Basis) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        Self::new(c, basis)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation in the basis variable itself (`x` for monomial,
    /// `b - x` for reflected).
    pub fn eval_var(&self, t: &Rational) -> Rational {
        if self.coeffs.iter().all(|c| c.denom().is_one()) {
            // homogeneous Horner in integers: v^n p(u/v)
            let (u, v) = (t.numer(), t.denom());
            let n = self.coeffs.len();
            if n == 0 {
                return Rational::zero();
            }
            let mut acc = self.coeffs[n - 1].numer().clone();
            let mut vp = BigInt::one();
            for c in self.coeffs[..n - 1].iter().rev() {
                vp *= v;
                acc = acc * u + c.numer() * &vp;
            }
            return Rational::new(acc, vp);
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Value of the polynomial function at the point `x`.
    pub fn eval(&self, x: &Rational) -> Rational {
        match &self.basis {
            Basis::Monomial => self.eval_var(x),
            Basis::Reflected(b) => self.eval_var(&(b - x)),
        }
    }

    /// Formal derivative with respect to the basis variable.
    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * Rational::from_integer(BigInt::from(j)))
            .collect();
        Polynomial::new(coeffs, self.basis.clone())
    }

    /// Antiderivative in the basis variable with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rational::from_integer(BigInt::from(j + 1)));
        }
        Polynomial::new(coeffs, self.basis.clone())
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        Polynomial::new(
            self.coeffs.iter().map(|c| c * s).collect(),
            self.basis.clone(),
        )
    }

    /// Re-expresses the same function in the monomial basis in `x`.
    pub fn to_monomial(&self) -> Polynomial {
        match &self.basis {
            Basis::Monomial => self.clone(),
            Basis::Reflected(b) => Polynomial::new(shift_reflect(&self.coeffs, b), Basis::Monomial),
        }
    }

    /// Re-expresses the same function in powers of `(b - x)`.
    pub fn to_reflected(&self, b: &Rational) -> Polynomial {
        let mono = self.to_monomial();
        // x = b - y, so p(x) = sum c_k (b - y)^k, the same substitution.
        Polynomial::new(shift_reflect(&mono.coeffs, b), Basis::Reflected(b.clone()))
    }

    /// Euclidean division in the basis variable. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len();
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd {
            return (Polynomial::zero(self.basis.clone()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd - 1] / lead;
            if !q.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd - 1);
        (
            Polynomial::new(quot, self.basis.clone()),
            Polynomial::new(rem, self.basis.clone()),
        )
    }

    /// Positive rational multiple with coprime integer coefficients. Sign of
    /// every value is preserved, so Sturm chains may be normalized this way.
    pub fn primitive_part(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        let g = g.abs();
        Polynomial::new(
            ints.into_iter()
                .map(|v| Rational::from_integer(v / &g))
                .collect(),
            self.basis.clone(),
        )
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd in the basis variable.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.monic()
    }

    /// Square-free part `p / gcd(p, p')`, made primitive.
    pub fn square_free(&self) -> Polynomial {
        if self.degree() <= 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive_part();
        }
        self.div_rem(&g).0.primitive_part()
    }

    /// Interval enclosure of `{ p(x) : lo <= x <= hi }` by interval Horner
    /// in `x`. Converts to the monomial basis first.
    pub fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mono = self.to_monomial();
        let mut acc_lo = Rational::zero();
        let mut acc_hi = Rational::zero();
        for c in mono.coeffs.iter().rev() {
            let prods = [&acc_lo * lo, &acc_lo * hi, &acc_hi * lo, &acc_hi * hi];
            let mut mn = prods[0].clone();
            let mut mx = prods[0].clone();
            for p in &prods[1..] {
                if *p < mn {
                    mn = p.clone();
                }
                if *p > mx {
                    mx = p.clone();
                }
            }
            acc_lo = mn + c;
            acc_hi = mx + c;
        }
        (acc_lo, acc_hi)
    }

    /// Sign of the value at `x` as -1, 0, 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let v = if self.coeffs.iter().all(|c| c.denom().is_one()) {
            let t = match &self.basis {
                Basis::Monomial => x.clone(),
                Basis::Reflected(b) => b - x,
            };
            // v^n p(u/v) has the sign of p(u/v)
            let (u, v) = (t.numer(), t.denom());
            let mut acc = BigInt::zero();
            let mut vp = BigInt::one();
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                if i > 0 {
                    vp *= v;
                }
                acc = acc * u + c.numer() * &vp;
            }
            Rational::from_integer(acc)
        } else {
            self.eval(x)
        };
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    fn zip_with(&self, rhs: &Polynomial, f: impl Fn(&Rational, &Rational) -> Rational) -> Polynomial {
        assert_eq!(self.basis, rhs.basis, "polynomials in different bases");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        let coeffs = (0..n)
            .map(|i| {
                f(
                    self.coeffs.get(i).unwrap_or(&z),
                    rhs.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Polynomial::new(coeffs, self.basis.clone())
    }
}

/// Coefficients of `sum c_k (b - t)^k` in powers of `t`.
fn shift_reflect(coeffs: &[Rational], b: &Rational) -> Vec<Rational> {
    let n = coeffs.len();
    let mut out = vec![Rational::zero(); n];
    let bpows: Vec<Rational> = (0..n as u64).map(|e| pow_u(b, e)).collect();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for i in 0..=k {
            // (b - t)^k = sum_i C(k,i) b^(k-i) (-t)^i
            let mut term = c * &bpows[k - i] * Rational::from_integer(binomial(k as u64, i as u64));
            if i % 2 == 1 {
                term = -term;
            }
            out[i] += term;
        }
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.basis, rhs.basis, "polynomials in different bases");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.basis.clone());
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out, self.basis.clone())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect(), self.basis.clone())
    }
}

impl fmt::Display for Polynomial {
    /// Space-separated coefficient list, lowest power first; `0` for the zero
    /// polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
