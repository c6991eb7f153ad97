//! Exact rational scalars, dense univariate polynomials over the rationals,
//! and Sturm-sequence root isolation.
//!
//! Everything here is exact. Rationals are `num_rational::BigRational`, which
//! keeps values in lowest terms with a positive denominator; the text form is
//! `p/q`, or `p` when the denominator is one.

mod poly;
mod roots;

pub use poly::{Basis, Polynomial};
pub use roots::{
    is_nonnegative_on, local_minima, negative_points, negative_points_with_min, poly_min_on_interval, refine_root, sturm_isolate_roots, sturm_sequence, MinResult,
    RootInterval,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, `p/q`. Decimal literals such as `0.25` are accepted and
/// converted exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("malformed rational `{text}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((int_part, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int_part.starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let v = Rational::new(whole * &scale + f, scale);
        return Ok(if neg { -v } else { v });
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let num: BigInt = n.trim().parse().map_err(|_| bad())?;
    let den: BigInt = d.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// Decimal rendering with `sig` significant digits, round-half-even.
/// Zero renders as `0.` followed by `sig - 1` zeros.
pub fn to_decimal(x: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if x.is_zero() {
        return format!("0.{}", "0".repeat(sig - 1));
    }
    let neg = x.is_negative();
    let ax = x.abs();
    // exponent e with 10^e <= ax < 10^(e+1)
    let mut e = estimate_log10(&ax);
    let ten = int(10);
    while pow_i(&ten, e) > ax {
        e -= 1;
    }
    while pow_i(&ten, e + 1) <= ax {
        e += 1;
    }
    // scaled = ax * 10^(sig-1-e), rounded half-even to an integer
    let shift = sig as i64 - 1 - e;
    let scaled = &ax * pow_i(&ten, shift);
    let mut digits = round_half_even(&scaled);
    let mut shift = shift;
    if digits.to_string().len() > sig {
        // rounding carried into a new digit (e.g. 9.99.. -> 10.0)
        digits /= BigInt::from(10);
        shift -= 1;
    }
    let s = digits.to_string();
    let body = if shift <= 0 {
        // integer with trailing zeros
        let mut out = s.clone();
        out.push_str(&"0".repeat((-shift) as usize));
        out
    } else {
        let shift = shift as usize;
        if shift >= s.len() {
            format!("0.{}{}", "0".repeat(shift - s.len()), s)
        } else {
            let (a, b) = s.split_at(s.len() - shift);
            format!("{a}.{b}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Nearest double, for plotting and diagnostics only.
pub fn to_f64(x: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// Fixed-point rendering with `places` digits after the point,
/// round-half-even.
pub fn to_fixed(x: &Rational, places: usize) -> String {
    let scaled = x.abs() * pow_u(&int(10), places as u64);
    let s = round_half_even(&scaled).to_string();
    let s = if s.len() <= places { format!("{}{}", "0".repeat(places + 1 - s.len()), s) } else { s };
    let (a, b) = s.split_at(s.len() - places);
    let body = if places == 0 { a.to_string() } else { format!("{a}.{b}") };
    if x.is_negative() && s.bytes().any(|c| c != b'0') {
        format!("-{body}")
    } else {
        body
    }
}

fn estimate_log10(ax: &Rational) -> i64 {
    let nd = ax.numer().to_string().len() as i64;
    let dd = ax.denom().to_string().len() as i64;
    nd - dd
}

fn round_half_even(x: &Rational) -> BigInt {
    let fl = x.floor();
    let frac = x - &fl;
    let base = fl.to_integer();
    let half = rat(1, 2);
    if frac > half || (frac == half && base.is_odd()) {
        base + 1
    } else {
        base
    }
}

/// `base^e` for any integer exponent; panics on `0^negative`.
pub fn pow_i(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        pow_u(base, e as u64)
    } else {
        pow_u(base, (-e) as u64).recip()
    }
}

pub fn pow_u(base: &Rational, e: u64) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]` (continued-fraction walk). Ties on denominator resolve to the
/// value of smallest magnitude numerator, which the walk produces naturally.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "simplest_between: empty interval");
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    // 0 < lo <= hi
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let fl = lo.floor();
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    // 1/hi_frac <= 1/x <= 1/lo_frac
    let inner = simplest_between(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

pub fn min_q<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_q<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}
