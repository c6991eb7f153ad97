use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, simplest_between, Polynomial, Rational};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` holding exactly one distinct real root of the
/// polynomial it was isolated from. `lo == hi` means the root is known
/// exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    /// The root is simple in the original (not square-free) polynomial.
    pub multiplicity_free: bool,
}

impl RootInterval {
    pub fn point(x: Rational, multiplicity_free: bool) -> Self {
        RootInterval {
            lo: x.clone(),
            hi: x,
            multiplicity_free,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2, 1)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Sturm chain of the square-free part of `p`, in the monomial basis. Each
/// remainder is rescaled by a positive constant, which leaves sign variation
/// counts unchanged.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mono = p.to_monomial().primitive_part();
    if mono.degree() <= 0 {
        return vec![mono];
    }
    let ints: Vec<BigInt> = mono.coeffs().iter().map(|c| c.numer().clone()).collect();
    let mut chain = int_chain(ints);
    if chain.last().map_or(0, |g| g.len() - 1) > 0 {
        // repeated roots: restart from the square-free part
        let sf = mono.square_free();
        chain = int_chain(sf.coeffs().iter().map(|c| c.numer().clone()).collect());
    }
    chain
        .into_iter()
        .map(|c| Polynomial::monomial(c.into_iter().map(Rational::from_integer).collect()))
        .collect()
}

/// Sturm chain by integer pseudo-remainders, each made primitive. The last
/// entry is a constant multiple of `gcd(p, p')`.
fn int_chain(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let dp: Vec<BigInt> = p.iter().enumerate().skip(1).map(|(j, c)| c * BigInt::from(j)).collect();
    let mut chain = vec![p, primitive(dp)];
    loop {
        let n = chain.len();
        let r = prem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(primitive(r.into_iter().map(|c| -c).collect()));
    }
    chain
}

/// Positive multiple of the remainder of `a` by `b` (trimmed; empty for zero).
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let lb_abs = lb.abs();
    let neg = lb.is_negative();
    let mut r = a.to_vec();
    trim_ints(&mut r);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lead = r.last().unwrap().clone();
        let f = if neg { -lead } else { lead };
        for c in r.iter_mut() {
            *c *= &lb_abs;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &f * bc;
        }
        trim_ints(&mut r);
    }
    r
}

fn trim_ints(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    trim_ints(&mut v);
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
        if g.is_one() {
            return v;
        }
    }
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn sign_variations(chain: &[Polynomial], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let s = q.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(l, h]`.
fn count_half_open(chain: &[Polynomial], l: &Rational, h: &Rational) -> usize {
    sign_variations(chain, l) - sign_variations(chain, h)
}

/// Isolates every distinct real root of `p` in `[lo, hi]`.
///
/// Intervals are returned in increasing order and are pairwise disjoint.
/// Non-degenerate intervals have endpoints that are not roots, so the
/// square-free part changes sign across each of them.
pub fn sturm_isolate_roots(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::Domain(
            "root isolation of the identically zero polynomial".into(),
        ));
    }
    if lo > hi {
        return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    let mono = p.to_monomial();
    let chain = sturm_sequence(&mono);
    let sf = &chain[0];
    let mut out = Vec::new();
    if sf.degree() <= 0 {
        return Ok(out);
    }
    if sf.sign_at(lo) == 0 {
        out.push(RootInterval::point(lo.clone(), true));
    }
    if lo < hi {
        isolate_rec(&chain, lo.clone(), hi.clone(), &mut out);
    }
    // multiplicity flags from gcd(p, p')
    let g = mono.gcd(&mono.derivative());
    if g.degree() >= 1 {
        let gchain = sturm_sequence(&g);
        for iv in &mut out {
            let hit = gchain[0].sign_at(&iv.lo) == 0
                || (iv.lo < iv.hi && count_half_open(&gchain, &iv.lo, &iv.hi) > 0);
            iv.multiplicity_free = !hit;
        }
    }
    Ok(out)
}

fn isolate_rec(chain: &[Polynomial], l: Rational, h: Rational, out: &mut Vec<RootInterval>) {
    let sf = &chain[0];
    let c = count_half_open(chain, &l, &h);
    if c == 0 {
        return;
    }
    if c == 1 {
        if sf.sign_at(&h) == 0 {
            out.push(RootInterval::point(h, true));
            return;
        }
        // shrink until the left endpoint is not a root either
        let (mut l, mut h) = (l, h);
        while sf.sign_at(&l) == 0 {
            let mid = (&l + &h) / rat(2, 1);
            if sf.sign_at(&mid) == 0 {
                out.push(RootInterval::point(mid, true));
                return;
            }
            if count_half_open(chain, &mid, &h) == 1 {
                l = mid;
            } else {
                h = mid;
            }
        }
        out.push(RootInterval { lo: l, hi: h, multiplicity_free: true });
        return;
    }
    let mid = (&l + &h) / rat(2, 1);
    isolate_rec(chain, l, mid.clone(), out);
    isolate_rec(chain, mid, h, out);
}

/// Isolation without multiplicity flags; returns the square-free part used.
fn isolate_distinct(p: &Polynomial, lo: &Rational, hi: &Rational) -> (Polynomial, Vec<RootInterval>) {
    let chain = sturm_sequence(p);
    let sf = chain[0].clone();
    let mut out = Vec::new();
    if sf.degree() > 0 {
        if sf.sign_at(lo) == 0 {
            out.push(RootInterval::point(lo.clone(), true));
        }
        if lo < hi {
            isolate_rec(&chain, lo.clone(), hi.clone(), &mut out);
        }
    }
    (sf, out)
}

/// Bisects an isolating interval of the square-free polynomial `sf` until
/// its width is at most `width`, or the root is hit exactly. The simplest
/// rational inside the final interval is tried as an exact root.
pub fn refine_root(sf: &Polynomial, iv: &RootInterval, width: &Rational) -> RootInterval {
    if iv.is_exact() {
        return iv.clone();
    }
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let s_lo = sf.sign_at(&lo);
    debug_assert!(s_lo != 0 && s_lo != sf.sign_at(&hi));
    // a cheap exactness probe before bisecting
    let probe = simplest_between(&lo, &hi);
    if sf.sign_at(&probe) == 0 {
        return RootInterval::point(probe, iv.multiplicity_free);
    }
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / rat(2, 1);
        let s = sf.sign_at(&mid);
        if s == 0 {
            return RootInterval::point(mid, iv.multiplicity_free);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let probe = simplest_between(&lo, &hi);
    if sf.sign_at(&probe) == 0 {
        return RootInterval::point(probe, iv.multiplicity_free);
    }
    RootInterval {
        lo,
        hi,
        multiplicity_free: iv.multiplicity_free,
    }
}

/// Result of a certified minimization on a closed interval.
#[derive(Clone, Debug)]
pub struct MinResult {
    /// Candidate location whose value enclosure has the least lower bound.
    pub argmin: RootInterval,
    /// Rigorous lower bound on `min p` over the whole interval.
    pub value_lower_bound: Rational,
    /// Upper end of the value enclosure on `argmin`; `p` takes a value at
    /// most this somewhere in `argmin`, so `min p <= value_upper`.
    pub value_upper: Rational,
}

/// Certified global minimization of `p` over `[lo, hi]`.
///
/// Candidates are the endpoints and the critical points of `p` in the
/// interval, the latter isolated by Sturm sequences and refined to `width`.
/// Each candidate gets a second-order Taylor enclosure around its midpoint;
/// since every minimizer is some candidate, the least lower bound is a lower
/// bound on the minimum.
pub fn poly_min_on_interval(p: &Polynomial, lo: &Rational, hi: &Rational, width: &Rational) -> MinResult {
    local_minima(p, lo, hi, width)
        .into_iter()
        .reduce(|best, c| if c.value_lower_bound < best.value_lower_bound { c } else { best })
        .expect("the endpoints are always candidates")
}

/// Enclosures at every minimizer candidate of `p` on `[lo, hi]`: the two
/// endpoints and each critical point refined to `width`.
pub fn local_minima(p: &Polynomial, lo: &Rational, hi: &Rational, width: &Rational) -> Vec<MinResult> {
    assert!(lo <= hi, "local_minima: lo > hi");
    assert!(width.is_positive(), "local_minima: width must be positive");
    let mono = p.to_monomial();
    let mut out = vec![exact_candidate(&mono, lo.clone())];
    if lo == hi {
        return out;
    }
    out.push(exact_candidate(&mono, hi.clone()));
    let d1 = mono.derivative();
    if d1.degree() <= 0 {
        return out;
    }
    let d2 = d1.derivative();
    let (sf, roots) = isolate_distinct(&d1.primitive_part(), lo, hi);
    for iv in roots {
        let iv = refine_root(&sf, &iv, width);
        out.push(if iv.is_exact() {
            exact_candidate(&mono, iv.lo.clone())
        } else {
            taylor_candidate(&mono, &d1, &d2, iv)
        });
    }
    out
}

fn exact_candidate(p: &Polynomial, x: Rational) -> MinResult {
    let v = p.eval(&x);
    MinResult {
        argmin: RootInterval::point(x, true),
        value_lower_bound: v.clone(),
        value_upper: v,
    }
}

fn taylor_candidate(p: &Polynomial, d1: &Polynomial, d2: &Polynomial, iv: RootInterval) -> MinResult {
    let c = iv.midpoint();
    let r = iv.width() / rat(2, 1);
    let v = p.eval(&c);
    let slope = d1.eval(&c).abs();
    let (a, b) = d2.eval_interval(&iv.lo, &iv.hi);
    let curv = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    let slack = &slope * &r + &curv * &r * &r / rat(2, 1);
    MinResult {
        argmin: iv,
        value_lower_bound: &v - &slack,
        value_upper: v + slack,
    }
}

/// Exact test for `p >= 0` on `[lo, hi]`. Samples `p` at the interval ends and
/// at points strictly between consecutive isolated roots, which hits every
/// sign region.
pub fn is_nonnegative_on(p: &Polynomial, lo: &Rational, hi: &Rational) -> bool {
    if p.is_zero() {
        return true;
    }
    if lo > hi {
        return false;
    }
    let pp = p.to_monomial().primitive_part();
    let (_, roots) = isolate_distinct(&pp, lo, hi);
    let mut samples = vec![lo.clone(), hi.clone()];
    let mut prev = lo.clone();
    for r in &roots {
        samples.push((&prev + &r.lo) / super::int(2));
        samples.push(r.lo.clone());
        samples.push(r.hi.clone());
        prev = r.hi.clone();
    }
    samples.push((&prev + hi) / super::int(2));
    samples.iter().all(|x| pp.sign_at(x) >= 0)
}

/// Rational points of `[lo, hi]` where `p < 0`: the simplest rational of each
/// negative sign region, plus one near the minimizer. Empty exactly when `p`
/// is nonnegative on the interval.
pub fn negative_points(p: &Polynomial, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    let tight = (hi - lo) / rat(1 << 20, 1);
    negative_points_with_min(p, lo, hi, &tight).0
}

/// As [`negative_points`], also returning the certified minimum (refined to
/// `width`) when the polynomial goes negative.
pub fn negative_points_with_min(
    p: &Polynomial,
    lo: &Rational,
    hi: &Rational,
    width: &Rational,
) -> (Vec<Rational>, Option<MinResult>) {
    if p.is_zero() {
        return (Vec::new(), None);
    }
    // a positive multiple with integer coefficients evaluates much faster
    let pp = p.to_monomial().primitive_part();
    let (sf, roots) = isolate_distinct(&pp, lo, hi);
    let tight = (hi - lo) / rat(1 << 20, 1);
    let roots: Vec<RootInterval> = roots.iter().map(|r| refine_root(&sf, r, &tight)).collect();
    let mut gaps = Vec::with_capacity(roots.len() + 1);
    let mut prev = lo.clone();
    for r in &roots {
        gaps.push((prev, r.lo.clone()));
        prev = r.hi.clone();
    }
    gaps.push((prev, hi.clone()));
    let mut out: Vec<Rational> = Vec::new();
    let push = |x: Rational, out: &mut Vec<Rational>| {
        if pp.sign_at(&x) < 0 && !out.contains(&x) {
            out.push(x);
            true
        } else {
            false
        }
    };
    for (g_lo, g_hi) in gaps {
        if g_lo > g_hi {
            continue;
        }
        if !push(simplest_between(&g_lo, &g_hi), &mut out) {
            push((&g_lo + &g_hi) / rat(2, 1), &mut out);
        }
    }
    if out.is_empty() {
        return (out, None);
    }
    let m = poly_min_on_interval(p, lo, hi, width);
    // deep cut with few bits: the simplest rational in a shrinking window
    // around the minimizer whose value is at least half the minimum depth
    let mono = p.to_monomial();
    let c = m.argmin.midpoint();
    let half = &m.value_upper / rat(2, 1);
    let mut r = (hi - lo) / rat(4, 1);
    let mut found = false;
    while r > m.argmin.width() && half.is_negative() {
        let wl = if &(&c - &r) > lo { &c - &r } else { lo.clone() };
        let wh = if &(&c + &r) < hi { &c + &r } else { hi.clone() };
        let z = simplest_between(&wl, &wh);
        if mono.eval(&z) <= half {
            found = out.contains(&z) || push(z, &mut out);
            if found {
                break;
            }
        }
        r /= rat(4, 1);
    }
    if !found {
        let near = simplest_between(&m.argmin.lo, &m.argmin.hi);
        if !push(near, &mut out) {
            push(m.argmin.midpoint(), &mut out);
        }
    }
    (out, Some(m))
}

/// Monomial-basis polynomial from integer coefficients; test helper.
#[cfg(test)]
fn mono_i(c: &[i64]) -> Polynomial {
    Polynomial::new(c.iter().map(|&v| super::int(v)).collect(), super::Basis::Monomial)
}
