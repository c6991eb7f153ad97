#![allow(dead_code)]

pub mod lp_oracle;

use primseq::distzoo::{parse_dist_spec, Distribution, FiniteAtomic};
use primseq::exactmath::{int, rat};
use primseq::seqcore::Interval;
use primseq::Rational;
use proptest::prelude::*;

/// Specs with rational CDFs, one per family plus shifted intervals.
pub const ZOO: &[&str] = &[
    "uniform",
    "beta 2 3",
    "beta 3 1",
    "point 1/2",
    "point[-1,1] 1/3",
    "atomic 0:1/6 1/2:2/3 1:1/6",
    "atomic[-1,2] -1/3:1/2 5/7:1/4 2:1/4",
    "pwpoly 0,4 @1/2 4,-4",
    "pwpoly[1,3] 1/2",
    "mix 1/2:(uniform) 1/2:(point 1/2)",
    "mix 1/3:(beta 2 2) 2/3:(atomic 1/4:1/2 3/4:1/2)",
];

pub fn zoo() -> Vec<(&'static str, Distribution)> {
    ZOO.iter().map(|s| (*s, parse_dist_spec(s).unwrap())).collect()
}

/// Interval `[a, a + w]` with small integer ends.
pub fn interval() -> impl Strategy<Value = Interval> {
    (-2i64..=1, 1i64..=3).prop_map(|(a, w)| Interval::new(int(a), int(a + w)).unwrap())
}

/// Up to `max_atoms` atoms at multiples of `(b - a)/den` with positive
/// integer weights, normalized.
pub fn atomic_on(iv: Interval, max_atoms: usize, den: i64) -> impl Strategy<Value = FiniteAtomic> {
    proptest::collection::btree_map(0..=den, 1i64..=5, 1..=max_atoms).prop_map(move |m| {
        let total: i64 = m.values().sum();
        let pts = m.keys().map(|k| iv.a() + iv.width() * rat(*k, den)).collect();
        let wts = m.values().map(|w| rat(*w, total)).collect();
        FiniteAtomic::new(iv.clone(), pts, wts).unwrap()
    })
}

pub fn atomic(max_atoms: usize) -> impl Strategy<Value = FiniteAtomic> {
    interval().prop_flat_map(move |iv| atomic_on(iv, max_atoms, 12))
}

/// Rational in `[a, b]` with denominator up to `den`.
pub fn point_in(iv: &Interval, den: i64) -> impl Strategy<Value = Rational> {
    let (a, w) = (iv.a().clone(), iv.width());
    (1i64..=den).prop_flat_map(move |d| {
        let (a, w) = (a.clone(), w.clone());
        (0..=d).prop_map(move |n| &a + &w * rat(n, d))
    })
}
