//! Admissibility of a finite prefix, in three layers of increasing strength:
//! complete-monotonicity screening of finite differences, exact PSD tests of
//! Hankel and localizing matrices, and a grid LP that either produces an
//! atomic measure reproducing the prefix or a separating polynomial.
//!
//! Complete monotonicity of a prefix is necessary but not sufficient; for
//! example `(1, 1/2, 1/5)` passes the screen yet has no representing measure.

mod certify;
mod hankel;

use std::fmt;

use num_traits::Signed;

use crate::exactmath::Rational;
use crate::seqcore::NormalizedSeq;

pub use certify::{
    certify_truncated, certify_truncated_on, AdmissibilityReport, Evidence, Verdict,
};
pub use hankel::{
    char_poly, hankel_check, negative_direction, psd_from_charpoly, quadratic_form, HankelBlock,
    HankelFamily, HankelReport,
};

/// Row `k` holds `(-1)^k (Delta^k gamma)_n` for `n = 0..=m-k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceTable {
    rows: Vec<Vec<Rational>>,
}

impl DifferenceTable {
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn entry(&self, k: usize, n: usize) -> &Rational {
        &self.rows[k][n]
    }

    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Signed forward differences up to order `k_max` (clamped to the order of
/// the prefix).
pub fn difference_table(g: &NormalizedSeq, k_max: usize) -> DifferenceTable {
    let mut rows = vec![g.gamma().to_vec()];
    for _ in 0..k_max.min(g.order()) {
        let prev = rows.last().unwrap();
        let next = prev.windows(2).map(|w| &w[0] - &w[1]).collect();
        rows.push(next);
    }
    DifferenceTable { rows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmViolation {
    pub n: usize,
    pub k: usize,
    pub value: Rational,
}

impl fmt::Display for CmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(-1)^{k} D^{k} gamma_{n} = {v} < 0", k = self.k, n = self.n, v = self.value)
    }
}

/// Every `(n, k)` with `n + k <= m` where `(-1)^k (Delta^k gamma)_n < 0`.
pub fn check_cm_prefix(g: &NormalizedSeq) -> Vec<CmViolation> {
    let t = difference_table(g, g.order());
    let mut out = Vec::new();
    for (k, row) in t.rows.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            if v.is_negative() {
                out.push(CmViolation { n, k, value: v.clone() });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
