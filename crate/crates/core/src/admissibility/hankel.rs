//! Exact PSD tests for the Hankel and localizing matrices of a prefix.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::exactmath::{int, Polynomial, Rational};
use crate::seqcore::NormalizedSeq;

/// Which multiplier `w(y)` the block localizes: entry `(i, j)` is
/// `E[w(Y) Y^{i+j}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HankelFamily {
    /// `w = 1`
    Plain,
    /// `w = y`
    Lower,
    /// `w = 1 - y`
    Upper,
    /// `w = y (1 - y)`
    Both,
}

impl HankelFamily {
    pub const ALL: [HankelFamily; 4] = [
        HankelFamily::Plain,
        HankelFamily::Lower,
        HankelFamily::Upper,
        HankelFamily::Both,
    ];

    /// Matrix size available from `gamma_0..=gamma_m`.
    pub fn size(self, m: usize) -> usize {
        match self {
            HankelFamily::Plain => m / 2 + 1,
            HankelFamily::Lower | HankelFamily::Upper => (m + 1) / 2,
            HankelFamily::Both => m / 2,
        }
    }

    pub fn weight(self) -> Polynomial {
        let c = match self {
            HankelFamily::Plain => vec![int(1)],
            HankelFamily::Lower => vec![int(0), int(1)],
            HankelFamily::Upper => vec![int(1), int(-1)],
            HankelFamily::Both => vec![int(0), int(1), int(-1)],
        };
        Polynomial::monomial(c)
    }

    fn entry(self, g: &[Rational], k: usize) -> Rational {
        match self {
            HankelFamily::Plain => g[k].clone(),
            HankelFamily::Lower => g[k + 1].clone(),
            HankelFamily::Upper => &g[k] - &g[k + 1],
            HankelFamily::Both => &g[k + 1] - &g[k + 2],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HankelFamily::Plain => "H",
            HankelFamily::Lower => "yH",
            HankelFamily::Upper => "(1-y)H",
            HankelFamily::Both => "y(1-y)H",
        }
    }
}

impl fmt::Display for HankelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelBlock {
    pub family: HankelFamily,
    pub matrix: Vec<Vec<Rational>>,
    /// `det(tI - M) = t^n + c_{n-1} t^{n-1} + ... + c_0`, stored `c_0..=c_n`.
    pub charpoly: Vec<Rational>,
    pub psd: bool,
    /// `v` with `v' M v < 0` when the block is not PSD.
    pub direction: Option<Vec<Rational>>,
}

impl HankelBlock {
    /// `w(y) (sum v_i y^i)^2`: nonnegative on `[0, 1]`, pairs with the prefix
    /// to `v' M v`.
    pub fn certificate(&self) -> Option<Polynomial> {
        let v = self.direction.as_ref()?;
        let p = Polynomial::monomial(v.clone());
        Some(&self.family.weight() * &(&p * &p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelReport {
    pub blocks: Vec<HankelBlock>,
}

impl HankelReport {
    pub fn passes(&self) -> bool {
        self.blocks.iter().all(|b| b.psd)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HankelBlock> {
        self.blocks.iter().filter(|b| !b.psd)
    }
}

/// Builds every nonempty Hankel block of the prefix and tests each exactly.
pub fn hankel_check(g: &NormalizedSeq) -> HankelReport {
    let gamma = g.gamma();
    let m = gamma.len() - 1;
    let blocks = HankelFamily::ALL
        .iter()
        .filter(|f| f.size(m) > 0)
        .map(|&family| {
            let n = family.size(m);
            let matrix: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| family.entry(gamma, i + j)).collect())
                .collect();
            let charpoly = char_poly(&matrix);
            let psd = psd_from_charpoly(&charpoly);
            let direction = if psd { None } else { negative_direction(&matrix) };
            HankelBlock { family, matrix, charpoly, psd, direction }
        })
        .collect();
    HankelReport { blocks }
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Faddeev-LeVerrier: `M_k = A M_{k-1} + c_{n-k+1} I`,
/// `c_{n-k} = -tr(A M_k) / k`. Returns `c_0..=c_n` with `c_n = 1`.
pub fn char_poly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = int(1);
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mat_mul(a, &mk);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / int(k as i64);
    }
    c
}

/// A symmetric matrix is PSD iff `(-1)^j c_{n-j} >= 0` for every `j`.
pub fn psd_from_charpoly(c: &[Rational]) -> bool {
    let n = c.len() - 1;
    (1..=n).all(|j| {
        let v = &c[n - j];
        if j % 2 == 0 {
            !v.is_negative()
        } else {
            !v.is_positive()
        }
    })
}

/// Symmetric elimination `A = T' M T`, stopping at the first direction of
/// negative curvature. `None` means the matrix is PSD.
pub fn negative_direction(m: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut t: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
        .collect();
    let column = |t: &Vec<Vec<Rational>>, k: usize| -> Vec<Rational> { t.iter().map(|r| r[k].clone()).collect() };
    for k in 0..n {
        let akk = a[k][k].clone();
        if akk.is_negative() {
            return Some(column(&t, k));
        }
        if akk.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // u = s e_k + e_j gives u'Au = 2 s a_kj + a_jj = -1
                let s = -(&a[j][j] + int(1)) / (int(2) * &a[k][j]);
                let v = (0..n).map(|i| &s * &t[i][k] + &t[i][j]).collect();
                return Some(v);
            }
            continue;
        }
        for j in k + 1..n {
            let f = &a[k][j] / &akk;
            if f.is_zero() {
                continue;
            }
            for i in 0..n {
                let d = &f * &a[i][k];
                a[i][j] -= d;
            }
            for i in 0..n {
                let d = &f * &a[k][i];
                a[j][i] -= d;
            }
            for row in t.iter_mut() {
                let d = &f * &row[k];
                row[j] -= d;
            }
        }
    }
    None
}

/// `v' M v`.
pub fn quadratic_form(m: &[Vec<Rational>], v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                acc += &v[i] * x * &v[j];
            }
        }
    }
    acc
}
