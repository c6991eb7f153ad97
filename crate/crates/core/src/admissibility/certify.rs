//! Truncated-prefix certification by a grid LP with cutting planes.
//!
//! Work happens in `y = (b - x) / (b - a)`, where the prefix becomes the
//! moment vector `gamma`. The LP asks for weights `w_i >= 0` on grid points
//! with `sum w_i y_i^j = gamma_j`. Infeasibility yields a Farkas polynomial
//! that is nonnegative on the grid; if it is nonnegative on all of `[0, 1]`
//! the prefix is rejected, otherwise the points where it dips below zero are
//! added to the grid and the LP is re-solved from the current basis.

use std::fmt;

use num_traits::{One, Signed};

use super::hankel::{hankel_check, quadratic_form, HankelFamily};
use super::{check_cm_prefix, CmViolation};
use crate::distzoo::{eps_atomic, FiniteAtomic};
use crate::error::{Error, Result};
use crate::exactmath::{
    factorial_q, int, is_nonnegative_on, negative_points, pow_u, Polynomial, Rational,
};
use crate::lp::{Phase1, Phase2, Tableau};
use crate::seqcore::{gamma_values, NormalizedSeq, PrimitiveSeq};

const MAX_ROUNDS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Rejected,
    PassesNecessary,
    CertifiedTruncated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Rejected => "REJECTED",
            Verdict::PassesNecessary => "PASSES_NECESSARY",
            Verdict::CertifiedTruncated => "CERTIFIED_TRUNCATED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// `eps_0` differs from one.
    Normalization(Rational),
    Cm(CmViolation),
    /// `v' M v < 0` for a Hankel block.
    Hankel { family: HankelFamily, value: Rational },
    /// Polynomial in the `(b - x)` basis, nonnegative on `[a, b]`, with
    /// `pairing = sum_j c_j j! eps_j < 0`.
    Separating { poly: Polynomial, pairing: Rational },
    /// Atomic law whose primitive prefix equals the input.
    Witness(FiniteAtomic),
    /// The cutting-plane loop stopped without a decision.
    Unresolved { rounds: usize, grid_points: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub rounds: usize,
}

impl AdmissibilityReport {
    pub fn witness(&self) -> Option<&FiniteAtomic> {
        self.evidence.iter().find_map(|e| match e {
            Evidence::Witness(w) => Some(w),
            _ => None,
        })
    }

    pub fn certificate(&self) -> Option<(&Polynomial, &Rational)> {
        self.evidence.iter().find_map(|e| match e {
            Evidence::Separating { poly, pairing } => Some((poly, pairing)),
            _ => None,
        })
    }

    /// Line-oriented rendering; polynomials are coefficient lists in the
    /// `(b - x)` basis.
    pub fn to_text(&self) -> String {
        let mut out = format!("verdict {}\n", self.verdict);
        out.push_str(&format!("rounds {}\n", self.rounds));
        for e in &self.evidence {
            match e {
                Evidence::Normalization(v) => out.push_str(&format!("violation normalization eps0={v}\n")),
                Evidence::Cm(c) => out.push_str(&format!(
                    "violation cm n={} k={} value={}\n",
                    c.n, c.k, c.value
                )),
                Evidence::Hankel { family, value } => {
                    out.push_str(&format!("violation hankel {family} value={value}\n"))
                }
                Evidence::Separating { poly, pairing } => {
                    out.push_str(&format!("certificate {poly}\n"));
                    out.push_str(&format!("pairing {pairing}\n"));
                }
                Evidence::Witness(w) => {
                    for (x, p) in w.points().iter().zip(w.weights()) {
                        out.push_str(&format!("atom {x} {p}\n"));
                    }
                }
                Evidence::Unresolved { rounds, grid_points } => out.push_str(&format!(
                    "unresolved rounds={rounds} grid_points={grid_points}\n"
                )),
            }
        }
        out
    }
}

/// `sum_j c_j j! eps_j` for a polynomial in the `(b - x)` basis.
pub(crate) fn pair_with_prefix(poly: &Polynomial, ps: &PrimitiveSeq) -> Rational {
    poly.coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c * factorial_q(j as u64) * &ps.eps()[j])
        .sum()
}

/// Converts `q(y)` (monomial in `y`) to the `(b - x)` basis.
fn to_reflected(q: &Polynomial, ps: &PrimitiveSeq) -> Polynomial {
    let w = ps.interval().width();
    let coeffs = q
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c / pow_u(&w, j as u64))
        .collect();
    Polynomial::reflected(ps.interval().b().clone(), coeffs)
}

fn separating(q: &Polynomial, ps: &PrimitiveSeq) -> Result<Evidence> {
    let poly = to_reflected(q, ps);
    let pairing = pair_with_prefix(&poly, ps);
    let iv = ps.interval();
    if !pairing.is_negative() || !is_nonnegative_on(&poly, iv.a(), iv.b()) {
        return Err(Error::Lp(format!("separating certificate failed validation: {poly}")));
    }
    Ok(Evidence::Separating { poly, pairing })
}

/// Certification on a uniform grid of `grid_size` points over `[a, b]`.
pub fn certify_truncated(ps: &PrimitiveSeq, grid_size: usize) -> Result<AdmissibilityReport> {
    let m = ps.order();
    if grid_size < m + 1 || grid_size < 2 {
        return Err(Error::Domain(format!(
            "grid of {grid_size} points is too small for order {m}"
        )));
    }
    let iv = ps.interval();
    let step = iv.width() / int(grid_size as i64 - 1);
    let grid: Vec<Rational> = (0..grid_size)
        .map(|i| iv.a() + &step * int(i as i64))
        .collect();
    certify_truncated_on(ps, &grid)
}

/// Certification with caller-chosen starting grid points (in `x`).
pub fn certify_truncated_on(ps: &PrimitiveSeq, grid: &[Rational]) -> Result<AdmissibilityReport> {
    let iv = ps.interval();
    if let Some(x) = grid.iter().find(|x| !iv.contains(x)) {
        return Err(Error::Domain(format!("grid point {x} lies outside {iv}")));
    }
    let rejected = |evidence: Vec<Evidence>| AdmissibilityReport {
        verdict: Verdict::Rejected,
        evidence,
        rounds: 0,
    };
    if !ps.eps()[0].is_one() {
        return Ok(rejected(vec![Evidence::Normalization(ps.eps()[0].clone())]));
    }
    let gamma = gamma_values(ps);
    let g = NormalizedSeq::from_raw(gamma.clone())?;

    // closed-form certificates from the cheap layers
    let cm = check_cm_prefix(&g);
    if let Some(v) = cm.first() {
        // y^n (1 - y)^k pairs to the violating difference
        let mut q = Polynomial::monomial(vec![int(1)]);
        let y = Polynomial::monomial(vec![int(0), int(1)]);
        let one_minus_y = Polynomial::monomial(vec![int(1), int(-1)]);
        for _ in 0..v.n {
            q = &q * &y;
        }
        for _ in 0..v.k {
            q = &q * &one_minus_y;
        }
        let mut ev: Vec<Evidence> = cm.iter().cloned().map(Evidence::Cm).collect();
        ev.push(separating(&q, ps)?);
        return Ok(rejected(ev));
    }
    if g.order() >= 1 {
        let hk = hankel_check(&g);
        let failing = hk.failures().find(|b| b.direction.is_some()).cloned();
        if let Some(block) = failing {
            let v = block.direction.as_ref().unwrap();
            let value = quadratic_form(&block.matrix, v);
            let q = block.certificate().unwrap();
            return Ok(rejected(vec![
                Evidence::Hankel { family: block.family, value },
                separating(&q, ps)?,
            ]));
        }
    }

    let m = g.order();
    let mut ys: Vec<Rational> = grid.iter().map(|x| iv.to_unit(x)).collect();
    ys.sort();
    ys.dedup();
    let column = |y: &Rational| -> Vec<Rational> { (0..=m).map(|j| pow_u(y, j as u64)).collect() };
    // maximizing E[Y^{m+1}] picks the upper principal representation when
    // the grid allows it
    let cost = |y: &Rational| -pow_u(y, m as u64 + 1);
    let mut t = Tableau::new(
        ys.iter().map(column).collect(),
        ys.iter().map(cost).collect(),
        gamma.clone(),
        vec![None; m + 1],
    );
    let mut cols: Vec<usize> = (0..ys.len()).collect();
    for round in 1..=MAX_ROUNDS {
        match t.phase_one()? {
            Phase1::Feasible => {
                if t.phase_two()? != Phase2::Optimal {
                    return Err(Error::Lp("bounded witness program reported unbounded".into()));
                }
                let witness = witness_from(&t, &ys, &cols, ps)?;
                return Ok(AdmissibilityReport {
                    verdict: Verdict::CertifiedTruncated,
                    evidence: vec![Evidence::Witness(witness)],
                    rounds: round,
                });
            }
            Phase1::Infeasible(y) => {
                let q = Polynomial::monomial(y.iter().map(|v| -v).collect());
                let cuts = negative_points(&q, &int(0), &int(1));
                if cuts.is_empty() {
                    let mut r = rejected(vec![separating(&q, ps)?]);
                    r.rounds = round;
                    return Ok(r);
                }
                for c in cuts {
                    if !ys.contains(&c) {
                        cols.push(t.add_column(&column(&c), cost(&c)));
                        ys.push(c);
                    }
                }
            }
        }
    }
    Ok(AdmissibilityReport {
        verdict: Verdict::PassesNecessary,
        evidence: vec![Evidence::Unresolved { rounds: MAX_ROUNDS, grid_points: ys.len() }],
        rounds: MAX_ROUNDS,
    })
}

fn witness_from(
    t: &Tableau,
    ys: &[Rational],
    cols: &[usize],
    ps: &PrimitiveSeq,
) -> Result<FiniteAtomic> {
    let x = t.primal();
    let iv = ps.interval();
    let mut atoms: Vec<(Rational, Rational)> = ys
        .iter()
        .zip(cols)
        .filter(|(_, &j)| x[j].is_positive())
        .map(|(y, &j)| (iv.from_unit(y), x[j].clone()))
        .collect();
    atoms.sort();
    let (points, weights) = atoms.into_iter().unzip();
    let w = FiniteAtomic::new(iv.clone(), points, weights)?;
    if eps_atomic(&w, ps.order())?.eps() != ps.eps() {
        return Err(Error::Lp("witness does not reproduce the prefix".into()));
    }
    Ok(w)
}
