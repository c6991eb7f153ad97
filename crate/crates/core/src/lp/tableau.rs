//! Dense simplex tableau for `min c'x, Ax = b, x >= 0, b >= 0`.
//!
//! Every row starts with an identity column (a slack already present in the
//! data, or an artificial). Those columns are never dropped, so the tableau
//! always carries `B^-1` and duals can be read off the reduced-cost row.
//! Pivoting always uses Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

const PIVOT_LIMIT: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Phase1 {
    Feasible,
    /// Phase-one duals `y` with `y'A_j <= 0` on every structural column and
    /// `y'b > 0`.
    Infeasible(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Phase2 {
    Optimal,
    /// Entering column with no positive entry.
    Unbounded(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Phase-two costs, zero on artificial columns.
    cost: Vec<Rational>,
    artificial: Vec<bool>,
    /// Identity column introduced for each row.
    init: Vec<usize>,
    /// Reduced costs for the active phase.
    reduced: Vec<Rational>,
    phase_two: bool,
    pub(crate) pivots: usize,
}

impl Tableau {
    /// `cols[j]` is column `j` of `A`. `slack_rows[i] = Some(j)` when column
    /// `j` equals `e_i` and may start basic; other rows get an artificial.
    pub(crate) fn new(
        cols: Vec<Vec<Rational>>,
        cost: Vec<Rational>,
        rhs: Vec<Rational>,
        slack_rows: Vec<Option<usize>>,
    ) -> Self {
        let m = rhs.len();
        debug_assert!(rhs.iter().all(|b| !b.is_negative()));
        let n_struct = cols.len();
        let mut rows: Vec<Vec<Rational>> = (0..m)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let mut cost = cost;
        let mut artificial = vec![false; n_struct];
        let mut init = Vec::with_capacity(m);
        for (i, s) in slack_rows.iter().enumerate() {
            match s {
                Some(j) => init.push(*j),
                None => {
                    let j = cost.len();
                    for (k, row) in rows.iter_mut().enumerate() {
                        row.push(if k == i { Rational::one() } else { Rational::zero() });
                    }
                    cost.push(Rational::zero());
                    artificial.push(true);
                    init.push(j);
                }
            }
        }
        let basis = init.clone();
        let n = cost.len();
        Tableau {
            rows,
            rhs,
            basis,
            cost,
            artificial,
            init,
            reduced: vec![Rational::zero(); n],
            phase_two: false,
            pivots: 0,
        }
    }

    pub(crate) fn n_rows(&self) -> usize {
        self.rhs.len()
    }

    pub(crate) fn n_cols(&self) -> usize {
        self.cost.len()
    }

    pub(crate) fn basis(&self) -> &[usize] {
        &self.basis
    }

    fn phase_cost(&self, j: usize) -> Rational {
        if self.phase_two {
            self.cost[j].clone()
        } else if self.artificial[j] {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn recompute_reduced(&mut self) {
        let n = self.n_cols();
        let cb: Vec<Rational> = self.basis.iter().map(|&j| self.phase_cost(j)).collect();
        self.reduced = (0..n)
            .map(|j| {
                let mut d = self.phase_cost(j);
                for (i, row) in self.rows.iter().enumerate() {
                    if !cb[i].is_zero() && !row[j].is_zero() {
                        d -= &cb[i] * &row[j];
                    }
                }
                d
            })
            .collect();
    }

    /// Duals `y` of the active phase: `y_i = c_init(i) - d_init(i)`.
    pub(crate) fn duals(&self) -> Vec<Rational> {
        self.init
            .iter()
            .map(|&j| self.phase_cost(j) - &self.reduced[j])
            .collect()
    }

    pub(crate) fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n_cols()];
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.rhs[i].clone();
        }
        x
    }

    pub(crate) fn column(&self, j: usize) -> Vec<Rational> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    fn pivot(&mut self, r: usize, q: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > PIVOT_LIMIT {
            return Err(Error::Lp("pivot limit exceeded".into()));
        }
        let p = self.rows[r][q].clone();
        debug_assert!(!p.is_zero());
        if !p.is_one() {
            let inv = p.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                let delta = &f * &prow[j];
                row[j] -= delta;
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.reduced[q].clone();
        if !f.is_zero() {
            for &j in &nz {
                let delta = &f * &prow[j];
                self.reduced[j] -= delta;
            }
        }
        self.rows[r] = prow;
        self.basis[r] = q;
        Ok(())
    }

    /// Bland: lowest-index improving column, ratio-test ties to the lowest
    /// basic index.
    fn iterate(&mut self) -> Result<Phase2> {
        loop {
            let entering = (0..self.n_cols()).find(|&j| {
                self.reduced[j].is_negative() && !(self.phase_two && self.artificial[j])
            });
            let Some(q) = entering else {
                return Ok(Phase2::Optimal);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.n_rows() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Ok(Phase2::Unbounded(q)),
                Some((r, _)) => self.pivot(r, q)?,
            }
        }
    }

    pub(crate) fn phase_one(&mut self) -> Result<Phase1> {
        self.phase_two = false;
        self.recompute_reduced();
        match self.iterate()? {
            Phase2::Optimal => {}
            Phase2::Unbounded(_) => unreachable!("phase one is bounded below by zero"),
        }
        let infeas: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(j, _)| self.artificial[**j])
            .map(|(_, v)| v.clone())
            .sum();
        if infeas.is_positive() {
            return Ok(Phase1::Infeasible(self.duals()));
        }
        // drive zero-level artificials out where a structural pivot exists
        for r in 0..self.n_rows() {
            if !self.artificial[self.basis[r]] {
                continue;
            }
            if let Some(q) = (0..self.n_cols()).find(|&j| !self.artificial[j] && !self.rows[r][j].is_zero()) {
                self.pivot(r, q)?;
            }
        }
        Ok(Phase1::Feasible)
    }

    pub(crate) fn phase_two(&mut self) -> Result<Phase2> {
        self.phase_two = true;
        self.recompute_reduced();
        self.iterate()
    }

    /// Appends a structural column `a` (original coordinates) with cost `c`,
    /// keeping the current basis. The new tableau column is `B^-1 a`.
    pub(crate) fn add_column(&mut self, a: &[Rational], c: Rational) -> usize {
        let m = self.n_rows();
        let mut col = vec![Rational::zero(); m];
        for (k, ak) in a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            let jk = self.init[k];
            for (i, v) in col.iter_mut().enumerate() {
                let t = &self.rows[i][jk];
                if !t.is_zero() {
                    *v += ak * t;
                }
            }
        }
        let y = self.duals();
        let phase_c = if self.phase_two { c.clone() } else { Rational::zero() };
        let mut d = phase_c;
        for (yk, ak) in y.iter().zip(a) {
            if !yk.is_zero() && !ak.is_zero() {
                d -= yk * ak;
            }
        }
        for (row, v) in self.rows.iter_mut().zip(col) {
            row.push(v);
        }
        self.cost.push(c);
        self.artificial.push(false);
        self.reduced.push(d);
        self.n_cols() - 1
    }

    pub(crate) fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("basis |");
        for j in 0..self.n_cols() {
            out.push_str(&format!(" {}{j}", if self.artificial[j] { "a" } else { "x" }));
        }
        out.push_str(" | rhs\n");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("x{} |", self.basis[i]));
            for v in row {
                out.push_str(&format!(" {v}"));
            }
            out.push_str(&format!(" | {}\n", self.rhs[i]));
        }
        out.push_str("d |");
        for v in &self.reduced {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
        out
    }
}
