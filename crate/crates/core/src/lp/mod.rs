//! Exact two-phase simplex with Bland's rule.
//!
//! `solve_lp` converts a general program to standard form, solves it, maps the
//! answer back, and checks the returned certificate exactly before handing it
//! out. Duals are sensitivities `d(opt)/d(rhs_i)`: for a minimization, `>=`
//! rows carry nonnegative duals and `<=` rows nonpositive ones; for a
//! maximization the signs flip.

mod tableau;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

pub(crate) use tableau::{Phase1, Phase2, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarBound {
    Free,
    NonNegative,
    Boxed { lo: Rational, hi: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub bounds: Vec<VarBound>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// All variables start nonnegative.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            bounds: vec![VarBound::NonNegative; n],
            constraints: Vec::new(),
        }
    }

    pub fn with_bounds(mut self, bounds: Vec<VarBound>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.n_vars();
        if self.bounds.len() != n {
            return Err(Error::Lp(format!(
                "dimension mismatch: {} objective coefficients, {} bounds",
                n,
                self.bounds.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Lp(format!(
                    "dimension mismatch: row {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let VarBound::Boxed { lo, hi } = b {
                if lo > hi {
                    return Err(Error::Lp(format!("variable {j}: empty box [{lo}, {hi}]")));
                }
            }
        }
        Ok(())
    }

    fn eval_objective(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "OPTIMAL",
            LpStatus::Infeasible => "INFEASIBLE",
            LpStatus::Unbounded => "UNBOUNDED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point, or a feasible starting point of the ray when unbounded.
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row; empty unless optimal.
    pub duals: Vec<Rational>,
    /// Basic standard-form columns, one per row.
    pub basis: Vec<usize>,
    pub objective: Option<Rational>,
    /// Row multipliers proving infeasibility.
    pub farkas: Option<Vec<Rational>>,
    /// Improving direction when unbounded.
    pub ray: Option<Vec<Rational>>,
    pub pivots: usize,
}

/// Returns the dual vector of an optimal solution.
pub fn extract_dual(sol: &LpSolution) -> Result<Vec<Rational>> {
    match sol.status {
        LpStatus::Optimal => Ok(sol.duals.clone()),
        s => Err(Error::Lp(format!("no dual vector: status {s}"))),
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

enum ColMap {
    Plain(usize),
    Split(usize, usize),
    Shifted(usize),
}

struct Standard {
    tableau: Tableau,
    conv: Conversion,
}

struct Conversion {
    map: Vec<ColMap>,
    /// Row sign flips applied so the rhs is nonnegative.
    sigma: Vec<bool>,
    n_orig_rows: usize,
}

fn standardize(prog: &LinearProgram) -> Standard {
    let n = prog.n_vars();
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = prog
        .constraints
        .iter()
        .map(|c| (Vec::new(), c.relation, c.rhs.clone()))
        .collect();
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
    let mut cost = Vec::new();
    let mut map = Vec::with_capacity(n);
    for j in 0..n {
        let cj = match prog.sense {
            Sense::Minimize => prog.objective[j].clone(),
            Sense::Maximize => -&prog.objective[j],
        };
        match &prog.bounds[j] {
            VarBound::NonNegative => {
                map.push(ColMap::Plain(cost.len()));
                for (r, c) in rows.iter_mut().zip(&prog.constraints) {
                    r.0.push(c.coeffs[j].clone());
                }
                cost.push(cj);
            }
            VarBound::Free => {
                map.push(ColMap::Split(cost.len(), cost.len() + 1));
                for (r, c) in rows.iter_mut().zip(&prog.constraints) {
                    r.0.push(c.coeffs[j].clone());
                    r.0.push(-&c.coeffs[j]);
                }
                cost.push(cj.clone());
                cost.push(-cj);
            }
            VarBound::Boxed { lo, hi } => {
                let k = cost.len();
                map.push(ColMap::Shifted(k));
                for (r, c) in rows.iter_mut().zip(&prog.constraints) {
                    r.0.push(c.coeffs[j].clone());
                    r.2 -= &c.coeffs[j] * lo;
                }
                cost.push(cj);
                extra_rows.push((k, hi - lo));
            }
        }
    }
    let n_struct = cost.len();
    let n_orig_rows = rows.len();
    for (k, width) in extra_rows {
        let mut coeffs = vec![Rational::zero(); n_struct];
        coeffs[k] = Rational::from_integer(1.into());
        rows.push((coeffs, Relation::Le, width));
    }
    let m = rows.len();
    let mut cols: Vec<Vec<Rational>> = (0..n_struct)
        .map(|j| rows.iter().map(|r| r.0[j].clone()).collect())
        .collect();
    let mut sigma = vec![false; m];
    let mut slack_rows = vec![None; m];
    let mut rhs = Vec::with_capacity(m);
    for (i, (_, rel, b)) in rows.iter().enumerate() {
        let flip = b.is_negative();
        sigma[i] = flip;
        if flip {
            for col in cols.iter_mut().take(n_struct) {
                col[i] = -&col[i];
            }
        }
        rhs.push(if flip { -b } else { b.clone() });
        let slack_sign = match rel {
            Relation::Le => 1,
            Relation::Ge => -1,
            Relation::Eq => 0,
        };
        if slack_sign != 0 {
            let s = if flip { -slack_sign } else { slack_sign };
            let mut col = vec![Rational::zero(); m];
            col[i] = Rational::from_integer(s.into());
            if s > 0 {
                slack_rows[i] = Some(cols.len());
            }
            cols.push(col);
            cost.push(Rational::zero());
        }
    }
    Standard {
        tableau: Tableau::new(cols, cost, rhs, slack_rows),
        conv: Conversion { map, sigma, n_orig_rows },
    }
}

impl Conversion {
    fn original_point(&self, prog: &LinearProgram, x: &[Rational], shift: bool) -> Vec<Rational> {
        self.map
            .iter()
            .zip(&prog.bounds)
            .map(|(m, b)| match (m, b) {
                (ColMap::Plain(k), _) => x[*k].clone(),
                (ColMap::Split(p, q), _) => &x[*p] - &x[*q],
                (ColMap::Shifted(k), VarBound::Boxed { lo, .. }) if shift => lo + &x[*k],
                (ColMap::Shifted(k), _) => x[*k].clone(),
            })
            .collect()
    }

    fn original_rows(&self, y: &[Rational]) -> Vec<Rational> {
        y[..self.n_orig_rows]
            .iter()
            .zip(&self.sigma)
            .map(|(v, &f)| if f { -v } else { v.clone() })
            .collect()
    }
}

/// Solves `prog` exactly. Only dimension problems produce an error; the
/// certificate attached to every status is checked before returning.
pub fn solve_lp(prog: &LinearProgram) -> Result<LpSolution> {
    prog.check_dims()?;
    let Standard { tableau: mut t, conv: st } = standardize(prog);
    if let Phase1::Infeasible(y) = t.phase_one()? {
        let farkas = st.original_rows(&y);
        verify_farkas(prog, &farkas)?;
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            primal: Vec::new(),
            duals: Vec::new(),
            basis: t.basis().to_vec(),
            objective: None,
            farkas: Some(farkas),
            ray: None,
            pivots: t.pivots,
        });
    }
    let outcome = t.phase_two()?;
    let x_std = t.primal();
    let primal = st.original_point(prog, &x_std, true);
    match outcome {
        Phase2::Optimal => {
            let y = st.original_rows(&t.duals());
            let duals = match prog.sense {
                Sense::Minimize => y,
                Sense::Maximize => y.into_iter().map(|v| -v).collect(),
            };
            let sol = LpSolution {
                status: LpStatus::Optimal,
                objective: Some(prog.eval_objective(&primal)),
                primal,
                duals,
                basis: t.basis().to_vec(),
                farkas: None,
                ray: None,
                pivots: t.pivots,
            };
            verify_optimal(prog, &sol)?;
            Ok(sol)
        }
        Phase2::Unbounded(q) => {
            let mut d = vec![Rational::zero(); t.n_cols()];
            d[q] = Rational::from_integer(1.into());
            let col = t.column(q);
            for (i, &j) in t.basis().iter().enumerate() {
                d[j] = -&col[i];
            }
            let ray = st.original_point(prog, &d, false);
            verify_ray(prog, &primal, &ray)?;
            Ok(LpSolution {
                status: LpStatus::Unbounded,
                primal,
                duals: Vec::new(),
                basis: t.basis().to_vec(),
                objective: None,
                farkas: None,
                ray: Some(ray),
                pivots: t.pivots,
            })
        }
    }
}

fn row_activity(c: &Constraint, x: &[Rational]) -> Rational {
    dot(&c.coeffs, x)
}

fn satisfies(rel: Relation, lhs: &Rational, rhs: &Rational) -> bool {
    match rel {
        Relation::Le => lhs <= rhs,
        Relation::Eq => lhs == rhs,
        Relation::Ge => lhs >= rhs,
    }
}

fn primal_feasible(prog: &LinearProgram, x: &[Rational]) -> bool {
    prog.constraints
        .iter()
        .all(|c| satisfies(c.relation, &row_activity(c, x), &c.rhs))
        && prog.bounds.iter().zip(x).all(|(b, v)| match b {
            VarBound::Free => true,
            VarBound::NonNegative => !v.is_negative(),
            VarBound::Boxed { lo, hi } => lo <= v && v <= hi,
        })
}

/// Exact optimality check: primal feasibility, dual sign conditions,
/// reduced-cost conditions, complementary slackness, and equal objectives.
pub fn verify_optimal(prog: &LinearProgram, sol: &LpSolution) -> Result<()> {
    let fail = |what: &str| Err(Error::Lp(format!("optimality certificate failed: {what}")));
    let x = &sol.primal;
    let y = &sol.duals;
    if x.len() != prog.n_vars() || y.len() != prog.constraints.len() {
        return fail("dimensions");
    }
    if !primal_feasible(prog, x) {
        return fail("primal infeasible");
    }
    // orient everything as a minimization
    let flip = prog.sense == Sense::Maximize;
    let orient = |v: &Rational| if flip { -v } else { v.clone() };
    for (c, yi) in prog.constraints.iter().zip(y) {
        let yi = orient(yi);
        let ok = match c.relation {
            Relation::Ge => !yi.is_negative(),
            Relation::Le => !yi.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return fail("dual sign");
        }
        if !yi.is_zero() && row_activity(c, x) != c.rhs {
            return fail("complementary slackness on a row");
        }
    }
    let mut dual_obj = dot(y, &prog.constraints.iter().map(|c| c.rhs.clone()).collect::<Vec<_>>());
    for j in 0..prog.n_vars() {
        let mut r = prog.objective[j].clone();
        for (c, yi) in prog.constraints.iter().zip(y) {
            if !c.coeffs[j].is_zero() && !yi.is_zero() {
                r -= &c.coeffs[j] * yi;
            }
        }
        let ro = orient(&r);
        match &prog.bounds[j] {
            VarBound::Free => {
                if !r.is_zero() {
                    return fail("reduced cost on a free variable");
                }
            }
            VarBound::NonNegative => {
                if ro.is_negative() {
                    return fail("reduced cost sign");
                }
                if !r.is_zero() && !x[j].is_zero() {
                    return fail("complementary slackness on a variable");
                }
            }
            VarBound::Boxed { lo, hi } => {
                if (ro.is_positive() && x[j] != *lo) || (ro.is_negative() && x[j] != *hi) {
                    return fail("boxed variable off its bound");
                }
                dual_obj += &r * &x[j];
            }
        }
    }
    match &sol.objective {
        Some(v) if *v == prog.eval_objective(x) && *v == dual_obj => Ok(()),
        _ => fail("duality gap"),
    }
}

/// Checks that `y` proves infeasibility: with `g = y'A`, the row signs match
/// the relations and `y'b` exceeds the largest value `g'x` can take over the
/// variable bounds.
pub fn verify_farkas(prog: &LinearProgram, y: &[Rational]) -> Result<()> {
    let fail = |what: &str| Err(Error::Lp(format!("infeasibility certificate failed: {what}")));
    if y.len() != prog.constraints.len() {
        return fail("dimensions");
    }
    for (c, yi) in prog.constraints.iter().zip(y) {
        let ok = match c.relation {
            Relation::Ge => !yi.is_negative(),
            Relation::Le => !yi.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return fail("row sign");
        }
    }
    let mut sup = Rational::zero();
    for j in 0..prog.n_vars() {
        let g: Rational = prog
            .constraints
            .iter()
            .zip(y)
            .map(|(c, yi)| &c.coeffs[j] * yi)
            .sum();
        match &prog.bounds[j] {
            VarBound::Free if !g.is_zero() => return fail("free column"),
            VarBound::NonNegative if g.is_positive() => return fail("column sign"),
            VarBound::Boxed { lo, hi } => sup += if g.is_positive() { &g * hi } else { &g * lo },
            _ => {}
        }
    }
    let yb: Rational = prog.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
    if yb > sup {
        Ok(())
    } else {
        fail("no contradiction")
    }
}

/// Checks that `x + t d` stays feasible for all `t >= 0` and improves the
/// objective without bound.
pub fn verify_ray(prog: &LinearProgram, x: &[Rational], d: &[Rational]) -> Result<()> {
    let fail = |what: &str| Err(Error::Lp(format!("unboundedness certificate failed: {what}")));
    if !primal_feasible(prog, x) {
        return fail("start point infeasible");
    }
    for c in &prog.constraints {
        let a = row_activity(c, d);
        let ok = match c.relation {
            Relation::Le => !a.is_positive(),
            Relation::Ge => !a.is_negative(),
            Relation::Eq => a.is_zero(),
        };
        if !ok {
            return fail("ray leaves a row");
        }
    }
    for (b, v) in prog.bounds.iter().zip(d) {
        let ok = match b {
            VarBound::Free => true,
            VarBound::NonNegative => !v.is_negative(),
            VarBound::Boxed { .. } => v.is_zero(),
        };
        if !ok {
            return fail("ray leaves a bound");
        }
    }
    let slope = prog.eval_objective(d);
    let improving = match prog.sense {
        Sense::Minimize => slope.is_negative(),
        Sense::Maximize => slope.is_positive(),
    };
    if improving {
        Ok(())
    } else {
        fail("ray does not improve")
    }
}

/// Solves `prog` and renders the final standard-form tableau, for debugging.
pub fn dump_tableau(prog: &LinearProgram) -> Result<String> {
    prog.check_dims()?;
    let mut st = standardize(prog);
    if st.tableau.phase_one()? == Phase1::Feasible {
        st.tableau.phase_two()?;
    }
    Ok(st.tableau.render())
}

#[cfg(test)]
mod tests;
