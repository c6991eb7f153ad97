//! Revised simplex for `min sum_j c_j w_j` subject to
//! `sum_j w_j t_j^i = r_i` (`i = 0..=m`), `w >= 0`, with `r >= 0`.
//!
//! Columns are moment vectors of grid nodes. Each node column is scaled to
//! integers and the basis inverse is kept fraction-free as `M / d` with `M`
//! the adjugate of the scaled basis and `d` its determinant, so pivots use
//! exact integer division and never reduce fractions. Entering columns follow
//! the most negative reduced cost; after a run of degenerate pivots the rule
//! switches to Bland's until the objective moves again, which rules out
//! cycling.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

const DEGENERATE_RUN: usize = 8;
const PIVOT_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Art(usize),
    Node(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Phase1 {
    Feasible,
    /// Duals `y` with `y . a_j <= 0` on every node and `y . r > 0`.
    Infeasible(Vec<Rational>),
}

/// Node `t = u / v` with cost `c = p / q`; the stored column is
/// `s * (1, t, ..., t^m)` with `s = v^m q`, whose cost is `p v^m`.
struct Node {
    u: BigInt,
    v: BigInt,
    s: BigInt,
    cost: BigInt,
    orig_cost: Rational,
}

pub(crate) struct GridLp {
    rows: usize,
    nodes: Vec<Node>,
    basic: Vec<bool>,
    basis: Vec<Var>,
    /// Adjugate of the scaled basis matrix.
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
    /// `adj * rhs`; basic values are `z / det`.
    z: Vec<BigInt>,
    /// Common denominator the right-hand side was multiplied by.
    rhs_scale: BigInt,
    phase_two: bool,
    pub(crate) pivots: usize,
}

fn cmp_frac(an: &BigInt, ad: &BigInt, bn: &BigInt, bd: &BigInt) -> Ordering {
    // denominators positive
    (an * bd).cmp(&(bn * ad))
}

impl GridLp {
    pub(crate) fn new(nodes: Vec<Rational>, cost: Vec<Rational>, rhs: Vec<Rational>) -> Self {
        let rows = rhs.len();
        debug_assert!(rhs.iter().all(|v| !v.is_negative()));
        let mut k = BigInt::one();
        for v in &rhs {
            k = k.lcm(v.denom());
        }
        let z = rhs.iter().map(|v| v.numer() * (&k / v.denom())).collect();
        let adj = (0..rows)
            .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut lp = GridLp {
            rows,
            nodes: Vec::new(),
            basic: Vec::new(),
            basis: (0..rows).map(Var::Art).collect(),
            adj,
            det: BigInt::one(),
            z,
            rhs_scale: k,
            phase_two: false,
            pivots: 0,
        };
        for (t, c) in nodes.into_iter().zip(cost) {
            lp.add_node(t, c);
        }
        lp
    }

    pub(crate) fn add_node(&mut self, t: Rational, c: Rational) -> usize {
        let m = self.rows as u32 - 1;
        let u = t.numer().clone();
        let v = t.denom().clone();
        let vm = num_traits::pow(v.clone(), m as usize);
        let s = &vm * c.denom();
        let cost = c.numer() * &vm;
        self.nodes.push(Node { u, v, s, cost, orig_cost: c });
        self.basic.push(false);
        self.nodes.len() - 1
    }

    /// Scaled column: `q u^i v^(m-i)`.
    fn column(&self, j: usize) -> Vec<BigInt> {
        let n = &self.nodes[j];
        let q = n.orig_cost.denom();
        let mut out = vec![BigInt::zero(); self.rows];
        let mut up = BigInt::one();
        for (i, slot) in out.iter_mut().enumerate() {
            let vp = num_traits::pow(n.v.clone(), self.rows - 1 - i);
            *slot = &up * &vp * q;
            up *= &n.u;
        }
        out
    }

    fn phase_cost(&self, v: Var) -> BigInt {
        match (v, self.phase_two) {
            (Var::Art(_), false) => BigInt::one(),
            (Var::Node(j), true) => self.nodes[j].cost.clone(),
            _ => BigInt::zero(),
        }
    }

    /// `c_B adj`; the duals are this divided by `det`.
    fn dual_numer(&self) -> Vec<BigInt> {
        let mut y = vec![BigInt::zero(); self.rows];
        for (r, &v) in self.basis.iter().enumerate() {
            let c = self.phase_cost(v);
            if c.is_zero() {
                continue;
            }
            for (yk, a) in y.iter_mut().zip(&self.adj[r]) {
                *yk += &c * a;
            }
        }
        y
    }

    /// `y = c_B B^-1` for the active phase.
    pub(crate) fn duals(&self) -> Vec<Rational> {
        self.dual_numer()
            .into_iter()
            .map(|y| Rational::new(y, self.det.clone()))
            .collect()
    }

    /// Weights indexed by node.
    pub(crate) fn primal(&self) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.nodes.len()];
        for (v, z) in self.basis.iter().zip(&self.z) {
            if let Var::Node(j) = v {
                w[*j] = Rational::new(z * &self.nodes[*j].s, &self.det * &self.rhs_scale);
            }
        }
        w
    }

    pub(crate) fn objective(&self) -> Rational {
        let mut acc = BigInt::zero();
        for (v, z) in self.basis.iter().zip(&self.z) {
            if let Var::Node(j) = v {
                acc += &self.nodes[*j].cost * z;
            }
        }
        Rational::new(acc, &self.det * &self.rhs_scale)
    }

    fn order(&self, v: Var) -> usize {
        match v {
            Var::Art(i) => i,
            Var::Node(j) => self.rows + j,
        }
    }

    /// Nonbasic nodes with negative reduced cost, as `(j, numerator, s_j)`:
    /// the scaled reduced cost is `numerator / |det|` and dividing by `s_j`
    /// undoes the column scaling.
    fn negative_reduced(&self, y: &[BigInt]) -> Vec<(usize, BigInt)> {
        let sd = self.det.sign();
        let mut out = Vec::new();
        for (j, n) in self.nodes.iter().enumerate() {
            if self.basic[j] {
                continue;
            }
            // y . column, by homogeneous Horner
            let mut acc = y[self.rows - 1].clone();
            let mut vp = BigInt::one();
            for yk in y[..self.rows - 1].iter().rev() {
                vp *= &n.v;
                acc = acc * &n.u + yk * &vp;
            }
            let ya = acc * n.orig_cost.denom();
            let c = if self.phase_two { &n.cost * &self.det } else { BigInt::zero() };
            let mut num = c - ya;
            if sd == Sign::Minus {
                num = -num;
            }
            if num.is_negative() {
                out.push((j, num));
            }
        }
        out
    }

    fn pivot(&mut self, r: usize, q: usize, w: &[BigInt]) {
        let wr = w[r].clone();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let (top, bottom) = if i < r {
                let (a, b) = self.adj.split_at_mut(r);
                (&mut a[i], &b[0])
            } else {
                let (a, b) = self.adj.split_at_mut(i);
                (&mut b[0], &a[r])
            };
            let wi = &w[i];
            for (x, xr) in top.iter_mut().zip(bottom.iter()) {
                let t = &wr * &*x - wi * xr;
                *x = t / &self.det;
            }
            let t = &wr * &self.z[i] - wi * &self.z[r];
            self.z[i] = t / &self.det;
        }
        self.det = wr;
        if let Var::Node(j) = self.basis[r] {
            self.basic[j] = false;
        }
        self.basis[r] = Var::Node(q);
        self.basic[q] = true;
        self.pivots += 1;
    }

    fn ftran(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.adj
            .iter()
            .map(|row| row.iter().zip(a).filter(|(b, _)| !b.is_zero()).map(|(b, x)| b * x).sum())
            .collect()
    }

    /// Returns `false` on an unbounded ray.
    fn iterate(&mut self) -> Result<bool> {
        let mut degenerate = 0;
        loop {
            if self.pivots > PIVOT_LIMIT {
                return Err(Error::Lp("pivot limit exceeded".into()));
            }
            let y = self.dual_numer();
            let cand = self.negative_reduced(&y);
            let entering = if degenerate >= DEGENERATE_RUN {
                cand.first().map(|(j, _)| *j)
            } else {
                cand.iter()
                    .min_by(|a, b| cmp_frac(&a.1, &self.nodes[a.0].s, &b.1, &self.nodes[b.0].s))
                    .map(|(j, _)| *j)
            };
            let Some(q) = entering else { return Ok(true) };
            let w = self.ftran(&self.column(q));
            let sd = self.det.sign();
            // ratio z_r / w_r over rows where w_r has the sign of det
            let mut leave: Option<usize> = None;
            for r in 0..self.rows {
                if w[r].sign() != sd {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let (a, b) = (&self.z[r] * &w[l], &self.z[l] * &w[r]);
                        // w_r w_l > 0, so z_r / w_r < z_l / w_l iff a < b
                        match a.cmp(&b) {
                            Ordering::Less => true,
                            Ordering::Equal => self.order(self.basis[r]) < self.order(self.basis[l]),
                            Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            let Some(r) = leave else { return Ok(false) };
            if self.z[r].is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q, &w);
        }
    }

    pub(crate) fn phase_one(&mut self) -> Result<Phase1> {
        self.phase_two = false;
        self.iterate()?;
        let mut infeas = BigInt::zero();
        for (v, z) in self.basis.iter().zip(&self.z) {
            if matches!(v, Var::Art(_)) {
                infeas += z;
            }
        }
        if !infeas.is_zero() {
            return Ok(Phase1::Infeasible(self.duals()));
        }
        // drive zero-level artificials out where a node column allows it
        for r in 0..self.rows {
            if !matches!(self.basis[r], Var::Art(_)) {
                continue;
            }
            let found = (0..self.nodes.len()).filter(|&j| !self.basic[j]).find_map(|j| {
                let a = self.column(j);
                let v: BigInt = self.adj[r].iter().zip(&a).map(|(b, x)| b * x).sum();
                (!v.is_zero()).then_some((j, a))
            });
            if let Some((j, a)) = found {
                let w = self.ftran(&a);
                self.pivot(r, j, &w);
            }
        }
        Ok(Phase1::Feasible)
    }

    /// Phase two from a feasible basis. The bound programs are bounded, so
    /// an unbounded ray is reported as an error.
    pub(crate) fn phase_two(&mut self) -> Result<()> {
        self.phase_two = true;
        if self.iterate()? {
            Ok(())
        } else {
            Err(Error::Lp("bound program reported unbounded".into()))
        }
    }
}
