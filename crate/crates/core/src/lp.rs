//! Exact rational simplex (Bland's rule, two phases) with replayable infeasibility certificates.

use crate::error::{Error, Result};
use crate::linalg::{self, dot};
use crate::scalar::{serde_qvec, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearConstraint {
    #[serde(with = "serde_qvec")]
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    #[serde(with = "crate::scalar::serde_q")]
    pub rhs: Q,
}

/// Linear constraints over `Q^n`, each variable either free or nonnegative, with an optional
/// objective to minimize.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactLP {
    pub num_vars: usize,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Option<Vec<Q>>,
}

impl ExactLP {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, nonneg: vec![false; num_vars], constraints: Vec::new(), objective: None }
    }

    pub fn add(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) {
        self.constraints.push(LinearConstraint { coeffs, relation, rhs });
    }

    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if self.nonneg.iter().zip(x).any(|(&nn, v)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    fn validate(&self) -> Result<()> {
        if self.nonneg.len() != self.num_vars {
            return Err(Error::MalformedLp("sign vector length differs from variable count".into()));
        }
        if let Some(c) = self.constraints.iter().find(|c| c.coeffs.len() != self.num_vars) {
            return Err(Error::MalformedLp(format!(
                "constraint has {} coefficients, expected {}",
                c.coeffs.len(),
                self.num_vars
            )));
        }
        if let Some(obj) = &self.objective {
            if obj.len() != self.num_vars {
                return Err(Error::MalformedLp("objective length differs".into()));
            }
        }
        Ok(())
    }
}

/// Multipliers `y`, one per constraint, proving infeasibility: `y_i >= 0` on `>=` rows,
/// `y_i <= 0` on `<=` rows, `sum y_i a_i` vanishes on free variables and is `<= 0` on
/// nonnegative ones, while `sum y_i b_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "serde_qvec")]
    pub multipliers: Vec<Q>,
}

impl FarkasCertificate {
    pub fn replay(&self, lp: &ExactLP) -> bool {
        if self.multipliers.len() != lp.constraints.len() {
            return false;
        }
        for (y, c) in self.multipliers.iter().zip(&lp.constraints) {
            let ok = match c.relation {
                Relation::Le => !y.is_positive(),
                Relation::Ge => !y.is_negative(),
                Relation::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        for j in 0..lp.num_vars {
            let g: Q = self
                .multipliers
                .iter()
                .zip(&lp.constraints)
                .map(|(y, c)| y * &c.coeffs[j])
                .sum();
            if lp.nonneg[j] && g.is_positive() || !lp.nonneg[j] && !g.is_zero() {
                return false;
            }
        }
        let yb: Q = self.multipliers.iter().zip(&lp.constraints).map(|(y, c)| y * &c.rhs).sum();
        yb.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible(FarkasCertificate),
    Unbounded,
}

/// Outcome of the standard-form solver for `min c.x, A x = b, x >= 0`.
#[derive(Debug, Clone)]
pub(crate) enum StdOutcome {
    /// Primal point and row multipliers `pi` with `A^T pi <= c` and `b.pi = c.x`.
    Optimal { x: Vec<Q>, duals: Vec<Q> },
    /// `y^T A <= 0`, `y^T b > 0`.
    Infeasible { y: Vec<Q> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    cost: Vec<Q>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule over columns `< ncols`. Returns false when unbounded.
    fn optimize(&mut self, ncols: usize) -> bool {
        loop {
            let Some(c) = (0..ncols).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub(crate) fn simplex_std(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> StdOutcome {
    let m = a.len();
    let n = c.len();
    let sigma: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Q> = if sigma[i] { a[i].iter().map(|x| -x).collect() } else { a[i].clone() };
        row.extend((0..m).map(|j| if j == i { Q::one() } else { Q::zero() }));
        rows.push(row);
        rhs.push(if sigma[i] { -b[i].clone() } else { b[i].clone() });
    }
    // Phase 1 reduced costs: artificials cost 1, so r_j = -sum_i T_ij on structural columns.
    let mut cost = vec![Q::zero(); n + m];
    for j in 0..n {
        cost[j] = -rows.iter().map(|r| r[j].clone()).sum::<Q>();
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect(), cost };
    t.optimize(n + m);
    let infeas: Q = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bj, _)| bj >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        let y = (0..m)
            .map(|i| {
                let yi = Q::one() - &t.cost[n + i];
                if sigma[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        return StdOutcome::Infeasible { y };
    }
    // Drive zero-level artificials out; rows where that is impossible are redundant.
    let mut keep = vec![true; m];
    for i in 0..m {
        if t.basis[i] < n {
            continue;
        }
        match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            Some(j) => t.pivot(i, j),
            None => keep[i] = false,
        }
    }
    let kept: Vec<usize> = (0..m).filter(|&i| keep[i]).collect();
    let mut t2 = Tableau {
        rows: kept.iter().map(|&i| t.rows[i][..n].to_vec()).collect(),
        rhs: kept.iter().map(|&i| t.rhs[i].clone()).collect(),
        basis: kept.iter().map(|&i| t.basis[i]).collect(),
        cost: c.to_vec(),
    };
    for i in 0..t2.rows.len() {
        let bj = t2.basis[i];
        if !t2.cost[bj].is_zero() {
            let f = t2.cost[bj].clone();
            for (x, p) in t2.cost.iter_mut().zip(&t2.rows[i]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    if !t2.optimize(n) {
        return StdOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bj) in t2.basis.iter().enumerate() {
        x[bj] = t2.rhs[i].clone();
    }
    // Multipliers from B^T pi = c_B on the kept rows.
    let bt: Vec<Vec<Q>> = t2.basis.iter().map(|&bj| kept.iter().map(|&i| a[i][bj].clone()).collect()).collect();
    let cb: Vec<Q> = t2.basis.iter().map(|&bj| c[bj].clone()).collect();
    let pk = linalg::solve(&bt, &cb).expect("basis matrix is invertible");
    let mut duals = vec![Q::zero(); m];
    for (&i, v) in kept.iter().zip(pk) {
        duals[i] = v;
    }
    StdOutcome::Optimal { x, duals }
}

struct StdForm {
    a: Vec<Vec<Q>>,
    b: Vec<Q>,
    c: Vec<Q>,
    /// For each original variable: (plus column, optional minus column).
    cols: Vec<(usize, Option<usize>)>,
}

fn to_standard(lp: &ExactLP) -> StdForm {
    let mut cols = Vec::with_capacity(lp.num_vars);
    let mut next = 0;
    for j in 0..lp.num_vars {
        if lp.nonneg[j] {
            cols.push((next, None));
            next += 1;
        } else {
            cols.push((next, Some(next + 1)));
            next += 2;
        }
    }
    let nslack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let total = next + nslack;
    let mut a = Vec::with_capacity(lp.constraints.len());
    let mut b = Vec::with_capacity(lp.constraints.len());
    let mut slack = next;
    for con in &lp.constraints {
        let mut row = vec![Q::zero(); total];
        for (j, &(p, mn)) in cols.iter().enumerate() {
            row[p] = con.coeffs[j].clone();
            if let Some(mn) = mn {
                row[mn] = -con.coeffs[j].clone();
            }
        }
        match con.relation {
            Relation::Le => {
                row[slack] = Q::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Q::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        a.push(row);
        b.push(con.rhs.clone());
    }
    let mut c = vec![Q::zero(); total];
    if let Some(obj) = &lp.objective {
        for (j, &(p, mn)) in cols.iter().enumerate() {
            c[p] = obj[j].clone();
            if let Some(mn) = mn {
                c[mn] = -obj[j].clone();
            }
        }
    }
    StdForm { a, b, c, cols }
}

fn recover(sf: &StdForm, x: &[Q]) -> Vec<Q> {
    sf.cols
        .iter()
        .map(|&(p, mn)| match mn {
            Some(mn) => &x[p] - &x[mn],
            None => x[p].clone(),
        })
        .collect()
}

pub fn lp_solve(lp: &ExactLP) -> Result<LpSolution> {
    lp.validate()?;
    let sf = to_standard(lp);
    match simplex_std(&sf.a, &sf.b, &sf.c) {
        StdOutcome::Optimal { x, .. } => {
            let x = recover(&sf, &x);
            if !lp.satisfied_by(&x) {
                return Err(Error::Internal("simplex point violates a constraint".into()));
            }
            let value = lp.objective.as_ref().map_or(Q::zero(), |o| dot(o, &x));
            Ok(LpSolution::Optimal { x, value })
        }
        StdOutcome::Infeasible { y } => {
            let cert = FarkasCertificate { multipliers: y };
            if !cert.replay(lp) {
                return Err(Error::Internal("infeasibility certificate failed replay".into()));
            }
            Ok(LpSolution::Infeasible(cert))
        }
        StdOutcome::Unbounded => Ok(LpSolution::Unbounded),
    }
}

/// Pure feasibility; any objective on `lp` is ignored.
pub fn lp_feasible(lp: &ExactLP) -> Result<Feasibility> {
    let mut plain = lp.clone();
    plain.objective = None;
    match lp_solve(&plain)? {
        LpSolution::Optimal { x, .. } => Ok(Feasibility::Feasible(x)),
        LpSolution::Infeasible(c) => Ok(Feasibility::Infeasible(c)),
        LpSolution::Unbounded => Err(Error::Internal("feasibility problem reported unbounded".into())),
    }
}

/// Largest `s <= 1` with `<g_h, y> - s >= c_h` for all rows, and a maximizing `y`.
///
/// Solved through the dual, which has one row per variable instead of one per halfspace.
pub fn max_margin(normals: &[Vec<Q>], offsets: &[Q], dim: usize) -> Result<(Q, Vec<Q>)> {
    let m = normals.len();
    // Primal: max s subject to M z >= h with z = (y, s), M = [G | -1; 0 | -1], h = (c; -1).
    // Dual: min -h.lambda subject to -M^T lambda = e_s, lambda >= 0.
    let mut a = vec![vec![Q::zero(); m + 1]; dim + 1];
    for (h, g) in normals.iter().enumerate() {
        if g.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
        }
        for i in 0..dim {
            a[i][h] = -g[i].clone();
        }
        a[dim][h] = Q::one();
    }
    a[dim][m] = Q::one();
    let mut b = vec![Q::zero(); dim + 1];
    b[dim] = Q::one();
    let mut c: Vec<Q> = offsets.iter().map(|x| -x).collect();
    c.push(Q::one());
    match simplex_std(&a, &b, &c) {
        StdOutcome::Optimal { duals, .. } => {
            let y = duals[..dim].to_vec();
            let s = duals[dim].clone();
            let ok = s <= Q::one()
                && normals.iter().zip(offsets).all(|(g, off)| dot(g, &y) - &s >= *off);
            if !ok {
                return Err(Error::Internal("margin dual multipliers are not primal feasible".into()));
            }
            Ok((s, y))
        }
        _ => Err(Error::Internal("margin program must have an optimum".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn interval_feasible() {
        let mut lp = ExactLP::new(1);
        lp.add(vec![qi(1)], Relation::Ge, qi(0));
        lp.add(vec![qi(1)], Relation::Le, qi(1));
        match lp_feasible(&lp).unwrap() {
            Feasibility::Feasible(x) => assert!(lp.satisfied_by(&x)),
            _ => panic!(),
        }
    }

    #[test]
    fn crossed_interval_infeasible() {
        let mut lp = ExactLP::new(1);
        lp.add(vec![qi(1)], Relation::Ge, qi(1));
        lp.add(vec![qi(1)], Relation::Le, qi(0));
        match lp_feasible(&lp).unwrap() {
            Feasibility::Infeasible(c) => assert!(c.replay(&lp)),
            _ => panic!(),
        }
    }

    #[test]
    fn point_in_square_hull() {
        // weights w1..w4 >= 0 over the square corners, sum 1, combination = (1/3, 1/3)
        let corners = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let mut lp = ExactLP::new(4);
        lp.nonneg = vec![true; 4];
        lp.add(vec![qi(1); 4], Relation::Eq, qi(1));
        lp.add(corners.iter().map(|c| qi(c.0)).collect(), Relation::Eq, q(1, 3));
        lp.add(corners.iter().map(|c| qi(c.1)).collect(), Relation::Eq, q(1, 3));
        match lp_feasible(&lp).unwrap() {
            Feasibility::Feasible(w) => {
                assert_eq!(w.iter().sum::<Q>(), qi(1));
                assert!(lp.satisfied_by(&w));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn optimum_and_unbounded() {
        let mut lp = ExactLP::new(2);
        lp.add(vec![qi(1), qi(1)], Relation::Ge, qi(2));
        lp.add(vec![qi(1), qi(-1)], Relation::Eq, qi(0));
        lp.objective = Some(vec![qi(1), qi(2)]);
        match lp_solve(&lp).unwrap() {
            LpSolution::Optimal { value, .. } => assert_eq!(value, qi(3)),
            other => panic!("{other:?}"),
        }
        lp.objective = Some(vec![qi(-1), qi(0)]);
        assert_eq!(lp_solve(&lp).unwrap(), LpSolution::Unbounded);
    }

    #[test]
    fn margin_of_triangle() {
        // x >= 0, y >= 0, -x - y >= -1 : inscribed margin 1/(2 + ...)? with unnormalized rows s = 1/3
        let g = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(-1), qi(-1)]];
        let c = vec![qi(0), qi(0), qi(-1)];
        let (s, y) = max_margin(&g, &c, 2).unwrap();
        assert_eq!(s, q(1, 3));
        assert_eq!(y, vec![q(1, 3), q(1, 3)]);
        let (s, _) = max_margin(&[vec![qi(1)], vec![qi(-1)]], &[qi(1), qi(0)], 1).unwrap();
        assert_eq!(s, q(-1, 2));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = ExactLP::new(2);
        lp.add(vec![qi(1), qi(1)], Relation::Eq, qi(1));
        lp.add(vec![qi(2), qi(2)], Relation::Eq, qi(2));
        lp.objective = Some(vec![qi(1), qi(0)]);
        lp.nonneg = vec![true, true];
        match lp_solve(&lp).unwrap() {
            LpSolution::Optimal { value, .. } => assert_eq!(value, qi(0)),
            other => panic!("{other:?}"),
        }
    }
}
