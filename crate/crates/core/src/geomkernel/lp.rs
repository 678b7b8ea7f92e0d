//! Exact linear programming.
//!
//! A dense two-phase primal simplex over [`Rat`] using Bland's rule, so it
//! never cycles. Strict inequalities are handled by homogenization: each
//! `a.x > b` becomes `a.x >= b + t` with a shared slack `0 <= t <= 1` that is
//! maximized; the strict system is feasible iff the optimum is positive.

use serde::{Deserialize, Serialize};

use super::linalg::{dot, RatVec};
use super::rat::Rat;
use crate::error::{input, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: RatVec,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: RatVec, relation: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn holds_at(&self, x: &[Rat]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Gt => lhs > self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    NonNeg,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: RatVec, value: Rat },
}

/// A system of linear constraints over typed variables.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    kinds: Vec<VarKind>,
    rows: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(kinds: Vec<VarKind>) -> Self {
        LinearSystem { kinds, rows: Vec::new() }
    }

    pub fn nonneg(n: usize) -> Self {
        LinearSystem::new(vec![VarKind::NonNeg; n])
    }

    pub fn free(n: usize) -> Self {
        LinearSystem::new(vec![VarKind::Free; n])
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn push(&mut self, coeffs: RatVec, relation: Relation, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.kinds.len());
        self.rows.push(Constraint { coeffs, relation, rhs });
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.rows
    }

    /// Returns a point satisfying every constraint (strict ones strictly).
    pub fn find_point(&self) -> Option<RatVec> {
        let strict = self.rows.iter().any(|r| r.relation == Relation::Gt);
        let std = StandardForm::build(self, strict);
        if !strict {
            let y = std.phase_one_point()?;
            return Some(std.recover(&y));
        }
        let mut cost = vec![Rat::zero(); std.ncols];
        cost[std.tau.expect("tau column")] = -Rat::one();
        match std.minimize(&cost) {
            StdOutcome::Optimal(y) => {
                let tau = &y[std.tau.unwrap()];
                tau.is_positive().then(|| std.recover(&y))
            }
            StdOutcome::Infeasible => None,
            StdOutcome::Unbounded => unreachable!("slack is bounded by the unit box"),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.find_point().is_some()
    }

    /// Maximizes `objective . x`. Strict rows are treated as non-strict.
    pub fn maximize(&self, objective: &[Rat]) -> LpOutcome {
        debug_assert_eq!(objective.len(), self.kinds.len());
        let std = StandardForm::build(self, false);
        let mut cost = vec![Rat::zero(); std.ncols];
        for (k, o) in objective.iter().enumerate() {
            let (p, n) = std.var_cols[k];
            cost[p] = -o;
            if let Some(n) = n {
                cost[n] = o.clone();
            }
        }
        match std.minimize(&cost) {
            StdOutcome::Infeasible => LpOutcome::Infeasible,
            StdOutcome::Unbounded => LpOutcome::Unbounded,
            StdOutcome::Optimal(y) => {
                let x = std.recover(&y);
                let value = dot(objective, &x);
                LpOutcome::Optimal { x, value }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Feasible,
    InfeasibleCertificate,
}

/// Either a feasible point or a vector of Farkas multipliers (one per
/// constraint) that proves infeasibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpWitness {
    pub kind: WitnessKind,
    pub values: RatVec,
}

impl LpWitness {
    pub fn is_feasible(&self) -> bool {
        self.kind == WitnessKind::Feasible
    }

    /// Re-checks the witness exactly against `constraints`.
    pub fn verify(&self, constraints: &[Constraint]) -> bool {
        match self.kind {
            WitnessKind::Feasible => constraints.iter().all(|c| c.holds_at(&self.values)),
            WitnessKind::InfeasibleCertificate => verify_certificate(constraints, &self.values),
        }
    }
}

// Multiplier y_i pairs with the row written as `sigma_i * (a_i . x) (>=|>|=) sigma_i * b_i`
// where sigma_i = -1 for `<=` rows and +1 otherwise.
fn oriented(c: &Constraint) -> (RatVec, Rat, bool, bool) {
    match c.relation {
        Relation::Le => (c.coeffs.iter().map(|v| -v).collect(), -&c.rhs, false, true),
        Relation::Eq => (c.coeffs.clone(), c.rhs.clone(), false, false),
        Relation::Gt => (c.coeffs.clone(), c.rhs.clone(), true, true),
        Relation::Ge => (c.coeffs.clone(), c.rhs.clone(), false, true),
    }
}

fn verify_certificate(constraints: &[Constraint], y: &[Rat]) -> bool {
    if y.len() != constraints.len() {
        return false;
    }
    let n = constraints.first().map_or(0, |c| c.coeffs.len());
    let mut combo = vec![Rat::zero(); n];
    let mut rhs = Rat::zero();
    let mut strict_used = false;
    for (c, yi) in constraints.iter().zip(y) {
        let (a, b, strict, signed) = oriented(c);
        if signed && yi.is_negative() {
            return false;
        }
        if yi.is_zero() {
            continue;
        }
        strict_used |= strict;
        for (s, v) in combo.iter_mut().zip(&a) {
            *s += &(yi * v);
        }
        rhs += &(yi * &b);
    }
    combo.iter().all(Rat::is_zero) && (rhs.is_positive() || (rhs.is_zero() && strict_used))
}

/// Decides feasibility of a system over free variables, returning either an
/// exact feasible point or an exact infeasibility certificate.
pub fn lp_feasible(constraints: &[Constraint]) -> Result<LpWitness> {
    let n = match constraints.first() {
        Some(c) => c.coeffs.len(),
        None => return Ok(LpWitness { kind: WitnessKind::Feasible, values: Vec::new() }),
    };
    if constraints.iter().any(|c| c.coeffs.len() != n) {
        return input("constraint vectors have different dimensions");
    }
    let mut sys = LinearSystem::free(n);
    for c in constraints {
        sys.push(c.coeffs.clone(), c.relation, c.rhs.clone());
    }
    if let Some(x) = sys.find_point() {
        return Ok(LpWitness { kind: WitnessKind::Feasible, values: x });
    }

    let relaxed_feasible = {
        let mut relaxed = LinearSystem::free(n);
        for c in constraints {
            let rel = if c.relation == Relation::Gt { Relation::Ge } else { c.relation };
            relaxed.push(c.coeffs.clone(), rel, c.rhs.clone());
        }
        relaxed.is_feasible()
    };

    // Alternative system in the multipliers y (one per constraint).
    let m = constraints.len();
    let oriented: Vec<_> = constraints.iter().map(oriented).collect();
    let kinds = oriented
        .iter()
        .map(|(_, _, _, signed)| if *signed { VarKind::NonNeg } else { VarKind::Free })
        .collect();
    let mut alt = LinearSystem::new(kinds);
    for j in 0..n {
        alt.push(oriented.iter().map(|(a, ..)| a[j].clone()).collect(), Relation::Eq, Rat::zero());
    }
    let b_row: RatVec = oriented.iter().map(|(_, b, ..)| b.clone()).collect();
    if relaxed_feasible {
        alt.push(b_row, Relation::Ge, Rat::zero());
        let strict_row = oriented.iter().map(|(_, _, s, _)| if *s { Rat::one() } else { Rat::zero() }).collect();
        alt.push(strict_row, Relation::Eq, Rat::one());
    } else {
        alt.push(b_row, Relation::Eq, Rat::one());
    }
    let y = alt.find_point().expect("theorem of the alternative guarantees a certificate");
    debug_assert_eq!(y.len(), m);
    Ok(LpWitness { kind: WitnessKind::InfeasibleCertificate, values: y })
}

enum StdOutcome {
    Infeasible,
    Unbounded,
    Optimal(RatVec),
}

/// `A y = b, y >= 0` with `b >= 0` (rows are sign-normalized on build).
struct StandardForm {
    a: Vec<RatVec>,
    b: RatVec,
    ncols: usize,
    var_cols: Vec<(usize, Option<usize>)>,
    tau: Option<usize>,
}

impl StandardForm {
    fn build(sys: &LinearSystem, homogenize_strict: bool) -> Self {
        let mut var_cols = Vec::with_capacity(sys.kinds.len());
        let mut ncols = 0;
        for k in &sys.kinds {
            match k {
                VarKind::NonNeg => {
                    var_cols.push((ncols, None));
                    ncols += 1;
                }
                VarKind::Free => {
                    var_cols.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let slack_start = ncols;
        let nslack = sys.rows.iter().filter(|r| r.relation != Relation::Eq).count();
        ncols += nslack;
        let tau = if homogenize_strict {
            ncols += 2; // tau and its upper-bound slack
            Some(ncols - 2)
        } else {
            None
        };

        let mut a = Vec::with_capacity(sys.rows.len() + 1);
        let mut b = Vec::with_capacity(sys.rows.len() + 1);
        let mut s = slack_start;
        for r in &sys.rows {
            let mut row = vec![Rat::zero(); ncols];
            for (k, v) in r.coeffs.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let (p, n) = var_cols[k];
                row[p] = v.clone();
                if let Some(n) = n {
                    row[n] = -v;
                }
            }
            match r.relation {
                Relation::Ge | Relation::Gt => {
                    row[s] = -Rat::one();
                    s += 1;
                }
                Relation::Le => {
                    row[s] = Rat::one();
                    s += 1;
                }
                Relation::Eq => {}
            }
            if r.relation == Relation::Gt {
                if let Some(t) = tau {
                    row[t] = -Rat::one();
                }
            }
            a.push(row);
            b.push(r.rhs.clone());
        }
        if let Some(t) = tau {
            let mut row = vec![Rat::zero(); ncols];
            row[t] = Rat::one();
            row[t + 1] = Rat::one();
            a.push(row);
            b.push(Rat::one());
        }
        for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    if !v.is_zero() {
                        *v = -&*v;
                    }
                }
                *rhs = -&*rhs;
            }
        }
        StandardForm { a, b, ncols, var_cols, tau }
    }

    fn recover(&self, y: &[Rat]) -> RatVec {
        self.var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &y[p] - &y[n],
                None => y[p].clone(),
            })
            .collect()
    }

    fn phase_one(&self) -> Option<Tableau> {
        let m = self.a.len();
        let n = self.ncols;
        let width = n + m;
        let mut t = Vec::with_capacity(m * width);
        for (i, row) in self.a.iter().enumerate() {
            t.extend(row.iter().cloned());
            for k in 0..m {
                t.push(if k == i { Rat::one() } else { Rat::zero() });
            }
        }
        let mut cost = vec![Rat::zero(); width];
        for j in 0..n {
            let mut s = Rat::zero();
            for row in &self.a {
                if !row[j].is_zero() {
                    s -= &row[j];
                }
            }
            cost[j] = s;
        }
        let mut tab = Tableau { m, width, t, rhs: self.b.clone(), basis: (n..n + m).collect(), cost };
        let ran = tab.run(width);
        debug_assert!(ran, "phase one is bounded below");
        let infeasibility: Rat = (0..tab.m).filter(|&i| tab.basis[i] >= n).map(|i| tab.rhs[i].clone()).sum();
        if infeasibility.is_positive() {
            return None;
        }
        tab.drive_out_artificials(n);
        tab.truncate_columns(n);
        Some(tab)
    }

    fn phase_one_point(&self) -> Option<RatVec> {
        self.phase_one().map(|tab| tab.solution(self.ncols))
    }

    fn minimize(&self, cost: &[Rat]) -> StdOutcome {
        let Some(mut tab) = self.phase_one() else {
            return StdOutcome::Infeasible;
        };
        let n = self.ncols;
        let mut red = cost.to_vec();
        for i in 0..tab.m {
            let cb = &cost[tab.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, r) in red.iter_mut().enumerate() {
                let v = tab.at(i, j);
                if !v.is_zero() {
                    *r -= &(cb * v);
                }
            }
        }
        tab.cost = red;
        if !tab.run(n) {
            return StdOutcome::Unbounded;
        }
        StdOutcome::Optimal(tab.solution(n))
    }
}

struct Tableau {
    m: usize,
    width: usize,
    t: Vec<Rat>,
    rhs: RatVec,
    basis: Vec<usize>,
    cost: RatVec,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> &Rat {
        &self.t[i * self.width + j]
    }

    /// Bland-rule simplex on columns `< allowed`. Returns false if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.m {
                let a = self.at(i, enter);
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
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let piv = self.t[r * w + c].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for v in &mut self.t[r * w..(r + 1) * w] {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow: RatVec = self.t[r * w..(r + 1) * w].to_vec();
        let nz: Vec<usize> = (0..w).filter(|&j| !prow[j].is_zero()).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                let d = &f * &prow[j];
                self.t[i * w + j] -= &d;
            }
            if !prhs.is_zero() {
                let d = &f * &prhs;
                self.rhs[i] -= &d;
            }
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                let d = &f * &prow[j];
                self.cost[j] -= &d;
            }
        }
        self.basis[r] = c;
    }

    fn drive_out_artificials(&mut self, n: usize) {
        let mut i = 0;
        while i < self.m {
            if self.basis[i] < n {
                i += 1;
                continue;
            }
            match (0..n).find(|&j| !self.at(i, j).is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => self.remove_row(i),
            }
        }
    }

    fn remove_row(&mut self, i: usize) {
        let w = self.width;
        self.t.drain(i * w..(i + 1) * w);
        self.rhs.remove(i);
        self.basis.remove(i);
        self.m -= 1;
    }

    fn truncate_columns(&mut self, n: usize) {
        let w = self.width;
        let mut t = Vec::with_capacity(self.m * n);
        for i in 0..self.m {
            t.extend(self.t[i * w..i * w + n].iter().cloned());
        }
        self.t = t;
        self.width = n;
        self.cost.truncate(n);
    }

    fn solution(&self, n: usize) -> RatVec {
        let mut y = vec![Rat::zero(); n];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < n {
                y[bv] = self.rhs[i].clone();
            }
        }
        y
    }
}
