//! Small exact linear programs over the rationals.
//!
//! Dense two-phase tableau simplex with Bland's rule. No tolerances: every
//! comparison is an exact rational comparison, so an `Optimal` assignment
//! satisfies each row exactly.

use std::fmt::Write as _;

use num::{Signed, Zero};

use crate::rational::{Rational, Show};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Minimise `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; zero unless `status` is `Optimal`.
    pub value: Rational,
    pub assignment: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![Rational::zero(); num_vars], constraints: Vec::new() }
    }

    pub fn minimize(mut self, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        self.objective = objective;
        self
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Does `x` satisfy every row and the sign constraints exactly?
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(Signed::is_negative) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Original,
    Slack,
    Artificial,
}

struct Tableau<'t> {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    trace: Option<&'t mut String>,
    pivots: usize,
}

impl Tableau<'_> {
    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x / &p;
            }
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
        self.pivots += 1;
        if let Some(t) = self.trace.as_deref_mut() {
            let _ = writeln!(t, "pivot {} on row {r} col {c}", self.pivots);
            for (i, row) in self.rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|v| Show(v).to_string()).collect();
                let _ = writeln!(t, "  x{} | {} | {}", self.basis[i], cells.join(" "), Show(&self.rhs[i]));
            }
        }
    }

    fn reduced_costs(&self, cost: &[Rational], allowed: &[bool]) -> Vec<Rational> {
        let mut red = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in self.rows[i].iter().enumerate() {
                if allowed[j] && !x.is_zero() {
                    red[j] -= cb * x;
                }
            }
        }
        red
    }

    /// Runs Bland's-rule simplex minimising `cost` over `allowed` columns.
    /// Returns false when unbounded.
    fn optimise(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let red = self.reduced_costs(cost, allowed);
            let entering = (0..self.ncols()).find(|&j| allowed[j] && red[j].is_negative() && !self.basis.contains(&j));
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Solves `p` exactly.
pub fn solve(p: &LinearProgram) -> LpSolution {
    solve_inner(p, None)
}

/// Like [`solve`], appending a dump of the tableau after every pivot.
pub fn solve_traced(p: &LinearProgram, trace: &mut String) -> LpSolution {
    solve_inner(p, Some(trace))
}

fn solve_inner(p: &LinearProgram, trace: Option<&mut String>) -> LpSolution {
    let n = p.num_vars;
    let m = p.constraints.len();
    let mut kinds = vec![ColKind::Original; n];
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];

    // Normalise to nonnegative right-hand sides.
    let normalised: Vec<(Vec<Rational>, Relation, Rational)> = p
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|x| -x).collect(), rel, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();
    let extra_slack = normalised.iter().filter(|c| c.1 != Relation::Eq).count();
    let extra_art = normalised.iter().filter(|c| c.1 != Relation::Le).count();
    kinds.extend(std::iter::repeat(ColKind::Slack).take(extra_slack));
    kinds.extend(std::iter::repeat(ColKind::Artificial).take(extra_art));
    let total = kinds.len();
    let (mut next_slack, mut next_art) = (n, n + extra_slack);
    for (i, (coeffs, rel, b)) in normalised.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(total, Rational::zero());
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::from_integer(1.into());
                basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                row[next_art] = Rational::from_integer(1.into());
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::from_integer(1.into());
                basis[i] = next_art;
                next_art += 1;
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let mut t = Tableau { rows, rhs, basis, kinds, trace, pivots: 0 };

    // Phase 1: minimise the sum of artificials.
    if extra_art > 0 {
        let cost: Vec<Rational> = t
            .kinds
            .iter()
            .map(|k| if *k == ColKind::Artificial { Rational::from_integer(1.into()) } else { Rational::zero() })
            .collect();
        let all = vec![true; total];
        t.optimise(&cost, &all);
        let infeas: Rational = t.basis.iter().zip(&t.rhs).filter(|(b, _)| cost[**b].is_positive()).map(|(_, v)| v.clone()).sum();
        if infeas.is_positive() {
            return LpSolution { status: LpStatus::Infeasible, value: Rational::zero(), assignment: vec![Rational::zero(); n] };
        }
        // Drive zero-level artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.kinds[t.basis[i]] == ColKind::Artificial {
                let col = (0..total).find(|&j| t.kinds[j] != ColKind::Artificial && !t.rows[i][j].is_zero());
                match col {
                    Some(c) => t.pivot(i, c),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2.
    let mut cost = p.objective.clone();
    cost.resize(total, Rational::zero());
    let allowed: Vec<bool> = t.kinds.iter().map(|k| *k != ColKind::Artificial).collect();
    if !t.optimise(&cost, &allowed) {
        return LpSolution { status: LpStatus::Unbounded, value: Rational::zero(), assignment: vec![Rational::zero(); n] };
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[i].clone();
        }
    }
    let value = p.objective_value(&x);
    debug_assert!(p.is_feasible(&x));
    LpSolution { status: LpStatus::Optimal, value, assignment: x }
}
