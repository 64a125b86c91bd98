//! LP formulations for η over enumerated matchings.
//!
//! Both methods receive the perfect matchings `P_1..P_p` and maximal
//! matchings `M_1..M_q` in sorted order and return the minimising index
//! `j` (lowest on ties) with its value and weights.
//!
//! * `reduced`: for each `j`, maximise `w(M_j)` over weights supported on
//!   `M_j` with `w(P_k) ≤ 1` for all `k`; the ratio for `j` is `1 / opt`.
//!   Any positive weight outside `M_j` only raises perfect-matching
//!   weights, and with support inside `M_j` the best matching is `M_j`
//!   itself, so this equals the general formulation.
//! * `pinned`: for each `j`, minimise `t` subject to `w(M_j) = 1`,
//!   `w(M_i) ≤ 1` for all `i`, `w(P_k) ≤ t` for all `k`, over all edges.
//!   Much larger LPs; kept as a cross-check on small graphs.

use std::sync::{Arc, OnceLock};

use num::{One, Zero};
use rayon::prelude::*;

use super::EtaError;
use crate::graph::Graph;
use crate::lp::{solve, LinearProgram, LpStatus, Relation};
use crate::matching::Matching;
use crate::rational::Rational;
use crate::registry::Registry;

/// The minimising maximal matching and the weights attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodResult {
    pub index: usize,
    pub value: Rational,
    pub weights: Vec<Rational>,
}

pub trait EtaMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// Ratio and weights for maximal matching `j`.
    fn solve_one(&self, g: &Graph, perfect: &[Matching], maximal: &[Matching], j: usize)
        -> Result<(Rational, Vec<Rational>), EtaError>;

    /// Parallel scan over all `j`; the result equals the sequential scan.
    fn solve(&self, g: &Graph, perfect: &[Matching], maximal: &[Matching]) -> Result<MethodResult, EtaError> {
        let results: Vec<Result<(Rational, Vec<Rational>), EtaError>> =
            (0..maximal.len()).into_par_iter().map(|j| self.solve_one(g, perfect, maximal, j)).collect();
        let mut best: Option<MethodResult> = None;
        for (index, r) in results.into_iter().enumerate() {
            let (value, weights) = r?;
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(MethodResult { index, value, weights });
            }
        }
        best.ok_or_else(|| EtaError::Internal("no maximal matchings".into()))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Reduced;

impl EtaMethod for Reduced {
    fn name(&self) -> &'static str {
        "reduced"
    }

    fn solve_one(
        &self,
        g: &Graph,
        perfect: &[Matching],
        maximal: &[Matching],
        j: usize,
    ) -> Result<(Rational, Vec<Rational>), EtaError> {
        let mj = maximal[j].ids();
        let k = mj.len();
        let mut lp = LinearProgram::new(k).minimize(vec![-Rational::one(); k]);
        for p in perfect {
            let row: Vec<Rational> =
                mj.iter().map(|&e| if p.contains(e) { Rational::one() } else { Rational::zero() }).collect();
            if row.iter().any(|x| !x.is_zero()) {
                lp.push(row, Relation::Le, Rational::one());
            }
        }
        let sol = solve(&lp);
        if sol.status != LpStatus::Optimal {
            return Err(EtaError::Internal(format!("reduced LP for matching {j}: {:?}", sol.status)));
        }
        let s = -sol.value;
        let mut w = vec![Rational::zero(); g.m()];
        for (i, &e) in mj.iter().enumerate() {
            w[e] = sol.assignment[i].clone();
        }
        Ok((Rational::one() / s, w))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Pinned;

impl EtaMethod for Pinned {
    fn name(&self) -> &'static str {
        "pinned"
    }

    fn solve_one(
        &self,
        g: &Graph,
        perfect: &[Matching],
        maximal: &[Matching],
        j: usize,
    ) -> Result<(Rational, Vec<Rational>), EtaError> {
        let m = g.m();
        let mut obj = vec![Rational::zero(); m + 1];
        obj[m] = Rational::one();
        let mut lp = LinearProgram::new(m + 1).minimize(obj);
        let row_of = |mm: &Matching| {
            let mut r = vec![Rational::zero(); m + 1];
            for &e in mm.ids() {
                r[e] = Rational::one();
            }
            r
        };
        lp.push(row_of(&maximal[j]), Relation::Eq, Rational::one());
        for (i, mi) in maximal.iter().enumerate() {
            if i != j {
                lp.push(row_of(mi), Relation::Le, Rational::one());
            }
        }
        for p in perfect {
            let mut r = row_of(p);
            r[m] = -Rational::one();
            lp.push(r, Relation::Le, Rational::zero());
        }
        let sol = solve(&lp);
        if sol.status != LpStatus::Optimal {
            return Err(EtaError::Internal(format!("pinned LP for matching {j}: {:?}", sol.status)));
        }
        let mut w = sol.assignment;
        w.truncate(m);
        Ok((sol.value, w))
    }
}

/// `reduced` (default) and `pinned`.
pub fn eta_methods() -> &'static Registry<dyn EtaMethod> {
    static REG: OnceLock<Registry<dyn EtaMethod>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn EtaMethod> = Registry::new("eta method");
        r.register("reduced", "one small LP per maximal matching, weights on its edges only", Arc::new(Reduced));
        r.register("pinned", "one LP per maximal matching over all edges with every matching constrained", Arc::new(Pinned));
        r
    })
}
