//! The perfect-matching ratio η(G): the minimum, over nonnegative edge
//! weights, of the best perfect matching's weight divided by the best
//! matching's weight.
//!
//! [`eta_exact`] enumerates perfect and maximal matchings and solves one
//! small LP per maximal matching (see [`methods`]). The structural
//! shortcuts [`is_eta_zero`] and [`is_eta_one`] are polynomial. Upper and
//! lower bounds are produced as [`BoundCertificate`]s, which [`verify`]
//! checks independently of the code that produced them.

mod cert;
pub mod methods;

use std::ops::ControlFlow;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::classify::find_bridge;
use crate::graph::{EdgeId, EdgeSet, Graph};
use crate::matching::{
    for_each_maximal_matching, for_each_perfect_matching, has_perfect_matching, max_weight_matching, pm_with_forced_edges,
    EnumerationLimits, Matching, MatchingEngine as _, MatchingError, WeightFn,
};
use crate::rational::{self, Rational};
use crate::registry::UnknownName;

pub use cert::{
    berge_witness, cap_certificate, find_cap_matching, find_lemma3_matching, lemma3_best_bound, lemma3_certificate,
    odd_component_cert, verify, BoundCertificate, CertData, ComponentParity, Rejection, WeightedMatching,
};
pub use methods::{eta_methods, EtaMethod};

pub const MAX_MAXIMAL_MATCHINGS: usize = 1_000_000;
pub const MAX_PERFECT_MATCHINGS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EtaError {
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("graph has no edges")]
    NoEdges,
    #[error("too many {what}: more than {limit}")]
    TooMany { what: &'static str, limit: usize },
    #[error("graph has a bridge (edge {0})")]
    NotBridgeless(EdgeId),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not cubic")]
    NotCubic,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    UnknownMethod(#[from] UnknownName),
}

/// Limits and method choice for [`eta_exact_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaOptions {
    pub limits: EnumerationLimits,
    pub max_maximal: usize,
    pub max_perfect: usize,
    pub method: String,
}

impl Default for EtaOptions {
    fn default() -> Self {
        EtaOptions {
            limits: EnumerationLimits::default(),
            max_maximal: MAX_MAXIMAL_MATCHINGS,
            max_perfect: MAX_PERFECT_MATCHINGS,
            method: "reduced".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaResult {
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
    pub witness_weights: WeightFn,
    /// A maximum-weight matching under `witness_weights`.
    pub argmax_matching: Matching,
    /// A maximum-weight perfect matching under `witness_weights`.
    pub worst_pm: Matching,
    #[serde(with = "rational::serde_rational")]
    pub worst_pm_weight: Rational,
    pub method: String,
    pub perfect_count: usize,
    pub maximal_count: usize,
}

impl EtaResult {
    /// Re-solves both optima under the witness weights with the default
    /// engine and checks they reproduce `value`.
    pub fn recheck(&self, g: &Graph) -> bool {
        let (_, best) = max_weight_matching(g, &self.witness_weights);
        let Ok((_, best_pm)) = crate::matching::max_weight_perfect_matching(g, &self.witness_weights) else {
            return false;
        };
        !best.is_zero() && best_pm / best == self.value
    }
}

/// Collects all perfect and maximal matchings (sorted), refusing past the
/// configured counts.
pub(crate) fn collect_matchings(
    g: &Graph,
    opts: &EtaOptions,
) -> Result<(Vec<Matching>, Vec<Matching>), EtaError> {
    let mut perfect = Vec::new();
    let mut too_many = false;
    for_each_perfect_matching(g, &opts.limits, |ids| {
        if perfect.len() == opts.max_perfect {
            too_many = true;
            return ControlFlow::Break(());
        }
        perfect.push(Matching::new(g, ids.to_vec()).expect("enumerated matching"));
        ControlFlow::Continue(())
    })?;
    if too_many {
        return Err(EtaError::TooMany { what: "perfect matchings", limit: opts.max_perfect });
    }
    let mut maximal = Vec::new();
    for_each_maximal_matching(g, &opts.limits, |ids| {
        if maximal.len() == opts.max_maximal {
            too_many = true;
            return ControlFlow::Break(());
        }
        maximal.push(Matching::new(g, ids.to_vec()).expect("enumerated matching"));
        ControlFlow::Continue(())
    })?;
    if too_many {
        return Err(EtaError::TooMany { what: "maximal matchings", limit: opts.max_maximal });
    }
    perfect.sort();
    maximal.sort();
    Ok((perfect, maximal))
}

pub fn eta_exact(g: &Graph) -> Result<EtaResult, EtaError> {
    eta_exact_with(g, &EtaOptions::default())
}

pub fn eta_exact_with(g: &Graph, opts: &EtaOptions) -> Result<EtaResult, EtaError> {
    if g.m() == 0 {
        return Err(EtaError::NoEdges);
    }
    if !has_perfect_matching(g) {
        return Err(EtaError::NoPerfectMatching);
    }
    let method = eta_methods().get(&opts.method)?;
    if let Some(e) = is_eta_zero(g)? {
        let w = WeightFn::indicator(g, &EdgeSet::new(vec![e]))?;
        let (pm, pm_w) = crate::matching::max_weight_perfect_matching(g, &w)?;
        return Ok(EtaResult {
            value: Rational::zero(),
            witness_weights: w,
            argmax_matching: Matching::new(g, vec![e])?,
            worst_pm: pm,
            worst_pm_weight: pm_w,
            method: "zero-edge".into(),
            perfect_count: 0,
            maximal_count: 0,
        });
    }
    let (perfect, maximal) = collect_matchings(g, opts)?;
    let best = method.solve(g, &perfect, &maximal)?;
    let w = WeightFn::new(g, best.weights)?;
    let (pm, pm_w) = crate::matching::max_weight_perfect_matching(g, &w)?;
    let argmax = maximal[best.index].clone();
    let top = argmax.weight(&w);
    if pm_w.clone() / &top != best.value {
        return Err(EtaError::Internal(format!(
            "witness weights give {} but the LP reported {}",
            rational::Show(&(pm_w / top)),
            rational::Show(&best.value)
        )));
    }
    Ok(EtaResult {
        value: best.value,
        witness_weights: w,
        argmax_matching: argmax,
        worst_pm: pm,
        worst_pm_weight: pm_w,
        method: method.name().into(),
        perfect_count: perfect.len(),
        maximal_count: maximal.len(),
    })
}

/// An edge lying in no perfect matching, if any; η(G) = 0 exactly then.
/// Edges next to a bridge are tried first.
pub fn is_eta_zero(g: &Graph) -> Result<Option<EdgeId>, EtaError> {
    if !has_perfect_matching(g) {
        return Err(EtaError::NoPerfectMatching);
    }
    let in_no_pm = |e: EdgeId| -> Result<bool, EtaError> {
        Ok(!pm_with_forced_edges(g, &EdgeSet::new(vec![e]), &EdgeSet::empty())?)
    };
    if g.is_connected() {
        if let Ok(Some(b)) = find_bridge(g) {
            let (u, v) = g.edge(b);
            let mut near: Vec<EdgeId> = [u, v]
                .iter()
                .flat_map(|&x| g.neighbors(x).iter().map(|&(_, f)| f))
                .filter(|&f| f != b)
                .collect();
            near.sort_unstable();
            for f in near {
                if in_no_pm(f)? {
                    return Ok(Some(f));
                }
            }
        }
    }
    for e in 0..g.m() {
        if in_no_pm(e)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// A maximal matching that is not perfect, if any; η(G) = 1 exactly when
/// none exists.
///
/// A vertex `v` can be left exposed by a maximal matching iff `G - v` has
/// a matching covering all neighbours of `v`; that is a weighted matching
/// problem (edge weight = number of endpoints adjacent to `v`), and any
/// such matching extends greedily to a maximal one.
pub fn is_eta_one(g: &Graph) -> Option<Matching> {
    for v in 0..g.n() {
        let nbr: Vec<bool> = {
            let mut b = vec![false; g.n()];
            for &(w, _) in g.neighbors(v) {
                b[w] = true;
            }
            b
        };
        let need = g.degree(v);
        let weights: Vec<Rational> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                if a == v || b == v {
                    Rational::zero()
                } else {
                    rational::int(nbr[a] as i64 + nbr[b] as i64)
                }
            })
            .collect();
        let cover = if need == 0 {
            Matching::empty()
        } else {
            crate::matching::engine::BlossomEngine
                .max_weight(g, &weights)
                .expect("blossom never refuses")
        };
        let covered: usize = cover.ids().iter().map(|&e| {
            let (a, b) = g.edge(e);
            nbr[a] as usize + nbr[b] as usize
        }).sum();
        if covered < need {
            continue;
        }
        // keep only edges touching N(v), then extend greedily away from v
        let mut sat = vec![false; g.n()];
        let mut ids = Vec::new();
        for &e in cover.ids() {
            let (a, b) = g.edge(e);
            if nbr[a] || nbr[b] {
                sat[a] = true;
                sat[b] = true;
                ids.push(e);
            }
        }
        sat[v] = true;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if !sat[a] && !sat[b] {
                sat[a] = true;
                sat[b] = true;
                ids.push(e);
            }
        }
        let m = Matching::new(g, ids).expect("greedy extension is a matching");
        debug_assert!(m.is_maximal(g) && !m.saturated(g)[v]);
        return Some(m);
    }
    None
}
