//! Bound certificates for η and their independent verifier.

use std::ops::ControlFlow;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{EtaError, EtaOptions};
use crate::budget::Budget;
use crate::classify::{find_bridge, is_independent, tait_coloring, ClassifyError};
use crate::graph::{CubicGraph, EdgeId, EdgeSet, Graph, Vertex};
use crate::lp::{solve, LinearProgram, LpStatus, Relation};
use crate::matching::engine::BlossomEngine;
use crate::matching::{
    edge_multiplicity, enumerate_perfect_matchings, for_each_maximal_matching, has_perfect_matching,
    maximum_cardinality_matching, pm_with_forced_edges, unsaturated, EnumerationLimits, Matching, MatchingEngine,
};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedMatching {
    pub edges: Vec<EdgeId>,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentParity {
    pub size: usize,
    pub odd: bool,
}

/// The raw data behind each kind of bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CertData {
    /// Every perfect matching meets `matching` in at most `cap` edges, so
    /// weight 1 on `matching` gives η ≤ cap / |matching|.
    CapUpper { matching: Vec<EdgeId>, cap: usize },
    /// A maximal matching whose unsaturated set `S` is independent; a
    /// perfect matching spends |S| vertices covering `S`, so it keeps at
    /// most (n - 2|S|)/2 edges of the matching.
    Lemma3Upper { matching: Vec<EdgeId>, unsaturated: Vec<Vertex> },
    /// Perfect matchings with multiplicities covering every edge exactly
    /// `k` times; averaging gives η ≥ k / Σ multiplicity.
    BergeLower { k: u64, matchings: Vec<WeightedMatching> },
    /// An edge set `F` whose endpoints split the graph into the listed
    /// components. At most `cap` edges of `F` lie in one perfect matching
    /// while `matching_number` of them form a matching.
    OddComponent { edges: Vec<EdgeId>, cap: usize, matching_number: usize, components: Vec<ComponentParity> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub n: usize,
    pub m: usize,
    #[serde(with = "rational::serde_rational")]
    pub bound: Rational,
    #[serde(flatten)]
    pub data: CertData,
}

impl BoundCertificate {
    pub fn kind(&self) -> &'static str {
        match self.data {
            CertData::CapUpper { .. } => "CapUpper",
            CertData::Lemma3Upper { .. } => "Lemma3Upper",
            CertData::BergeLower { .. } => "BergeLower",
            CertData::OddComponent { .. } => "OddComponent",
        }
    }

    /// `true` for lower bounds on η.
    pub fn is_lower(&self) -> bool {
        matches!(self.data, CertData::BergeLower { .. })
    }

    fn new(g: &Graph, bound: Rational, data: CertData) -> Self {
        BoundCertificate { n: g.n(), m: g.m(), bound, data }
    }
}

fn frac(a: usize, b: usize) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Largest `|F'|`, `F' ⊆ f` a matching, such that some perfect matching
/// contains `F'`; subsets are tried by decreasing size.
fn cap_by_forcing(g: &Graph, f: &[EdgeId]) -> Result<usize, EtaError> {
    fn rec(g: &Graph, f: &[EdgeId], start: usize, want: usize, chosen: &mut Vec<EdgeId>) -> Result<bool, EtaError> {
        if chosen.len() == want {
            return match pm_with_forced_edges(g, &EdgeSet::new(chosen.clone()), &EdgeSet::empty()) {
                Ok(b) => Ok(b),
                Err(crate::matching::MatchingError::IncludeNotMatching) => Ok(false),
                Err(e) => Err(e.into()),
            };
        }
        for i in start..f.len() {
            if f.len() - i < want - chosen.len() {
                break;
            }
            chosen.push(f[i]);
            let found = rec(g, f, i + 1, want, chosen)?;
            chosen.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
    for size in (0..=f.len()).rev() {
        if rec(g, f, 0, size, &mut Vec::new())? {
            return Ok(size);
        }
    }
    Err(EtaError::NoPerfectMatching)
}

pub fn cap_certificate(g: &Graph, m: &Matching) -> Result<BoundCertificate, EtaError> {
    if m.is_empty() {
        return Err(EtaError::Internal("cap certificate needs a nonempty matching".into()));
    }
    if !has_perfect_matching(g) {
        return Err(EtaError::NoPerfectMatching);
    }
    let cap = cap_by_forcing(g, m.ids())?;
    Ok(BoundCertificate::new(g, frac(cap, m.len()), CertData::CapUpper { matching: m.ids().to_vec(), cap }))
}

pub fn lemma3_certificate(g: &Graph, m: &Matching) -> Result<BoundCertificate, EtaError> {
    if !m.is_maximal(g) || m.is_empty() {
        return Err(EtaError::Internal("lemma-3 certificate needs a nonempty maximal matching".into()));
    }
    if !has_perfect_matching(g) {
        return Err(EtaError::NoPerfectMatching);
    }
    let s = unsaturated(g, m);
    let n = g.n();
    let bound = frac(n - 2 * s.len(), n - s.len());
    Ok(BoundCertificate::new(g, bound, CertData::Lemma3Upper { matching: m.ids().to_vec(), unsaturated: s }))
}

/// Scans every maximal matching and keeps the one leaving the most
/// vertices exposed (the bound decreases in |S|), lexicographically first
/// on ties.
pub fn lemma3_best_bound(g: &Graph, limits: &EnumerationLimits) -> Result<BoundCertificate, EtaError> {
    if !has_perfect_matching(g) {
        return Err(EtaError::NoPerfectMatching);
    }
    let mut best: Option<Vec<EdgeId>> = None;
    for_each_maximal_matching(g, limits, |ids| {
        let better = match &best {
            None => true,
            Some(b) => ids.len() < b.len() || (ids.len() == b.len() && ids < b.as_slice()),
        };
        if better {
            best = Some(ids.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    let ids = best.ok_or_else(|| EtaError::Internal("no maximal matching".into()))?;
    lemma3_certificate(g, &Matching::new(g, ids)?)
}

/// The lexicographically first independent set `S` of size `s` such that
/// `G - S` has a perfect matching, returned as that matching (a maximal
/// matching of `G` leaving exactly `S` exposed).
pub fn find_lemma3_matching(g: &Graph, s: usize, budget: &Budget) -> Result<Option<Matching>, EtaError> {
    fn rec(
        g: &Graph,
        s: usize,
        start: Vertex,
        chosen: &mut Vec<Vertex>,
        blocked: &mut [u32],
        budget: &Budget,
    ) -> Result<Option<Matching>, EtaError> {
        budget.tick().map_err(crate::matching::MatchingError::from)?;
        if chosen.len() == s {
            let rest = g.delete(chosen, &[]).expect("valid vertices");
            let pm = maximum_cardinality_matching(&rest.graph);
            if !pm.is_perfect(&rest.graph) {
                return Ok(None);
            }
            let ids = pm.ids().iter().map(|&e| rest.edge_map[e]).collect();
            return Ok(Some(Matching::new(g, ids)?));
        }
        for v in start..g.n() {
            if g.n() - v < s - chosen.len() {
                break;
            }
            if blocked[v] > 0 {
                continue;
            }
            chosen.push(v);
            for &(w, _) in g.neighbors(v) {
                blocked[w] += 1;
            }
            let found = rec(g, s, v + 1, chosen, blocked, budget)?;
            for &(w, _) in g.neighbors(v) {
                blocked[w] -= 1;
            }
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
    if 2 * s > g.n() || (g.n() - s) % 2 == 1 {
        return Ok(None);
    }
    rec(g, s, 0, &mut Vec::new(), &mut vec![0; g.n()], budget)
}

/// First matching of `size` edges (lexicographic in sorted edge ids)
/// meeting every perfect matching in at most `target_cap` edges, checked
/// afterwards by [`cap_certificate`].
pub fn find_cap_matching(
    g: &Graph,
    size: usize,
    target_cap: usize,
    limits: &EnumerationLimits,
) -> Result<Option<Matching>, EtaError> {
    struct Search<'a> {
        g: &'a Graph,
        size: usize,
        target: usize,
        // per perfect matching: how many chosen edges it contains
        hits: Vec<usize>,
        in_pm: Vec<Vec<usize>>,
        used: Vec<bool>,
        chosen: Vec<EdgeId>,
        budget: Budget,
    }
    impl Search<'_> {
        fn rec(&mut self, start: EdgeId) -> Result<bool, EtaError> {
            self.budget.tick().map_err(crate::matching::MatchingError::from)?;
            if self.chosen.len() == self.size {
                return Ok(true);
            }
            for e in start..self.g.m() {
                if self.g.m() - e < self.size - self.chosen.len() {
                    break;
                }
                let (u, v) = self.g.edge(e);
                if self.used[u] || self.used[v] {
                    continue;
                }
                let over = self.in_pm[e].iter().any(|&p| self.hits[p] + 1 > self.target);
                if over {
                    continue;
                }
                for &p in &self.in_pm[e] {
                    self.hits[p] += 1;
                }
                self.used[u] = true;
                self.used[v] = true;
                self.chosen.push(e);
                if self.rec(e + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
                self.used[u] = false;
                self.used[v] = false;
                for &p in &self.in_pm[e] {
                    self.hits[p] -= 1;
                }
            }
            Ok(false)
        }
    }
    let pms = enumerate_perfect_matchings(g, limits)?;
    if pms.is_empty() {
        return Err(EtaError::NoPerfectMatching);
    }
    let mut in_pm = vec![Vec::new(); g.m()];
    for (i, p) in pms.iter().enumerate() {
        for &e in p.ids() {
            in_pm[e].push(i);
        }
    }
    let mut s = Search {
        g,
        size,
        target: target_cap,
        hits: vec![0; pms.len()],
        in_pm,
        used: vec![false; g.n()],
        chosen: Vec::new(),
        budget: Budget::new(limits.nodes),
    };
    if !s.rec(0)? {
        return Ok(None);
    }
    let m = Matching::new(g, s.chosen)?;
    let cert = cap_certificate(g, &m)?;
    match cert.data {
        CertData::CapUpper { cap, .. } if cap <= target_cap => Ok(Some(m)),
        _ => Err(EtaError::Internal("cap search and cap certificate disagree".into())),
    }
}

/// Budget used when trying a Tait colouring to shrink a Berge witness.
const BERGE_TAIT_BUDGET: u64 = 1_000_000;

/// Writes the all-1/3 edge vector as a convex combination of perfect
/// matchings (an LP over the enumerated perfect matchings) and scales it
/// to integer multiplicities. When the LP answer needs `k > 1` and a Tait
/// colouring is found quickly, the colouring (`k = 1`) is used instead.
pub fn berge_witness(g: &CubicGraph, opts: &EtaOptions) -> Result<BoundCertificate, EtaError> {
    match find_bridge(g) {
        Ok(Some(b)) => return Err(EtaError::NotBridgeless(b)),
        Err(ClassifyError::NotConnected) => return Err(EtaError::NotConnected),
        Err(ClassifyError::Timeout(t)) => return Err(crate::matching::MatchingError::from(t).into()),
        Ok(None) => {}
    }
    let pms = enumerate_perfect_matchings(g, &opts.limits)?;
    if pms.len() > opts.max_perfect {
        return Err(EtaError::TooMany { what: "perfect matchings", limit: opts.max_perfect });
    }
    let mut lp = LinearProgram::new(pms.len());
    for e in 0..g.m() {
        let row = pms.iter().map(|p| if p.contains(e) { Rational::one() } else { Rational::zero() }).collect();
        lp.push(row, Relation::Eq, rational::ratio(1, 3));
    }
    let sol = solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(EtaError::Internal(format!("Berge LP is {:?} on a bridgeless cubic graph", sol.status)));
    }
    let three = Rational::from_integer(BigInt::from(3));
    let k = sol
        .assignment
        .iter()
        .map(|x| (x * &three).denom().clone())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let mut k = k.to_u64().ok_or_else(|| EtaError::Internal("Berge multiplier overflow".into()))?;
    let mut matchings: Vec<WeightedMatching> = pms
        .iter()
        .zip(&sol.assignment)
        .filter(|(_, x)| x.is_positive())
        .map(|(p, x)| {
            let mult = (x * &three * Rational::from_integer(BigInt::from(k))).to_integer();
            WeightedMatching { edges: p.ids().to_vec(), multiplicity: mult.to_u64().expect("bounded by k") }
        })
        .collect();
    if k > 1 {
        if let Ok(Some(t)) = tait_coloring(g, &Budget::new(BERGE_TAIT_BUDGET)) {
            k = 1;
            matchings = (0..3).map(|c| WeightedMatching { edges: t.class(c), multiplicity: 1 }).collect();
            matchings.sort_by(|a, b| a.edges.cmp(&b.edges));
        }
    }
    let total: u64 = matchings.iter().map(|m| m.multiplicity).sum();
    let bound = Rational::new(BigInt::from(k), BigInt::from(total));
    Ok(BoundCertificate::new(g, bound, CertData::BergeLower { k, matchings }))
}

fn endpoint_components(g: &Graph, f: &[EdgeId]) -> Vec<ComponentParity> {
    let mut dead: Vec<Vertex> = f.iter().flat_map(|&e| {
        let (u, v) = g.edge(e);
        [u, v]
    }).collect();
    dead.sort_unstable();
    dead.dedup();
    let rest = g.delete(&dead, &[]).expect("valid vertices");
    rest.graph.components().iter().map(|c| ComponentParity { size: c.len(), odd: c.is_odd() }).collect()
}

fn matching_number_within(g: &Graph, f: &EdgeSet) -> usize {
    let w: Vec<Rational> = (0..g.m()).map(|e| if f.contains(e) { Rational::one() } else { Rational::zero() }).collect();
    BlossomEngine.max_weight(g, &w).expect("blossom never refuses").ids().iter().filter(|&&e| f.contains(e)).count()
}

/// Components left after deleting the endpoints of `f`, and the most
/// edges of `f` any perfect matching can use.
pub fn odd_component_cert(g: &Graph, f: &EdgeSet) -> Result<BoundCertificate, EtaError> {
    if f.is_empty() {
        return Err(EtaError::Internal("odd-component certificate needs a nonempty edge set".into()));
    }
    for e in f.iter() {
        g.check_edge(e).map_err(crate::matching::MatchingError::from)?;
    }
    if !has_perfect_matching(g) {
        return Err(EtaError::NoPerfectMatching);
    }
    let cap = cap_by_forcing(g, f.ids())?;
    let nu = matching_number_within(g, f);
    Ok(BoundCertificate::new(
        g,
        frac(cap, nu),
        CertData::OddComponent { edges: f.ids().to_vec(), cap, matching_number: nu, components: endpoint_components(g, f.ids()) },
    ))
}

/// Why [`verify`] rejected a certificate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("certificate rejected: {0}")]
pub struct Rejection(pub String);

fn reject<T>(msg: impl Into<String>) -> Result<T, Rejection> {
    Err(Rejection(msg.into()))
}

/// Maximum over perfect matchings of |P ∩ f|, by a weighted perfect
/// matching with weight 1 on `f`.
fn cap_by_weights(g: &Graph, f: &EdgeSet) -> Result<usize, Rejection> {
    let w: Vec<Rational> = (0..g.m()).map(|e| if f.contains(e) { Rational::one() } else { Rational::zero() }).collect();
    match BlossomEngine.max_weight_perfect(g, &w) {
        Ok(p) => Ok(p.ids().iter().filter(|&&e| f.contains(e)).count()),
        Err(_) => reject("graph has no perfect matching"),
    }
}

fn as_matching(g: &Graph, ids: &[EdgeId]) -> Result<Matching, Rejection> {
    Matching::new(g, ids.to_vec()).map_err(|e| Rejection(format!("not a matching: {e}")))
}

/// Re-derives the claimed bound from the certificate's raw data. Shares no
/// code with the producers beyond graph and matching primitives.
pub fn verify(c: &BoundCertificate, g: &Graph) -> Result<(), Rejection> {
    if c.n != g.n() || c.m != g.m() {
        return reject(format!("certificate is for a graph with {} vertices and {} edges", c.n, c.m));
    }
    let claimed = |derived: Rational| {
        if derived == c.bound {
            Ok(())
        } else {
            reject(format!("claimed bound {} but the data gives {}", rational::Show(&c.bound), rational::Show(&derived)))
        }
    };
    match &c.data {
        CertData::CapUpper { matching, cap } => {
            let m = as_matching(g, matching)?;
            if m.is_empty() {
                return reject("empty matching");
            }
            let real = cap_by_weights(g, m.edges())?;
            if real != *cap {
                return reject(format!("claimed cap {cap} but a perfect matching meets {real} edges"));
            }
            claimed(frac(real, m.len()))
        }
        CertData::Lemma3Upper { matching, unsaturated: s } => {
            let m = as_matching(g, matching)?;
            if m.is_empty() {
                return reject("empty matching");
            }
            let sat = m.saturated(g);
            let exposed: Vec<Vertex> = (0..g.n()).filter(|&v| !sat[v]).collect();
            let mut listed = s.clone();
            listed.sort_unstable();
            if listed != exposed {
                return reject("listed set is not the unsaturated set of the matching");
            }
            if !is_independent(g, &exposed) {
                return reject("unsaturated set is not independent (matching is not maximal)");
            }
            let n = g.n();
            let real = cap_by_weights(g, m.edges())?;
            if 2 * real > n - 2 * exposed.len() {
                return reject("a perfect matching uses more matching edges than the counting argument allows");
            }
            claimed(frac(n - 2 * exposed.len(), n - exposed.len()))
        }
        CertData::BergeLower { k, matchings } => {
            if *k == 0 || matchings.is_empty() {
                return reject("empty witness");
            }
            let mut family = Vec::with_capacity(matchings.len());
            for wm in matchings {
                let m = as_matching(g, &wm.edges)?;
                if !m.is_perfect(g) {
                    return reject("witness contains a non-perfect matching");
                }
                if wm.multiplicity == 0 {
                    return reject("zero multiplicity");
                }
                family.push((m, wm.multiplicity));
            }
            let cover = edge_multiplicity(g, family.iter().map(|(m, k)| (m, *k)));
            if let Some((e, c)) = cover.iter().find(|&(_, c)| c != k) {
                return reject(format!("edge {e} covered {c} times, expected {k}"));
            }
            let total: u64 = family.iter().map(|(_, k)| k).sum();
            if g.n() > 0 && g.is_cubic() && total != 3 * k {
                return reject(format!("multiplicities sum to {total}, expected {}", 3 * k));
            }
            claimed(Rational::new(BigInt::from(*k), BigInt::from(total)))
        }
        CertData::OddComponent { edges, cap, matching_number, components } => {
            let f = EdgeSet::checked(g, edges.clone()).map_err(|e| Rejection(e.to_string()))?;
            if f.is_empty() {
                return reject("empty edge set");
            }
            if endpoint_components(g, f.ids()) != *components {
                return reject("component list does not match the graph");
            }
            let real = cap_by_weights(g, &f)?;
            if real != *cap {
                return reject(format!("claimed cap {cap} but a perfect matching meets {real} edges"));
            }
            let nu = matching_number_within(g, &f);
            if nu != *matching_number {
                return reject(format!("claimed matching number {matching_number}, found {nu}"));
            }
            claimed(frac(real, nu))
        }
    }
}
