//! Matchings, weight functions and the exact matching engines.
//!
//! Everything here is exact: weights are [`Rational`]s, the weighted
//! blossom engine scales them to integers, and the enumeration engines
//! compare rationals directly.

mod blossom;
mod cardinality;
pub mod engine;
mod enumerate;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, BudgetExceeded, DEFAULT_NODE_BUDGET};
use crate::graph::{EdgeId, EdgeSet, Graph, GraphError, Vertex};
use crate::rational::{self, Rational};

pub use engine::{engines, MatchingEngine};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("forced edges do not form a matching")]
    IncludeNotMatching,
    #[error("edges {0} and {1} share a vertex")]
    NotAMatching(EdgeId, EdgeId),
    #[error("edge {0} is both forced and forbidden")]
    ForcedAndForbidden(EdgeId),
    #[error("enumeration refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching(EdgeSet);

impl Matching {
    pub fn new(g: &Graph, ids: Vec<EdgeId>) -> Result<Matching, MatchingError> {
        let set = EdgeSet::checked(g, ids)?;
        let mut owner = vec![usize::MAX; g.n()];
        for e in set.iter() {
            let (u, v) = g.edge(e);
            for x in [u, v] {
                if owner[x] != usize::MAX {
                    return Err(MatchingError::NotAMatching(owner[x], e));
                }
                owner[x] = e;
            }
        }
        Ok(Matching(set))
    }

    pub fn empty() -> Matching {
        Matching(EdgeSet::empty())
    }

    // Trusted constructor for ids produced by the engines.
    pub(crate) fn from_sorted(ids: &[EdgeId]) -> Matching {
        Matching(EdgeSet::new(ids.to_vec()))
    }

    fn from_mates(g: &Graph, mates: &[Option<Vertex>]) -> Matching {
        let ids = (0..g.n())
            .filter_map(|v| mates[v].filter(|&w| v < w).map(|w| g.edge_between(v, w).expect("mate is a neighbour")))
            .collect();
        Matching(EdgeSet::new(ids))
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.0
    }

    pub fn ids(&self) -> &[EdgeId] {
        self.0.ids()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(e)
    }

    pub fn saturated(&self, g: &Graph) -> Vec<bool> {
        let mut sat = vec![false; g.n()];
        for e in self.0.iter() {
            let (u, v) = g.edge(e);
            sat[u] = true;
            sat[v] = true;
        }
        sat
    }

    pub fn is_perfect(&self, g: &Graph) -> bool {
        2 * self.len() == g.n()
    }

    pub fn is_maximal(&self, g: &Graph) -> bool {
        let sat = self.saturated(g);
        g.edges().iter().all(|&(u, v)| sat[u] || sat[v])
    }

    pub fn weight(&self, w: &WeightFn) -> Rational {
        w.total(self.0.iter())
    }
}

/// Nonnegative rational edge weights, not all zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightFn(#[serde(with = "crate::rational::serde_rational_vec")] Vec<Rational>);

impl WeightFn {
    pub fn new(g: &Graph, values: Vec<Rational>) -> Result<WeightFn, MatchingError> {
        if values.len() != g.m() {
            return Err(MatchingError::InvalidWeights(format!(
                "expected {} weights, got {}",
                g.m(),
                values.len()
            )));
        }
        if let Some(e) = values.iter().position(|w| w.is_negative()) {
            return Err(MatchingError::InvalidWeights(format!("edge {e} has a negative weight")));
        }
        if values.iter().all(Zero::is_zero) {
            return Err(MatchingError::InvalidWeights("all weights are zero".into()));
        }
        Ok(WeightFn(values))
    }

    /// Weight 1 on `edges`, 0 elsewhere.
    pub fn indicator(g: &Graph, edges: &EdgeSet) -> Result<WeightFn, MatchingError> {
        let mut v = vec![Rational::zero(); g.m()];
        for e in edges.iter() {
            g.check_edge(e)?;
            v[e] = Rational::one();
        }
        WeightFn::new(g, v)
    }

    pub fn uniform(g: &Graph) -> Result<WeightFn, MatchingError> {
        WeightFn::new(g, vec![Rational::one(); g.m()])
    }

    /// Parses `id,weight` lines (`#` comments allowed). Ids not listed get
    /// weight 0; an id listed twice is an error.
    pub fn from_csv(g: &Graph, text: &str) -> Result<WeightFn, MatchingError> {
        let mut v = vec![Rational::zero(); g.m()];
        let mut seen = vec![false; g.m()];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| MatchingError::InvalidWeights(format!("line {}: {msg}", lineno + 1));
            let (id, w) = line.split_once(',').ok_or_else(|| bad("expected `id,weight`"))?;
            let id: usize = id.trim().parse().map_err(|_| bad("bad edge id"))?;
            g.check_edge(id)?;
            if seen[id] {
                return Err(bad("edge listed twice"));
            }
            seen[id] = true;
            v[id] = rational::parse(w).map_err(|e| bad(&e.to_string()))?;
        }
        WeightFn::new(g, v)
    }

    pub fn to_csv(&self) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{i},{}\n", rational::Show(w)))
            .collect()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, e: EdgeId) -> &Rational {
        &self.0[e]
    }

    pub fn total<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> Rational {
        edges.into_iter().fold(Rational::zero(), |acc, e| acc + &self.0[e])
    }
}

/// Size limits for the exhaustive engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub perfect_max_n: usize,
    pub maximal_max_n: usize,
    pub nodes: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { perfect_max_n: 26, maximal_max_n: 20, nodes: DEFAULT_NODE_BUDGET }
    }
}

impl EnumerationLimits {
    pub fn unbounded() -> Self {
        EnumerationLimits { perfect_max_n: usize::MAX, maximal_max_n: usize::MAX, nodes: u64::MAX }
    }
}

/// Streams every perfect matching to `visit` (sorted edge ids).
pub fn for_each_perfect_matching<F>(g: &Graph, limits: &EnumerationLimits, visit: F) -> Result<(), MatchingError>
where
    F: FnMut(&[EdgeId]) -> ControlFlow<()>,
{
    if g.n() > limits.perfect_max_n {
        return Err(MatchingError::TooLarge { n: g.n(), limit: limits.perfect_max_n });
    }
    enumerate::for_each_perfect(g, &Budget::new(limits.nodes), visit)?;
    Ok(())
}

/// Streams every maximal matching to `visit` (sorted edge ids).
pub fn for_each_maximal_matching<F>(g: &Graph, limits: &EnumerationLimits, visit: F) -> Result<(), MatchingError>
where
    F: FnMut(&[EdgeId]) -> ControlFlow<()>,
{
    if g.n() > limits.maximal_max_n {
        return Err(MatchingError::TooLarge { n: g.n(), limit: limits.maximal_max_n });
    }
    enumerate::for_each_maximal(g, &Budget::new(limits.nodes), visit)?;
    Ok(())
}

/// All perfect matchings in lexicographic order of their sorted edge ids.
pub fn enumerate_perfect_matchings(g: &Graph, limits: &EnumerationLimits) -> Result<Vec<Matching>, MatchingError> {
    let mut out = Vec::new();
    for_each_perfect_matching(g, limits, |m| {
        out.push(Matching::from_sorted(m));
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// All maximal matchings in lexicographic order of their sorted edge ids.
pub fn enumerate_maximal_matchings(g: &Graph, limits: &EnumerationLimits) -> Result<Vec<Matching>, MatchingError> {
    let mut out = Vec::new();
    for_each_maximal_matching(g, limits, |m| {
        out.push(Matching::from_sorted(m));
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// A maximum-cardinality matching (blossom contraction).
pub fn maximum_cardinality_matching(g: &Graph) -> Matching {
    Matching::from_mates(g, &cardinality::max_cardinality_mates(g))
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    g.n() % 2 == 0 && maximum_cardinality_matching(g).is_perfect(g)
}

/// Maximum-weight matching by the weighted blossom engine. `weights` may
/// contain zeros (including all zeros); negative entries are rejected.
pub(crate) fn blossom_max_weight(g: &Graph, weights: &[Rational]) -> Matching {
    debug_assert_eq!(weights.len(), g.m());
    debug_assert!(weights.iter().all(|w| !w.is_negative()));
    // Scale to integers; doubling keeps the dual halving step integral.
    let lcm = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<BigInt> = weights.iter().map(|w| (w.numer() * (&lcm / w.denom())) * 2).collect();
    let max = scaled.iter().max().cloned().unwrap_or_default();
    let mates = match max.to_i64() {
        Some(mx) if mx < (1i64 << 40) => {
            let edges: Vec<(usize, usize, i64)> = g
                .edges()
                .iter()
                .zip(&scaled)
                .map(|(&(u, v), w)| (u, v, w.to_i64().expect("bounded by max")))
                .collect();
            blossom::solve(g.n(), &edges, false)
        }
        _ => {
            let edges: Vec<(usize, usize, BigInt)> =
                g.edges().iter().zip(scaled).map(|(&(u, v), w)| (u, v, w)).collect();
            blossom::solve(g.n(), &edges, false)
        }
    };
    Matching::from_mates(g, &mates)
}

/// Maximum-weight perfect matching by the shift reduction: adding
/// `C = 1 + sum(w)` to every edge makes every maximum-weight matching a
/// maximum-cardinality one.
pub(crate) fn blossom_max_weight_perfect(g: &Graph, weights: &[Rational]) -> Option<Matching> {
    let shift = weights.iter().fold(Rational::one(), |acc, w| acc + w);
    let shifted: Vec<Rational> = weights.iter().map(|w| w + &shift).collect();
    let m = blossom_max_weight(g, &shifted);
    m.is_perfect(g).then_some(m)
}

fn weight_of(weights: &[Rational], ids: &[EdgeId]) -> Rational {
    ids.iter().fold(Rational::zero(), |acc, &e| acc + &weights[e])
}

/// Exact optimum over all matchings, using the default engine.
pub fn max_weight_matching(g: &Graph, w: &WeightFn) -> (Matching, Rational) {
    let m = engine::default_engine()
        .max_weight(g, w.values())
        .expect("default engine never refuses a graph");
    let wt = m.weight(w);
    (m, wt)
}

/// Exact optimum over perfect matchings, using the default engine.
pub fn max_weight_perfect_matching(g: &Graph, w: &WeightFn) -> Result<(Matching, Rational), MatchingError> {
    let m = engine::default_engine().max_weight_perfect(g, w.values())?;
    let wt = m.weight(w);
    Ok((m, wt))
}

/// Is there a perfect matching containing every edge of `include` and no
/// edge of `exclude`?
pub fn pm_with_forced_edges(g: &Graph, include: &EdgeSet, exclude: &EdgeSet) -> Result<bool, MatchingError> {
    for e in include.iter().chain(exclude.iter()) {
        g.check_edge(e)?;
    }
    if let Some(e) = include.iter().find(|&e| exclude.contains(e)) {
        return Err(MatchingError::ForcedAndForbidden(e));
    }
    let forced = Matching::new(g, include.ids().to_vec()).map_err(|_| MatchingError::IncludeNotMatching)?;
    let mut dead_vertices = Vec::with_capacity(2 * forced.len());
    for e in forced.ids() {
        let (u, v) = g.edge(*e);
        dead_vertices.push(u);
        dead_vertices.push(v);
    }
    let rest = g.delete(&dead_vertices, exclude.ids())?;
    Ok(has_perfect_matching(&rest.graph))
}

/// Vertices not covered by `m`, ascending.
pub fn unsaturated(g: &Graph, m: &Matching) -> Vec<Vertex> {
    let sat = m.saturated(g);
    (0..g.n()).filter(|&v| !sat[v]).collect()
}

/// Lexicographically smallest among the optimal candidates seen so far.
#[derive(Default)]
pub(crate) struct BestMatching {
    best: Option<(Rational, Vec<EdgeId>)>,
}

impl BestMatching {
    pub(crate) fn offer(&mut self, weights: &[Rational], ids: &[EdgeId]) {
        let w = weight_of(weights, ids);
        let better = match &self.best {
            None => true,
            Some((bw, bids)) => w > *bw || (w == *bw && ids < bids.as_slice()),
        };
        if better {
            self.best = Some((w, ids.to_vec()));
        }
    }

    pub(crate) fn into_matching(self) -> Option<Matching> {
        self.best.map(|(_, ids)| Matching::from_sorted(&ids))
    }
}

/// How often each edge appears across a family of matchings.
pub fn edge_multiplicity<'a, I>(g: &Graph, family: I) -> BTreeMap<EdgeId, u64>
where
    I: IntoIterator<Item = (&'a Matching, u64)>,
{
    let mut out: BTreeMap<EdgeId, u64> = (0..g.m()).map(|e| (e, 0)).collect();
    for (m, mult) in family {
        for e in m.ids() {
            *out.get_mut(e).expect("edge of g") += mult;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn path4() -> Graph {
        Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn path_of_length_three() {
        let g = path4();
        let w = WeightFn::new(&g, vec![int(0), int(1), int(0)]).unwrap();
        assert_eq!(max_weight_matching(&g, &w).1, int(1));
        let (p, wp) = max_weight_perfect_matching(&g, &w).unwrap();
        assert_eq!(wp, int(0));
        assert_eq!(p.ids(), &[0, 2]);
    }

    #[test]
    fn has_pm_small() {
        assert!(has_perfect_matching(&path4()));
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!has_perfect_matching(&p3));
        let w = WeightFn::uniform(&p3).unwrap();
        assert_eq!(max_weight_perfect_matching(&p3, &w).unwrap_err(), MatchingError::NoPerfectMatching);
    }

    #[test]
    fn matching_validation() {
        let g = path4();
        assert_eq!(Matching::new(&g, vec![0, 1]).unwrap_err(), MatchingError::NotAMatching(0, 1));
        let m = Matching::new(&g, vec![1]).unwrap();
        assert!(m.is_maximal(&g));
        assert!(!m.is_perfect(&g));
        assert_eq!(unsaturated(&g, &m), vec![0, 3]);
    }

    #[test]
    fn forced_edges() {
        let g = path4();
        let inc = EdgeSet::new(vec![1]);
        assert!(!pm_with_forced_edges(&g, &inc, &EdgeSet::empty()).unwrap());
        assert!(pm_with_forced_edges(&g, &EdgeSet::empty(), &EdgeSet::empty()).unwrap());
        assert_eq!(
            pm_with_forced_edges(&g, &EdgeSet::new(vec![0, 1]), &EdgeSet::empty()).unwrap_err(),
            MatchingError::IncludeNotMatching
        );
        assert_eq!(
            pm_with_forced_edges(&g, &EdgeSet::new(vec![0]), &EdgeSet::new(vec![0])).unwrap_err(),
            MatchingError::ForcedAndForbidden(0)
        );
    }

    #[test]
    fn weight_validation_and_csv() {
        let g = path4();
        assert!(WeightFn::new(&g, vec![int(0); 3]).is_err());
        assert!(WeightFn::new(&g, vec![int(-1), int(1), int(0)]).is_err());
        let w = WeightFn::from_csv(&g, "0,1/2\n2, 3\n").unwrap();
        assert_eq!(w.values(), &[ratio(1, 2), int(0), int(3)]);
        assert_eq!(WeightFn::from_csv(&g, &w.to_csv()).unwrap(), w);
        assert!(WeightFn::from_csv(&g, "0,1\n0,2\n").is_err());
        assert!(WeightFn::from_csv(&g, "7,1\n").is_err());
    }

    #[test]
    fn big_weights_take_bigint_path() {
        let g = path4();
        let huge = Rational::from_integer(BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62));
        let w = WeightFn::new(&g, vec![huge.clone(), int(1), huge.clone()]).unwrap();
        let (m, wt) = max_weight_matching(&g, &w);
        assert_eq!(m.ids(), &[0, 2]);
        assert_eq!(wt, huge.clone() + huge);
    }
}
