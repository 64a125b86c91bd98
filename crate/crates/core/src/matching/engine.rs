//! Interchangeable exact matching engines, selectable by name.

use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use super::{
    blossom_max_weight, blossom_max_weight_perfect, for_each_maximal_matching, for_each_perfect_matching,
    BestMatching, EnumerationLimits, Matching, MatchingError,
};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::registry::Registry;

/// Graphs with at most this many vertices are solved by enumeration in the
/// `auto` engine.
pub const AUTO_ENUMERATION_MAX_N: usize = 12;

/// An exact solver for the two weighted matching problems. Weights are
/// nonnegative and indexed by edge id; they may all be zero.
pub trait MatchingEngine: Send + Sync {
    fn name(&self) -> &'static str;

    fn max_weight(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError>;

    /// Fails with [`MatchingError::NoPerfectMatching`] when none exists.
    fn max_weight_perfect(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError>;
}

/// Primal-dual weighted blossom algorithm; polynomial.
#[derive(Debug, Default, Clone, Copy)]
pub struct BlossomEngine;

impl MatchingEngine for BlossomEngine {
    fn name(&self) -> &'static str {
        "blossom"
    }

    fn max_weight(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError> {
        Ok(blossom_max_weight(g, weights))
    }

    fn max_weight_perfect(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError> {
        blossom_max_weight_perfect(g, weights).ok_or(MatchingError::NoPerfectMatching)
    }
}

/// Scans every maximal (resp. perfect) matching; ties go to the
/// lexicographically smallest edge-id list.
#[derive(Debug, Default, Clone, Copy)]
pub struct EnumerationEngine {
    pub limits: EnumerationLimits,
}

impl MatchingEngine for EnumerationEngine {
    fn name(&self) -> &'static str {
        "enumerate"
    }

    fn max_weight(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError> {
        // With nonnegative weights some maximal matching is optimal.
        let mut best = BestMatching::default();
        for_each_maximal_matching(g, &self.limits, |ids| {
            best.offer(weights, ids);
            ControlFlow::Continue(())
        })?;
        Ok(best.into_matching().unwrap_or_else(Matching::empty))
    }

    fn max_weight_perfect(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError> {
        let mut best = BestMatching::default();
        for_each_perfect_matching(g, &self.limits, |ids| {
            best.offer(weights, ids);
            ControlFlow::Continue(())
        })?;
        best.into_matching().ok_or(MatchingError::NoPerfectMatching)
    }
}

/// Enumeration on small graphs, blossom above the threshold.
#[derive(Debug, Clone, Copy)]
pub struct AutoEngine {
    pub threshold: usize,
}

impl Default for AutoEngine {
    fn default() -> Self {
        AutoEngine { threshold: AUTO_ENUMERATION_MAX_N }
    }
}

impl MatchingEngine for AutoEngine {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn max_weight(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError> {
        if g.n() <= self.threshold {
            EnumerationEngine::default().max_weight(g, weights)
        } else {
            BlossomEngine.max_weight(g, weights)
        }
    }

    fn max_weight_perfect(&self, g: &Graph, weights: &[Rational]) -> Result<Matching, MatchingError> {
        if g.n() <= self.threshold {
            EnumerationEngine::default().max_weight_perfect(g, weights)
        } else {
            BlossomEngine.max_weight_perfect(g, weights)
        }
    }
}

/// All built-in engines: `auto` (default), `blossom`, `enumerate`.
pub fn engines() -> &'static Registry<dyn MatchingEngine> {
    static REG: OnceLock<Registry<dyn MatchingEngine>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn MatchingEngine> = Registry::new("matching engine");
        r.register("auto", "enumeration up to 12 vertices, blossom above", Arc::new(AutoEngine::default()));
        r.register("blossom", "weighted blossom algorithm over exact integers", Arc::new(BlossomEngine));
        r.register("enumerate", "exhaustive scan of maximal / perfect matchings", Arc::new(EnumerationEngine::default()));
        r
    })
}

pub fn default_engine() -> Arc<dyn MatchingEngine> {
    engines().get("auto").expect("auto engine is registered")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn registry_lists_engines() {
        assert_eq!(engines().names(), vec!["auto", "blossom", "enumerate"]);
        assert_eq!(engines().get("blossom").unwrap().name(), "blossom");
        assert!(engines().get("greedy").is_err());
    }

    #[test]
    fn engines_agree_on_triangle_with_tail() {
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let w = vec![int(3), int(5), int(4), int(2)];
        for name in engines().names() {
            let e = engines().get(name).unwrap();
            let m = e.max_weight(&g, &w).unwrap();
            let total: Rational = m.ids().iter().map(|&i| w[i].clone()).sum();
            assert_eq!(total, int(5), "{name}");
            let p = e.max_weight_perfect(&g, &w).unwrap();
            assert_eq!(p.ids(), &[0, 3], "{name}");
        }
    }
}
