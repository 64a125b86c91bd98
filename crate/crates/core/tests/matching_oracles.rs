//! Matching engines against brute force over all edge subsets.

use std::ops::ControlFlow;

use matchforge::graph::{EdgeSet, Graph};
use matchforge::matching::engine::{AutoEngine, BlossomEngine, EnumerationEngine};
use matchforge::matching::{
    enumerate_maximal_matchings, enumerate_perfect_matchings, for_each_perfect_matching, has_perfect_matching,
    maximum_cardinality_matching, pm_with_forced_edges, EnumerationLimits, MatchingEngine,
};
use matchforge::rational::{ratio, Rational};
use num::Zero;
use proptest::prelude::*;

/// Every subset of edges that is a matching, as a bitmask.
fn all_matchings(g: &Graph) -> Vec<u32> {
    assert!(g.m() <= 20);
    (0u32..1 << g.m())
        .filter(|&mask| {
            let mut used = vec![false; g.n()];
            (0..g.m()).filter(|e| mask >> e & 1 == 1).all(|e| {
                let (u, v) = g.edge(e);
                !std::mem::replace(&mut used[u], true) && !std::mem::replace(&mut used[v], true)
            })
        })
        .collect()
}

fn ids(mask: u32, m: usize) -> Vec<usize> {
    (0..m).filter(|e| mask >> e & 1 == 1).collect()
}

fn weight(w: &[Rational], ids: &[usize]) -> Rational {
    ids.iter().fold(Rational::zero(), |a, &e| a + &w[e])
}

fn is_maximal(g: &Graph, mask: u32) -> bool {
    let mut sat = vec![false; g.n()];
    for e in ids(mask, g.m()) {
        let (u, v) = g.edge(e);
        sat[u] = true;
        sat[v] = true;
    }
    g.edges().iter().all(|&(u, v)| sat[u] || sat[v])
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len().min(14))
            .prop_map(move |p| Graph::from_edge_list(n, &p).expect("simple graph"))
    })
}

fn arb_weighted() -> impl Strategy<Value = (Graph, Vec<Rational>)> {
    arb_graph().prop_flat_map(|g| {
        let m = g.m();
        (Just(g), proptest::collection::vec((0i64..=12, 1i64..=6), m))
            .prop_map(|(g, w)| (g, w.into_iter().map(|(a, b)| ratio(a, b)).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_match_brute_force((g, w) in arb_weighted()) {
        let all = all_matchings(&g);
        let best = all.iter().map(|&m| weight(&w, &ids(m, g.m()))).max().unwrap();
        let perfect: Vec<u32> = all.iter().copied().filter(|&m| 2 * m.count_ones() as usize == g.n()).collect();
        let best_pm = perfect.iter().map(|&m| weight(&w, &ids(m, g.m()))).max();
        let engines: [&dyn MatchingEngine; 3] = [&BlossomEngine, &EnumerationEngine::default(), &AutoEngine::default()];
        for e in engines {
            let m = e.max_weight(&g, &w).unwrap();
            prop_assert_eq!(weight(&w, m.ids()), best.clone(), "{}", e.name());
            match (&best_pm, e.max_weight_perfect(&g, &w)) {
                (Some(b), Ok(p)) => {
                    prop_assert!(p.is_perfect(&g));
                    prop_assert_eq!(&weight(&w, p.ids()), b, "{}", e.name());
                }
                (None, Err(_)) => {}
                (b, p) => prop_assert!(false, "{}: brute {:?} vs engine {:?}", e.name(), b, p),
            }
        }
        prop_assert_eq!(has_perfect_matching(&g), !perfect.is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force(g in arb_graph()) {
        let all = all_matchings(&g);
        let lim = EnumerationLimits::default();
        let mut maximal: Vec<Vec<usize>> = all.iter().filter(|&&m| is_maximal(&g, m)).map(|&m| ids(m, g.m())).collect();
        maximal.sort();
        let got: Vec<Vec<usize>> = enumerate_maximal_matchings(&g, &lim).unwrap().iter().map(|m| m.ids().to_vec()).collect();
        prop_assert_eq!(got, maximal);
        let mut perfect: Vec<Vec<usize>> =
            all.iter().filter(|&&m| 2 * m.count_ones() as usize == g.n()).map(|&m| ids(m, g.m())).collect();
        perfect.sort();
        let got: Vec<Vec<usize>> = enumerate_perfect_matchings(&g, &lim).unwrap().iter().map(|m| m.ids().to_vec()).collect();
        prop_assert_eq!(got, perfect);
        let nu = all.iter().map(|m| m.count_ones() as usize).max().unwrap();
        prop_assert_eq!(maximum_cardinality_matching(&g).len(), nu);
    }

    #[test]
    fn forced_edges_match_brute_force(g in arb_graph(), inc in 0u32..8, exc in 0u32..8) {
        prop_assume!(g.m() >= 3);
        let include: Vec<usize> = (0..3).filter(|i| inc >> i & 1 == 1).collect();
        let exclude: Vec<usize> = (0..3).map(|i| g.m() - 1 - i).filter(|i| exc >> (i % 3) & 1 == 1).collect();
        let (inc_set, exc_set) = (EdgeSet::new(include.clone()), EdgeSet::new(exclude.clone()));
        let result = pm_with_forced_edges(&g, &inc_set, &exc_set);
        if include.iter().any(|e| exclude.contains(e)) {
            prop_assert!(result.is_err());
            return Ok(());
        }
        let brute = all_matchings(&g).into_iter().any(|m| {
            let s = ids(m, g.m());
            2 * s.len() == g.n() && include.iter().all(|e| s.contains(e)) && exclude.iter().all(|e| !s.contains(e))
        });
        match result {
            Ok(b) => prop_assert_eq!(b, brute),
            Err(_) => prop_assert!(!brute),
        }
    }
}

#[test]
fn perfect_stream_can_stop_early() {
    let g = matchforge::generators::petersen().graph;
    let mut seen = 0;
    for_each_perfect_matching(&g, &EnumerationLimits::default(), |_| {
        seen += 1;
        if seen == 2 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .unwrap();
    assert_eq!(seen, 2);
}

#[test]
fn size_limits_are_enforced() {
    let g = matchforge::generators::nauru().graph;
    assert!(enumerate_maximal_matchings(&g, &EnumerationLimits::default()).is_err());
    let tight = EnumerationLimits { nodes: 10, ..EnumerationLimits::default() };
    assert!(enumerate_perfect_matchings(&g, &tight).is_err());
}

#[test]
fn blossom_handles_large_rationals() {
    let g = matchforge::generators::petersen().graph;
    let w: Vec<Rational> = (0..g.m())
        .map(|e| Rational::new((1u64 << 50).into(), 1.into()) + ratio(e as i64, 997))
        .collect();
    let a = BlossomEngine.max_weight_perfect(&g, &w).unwrap();
    let b = EnumerationEngine::default().max_weight_perfect(&g, &w).unwrap();
    assert_eq!(weight(&w, a.ids()), weight(&w, b.ids()));
}
