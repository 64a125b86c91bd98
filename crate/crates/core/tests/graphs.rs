//! Generators and structural predicates.

use matchforge::budget::Budget;
use matchforge::classify::{
    bipartition, classify, find_bridge, girth, hamiltonian_cycle, is_bridgeless, is_hamiltonian_cycle, is_snark,
    tait_coloring,
};
use matchforge::generators::*;
use matchforge::graph::{CubicGraph, Graph};
use matchforge::matching::{enumerate_perfect_matchings, EnumerationLimits};
use proptest::prelude::*;

fn catalog() -> Vec<NamedGraph> {
    let mut v: Vec<NamedGraph> = NAMED_LABELS.iter().map(|l| named(l).unwrap()).collect();
    for n in 3..=9 {
        for k in 1..=(n - 1) / 2 {
            v.push(gp(n, k).unwrap());
        }
    }
    v
}

#[test]
fn flags_agree_with_classifier() {
    for ng in catalog() {
        let c = classify(&ng.graph, &Budget::default()).unwrap();
        assert!(c.cubic && c.bridgeless == Some(true), "{}", ng.name);
        if let Some(b) = ng.flags.bipartite {
            assert_eq!(c.bipartite, b, "{} bipartite", ng.name);
        }
        if let Some(h) = ng.flags.hamiltonian {
            assert_eq!(c.hamiltonian, h, "{} hamiltonian", ng.name);
        }
        if let Some(s) = ng.flags.snark {
            assert_eq!(c.snark, Some(s), "{} snark", ng.name);
        }
    }
}

#[test]
fn blanusa_snarks() {
    let (b1, b2) = (blanusa1().graph, blanusa2().graph);
    let lim = EnumerationLimits::default();
    for g in [&b1, &b2] {
        assert_eq!((g.n(), g.m()), (18, 27));
        assert_eq!(girth(g), Some(5));
        assert!(is_snark(g, &Budget::default()).unwrap());
    }
    // different perfect-matching counts: the two are not isomorphic
    let c1 = enumerate_perfect_matchings(&b1, &lim).unwrap().len();
    let c2 = enumerate_perfect_matchings(&b2, &lim).unwrap().len();
    assert_ne!(c1, c2);
}

#[test]
fn petersen_is_the_only_uncolourable_small_gp() {
    for n in 3..=10 {
        for k in 1..=(n - 1) / 2 {
            let g = gp(n, k).unwrap().graph;
            let t = tait_coloring(&g, &Budget::default()).unwrap();
            assert_eq!(t.is_none(), (n, k) == (5, 2), "G({n},{k})");
            if let Some(t) = t {
                assert!(t.is_valid(&g));
            }
        }
    }
}

#[test]
fn hamiltonicity() {
    let b = Budget::default();
    assert!(hamiltonian_cycle(&petersen().graph, &b).unwrap().is_none());
    let q = cube().graph;
    assert!(is_hamiltonian_cycle(&q, &hamiltonian_cycle(&q, &b).unwrap().unwrap()));
    let n = nauru().graph;
    assert!(is_hamiltonian_cycle(&n, &hamiltonian_cycle(&n, &b).unwrap().unwrap()));
}

#[test]
fn family_members_are_snarks() {
    for d in 0..=1 {
        let (g, m) = eta_third_family(d);
        assert!(is_snark(&g, &Budget::default()).unwrap(), "depth {d}");
        assert_eq!(10 * m.len(), 3 * g.n());
    }
}

#[test]
fn odd_cut_graph_shape() {
    let g = odd_cut_26().graph;
    assert!(bipartition(&g).is_some());
    let cut = g.delete(&[0, 1, 2, 3], &[]).unwrap();
    let comps = cut.graph.components();
    assert_eq!(comps.len(), 3);
    assert_eq!(comps.iter().filter(|c| c.is_odd()).count(), 2);
}

#[test]
fn spec_strings_and_round_trips() {
    for spec in ["petersen", "gp:7,3", "prism:5", "family:1", "oddcut26"] {
        let (g, _) = from_spec(spec).unwrap();
        let text = g.graph.to_edge_list_string();
        assert_eq!(Graph::parse_edge_list(&text).unwrap().edges(), g.graph.edges(), "{spec}");
        let g6 = g.graph.to_graph6();
        assert_eq!(Graph::from_graph6(&g6).unwrap().m(), g.graph.m());
    }
    assert!(from_spec("gp:5").is_err());
    assert!(from_spec("dodecahedron").is_err());
}

/// Brute-force bridge test: an edge is a bridge iff removing it
/// disconnects the graph.
fn brute_bridges(g: &Graph) -> Vec<usize> {
    (0..g.m()).filter(|&e| !g.delete(&[], &[e]).unwrap().graph.is_connected()).collect()
}

fn arb_connected() -> impl Strategy<Value = Graph> {
    (3usize..=9).prop_flat_map(|n| {
        let extra: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (proptest::collection::vec(0usize..1000, n - 1), proptest::sample::subsequence(extra.clone(), 0..=extra.len().min(4))).prop_map(
            move |(parents, more)| {
                let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1] % v, v)).collect();
                for p in more {
                    if !pairs.contains(&p) {
                        pairs.push(p);
                    }
                }
                Graph::from_edge_list(n, &pairs).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn bridge_finder_matches_brute_force(g in arb_connected()) {
        let brute = brute_bridges(&g);
        let found = find_bridge(&g).unwrap();
        prop_assert_eq!(found.is_none(), brute.is_empty());
        if let Some(b) = found {
            prop_assert!(brute.contains(&b));
        }
    }

    #[test]
    fn bridge_joins_have_bridges(a in 0usize..5, b in 0usize..5, e in 0usize..100, f in 0usize..100) {
        let pool = [k4(), k33(), cube(), petersen(), prism(3).unwrap()];
        let (g, h) = (&pool[a].graph, &pool[b].graph);
        let j: CubicGraph = bridge_join(g, e % g.m(), h, f % h.m()).unwrap();
        prop_assert!(!is_bridgeless(&j).unwrap());
    }

    #[test]
    fn joins_of_bridgeless_graphs_stay_bridgeless(a in 0usize..4, b in 0usize..4, e in 0usize..100, f in 0usize..100) {
        let pool = [k4(), k33(), cube(), petersen()];
        let (g, h) = (&pool[a].graph, &pool[b].graph);
        let (e, f) = (e % g.m(), f % h.m());
        let ((p, q), (r, s)) = (g.edge(e), h.edge(f));
        let j = edge_join(g, e, h, f, [(p, r), (q, s)]).unwrap();
        prop_assert!(is_bridgeless(&j).unwrap());
        let u = e % g.n();
        let v = f % h.n();
        let gn: Vec<usize> = g.neighbors(u).iter().map(|x| x.0).collect();
        let hn: Vec<usize> = h.neighbors(v).iter().map(|x| x.0).collect();
        let vj = vertex_join(g, u, h, v, [(gn[0], hn[0]), (gn[1], hn[1]), (gn[2], hn[2])]).unwrap();
        prop_assert!(is_bridgeless(&vj).unwrap());
        prop_assert_eq!(vj.n(), g.n() + h.n() - 2);
    }
}
