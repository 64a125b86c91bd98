//! The certificate suite behind `matchforge reproduce`: every published
//! value and bound recomputed and checked, one line per criterion.

use std::time::{Duration, Instant};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::classify::{girth, hamiltonian_cycle, is_bridgeless, is_hamiltonian_cycle, is_independent, is_snark, tait_coloring};
use crate::eta::{
    berge_witness, cap_certificate, eta_exact, find_cap_matching, find_lemma3_matching, is_eta_one, is_eta_zero,
    lemma3_best_bound, lemma3_certificate, verify, BoundCertificate, CertData, EtaOptions,
};
use crate::generators::{
    blanusa1, blanusa2, bridge_join, complete_bipartite, cube, eta_third_family, gp, k33, k4, nauru, path,
    petersen, petersen_third_matching, prism, NamedGraph,
};
use crate::graph::{CubicGraph, Graph};
use crate::matching::engine::{BlossomEngine, EnumerationEngine};
use crate::matching::{edge_multiplicity, enumerate_perfect_matchings, EnumerationLimits, MatchingEngine};
use crate::mesh::{dual_graph, icosahedron, quadrangulate, tetrahedron, Mode};
use crate::rational::{ratio, Rational, Show};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

type Check = fn(u64) -> Result<String, String>;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit: Duration,
    check: Check,
}

impl Criterion {
    pub fn run(&self, seed: u64) -> Outcome {
        let start = Instant::now();
        let result = (self.check)(seed);
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if passed && elapsed > self.limit {
            passed = false;
            detail = format!("{detail}; took {elapsed:?}, limit {:?}", self.limit);
        }
        Outcome {
            id: self.id,
            title: self.title.to_string(),
            passed,
            detail,
            elapsed_ms: elapsed.as_millis(),
            limit_ms: self.limit.as_millis(),
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn verified(c: &BoundCertificate, g: &Graph) -> Result<(), String> {
    verify(c, g).map_err(e2s)
}

fn unsaturated_count(c: &BoundCertificate) -> usize {
    match &c.data {
        CertData::Lemma3Upper { unsaturated, .. } => unsaturated.len(),
        _ => usize::MAX,
    }
}

fn c1_petersen_eta(_: u64) -> Result<String, String> {
    let g = petersen().graph;
    let r = eta_exact(&g).map_err(e2s)?;
    ensure(r.value == ratio(1, 3), || format!("eta = {}", Show(&r.value)))?;
    ensure(r.recheck(&g), || "witness weights do not reproduce 1/3".into())?;
    Ok(format!("eta(Petersen) = 1/3 over {} maximal matchings", r.maximal_count))
}

fn c2_k33(_: u64) -> Result<String, String> {
    let g = k33().graph;
    let r = eta_exact(&g).map_err(e2s)?;
    ensure(r.value.is_one(), || format!("eta = {}", Show(&r.value)))?;
    ensure(is_eta_one(&g).is_none(), || "found a non-perfect maximal matching".into())?;
    Ok("eta(K33) = 1".into())
}

fn c3_path(_: u64) -> Result<String, String> {
    let g = path(3);
    let r = eta_exact(&g).map_err(e2s)?;
    ensure(r.value.is_zero(), || format!("eta = {}", Show(&r.value)))?;
    let e = is_eta_zero(&g).map_err(e2s)?;
    ensure(e == Some(1), || format!("zero witness {e:?}"))?;
    Ok("eta(P4) = 0, middle edge in no perfect matching".into())
}

/// Best Lemma-3 bound by searching independent sets from the largest
/// admissible size down; the first hit is optimal since the bound
/// decreases with |S|.
fn lemma3_by_sets(g: &Graph) -> Result<BoundCertificate, String> {
    for s in (1..=g.n() / 2).rev() {
        if let Some(m) = find_lemma3_matching(g, s, &Budget::default()).map_err(e2s)? {
            return lemma3_certificate(g, &m).map_err(e2s);
        }
    }
    Err("no maximal matching leaves a vertex exposed".into())
}

fn c4_lemma3(_: u64) -> Result<String, String> {
    let lim = EnumerationLimits::default();
    let mut out = Vec::new();
    for (ng, want, s) in [(petersen(), ratio(1, 3), 4), (blanusa2(), ratio(1, 2), 6), (k4(), Rational::one(), 0)] {
        let c = lemma3_best_bound(&ng.graph, &lim).map_err(e2s)?;
        verified(&c, &ng.graph)?;
        ensure(c.bound == want && unsaturated_count(&c) == s, || {
            format!("{}: bound {} with |S| = {}", ng.name, Show(&c.bound), unsaturated_count(&c))
        })?;
        out.push(format!("{} {}", ng.name, Show(&c.bound)));
    }
    let g = nauru().graph;
    let c = if cfg!(feature = "long-running") {
        let wide = EnumerationLimits { maximal_max_n: g.n(), ..lim };
        lemma3_best_bound(&g, &wide).map_err(e2s)?
    } else {
        lemma3_by_sets(&g)?
    };
    verified(&c, &g)?;
    ensure(c.bound == ratio(1, 2) && unsaturated_count(&c) == 8, || {
        format!("nauru: bound {} with |S| = {}", Show(&c.bound), unsaturated_count(&c))
    })?;
    out.push("nauru 1/2".into());
    Ok(out.join(", "))
}

fn cap(g: &Graph, m: &crate::matching::Matching) -> Result<(usize, Rational), String> {
    let c = cap_certificate(g, m).map_err(e2s)?;
    verified(&c, g)?;
    match c.data {
        CertData::CapUpper { cap, .. } => Ok((cap, c.bound)),
        _ => Err("wrong certificate kind".into()),
    }
}

fn c5_caps(_: u64) -> Result<String, String> {
    let lim = EnumerationLimits::default();
    let q = cube().graph;
    let l3 = lemma3_best_bound(&q, &lim).map_err(e2s)?;
    let CertData::Lemma3Upper { matching, .. } = &l3.data else { return Err("wrong kind".into()) };
    let m = crate::matching::Matching::new(&q, matching.clone()).map_err(e2s)?;
    let (c, b) = cap(&q, &m)?;
    ensure(m.len() == 3 && c == 2 && b == ratio(2, 3), || format!("cube: |M| = {}, cap {c}", m.len()))?;
    let p = petersen().graph;
    let (c, b) = cap(&p, &petersen_third_matching())?;
    ensure(c == 1 && b == ratio(1, 3), || format!("petersen: cap {c}"))?;
    let mut out = vec!["cube 2/3".to_string(), "petersen 1/3".to_string()];
    for (ng, size, target, want) in [(blanusa1(), 5, 2, ratio(2, 5)), (blanusa2(), 6, 4, ratio(2, 3))] {
        let m = find_cap_matching(&ng.graph, size, target, &lim)
            .map_err(e2s)?
            .ok_or_else(|| format!("{}: no matching of size {size} with cap {target}", ng.name))?;
        let (_, b) = cap(&ng.graph, &m)?;
        ensure(b == want, || format!("{}: bound {}", ng.name, Show(&b)))?;
        out.push(format!("{} {} via {:?}", ng.name, Show(&b), m.ids()));
    }
    Ok(out.join(", "))
}

/// Bridgeless cubic catalog graphs with at most 20 vertices.
pub fn small_cubic_catalog() -> Vec<NamedGraph> {
    let mut v = vec![k4(), k33(), cube(), petersen(), blanusa1(), blanusa2()];
    for n in 3..=10 {
        for k in 1..=(n - 1) / 2 {
            if (n, k) != (4, 1) && (n, k) != (5, 2) {
                v.push(gp(n, k).expect("valid parameters"));
            }
        }
    }
    v
}

fn c6_berge(_: u64) -> Result<String, String> {
    let opts = EtaOptions::default();
    let mut graphs = small_cubic_catalog();
    let (f1, _) = eta_third_family(1);
    graphs.push(NamedGraph { name: "family:1".into(), graph: f1, flags: Default::default() });
    for ng in &graphs {
        let c = berge_witness(&ng.graph, &opts).map_err(|e| format!("{}: {e}", ng.name))?;
        verified(&c, &ng.graph).map_err(|e| format!("{}: {e}", ng.name))?;
        ensure(c.bound == ratio(1, 3), || format!("{}: bound {}", ng.name, Show(&c.bound)))?;
    }
    let p = petersen().graph;
    let c = berge_witness(&p, &opts).map_err(e2s)?;
    let CertData::BergeLower { k, matchings } = &c.data else { return Err("wrong kind".into()) };
    let pms = enumerate_perfect_matchings(&p, &EnumerationLimits::default()).map_err(e2s)?;
    let cover = edge_multiplicity(&p, pms.iter().map(|m| (m, 1)));
    ensure(pms.len() == 6 && cover.values().all(|&c| c == 2), || "Petersen enumeration oracle".into())?;
    ensure(*k == 2 && matchings.len() == 6 && matchings.iter().all(|m| m.multiplicity == 1), || {
        format!("Petersen witness k = {k} with {} matchings", matchings.len())
    })?;
    Ok(format!("{} graphs; Petersen k = 2 over its 6 perfect matchings", graphs.len()))
}

fn random_bridged(rng: &mut ChaCha8Rng) -> CubicGraph {
    let pool = [k4(), k33(), cube(), petersen(), prism(3).expect("prism")];
    let g = &pool[rng.gen_range(0..pool.len())].graph;
    let h = &pool[rng.gen_range(0..pool.len())].graph;
    bridge_join(g, rng.gen_range(0..g.m()), h, rng.gen_range(0..h.m())).expect("bridge join")
}

fn c7_equivalences(seed: u64) -> Result<String, String> {
    let mut graphs: Vec<(String, Graph)> = vec![
        ("k4".into(), k4().graph.into_graph()),
        ("k33".into(), k33().graph.into_graph()),
        ("cube".into(), cube().graph.into_graph()),
        ("petersen".into(), petersen().graph.into_graph()),
        ("path3".into(), path(3)),
        ("path5".into(), path(5)),
        ("k44".into(), complete_bipartite(4)),
        ("bridged-k4".into(), bridge_join(&k4().graph, 0, &k4().graph, 0).expect("join").into_graph()),
    ];
    for n in 3..=5 {
        graphs.push((format!("prism:{n}"), prism(n).expect("prism").graph.into_graph()));
    }
    for (name, g) in &graphs {
        let r = eta_exact(g).map_err(|e| format!("{name}: {e}"))?;
        let zero = is_eta_zero(g).map_err(e2s)?.is_some();
        let one = is_eta_one(g).is_none();
        ensure(r.value.is_zero() == zero, || format!("{name}: eta {} but zero test {zero}", Show(&r.value)))?;
        ensure(r.value.is_one() == one, || format!("{name}: eta {} but one test {one}", Show(&r.value)))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50 {
        let g = random_bridged(&mut rng);
        ensure(!is_bridgeless(&g).map_err(e2s)?, || format!("bridged graph {i} has no bridge"))?;
        let w = is_eta_zero(&g).map_err(e2s)?;
        let bridge = crate::classify::find_bridge(&g).map_err(e2s)?.expect("bridge");
        let (a, b) = g.edge(bridge);
        let adjacent = w.is_some_and(|e| {
            let (u, v) = g.edge(e);
            e != bridge && [u, v].iter().any(|x| *x == a || *x == b)
        });
        ensure(adjacent, || format!("bridged graph {i}: zero witness {w:?} is not next to the bridge"))?;
    }
    Ok(format!("{} catalog graphs consistent; 50 bridged graphs have eta 0", graphs.len()))
}

fn c8_family(_: u64) -> Result<String, String> {
    let depths: &[usize] = if cfg!(feature = "long-running") { &[0, 1, 2] } else { &[0, 1] };
    for d in 0..=2usize {
        let (g, m) = eta_third_family(d);
        ensure(10 * m.len() == 3 * g.n(), || format!("depth {d}: |M| = {}, |V| = {}", m.len(), g.n()))?;
        let s = crate::matching::unsaturated(&g, &m);
        ensure(m.is_maximal(&g) && is_independent(&g, &s), || format!("depth {d}: M not maximal"))?;
        let c = lemma3_certificate(&g, &m).map_err(e2s)?;
        verified(&c, &g)?;
        ensure(c.bound == ratio(1, 3), || format!("depth {d}: bound {}", Show(&c.bound)))?;
        if depths.contains(&d) {
            ensure(is_snark(&g, &Budget::default()).map_err(e2s)?, || format!("depth {d} is not a snark"))?;
        }
    }
    Ok(format!("depths 0..=2 counted, snark check at depths {depths:?}"))
}

fn c9_classifier(_: u64) -> Result<String, String> {
    let b = Budget::default();
    ensure(tait_coloring(&petersen().graph, &b).map_err(e2s)?.is_none(), || "Petersen coloured".into())?;
    let mut count = 0;
    for n in 3..=10 {
        for k in 1..=(n - 1) / 2 {
            if (n, k) == (5, 2) {
                continue;
            }
            let g = gp(n, k).map_err(e2s)?.graph;
            let t = tait_coloring(&g, &Budget::default()).map_err(e2s)?;
            ensure(t.is_some_and(|t| t.is_valid(&g)), || format!("G({n},{k}) not coloured"))?;
            count += 1;
        }
    }
    ensure(hamiltonian_cycle(&petersen().graph, &b).map_err(e2s)?.is_none(), || "Petersen hamiltonian".into())?;
    let q = cube().graph;
    let h = hamiltonian_cycle(&q, &b).map_err(e2s)?;
    ensure(h.is_some_and(|h| is_hamiltonian_cycle(&q, &h)), || "cube has no hamiltonian cycle".into())?;
    ensure(girth(&petersen().graph) == Some(5), || "Petersen girth".into())?;
    Ok(format!("{count} generalised Petersen graphs coloured"))
}

/// Random nonnegative rationals `a/b`, `0 ≤ a ≤ 20`, `1 ≤ b ≤ 10`.
pub fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| ratio(rng.gen_range(0..=20), rng.gen_range(1..=10))).collect()
}

fn c10_engines(seed: u64) -> Result<String, String> {
    let mut graphs: Vec<Graph> = small_cubic_catalog().into_iter().filter(|g| g.graph.n() <= 12).map(|g| g.graph.into_graph()).collect();
    graphs.push(path(5));
    graphs.push(complete_bipartite(4));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let en = EnumerationEngine { limits: EnumerationLimits::default() };
    let total = |w: &[Rational], ids: &[usize]| ids.iter().fold(Rational::zero(), |a, &e| a + &w[e]);
    for g in &graphs {
        for draw in 0..200 {
            let w = random_weights(&mut rng, g.m());
            let a = BlossomEngine.max_weight(g, &w).map_err(e2s)?;
            let b = en.max_weight(g, &w).map_err(e2s)?;
            ensure(total(&w, a.ids()) == total(&w, b.ids()), || format!("n = {} draw {draw}: max weight differs", g.n()))?;
            let a = BlossomEngine.max_weight_perfect(g, &w).map_err(e2s)?;
            let b = en.max_weight_perfect(g, &w).map_err(e2s)?;
            ensure(total(&w, a.ids()) == total(&w, b.ids()), || format!("n = {} draw {draw}: perfect differs", g.n()))?;
        }
    }
    Ok(format!("{} graphs x 200 draws agree", graphs.len()))
}

fn c11_mesh(seed: u64) -> Result<String, String> {
    let t = dual_graph(&tetrahedron()).map_err(e2s)?;
    ensure(t.graph.n() == 4 && t.graph.m() == 6, || "tetrahedron dual is not K4".into())?;
    let ico = icosahedron();
    let d = dual_graph(&ico).map_err(e2s)?;
    ensure(d.graph.n() == 20 && is_bridgeless(&d.graph).map_err(e2s)?, || "icosahedron dual".into())?;
    let (_, r) = quadrangulate(&ico, Mode::Perfect, None).map_err(e2s)?;
    ensure(r.n_quads == 10 && r.n_leftover == 0, || format!("{} quads, {} leftovers", r.n_quads, r.n_leftover))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Rational::one();
    for i in 0..1000 {
        let w = random_weights(&mut rng, d.graph.m());
        let (_, r) = quadrangulate(&ico, Mode::Maximum, Some(&w)).map_err(e2s)?;
        ensure(r.ratio >= ratio(1, 3) && r.ratio <= Rational::one(), || format!("draw {i}: ratio {}", Show(&r.ratio)))?;
        worst = worst.min(r.ratio);
    }
    Ok(format!("icosahedron: 10 quads; worst ratio over 1000 draws {}", Show(&worst)))
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, secs, check| Criterion { id, title, limit: Duration::from_secs(secs), check };
    vec![
        c(1, "eta(Petersen) = 1/3 with witness weights", 30, c1_petersen_eta as Check),
        c(2, "eta(K33) = 1 and no non-perfect maximal matching", 5, c2_k33),
        c(3, "eta(path of length 3) = 0", 1, c3_path),
        c(4, "Lemma-3 bounds: Petersen, Nauru, Blanusa 2, K4", 120, c4_lemma3),
        c(5, "cap certificates: cube, Petersen, Blanusa 1 and 2", 180, c5_caps),
        c(6, "Berge witnesses on bridgeless cubic graphs up to 20 vertices", 60, c6_berge),
        c(7, "eta = 0 and eta = 1 characterisations; bridged graphs", 120, c7_equivalences),
        c(8, "one-third snark family, depths 0 to 2", 120, c8_family),
        c(9, "Tait colourings and hamiltonian cycles", 60, c9_classifier),
        c(10, "blossom agrees with enumeration", 180, c10_engines),
        c(11, "mesh quadrangulation ratios", 120, c11_mesh),
    ]
}

/// Runs the selected criteria (all when `only` is empty) in order.
pub fn run(only: &[u32], seed: u64) -> Vec<Outcome> {
    criteria().iter().filter(|c| only.is_empty() || only.contains(&c.id)).map(|c| c.run(seed)).collect()
}
