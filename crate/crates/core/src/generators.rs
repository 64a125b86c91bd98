//! Named cubic graphs and the graph-building operations used with them.
//!
//! Vertex numbering conventions:
//!
//! * `gp(n, k)`: outer vertices `u_i = i`, inner vertices `v_i = n + i`;
//!   edges are listed rim (`u_i u_{i+1}`), then spokes (`u_i v_i`), then
//!   inner (`v_i v_{i+k}`), each for `i = 0..n`.
//! * `dot_product`: the surviving vertices of `g` keep their relative
//!   order, followed by the vertices of `h`; the four joining edges come
//!   last.
//! * Blanuša snarks are dot products of two Petersen graphs with `x = 0`,
//!   `y = 1` in the first copy and the removed pair of edges taken at
//!   distance 2 (`blanusa1`) or distance 1 (`blanusa2`) in the second.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::graph::{CubicGraph, EdgeId, Graph, GraphError, Vertex};
use crate::matching::{for_each_maximal_matching, EnumerationLimits, Matching};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("unknown graph label `{0}`")]
    UnknownLabel(String),
    #[error("invalid join specification: {0}")]
    SpecInvalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Facts known from the construction itself; `None` means "not asserted".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub planar: Option<bool>,
    pub bipartite: Option<bool>,
    pub hamiltonian: Option<bool>,
    pub snark: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    pub name: String,
    pub graph: CubicGraph,
    pub flags: Flags,
}

/// JSON sidecar written next to generated edge lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub flags: Flags,
    /// Distinguished matching (edge ids), for family members.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<EdgeId>>,
}

impl NamedGraph {
    pub fn meta(&self) -> GraphMeta {
        GraphMeta {
            name: self.name.clone(),
            n: self.graph.n(),
            m: self.graph.m(),
            flags: self.flags,
            matching: None,
        }
    }
}

/// Generalised Petersen graph `G(n, k)`, `n ≥ 3`, `1 ≤ k ≤ (n-1)/2`.
pub fn gp(n: usize, k: usize) -> Result<NamedGraph, GenError> {
    if n < 3 || k < 1 || k > (n - 1) / 2 {
        return Err(GenError::BadParameters(format!("G({n},{k}) needs n >= 3 and 1 <= k <= (n-1)/2")));
    }
    let mut pairs = Vec::with_capacity(3 * n);
    pairs.extend((0..n).map(|i| (i, (i + 1) % n)));
    pairs.extend((0..n).map(|i| (i, n + i)));
    pairs.extend((0..n).map(|i| (n + i, n + (i + k) % n)));
    let graph = CubicGraph::from_edge_list(2 * n, &pairs)?;
    let flags = Flags {
        planar: (k == 1).then_some(true),
        bipartite: Some(n % 2 == 0 && k % 2 == 1),
        hamiltonian: (k == 1).then_some(true),
        snark: Some(n == 5 && k == 2),
    };
    Ok(NamedGraph { name: format!("gp:{n},{k}"), graph, flags })
}

pub fn k4() -> NamedGraph {
    let graph = CubicGraph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("K4");
    NamedGraph {
        name: "k4".into(),
        graph,
        flags: Flags { planar: Some(true), bipartite: Some(false), hamiltonian: Some(true), snark: Some(false) },
    }
}

/// `K_{3,3}` with parts `{0,1,2}` and `{3,4,5}`.
pub fn k33() -> NamedGraph {
    let pairs: Vec<_> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    NamedGraph {
        name: "k33".into(),
        graph: CubicGraph::from_edge_list(6, &pairs).expect("K33"),
        flags: Flags { planar: Some(false), bipartite: Some(true), hamiltonian: Some(true), snark: Some(false) },
    }
}

/// Complete bipartite `K_{n,n}` (not cubic unless `n = 3`), parts `0..n`
/// and `n..2n`.
pub fn complete_bipartite(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).flat_map(|i| (n..2 * n).map(move |j| (i, j))).collect();
    Graph::from_edge_list(2 * n, &pairs).expect("K_{n,n}")
}

/// Path on `len + 1` vertices.
pub fn path(len: usize) -> Graph {
    let pairs: Vec<_> = (0..len).map(|i| (i, i + 1)).collect();
    Graph::from_edge_list(len + 1, &pairs).expect("path")
}

pub fn cube() -> NamedGraph {
    let mut g = gp(4, 1).expect("G(4,1)");
    g.name = "cube".into();
    g
}

pub fn prism(n: usize) -> Result<NamedGraph, GenError> {
    let mut g = gp(n, 1)?;
    g.name = format!("prism:{n}");
    Ok(g)
}

pub fn petersen() -> NamedGraph {
    let mut g = gp(5, 2).expect("G(5,2)");
    g.name = "petersen".into();
    g.flags.planar = Some(false);
    g.flags.hamiltonian = Some(false);
    g
}

pub fn nauru() -> NamedGraph {
    let mut g = gp(12, 5).expect("G(12,5)");
    g.name = "nauru".into();
    g.flags.planar = Some(false);
    g.flags.hamiltonian = Some(true);
    g
}

fn blanusa(name: &str, h_edges: [(Vertex, Vertex); 2]) -> NamedGraph {
    let p = petersen().graph;
    let spec = DotProductSpec {
        g: p.clone(),
        x: 0,
        y: 1,
        x_neighbors: [4, 5],
        y_neighbors: [2, 6],
        h: p,
        a: h_edges[0],
        b: h_edges[1],
    };
    let graph = dot_product(&spec).expect("Blanuša dot product is valid");
    NamedGraph {
        name: name.into(),
        graph,
        flags: Flags { planar: Some(false), bipartite: Some(false), hamiltonian: Some(false), snark: Some(true) },
    }
}

/// First Blanuša snark: removed edges `0-1` and `7-9` of the second
/// Petersen copy, at distance 2.
pub fn blanusa1() -> NamedGraph {
    blanusa("blanusa1", [(0, 1), (7, 9)])
}

/// Second Blanuša snark: removed edges `0-1` and `2-3` of the second
/// Petersen copy, at distance 1.
pub fn blanusa2() -> NamedGraph {
    blanusa("blanusa2", [(0, 1), (2, 3)])
}

/// 26-vertex bipartite cubic graph with two edges `e1 = 0`, `e2 = 1` whose
/// four endpoints separate it into three components, two of them odd.
///
/// Layout: `a1=0 b1=1 a2=2 b2=3` (edges `a1b1`, `a2b2`); an odd block
/// `4..=10` with one surplus black vertex hanging off `b1, b2`; its mirror
/// `11..=17` hanging off `a1, a2`; a cube minus one edge on `18..=25`
/// attached to `b2` and `a2`.
pub fn odd_cut_26() -> NamedGraph {
    let mut pairs = vec![(0, 1), (2, 3)];
    // odd block: blacks 4..=7, whites 8..=10
    pairs.extend([(8, 4), (8, 5), (8, 6), (9, 4), (9, 5), (9, 7), (10, 4), (10, 6), (10, 7)]);
    // mirrored block: whites 11..=14, blacks 15..=17
    pairs.extend([(15, 11), (15, 12), (15, 13), (16, 11), (16, 12), (16, 14), (17, 11), (17, 13), (17, 14)]);
    // cut edges
    pairs.extend([(1, 5), (1, 6), (3, 7), (0, 12), (0, 13), (2, 14)]);
    // cube on 18..=25 minus its edge 18-19
    let cube = gp(4, 1).expect("cube");
    pairs.extend(cube.graph.edges().iter().filter(|&&e| e != (0, 1)).map(|&(u, v)| (u + 18, v + 18)));
    pairs.extend([(3, 18), (2, 19)]);
    NamedGraph {
        name: "oddcut26".into(),
        graph: CubicGraph::from_edge_list(26, &pairs).expect("odd-cut graph is cubic"),
        flags: Flags { bipartite: Some(true), snark: Some(false), ..Flags::default() },
    }
}

pub const NAMED_LABELS: &[&str] = &["k4", "k33", "cube", "petersen", "nauru", "blanusa1", "blanusa2", "oddcut26"];

pub fn named(label: &str) -> Result<NamedGraph, GenError> {
    Ok(match label {
        "k4" => k4(),
        "k33" => k33(),
        "cube" => cube(),
        "petersen" => petersen(),
        "nauru" => nauru(),
        "blanusa1" => blanusa1(),
        "blanusa2" => blanusa2(),
        "oddcut26" => odd_cut_26(),
        other => return Err(GenError::UnknownLabel(other.to_string())),
    })
}

/// Parses `label`, `gp:n,k`, `prism:n` or `family:depth`.
pub fn from_spec(spec: &str) -> Result<(NamedGraph, Option<Matching>), GenError> {
    let bad = || GenError::BadParameters(format!("cannot parse `{spec}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some(rest) = spec.strip_prefix("gp:") {
        let (n, k) = rest.split_once(',').ok_or_else(bad)?;
        return Ok((gp(num(n)?, num(k)?)?, None));
    }
    if let Some(rest) = spec.strip_prefix("prism:") {
        return Ok((prism(num(rest)?)?, None));
    }
    if let Some(rest) = spec.strip_prefix("family:") {
        let depth = num(rest)?;
        if depth > 16 {
            return Err(GenError::BadParameters("family depth above 16".into()));
        }
        let (graph, m) = eta_third_family(depth);
        let named = NamedGraph {
            name: format!("family:{depth}"),
            graph,
            flags: Flags { snark: Some(true), bipartite: Some(false), ..Flags::default() },
        };
        return Ok((named, Some(m)));
    }
    Ok((named(spec)?, None))
}

/// Dot product of `g` and `h`: delete adjacent `x, y` from `g` and the
/// disjoint edges `a = a0a1`, `b = b0b1` from `h`, then join
/// `a0–x_neighbors[0]`, `a1–x_neighbors[1]`, `b0–y_neighbors[0]`,
/// `b1–y_neighbors[1]`.
#[derive(Debug, Clone)]
pub struct DotProductSpec {
    pub g: CubicGraph,
    pub x: Vertex,
    pub y: Vertex,
    /// The two neighbours of `x` other than `y`, in joining order.
    pub x_neighbors: [Vertex; 2],
    /// The two neighbours of `y` other than `x`, in joining order.
    pub y_neighbors: [Vertex; 2],
    pub h: CubicGraph,
    pub a: (Vertex, Vertex),
    pub b: (Vertex, Vertex),
}

fn other_neighbors(g: &Graph, v: Vertex, excluded: Vertex) -> Vec<Vertex> {
    g.neighbors(v).iter().map(|&(w, _)| w).filter(|&w| w != excluded).collect()
}

fn same_pair(mut p: [Vertex; 2], mut q: Vec<Vertex>) -> bool {
    p.sort_unstable();
    q.sort_unstable();
    q.as_slice() == p
}

pub fn dot_product(spec: &DotProductSpec) -> Result<CubicGraph, GenError> {
    let inv = |m: &str| Err(GenError::SpecInvalid(m.to_string()));
    let (g, h) = (&spec.g, &spec.h);
    g.check_vertex(spec.x)?;
    g.check_vertex(spec.y)?;
    if g.edge_between(spec.x, spec.y).is_none() {
        return inv("x and y are not adjacent");
    }
    if !same_pair(spec.x_neighbors, other_neighbors(g, spec.x, spec.y))
        || !same_pair(spec.y_neighbors, other_neighbors(g, spec.y, spec.x))
    {
        return inv("pairing does not list the other neighbours of x and y");
    }
    let xy_nbrs = [spec.x_neighbors[0], spec.x_neighbors[1], spec.y_neighbors[0], spec.y_neighbors[1]];
    if (0..4).any(|i| (i + 1..4).any(|j| xy_nbrs[i] == xy_nbrs[j])) {
        return inv("x and y share a neighbour");
    }
    let (Some(ea), Some(eb)) = (h.edge_between(spec.a.0, spec.a.1), h.edge_between(spec.b.0, spec.b.1)) else {
        return inv("a or b is not an edge of h");
    };
    let ends = [spec.a.0, spec.a.1, spec.b.0, spec.b.1];
    if (0..4).any(|i| (i + 1..4).any(|j| ends[i] == ends[j])) {
        return inv("edges a and b share an endpoint");
    }
    let gs = g.delete(&[spec.x, spec.y], &[])?;
    let hs = h.delete(&[], &[ea, eb])?;
    let g_new = |v: Vertex| gs.vertex_map.iter().position(|&o| o == v).expect("surviving vertex");
    let off = gs.graph.n();
    let mut pairs: Vec<(Vertex, Vertex)> = gs.graph.edges().to_vec();
    pairs.extend(hs.graph.edges().iter().map(|&(u, v)| (u + off, v + off)));
    for (hv, gv) in [
        (spec.a.0, spec.x_neighbors[0]),
        (spec.a.1, spec.x_neighbors[1]),
        (spec.b.0, spec.y_neighbors[0]),
        (spec.b.1, spec.y_neighbors[1]),
    ] {
        pairs.push((g_new(gv), hv + off));
    }
    Ok(CubicGraph::from_edge_list(off + hs.graph.n(), &pairs)?)
}

/// Deletes `u` from `g` and `v` from `h` and joins their former
/// neighbourhoods by `pairing` (neighbour of `u`, neighbour of `v`).
/// Vertices of `g - u` come first, then those of `h - v`.
pub fn vertex_join(
    g: &CubicGraph,
    u: Vertex,
    h: &CubicGraph,
    v: Vertex,
    pairing: [(Vertex, Vertex); 3],
) -> Result<CubicGraph, GenError> {
    g.check_vertex(u)?;
    h.check_vertex(v)?;
    let gn: Vec<Vertex> = g.neighbors(u).iter().map(|&(w, _)| w).collect();
    let hn: Vec<Vertex> = h.neighbors(v).iter().map(|&(w, _)| w).collect();
    let mut left: Vec<Vertex> = pairing.iter().map(|p| p.0).collect();
    let mut right: Vec<Vertex> = pairing.iter().map(|p| p.1).collect();
    left.sort_unstable();
    right.sort_unstable();
    if left != gn || right != hn {
        return Err(GenError::SpecInvalid("pairing must biject the neighbours of u and v".into()));
    }
    let gs = g.delete(&[u], &[])?;
    let hs = h.delete(&[v], &[])?;
    let renum = |map: &[Vertex], x: Vertex| map.iter().position(|&o| o == x).expect("surviving vertex");
    let off = gs.graph.n();
    let mut pairs = gs.graph.edges().to_vec();
    pairs.extend(hs.graph.edges().iter().map(|&(a, b)| (a + off, b + off)));
    for (a, b) in pairing {
        pairs.push((renum(&gs.vertex_map, a), renum(&hs.vertex_map, b) + off));
    }
    Ok(CubicGraph::from_edge_list(off + hs.graph.n(), &pairs)?)
}

/// Deletes edge `e` from `g` and `f` from `h` and reconnects through two
/// new edges given as (endpoint of `e`, endpoint of `f`). Vertices of `g`
/// come first, then those of `h`.
pub fn edge_join(
    g: &CubicGraph,
    e: EdgeId,
    h: &CubicGraph,
    f: EdgeId,
    pairing: [(Vertex, Vertex); 2],
) -> Result<CubicGraph, GenError> {
    g.check_edge(e)?;
    h.check_edge(f)?;
    let (p, q) = g.edge(e);
    let (r, s) = h.edge(f);
    let ok = same_pair([pairing[0].0, pairing[1].0], vec![p, q]) && same_pair([pairing[0].1, pairing[1].1], vec![r, s]);
    if !ok {
        return Err(GenError::SpecInvalid("pairing must match the endpoints of e and f".into()));
    }
    let gs = g.delete(&[], &[e])?;
    let hs = h.delete(&[], &[f])?;
    let off = g.n();
    let mut pairs = gs.graph.edges().to_vec();
    pairs.extend(hs.graph.edges().iter().map(|&(a, b)| (a + off, b + off)));
    for (a, b) in pairing {
        pairs.push((a, b + off));
    }
    Ok(CubicGraph::from_edge_list(off + h.n(), &pairs)?)
}

/// Subdivides `e` in `g` and `f` in `h` and joins the two new vertices by
/// a bridge. The new vertices are `g.n() + h.n()` and `g.n() + h.n() + 1`;
/// the bridge is the last edge.
pub fn bridge_join(g: &CubicGraph, e: EdgeId, h: &CubicGraph, f: EdgeId) -> Result<CubicGraph, GenError> {
    g.check_edge(e)?;
    h.check_edge(f)?;
    let off = g.n();
    let s = g.n() + h.n();
    let t = s + 1;
    let mut pairs = Vec::with_capacity(g.m() + h.m() + 3);
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if i == e {
            pairs.extend([(u, s), (s, v)]);
        } else {
            pairs.push((u, v));
        }
    }
    for (i, &(u, v)) in h.edges().iter().enumerate() {
        if i == f {
            pairs.extend([(u + off, t), (t, v + off)]);
        } else {
            pairs.push((u + off, v + off));
        }
    }
    pairs.push((s, t));
    Ok(CubicGraph::from_edge_list(t + 1, &pairs)?)
}

/// The size-3 maximal matching of the Petersen graph used to seed the
/// one-third family: the lexicographically first maximal matching with
/// three edges.
pub fn petersen_third_matching() -> Matching {
    let g = petersen().graph;
    let mut found = None;
    for_each_maximal_matching(&g, &EnumerationLimits::default(), |ids| {
        if ids.len() == 3 && found.as_ref().is_none_or(|f: &Vec<EdgeId>| ids < f.as_slice()) {
            found = Some(ids.to_vec());
        }
        ControlFlow::Continue(())
    })
    .expect("Petersen enumeration is tiny");
    Matching::new(&g, found.expect("Petersen has a 3-edge maximal matching")).expect("valid")
}

/// Member `depth` of the infinite family of snarks whose distinguished
/// maximal matching has `3|V|/10` edges.
///
/// Depth 0 is the Petersen graph with [`petersen_third_matching`]. Depth
/// `d` takes two copies of depth `d-1`, removes the first non-matching
/// edge `uv` (`u` saturated) from the first copy and `xy` (`x` saturated)
/// from the second, and adds `uy` and `vx`.
pub fn eta_third_family(depth: usize) -> (CubicGraph, Matching) {
    let mut g = petersen().graph;
    let mut m = petersen_third_matching();
    for _ in 0..depth {
        let sat = m.saturated(&g);
        let e = (0..g.m()).find(|&e| !m.contains(e)).expect("non-matching edge exists");
        let (p, q) = g.edge(e);
        let (u, v) = if sat[p] { (p, q) } else { (q, p) };
        debug_assert!(sat[u] && !sat[v]);
        let off = g.n();
        let mut pairs = Vec::with_capacity(2 * g.m());
        let mut remap = vec![usize::MAX; g.m()];
        for copy in 0..2 {
            for (i, &(a, b)) in g.edges().iter().enumerate() {
                if i == e {
                    continue;
                }
                if copy == 0 {
                    remap[i] = pairs.len();
                }
                pairs.push((a + copy * off, b + copy * off));
            }
        }
        let second_base = g.m() - 1;
        pairs.push((u, v + off));
        pairs.push((v, u + off));
        let mut ids: Vec<EdgeId> = m.ids().iter().map(|&i| remap[i]).collect();
        ids.extend(m.ids().iter().map(|&i| remap[i] + second_base));
        let next = CubicGraph::from_edge_list(2 * off, &pairs).expect("family member is cubic");
        m = Matching::new(&next, ids).expect("union of matchings in disjoint copies");
        g = next;
    }
    (g, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{girth, is_bridgeless};

    #[test]
    fn gp_sizes_and_errors() {
        let q = gp(4, 1).unwrap();
        assert_eq!((q.graph.n(), q.graph.m()), (8, 12));
        let n = nauru();
        assert_eq!((n.graph.n(), n.graph.m()), (24, 36));
        assert!(gp(5, 3).is_err());
        assert!(gp(2, 1).is_err());
        assert_eq!(petersen().graph.edges(), gp(5, 2).unwrap().graph.edges());
    }

    #[test]
    fn labels() {
        for l in NAMED_LABELS {
            assert_eq!(named(l).unwrap().name, *l);
        }
        assert!(matches!(named("heawood"), Err(GenError::UnknownLabel(_))));
        assert_eq!(named("blanusa1").unwrap().graph.n(), 18);
    }

    #[test]
    fn dot_product_rejects_bad_specs() {
        let p = petersen().graph;
        let mut spec = DotProductSpec {
            g: p.clone(),
            x: 0,
            y: 2,
            x_neighbors: [4, 5],
            y_neighbors: [3, 7],
            h: p.clone(),
            a: (0, 1),
            b: (7, 9),
        };
        assert!(matches!(dot_product(&spec), Err(GenError::SpecInvalid(_))));
        spec.y = 1;
        spec.y_neighbors = [2, 6];
        spec.b = (1, 2);
        assert!(matches!(dot_product(&spec), Err(GenError::SpecInvalid(_))));
        spec.b = (7, 9);
        let g = dot_product(&spec).unwrap();
        assert_eq!(g.n(), 18);
        assert_eq!(girth(&g), Some(5));
    }

    #[test]
    fn joins() {
        let c = cube().graph;
        let nb: Vec<_> = c.neighbors(0).iter().map(|&(w, _)| w).collect();
        let vj = vertex_join(&c, 0, &c, 0, [(nb[0], nb[0]), (nb[1], nb[1]), (nb[2], nb[2])]).unwrap();
        assert_eq!(vj.n(), 14);
        assert!(is_bridgeless(&vj).unwrap());
        let (p, q) = c.edge(0);
        let ej = edge_join(&c, 0, &c, 0, [(p, p), (q, q)]).unwrap();
        assert_eq!(ej.n(), 16);
        assert!(is_bridgeless(&ej).unwrap());
        assert!(vertex_join(&c, 0, &c, 0, [(nb[0], nb[0]), (nb[0], nb[1]), (nb[2], nb[2])]).is_err());
    }

    #[test]
    fn bridge_join_has_a_bridge() {
        let g = bridge_join(&k4().graph, 0, &k4().graph, 0).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(crate::classify::find_bridge(&g).unwrap(), Some(g.m() - 1));
    }

    #[test]
    fn family_counts() {
        for d in 0..3 {
            let (g, m) = eta_third_family(d);
            assert_eq!(g.n(), 10 << d);
            assert_eq!(m.len(), 3 << d);
            assert!(m.is_maximal(&g));
            let sat = m.saturated(&g);
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                if !m.contains(e) {
                    assert!(sat[u] ^ sat[v]);
                }
            }
        }
    }
}
