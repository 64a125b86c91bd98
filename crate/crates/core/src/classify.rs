//! Structural predicates: bridges, bipartiteness, Tait colourings,
//! hamiltonicity and snarks.
//!
//! The colouring and hamiltonicity searches are exact backtracking searches
//! under a node budget. Running out of budget is reported as
//! [`ClassifyError::Timeout`], never as a negative answer.

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, BudgetExceeded};
use crate::graph::{CubicGraph, EdgeId, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("search timed out: {0}")]
    Timeout(#[from] BudgetExceeded),
}

/// Returns `Ok(None)` when `g` is bridgeless, otherwise one bridge.
pub fn find_bridge(g: &Graph) -> Result<Option<EdgeId>, ClassifyError> {
    if !g.is_connected() {
        return Err(ClassifyError::NotConnected);
    }
    let n = g.n();
    if n == 0 {
        return Ok(None);
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    // (vertex, edge used to enter it, next neighbour index)
    let mut stack: Vec<(Vertex, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut bridge = None;
    while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
        if let Some(&(w, e)) = g.neighbors(v).get(*idx) {
            *idx += 1;
            if e == via {
                continue;
            }
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push((w, e, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] > disc[p] && bridge.is_none() {
                    bridge = Some(via);
                }
            }
        }
    }
    Ok(bridge)
}

pub fn is_bridgeless(g: &Graph) -> Result<bool, ClassifyError> {
    Ok(find_bridge(g)?.is_none())
}

/// A proper 2-colouring (`0`/`1` per vertex) if one exists.
pub fn bipartition(g: &Graph) -> Option<Vec<u8>> {
    let mut color = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in g.neighbors(v) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

pub fn is_bipartite(g: &Graph) -> bool {
    bipartition(g).is_some()
}

pub fn is_independent(g: &Graph, s: &[Vertex]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v] = true;
    }
    g.edges().iter().all(|&(u, v)| !(inside[u] && inside[v]))
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..g.n() {
        let mut dist = vec![usize::MAX; g.n()];
        let mut parent_edge = vec![usize::MAX; g.n()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in g.neighbors(v) {
                if e == parent_edge[v] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent_edge[w] = e;
                    queue.push_back(w);
                } else {
                    let len = dist[v] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// A proper 3-edge-colouring of a cubic graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaitColoring {
    pub colors: Vec<u8>,
}

impl TaitColoring {
    /// The edges of one colour class.
    pub fn class(&self, c: u8) -> Vec<EdgeId> {
        (0..self.colors.len()).filter(|&e| self.colors[e] == c).collect()
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.colors.len() == g.m()
            && self.colors.iter().all(|&c| c < 3)
            && (0..g.n()).all(|v| {
                let mut seen = [false; 3];
                g.neighbors(v).iter().all(|&(_, e)| !std::mem::replace(&mut seen[self.colors[e] as usize], true))
            })
    }
}

const UNSET: u8 = u8::MAX;

fn free_colors(g: &Graph, colors: &[u8], e: EdgeId) -> u8 {
    let (u, v) = g.edge(e);
    let mut mask = 0b111u8;
    for x in [u, v] {
        for &(_, f) in g.neighbors(x) {
            if colors[f] != UNSET {
                mask &= !(1 << colors[f]);
            }
        }
    }
    mask
}

fn tait_rec(g: &Graph, colors: &mut [u8], budget: &Budget) -> Result<bool, BudgetExceeded> {
    budget.tick()?;
    // most constrained uncoloured edge, lowest id on ties
    let mut pick: Option<(EdgeId, u8)> = None;
    for e in 0..g.m() {
        if colors[e] != UNSET {
            continue;
        }
        let mask = free_colors(g, colors, e);
        if mask == 0 {
            return Ok(false);
        }
        if pick.is_none_or(|(_, m)| mask.count_ones() < m.count_ones()) {
            pick = Some((e, mask));
            if mask.count_ones() == 1 {
                break;
            }
        }
    }
    let Some((e, mask)) = pick else { return Ok(true) };
    for c in 0..3u8 {
        if mask & (1 << c) != 0 {
            colors[e] = c;
            if tait_rec(g, colors, budget)? {
                return Ok(true);
            }
        }
    }
    colors[e] = UNSET;
    Ok(false)
}

/// Finds a Tait colouring or proves none exists.
pub fn tait_coloring(g: &CubicGraph, budget: &Budget) -> Result<Option<TaitColoring>, ClassifyError> {
    let mut colors = vec![UNSET; g.m()];
    if g.n() > 0 {
        // colour permutations are symmetric: fix the edges at vertex 0
        for (c, &(_, e)) in g.neighbors(0).iter().enumerate() {
            colors[e] = c as u8;
        }
    }
    if tait_rec(g, &mut colors, budget)? {
        Ok(Some(TaitColoring { colors }))
    } else {
        Ok(None)
    }
}

/// Bridgeless and not Tait-colourable (no girth condition).
pub fn is_snark(g: &CubicGraph, budget: &Budget) -> Result<bool, ClassifyError> {
    Ok(is_bridgeless(g)? && tait_coloring(g, budget)?.is_none())
}

fn ham_rec(
    g: &Graph,
    path: &mut Vec<Vertex>,
    on_path: &mut [bool],
    budget: &Budget,
) -> Result<bool, BudgetExceeded> {
    budget.tick()?;
    let v = *path.last().expect("path starts at a root");
    if path.len() == g.n() {
        return Ok(g.edge_between(v, path[0]).is_some());
    }
    for &(w, _) in g.neighbors(v) {
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        path.push(w);
        if ham_rec(g, path, on_path, budget)? {
            return Ok(true);
        }
        path.pop();
        on_path[w] = false;
    }
    Ok(false)
}

/// A hamiltonian cycle as a vertex sequence starting at 0, if one exists.
pub fn hamiltonian_cycle(g: &Graph, budget: &Budget) -> Result<Option<Vec<Vertex>>, ClassifyError> {
    match g.n() {
        0 => return Ok(None),
        1 => return Ok(Some(vec![0])),
        2 => return Ok(None),
        _ => {}
    }
    if !g.is_connected() || (0..g.n()).any(|v| g.degree(v) < 2) {
        return Ok(None);
    }
    let mut path = vec![0];
    let mut on_path = vec![false; g.n()];
    on_path[0] = true;
    if ham_rec(g, &mut path, &mut on_path, budget)? {
        Ok(Some(path))
    } else {
        Ok(None)
    }
}

pub fn is_hamiltonian_cycle(g: &Graph, cycle: &[Vertex]) -> bool {
    if cycle.len() != g.n() || g.n() < 3 {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for &v in cycle {
        if v >= g.n() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..cycle.len()).all(|i| g.edge_between(cycle[i], cycle[(i + 1) % cycle.len()]).is_some())
}

/// The bundle of predicates reported by `matchforge classify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub cubic: bool,
    pub bridgeless: Option<bool>,
    pub bipartite: bool,
    /// `None` for non-cubic graphs.
    pub tait_colorable: Option<bool>,
    pub hamiltonian: bool,
    pub snark: Option<bool>,
}

pub fn classify(g: &Graph, budget: &Budget) -> Result<Classification, ClassifyError> {
    let cubic = CubicGraph::new(g.clone()).ok();
    let bridgeless = if g.is_connected() { Some(is_bridgeless(g)?) } else { None };
    let tait = match &cubic {
        Some(c) => Some(tait_coloring(c, budget)?.is_some()),
        None => None,
    };
    Ok(Classification {
        cubic: cubic.is_some(),
        bridgeless,
        bipartite: is_bipartite(g),
        tait_colorable: tait,
        hamiltonian: hamiltonian_cycle(g, budget)?.is_some(),
        snark: match (tait, bridgeless) {
            (Some(t), Some(b)) => Some(b && !t),
            _ => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> CubicGraph {
        CubicGraph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn k4_predicates() {
        let g = k4();
        assert!(is_bridgeless(&g).unwrap());
        assert!(!is_bipartite(&g));
        let t = tait_coloring(&g, &Budget::default()).unwrap().unwrap();
        assert!(t.is_valid(&g));
        let h = hamiltonian_cycle(&g, &Budget::default()).unwrap().unwrap();
        assert!(is_hamiltonian_cycle(&g, &h));
        assert_eq!(girth(&g), Some(3));
    }

    #[test]
    fn single_edge_is_a_bridge() {
        let g = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        assert_eq!(find_bridge(&g).unwrap(), Some(0));
        let two = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(find_bridge(&two).unwrap_err(), ClassifyError::NotConnected);
    }

    #[test]
    fn independence() {
        let g = k4();
        assert!(is_independent(&g, &[2]));
        assert!(!is_independent(&g, &[0, 1]));
        assert!(is_independent(&g, &[]));
    }

    #[test]
    fn timeout_is_an_error() {
        let g = k4();
        assert!(matches!(tait_coloring(&g, &Budget::new(0)), Err(ClassifyError::Timeout(_))));
    }
}
