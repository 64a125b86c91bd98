//! Immutable simple graphs with stable edge ids.
//!
//! Vertices are dense ids `0..n`. Edges are numbered `0..m` in insertion
//! order and keep that numbering for the lifetime of the value, so
//! certificates can name edges reproducibly. Deletions produce a new graph
//! together with the id maps back to the parent.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Deref;

use serde::{Deserialize, Serialize};

pub type Vertex = usize;
pub type EdgeId = usize;

pub const MAX_VERTICES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge id {edge} out of range for a graph with {m} edges")]
    EdgeOutOfRange { edge: EdgeId, m: usize },
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: Vertex, degree: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has {0} vertices, more than the supported {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// A simple undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    // per vertex: (neighbour, edge id), sorted by neighbour
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from vertex pairs. Edge `i` is `pairs[i]`, stored with
    /// the smaller endpoint first.
    pub fn from_edge_list(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        let mut adj: Vec<Vec<(Vertex, EdgeId)>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(pairs.len());
        for (id, &(u, v)) in pairs.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].iter().any(|&(w, _)| w == v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
            edges.push((u.min(v), u.max(v)));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// `(neighbour, edge id)` pairs, ascending by neighbour.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<(), GraphError> {
        if e >= self.m() {
            Err(GraphError::EdgeOutOfRange { edge: e, m: self.m() })
        } else {
            Ok(())
        }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Component> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut vertices = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                vertices.push(v);
                for &(w, _) in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            vertices.sort_unstable();
            out.push(Component { vertices });
        }
        out
    }

    /// Removes the vertices `vs` (with their incident edges) and the edges
    /// `es`. Surviving vertices and edges keep their relative order.
    pub fn delete(&self, vs: &[Vertex], es: &[EdgeId]) -> Result<Subgraph, GraphError> {
        let mut vdead = vec![false; self.n];
        for &v in vs {
            self.check_vertex(v)?;
            vdead[v] = true;
        }
        let mut edead = vec![false; self.m()];
        for &e in es {
            self.check_edge(e)?;
            edead[e] = true;
        }
        let mut new_id = vec![usize::MAX; self.n];
        let mut vertex_map = Vec::new();
        for v in 0..self.n {
            if !vdead[v] {
                new_id[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let mut pairs = Vec::new();
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if edead[e] || vdead[u] || vdead[v] {
                continue;
            }
            pairs.push((new_id[u], new_id[v]));
            edge_map.push(e);
        }
        let graph = Graph::from_edge_list(vertex_map.len(), &pairs)?;
        Ok(Subgraph { graph, vertex_map, edge_map })
    }

    pub fn is_cubic(&self) -> bool {
        self.adj.iter().all(|a| a.len() == 3)
    }

    /// Writes `n m` followed by one `u v` line per edge in id order.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.m())?;
        for &(u, v) in &self.edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Reads the edge-list format. Blank lines and `#` comments are skipped.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut pairs = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: &str| GraphError::Parse { line: i + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            let a: usize = it.next().ok_or_else(|| perr("missing field"))?.parse().map_err(|_| perr("not an integer"))?;
            let b: usize = it.next().ok_or_else(|| perr("expected two fields"))?.parse().map_err(|_| perr("not an integer"))?;
            if it.next().is_some() {
                return Err(perr("expected two fields"));
            }
            if header.is_none() {
                header = Some((a, b));
            } else {
                pairs.push((a, b));
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse { line: 1, msg: "missing header".into() })?;
        if pairs.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!("header announces {m} edges, found {}", pairs.len()),
            });
        }
        Graph::from_edge_list(n, &pairs)
    }

    pub fn parse_edge_list(s: &str) -> Result<Graph, GraphError> {
        Graph::read_edge_list(s.as_bytes())
    }

    /// Decodes one graph6 line. Edges are numbered in the order
    /// `(i, j)` with `j` ascending, then `i` ascending.
    pub fn from_graph6(s: &str) -> Result<Graph, GraphError> {
        let s = s.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes: Vec<u8> = s.bytes().collect();
        let perr = |msg: &str| GraphError::Parse { line: 1, msg: msg.to_string() };
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(perr("graph6 byte outside 63..=126"));
        }
        let (n, rest) = match bytes.first() {
            None => return Err(perr("empty graph6 string")),
            Some(&126) => {
                if bytes.get(1) == Some(&126) {
                    return Err(GraphError::TooLarge(usize::MAX));
                }
                if bytes.len() < 4 {
                    return Err(perr("truncated size field"));
                }
                let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
                (n, &bytes[4..])
            }
            Some(&b) => ((b - 63) as usize, &bytes[1..]),
        };
        let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if rest.len() != need {
            return Err(perr("graph6 length does not match vertex count"));
        }
        let mut pairs = Vec::new();
        let mut k = 0usize;
        for j in 1..n {
            for i in 0..j {
                let byte = rest[k / 6] - 63;
                if byte & (1 << (5 - k % 6)) != 0 {
                    pairs.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edge_list(n, &pairs)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let bits = n * n.saturating_sub(1) / 2;
        let mut buf = vec![0u8; bits.div_ceil(6)];
        let mut k = 0usize;
        for j in 1..n {
            for i in 0..j {
                if self.edge_between(i, j).is_some() {
                    buf[k / 6] |= 1 << (5 - k % 6);
                }
                k += 1;
            }
        }
        out.extend(buf.into_iter().map(|b| b + 63));
        String::from_utf8(out).expect("graph6 is ASCII")
    }
}

/// One connected component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<Vertex>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.vertices.len() % 2 == 1
    }
}

/// Result of [`Graph::delete`]: the smaller graph plus maps from its ids to
/// the parent's ids.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub vertex_map: Vec<Vertex>,
    pub edge_map: Vec<EdgeId>,
}

/// A connected 3-regular simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicGraph(Graph);

impl CubicGraph {
    pub fn new(g: Graph) -> Result<CubicGraph, GraphError> {
        for v in 0..g.n() {
            if g.degree(v) != 3 {
                return Err(GraphError::NotCubic { vertex: v, degree: g.degree(v) });
            }
        }
        if !g.is_connected() {
            return Err(GraphError::NotConnected);
        }
        Ok(CubicGraph(g))
    }

    pub fn from_edge_list(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<CubicGraph, GraphError> {
        CubicGraph::new(Graph::from_edge_list(n, pairs)?)
    }

    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn into_graph(self) -> Graph {
        self.0
    }
}

impl Deref for CubicGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.0
    }
}

impl AsRef<Graph> for CubicGraph {
    fn as_ref(&self) -> &Graph {
        &self.0
    }
}

impl AsRef<Graph> for Graph {
    fn as_ref(&self) -> &Graph {
        self
    }
}

/// Refines a graph to a [`CubicGraph`].
pub fn as_cubic(g: Graph) -> Result<CubicGraph, GraphError> {
    CubicGraph::new(g)
}

/// A sorted, duplicate-free set of edge ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new(mut ids: Vec<EdgeId>) -> EdgeSet {
        ids.sort_unstable();
        ids.dedup();
        EdgeSet(ids)
    }

    pub fn empty() -> EdgeSet {
        EdgeSet(Vec::new())
    }

    /// Like [`EdgeSet::new`] but rejects ids that are not edges of `g`.
    pub fn checked(g: &Graph, ids: Vec<EdgeId>) -> Result<EdgeSet, GraphError> {
        for &e in &ids {
            g.check_edge(e)?;
        }
        Ok(EdgeSet::new(ids))
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet::new(iter.into_iter().collect())
    }
}
