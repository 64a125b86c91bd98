//! Triangle meshes to quad meshes by matching in the dual graph.
//!
//! Each face of a closed triangle mesh becomes a vertex of a cubic dual
//! graph (face `i` is vertex `i`); dual edges join faces sharing a mesh
//! edge. A matching picks pairs of faces to merge into quads.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::{CubicGraph, EdgeId, GraphError};
use crate::matching::{max_weight_matching, max_weight_perfect_matching, Matching, MatchingError, WeightFn};
use crate::rational::{self, Rational};
use crate::registry::Registry;

pub type Point = [f64; 3];

/// Weights are snapped to multiples of `1 / WEIGHT_DENOMINATOR`.
pub const WEIGHT_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("face {0} is not a triangle")]
    NotTriangular(usize),
    #[error("mesh is not closed: edge {0}-{1} lies on {2} face(s)")]
    NotClosed(usize, usize, usize),
    #[error("faces are not consistently oriented around edge {0}-{1}")]
    Inconsistent(usize, usize),
    #[error("face {0} is degenerate")]
    Degenerate(usize),
    #[error("dual graph is not a simple connected cubic graph: {0}")]
    Dual(#[from] GraphError),
    #[error("weights: {0}")]
    Weights(MatchingError),
    #[error("dual graph has no perfect matching ({faces} faces); this contradicts the mesh being closed")]
    NoPerfectMatching { faces: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Point>,
    pub faces: Vec<[usize; 3]>,
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: Point, b: Point) -> Point {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

/// Angle at `p` in the triangle `p q r`, in degrees.
fn corner(p: Point, q: Point, r: Point) -> f64 {
    let (u, v) = (sub(q, p), sub(r, p));
    let c = (dot(u, v) / (norm(u) * norm(v))).clamp(-1.0, 1.0);
    c.acos().to_degrees()
}

impl TriangleMesh {
    /// Parses ASCII OFF and validates the result.
    pub fn parse_off(text: &str) -> Result<TriangleMesh, MeshError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: &str| MeshError::Parse { line, msg: msg.to_string() };
        let (mut ln, mut head) = lines.next().ok_or_else(|| err(0, "empty file"))?;
        if let Some(rest) = head.strip_prefix("OFF") {
            if rest.trim().is_empty() {
                (ln, head) = lines.next().ok_or_else(|| err(ln, "missing counts"))?;
            } else {
                head = rest.trim();
            }
        }
        let counts: Vec<usize> = head
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(ln, "bad count")))
            .collect::<Result<_, _>>()?;
        if counts.len() < 2 {
            return Err(err(ln, "expected vertex and face counts"));
        }
        let (nv, nf) = (counts[0], counts[1]);
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, l) = lines.next().ok_or_else(|| err(ln, "missing vertex line"))?;
            let xs: Vec<f64> =
                l.split_whitespace().map(|t| t.parse().map_err(|_| err(ln, "bad coordinate"))).collect::<Result<_, _>>()?;
            if xs.len() < 3 || xs[..3].iter().any(|x| !x.is_finite()) {
                return Err(err(ln, "expected three finite coordinates"));
            }
            vertices.push([xs[0], xs[1], xs[2]]);
        }
        let mut faces = Vec::with_capacity(nf);
        for f in 0..nf {
            let (ln, l) = lines.next().ok_or_else(|| err(ln, "missing face line"))?;
            let ix: Vec<usize> =
                l.split_whitespace().map(|t| t.parse().map_err(|_| err(ln, "bad index"))).collect::<Result<_, _>>()?;
            if ix.first() != Some(&3) || ix.len() < 4 {
                return Err(MeshError::NotTriangular(f));
            }
            if ix[1..4].iter().any(|&v| v >= nv) {
                return Err(err(ln, "vertex index out of range"));
            }
            faces.push([ix[1], ix[2], ix[3]]);
        }
        let mesh = TriangleMesh { vertices, faces };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn load_off(path: impl AsRef<Path>) -> Result<TriangleMesh, MeshError> {
        Self::parse_off(&std::fs::read_to_string(path)?)
    }

    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.faces.len());
        for p in &self.vertices {
            let _ = writeln!(s, "{} {} {}", p[0], p[1], p[2]);
        }
        for f in &self.faces {
            let _ = writeln!(s, "3 {} {} {}", f[0], f[1], f[2]);
        }
        s
    }

    /// Closed, consistently oriented, no degenerate faces.
    pub fn validate(&self) -> Result<(), MeshError> {
        for (i, f) in self.faces.iter().enumerate() {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(MeshError::Degenerate(i));
            }
            let [a, b, c] = f.map(|v| self.vertices[v]);
            let area2 = norm(cross(sub(b, a), sub(c, a)));
            let scale = norm(sub(b, a)).max(norm(sub(c, a))).max(norm(sub(c, b)));
            if !(area2 > 1e-12 * scale * scale) {
                return Err(MeshError::Degenerate(i));
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                *directed.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut keys: Vec<_> = directed.keys().copied().collect();
        keys.sort_unstable();
        for (a, b) in keys {
            let fwd = directed[&(a, b)];
            let back = directed.get(&(b, a)).copied().unwrap_or(0);
            if fwd > 1 {
                return Err(MeshError::Inconsistent(a.min(b), a.max(b)));
            }
            if back == 0 {
                return Err(MeshError::NotClosed(a.min(b), a.max(b), fwd));
            }
        }
        Ok(())
    }

    fn normal(&self, f: usize) -> Point {
        let [a, b, c] = self.faces[f].map(|v| self.vertices[v]);
        let n = cross(sub(b, a), sub(c, a));
        let l = norm(n);
        [n[0] / l, n[1] / l, n[2] / l]
    }
}

/// A dual edge: faces `left` and `right` share the mesh edge `a -> b`
/// (oriented as in `left`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEdge {
    pub left: usize,
    pub right: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone)]
pub struct DualGraph {
    pub graph: CubicGraph,
    /// Indexed by dual edge id.
    pub shared: Vec<DualEdge>,
}

pub fn dual_graph(mesh: &TriangleMesh) -> Result<DualGraph, MeshError> {
    mesh.validate()?;
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, f) in mesh.faces.iter().enumerate() {
        for k in 0..3 {
            owner.insert((f[k], f[(k + 1) % 3]), i);
        }
    }
    let mut pairs = Vec::new();
    let mut info = Vec::new();
    for (i, f) in mesh.faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            let j = owner[&(b, a)];
            if i < j {
                pairs.push((i, j));
                info.push(DualEdge { left: i, right: j, a, b });
            }
        }
    }
    let graph = CubicGraph::from_edge_list(mesh.faces.len(), &pairs)?;
    // the graph normalises and keeps edge order; realign the metadata by id
    let mut shared = vec![info[0]; graph.m()];
    for d in info {
        let e = graph.edge_between(d.left, d.right).expect("dual edge present");
        shared[e] = d;
    }
    Ok(DualGraph { graph, shared })
}

fn opposite(face: [usize; 3], a: usize, b: usize) -> usize {
    face.into_iter().find(|&v| v != a && v != b).expect("triangle has a third vertex")
}

/// Corners of the quad made by merging the two faces of dual edge `e`,
/// in boundary order.
pub fn quad_of(mesh: &TriangleMesh, d: &DualEdge) -> [usize; 4] {
    let x = opposite(mesh.faces[d.left], d.a, d.b);
    let y = opposite(mesh.faces[d.right], d.a, d.b);
    [x, d.a, y, d.b]
}

/// Quality in `[0, 1]`: the worst interior angle's closeness to 90°
/// (`min(θ/90, 90/θ)`) times `max(0, cos δ)` for the dihedral angle `δ`
/// between the face normals.
pub fn quad_quality(mesh: &TriangleMesh, d: &DualEdge) -> f64 {
    let [x, a, y, b] = quad_of(mesh, d).map(|v| mesh.vertices[v]);
    let angles = [
        corner(x, a, b),
        corner(a, x, b) + corner(a, y, b),
        corner(y, a, b),
        corner(b, x, a) + corner(b, y, a),
    ];
    let angle_term = angles.iter().map(|&t| if t <= 0.0 { 0.0 } else { (t / 90.0).min(90.0 / t) }).fold(1.0, f64::min);
    let planarity = dot(mesh.normal(d.left), mesh.normal(d.right)).max(0.0);
    (angle_term * planarity).clamp(0.0, 1.0)
}

pub fn quad_weight(mesh: &TriangleMesh, d: &DualEdge) -> Rational {
    rational::snap(quad_quality(mesh, d), WEIGHT_DENOMINATOR)
}

/// A rule assigning a weight to every dual edge.
pub trait WeightModel: Send + Sync {
    fn name(&self) -> &'static str;
    fn weights(&self, mesh: &TriangleMesh, dual: &DualGraph) -> Vec<Rational>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Quality;

impl WeightModel for Quality {
    fn name(&self) -> &'static str {
        "quality"
    }

    fn weights(&self, mesh: &TriangleMesh, dual: &DualGraph) -> Vec<Rational> {
        use rayon::prelude::*;
        dual.shared.par_iter().map(|d| quad_weight(mesh, d)).collect()
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Uniform;

impl WeightModel for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn weights(&self, _: &TriangleMesh, dual: &DualGraph) -> Vec<Rational> {
        vec![Rational::one(); dual.graph.m()]
    }
}

/// `quality` (default) and `uniform`.
pub fn weight_models() -> &'static Registry<dyn WeightModel> {
    static REG: OnceLock<Registry<dyn WeightModel>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn WeightModel> = Registry::new("weight model");
        r.register("quality", "angle closeness to 90 degrees times flatness", Arc::new(Quality));
        r.register("uniform", "every dual edge weighs 1", Arc::new(Uniform));
        r
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Perfect,
    Maximum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadMesh {
    pub quads: Vec<[usize; 4]>,
    pub leftover_triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub n_faces: usize,
    pub n_quads: usize,
    pub n_leftover: usize,
    #[serde(with = "rational::serde_rational")]
    pub w_perfect: Rational,
    #[serde(with = "rational::serde_rational")]
    pub w_maximum: Rational,
    /// `w_perfect / w_maximum`, or 1 when every weight is zero.
    #[serde(with = "rational::serde_rational")]
    pub ratio: Rational,
}

/// Merges faces along a matching of the dual graph. `weights` overrides
/// the weight model when given (one entry per dual edge, all may be zero).
pub fn quadrangulate(
    mesh: &TriangleMesh,
    mode: Mode,
    weights: Option<&[Rational]>,
) -> Result<(QuadMesh, Report), MeshError> {
    let dual = dual_graph(mesh)?;
    let w: Vec<Rational> = match weights {
        Some(w) => w.to_vec(),
        None => Quality.weights(mesh, &dual),
    };
    if w.len() != dual.graph.m() || w.iter().any(|x| !rational::is_nonnegative(x)) {
        return Err(MeshError::Weights(MatchingError::InvalidWeights(format!(
            "expected {} nonnegative weights",
            dual.graph.m()
        ))));
    }
    let g = dual.graph.graph();
    let all_zero = w.iter().all(Zero::is_zero);
    // the zero function is not a WeightFn; every matching then weighs 0
    let wf = if all_zero { WeightFn::uniform(g).map_err(MeshError::Weights)? } else {
        WeightFn::new(g, w.clone()).map_err(MeshError::Weights)?
    };
    let (pm, _) = max_weight_perfect_matching(g, &wf).map_err(|e| match e {
        MatchingError::NoPerfectMatching => MeshError::NoPerfectMatching { faces: mesh.faces.len() },
        other => MeshError::Weights(other),
    })?;
    let (mm, _) = max_weight_matching(g, &wf);
    let total = |m: &Matching| m.ids().iter().fold(Rational::zero(), |acc, &e| acc + &w[e]);
    let (w_perfect, w_maximum) = (total(&pm), total(&mm));
    let ratio = if w_maximum.is_zero() { Rational::one() } else { w_perfect.clone() / &w_maximum };
    let chosen = match mode {
        Mode::Perfect => &pm,
        Mode::Maximum => &mm,
    };
    let quads: Vec<[usize; 4]> = chosen.ids().iter().map(|&e: &EdgeId| quad_of(mesh, &dual.shared[e])).collect();
    let sat = chosen.saturated(g);
    let leftover_triangles: Vec<[usize; 3]> = (0..mesh.faces.len()).filter(|&f| !sat[f]).map(|f| mesh.faces[f]).collect();
    let report = Report {
        n_faces: mesh.faces.len(),
        n_quads: quads.len(),
        n_leftover: leftover_triangles.len(),
        w_perfect,
        w_maximum,
        ratio,
    };
    Ok((QuadMesh { quads, leftover_triangles }, report))
}

/// Wavefront OBJ with quads and leftover triangles (1-based indices).
pub fn to_obj(mesh: &TriangleMesh, quads: &QuadMesh) -> String {
    let mut s = String::new();
    for p in &mesh.vertices {
        let _ = writeln!(s, "v {} {} {}", p[0], p[1], p[2]);
    }
    for q in &quads.quads {
        let _ = writeln!(s, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    }
    for t in &quads.leftover_triangles {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

/// Regular tetrahedron, outward-oriented.
pub fn tetrahedron() -> TriangleMesh {
    TriangleMesh {
        vertices: vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]],
        faces: vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    }
}

/// Orients every face so its normal points away from the origin.
fn orient_outward(vertices: &[Point], faces: &mut [[usize; 3]]) {
    for f in faces.iter_mut() {
        let [a, b, c] = f.map(|v| vertices[v]);
        let n = cross(sub(b, a), sub(c, a));
        let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0];
        if dot(n, centroid) < 0.0 {
            f.swap(1, 2);
        }
    }
}

/// Regular icosahedron on the 12 points `(0, ±1, ±φ)` and cyclic shifts.
pub fn icosahedron() -> TriangleMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            vertices.push([0.0, s1, s2 * phi]);
            vertices.push([s1, s2 * phi, 0.0]);
            vertices.push([s2 * phi, 0.0, s1]);
        }
    }
    let adjacent = |i: usize, j: usize| (norm(sub(vertices[i], vertices[j])) - 2.0).abs() < 1e-9;
    let mut faces = Vec::with_capacity(20);
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if adjacent(i, j) && adjacent(j, k) && adjacent(i, k) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    orient_outward(&vertices, &mut faces);
    TriangleMesh { vertices, faces }
}

/// Unit cube with each square face split along a diagonal (12 triangles).
pub fn cube_with_diagonals() -> TriangleMesh {
    let vertices: Vec<Point> =
        (0..8).map(|i| [(i & 1) as f64 - 0.5, ((i >> 1) & 1) as f64 - 0.5, ((i >> 2) & 1) as f64 - 0.5]).collect();
    let squares = [[0, 1, 3, 2], [4, 5, 7, 6], [0, 1, 5, 4], [2, 3, 7, 6], [0, 2, 6, 4], [1, 3, 7, 5]];
    let mut faces: Vec<[usize; 3]> = squares.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
    orient_outward(&vertices, &mut faces);
    TriangleMesh { vertices, faces }
}

pub fn shape(name: &str) -> Option<TriangleMesh> {
    match name {
        "tetrahedron" => Some(tetrahedron()),
        "icosahedron" => Some(icosahedron()),
        "cube" => Some(cube_with_diagonals()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn shapes_validate() {
        for m in [tetrahedron(), icosahedron(), cube_with_diagonals()] {
            m.validate().unwrap();
            let again = TriangleMesh::parse_off(&m.to_off()).unwrap();
            assert_eq!(again.faces, m.faces);
        }
        assert_eq!(icosahedron().faces.len(), 20);
    }

    #[test]
    fn open_and_bad_meshes() {
        let one = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
        assert!(matches!(TriangleMesh::parse_off(one), Err(MeshError::NotClosed(..))));
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(matches!(TriangleMesh::parse_off(quad), Err(MeshError::NotTriangular(0))));
        let flat = "OFF\n3 1 0\n0 0 0\n1 0 0\n2 0 0\n3 0 1 2\n";
        assert!(matches!(TriangleMesh::parse_off(flat), Err(MeshError::Degenerate(0))));
        assert!(matches!(TriangleMesh::parse_off("OFF\n3 x\n"), Err(MeshError::Parse { .. })));
    }

    #[test]
    fn square_and_fold() {
        let square = TriangleMesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2], [0, 2, 3]],
        };
        let d = DualEdge { left: 0, right: 1, a: 2, b: 0 };
        assert_eq!(quad_weight(&square, &d), Rational::one());
        let folded = TriangleMesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            faces: vec![[0, 1, 2], [0, 3, 1]],
        };
        let d = DualEdge { left: 0, right: 1, a: 0, b: 1 };
        assert_eq!(quad_weight(&folded, &d), Rational::zero());
    }

    #[test]
    fn icosahedron_quads() {
        let m = icosahedron();
        let (q, r) = quadrangulate(&m, Mode::Perfect, None).unwrap();
        assert_eq!((r.n_quads, r.n_leftover), (10, 0));
        assert_eq!(2 * q.quads.len() + q.leftover_triangles.len(), 20);
        let ones = vec![Rational::one(); 30];
        let (_, r) = quadrangulate(&m, Mode::Maximum, Some(&ones)).unwrap();
        assert_eq!(r.ratio, Rational::one());
        assert_eq!(r.w_maximum, ratio(10, 1));
    }
}
