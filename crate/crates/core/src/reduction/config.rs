//! Detection of reducible configurations.
//!
//! Each detector looks for one local structure that cannot occur in a
//! minimal graph without a labeling from `{0..M+2}`. Triangle-based
//! configurations are detected on 3-cycles of the graph; the extension
//! arguments only use the three edges, so a triangle need not bound a face.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::labeling::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConfigKind {
    SparseEdge,
    LightEdge,
    Alternator,
    Deg4LowNbr,
    Face566,
    Face567,
    TwinLowNbr,
    TwoDeg2,
}

/// A bipartite subgraph `B(X, Y)` with `d_B(x) = d_G(x) ≤ k` on `X` and
/// `d_B(y) ≥ d_G(y) + k − M` on `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Alternator {
    pub k: usize,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub edges: Vec<Edge>,
}

impl Alternator {
    pub fn b_degree(&self, w: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(w)).count()
    }

    /// Re-checks the defining conditions against `g`.
    pub fn holds(&self, g: &Graph, m: usize) -> bool {
        let xs: BTreeSet<usize> = self.x.iter().copied().collect();
        let ys: BTreeSet<usize> = self.y.iter().copied().collect();
        if xs.is_empty() || self.k < 3 || self.k > max_alternator_k(m) || !xs.is_disjoint(&ys) {
            return false;
        }
        let bipartite = self.edges.iter().all(|e| {
            g.has_edge(e.u(), e.v())
                && ((xs.contains(&e.u()) && ys.contains(&e.v()))
                    || (xs.contains(&e.v()) && ys.contains(&e.u())))
        });
        bipartite
            && xs.iter().all(|&x| {
                let db = self.b_degree(x);
                db == g.degree(x) && db <= self.k
            })
            && ys
                .iter()
                .all(|&y| self.b_degree(y) + m >= g.degree(y) + self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ReducibleConfig {
    /// Edge with `d(u) + d(v) ≤ M − 2`.
    SparseEdge { u: usize, v: usize },
    /// Edge with `d(light) ≤ ⌊(M+2)/4⌋` and `d(light) + d(other) ≤ M + 1`.
    LightEdge { light: usize, other: usize },
    Alternator(Alternator),
    /// 4-vertex `u` with a neighbor `v` of degree at most 7.
    Deg4LowNbr { u: usize, v: usize },
    /// Triangle with `d(v1) = 5` and `d(v2), d(v3) ≤ 6`.
    Face566 { v1: usize, v2: usize, v3: usize },
    /// Triangle with degrees 5, 6, 7 where `v1` has a second 6-neighbor `v4`.
    Face567 {
        v1: usize,
        v2: usize,
        v3: usize,
        v4: usize,
    },
    /// `v` with neighbors `v1, v2` of degree `M + 2 − d(v) ∈ {2, 3}` and a
    /// triangle `apex, v, v1`.
    TwinLowNbr {
        v: usize,
        v1: usize,
        v2: usize,
        apex: usize,
    },
    /// `v` with two 2-neighbors `x, y` whose far neighbors either coincide
    /// (a 4-cycle) or are both non-adjacent to `v`.
    TwoDeg2 {
        v: usize,
        x: usize,
        y: usize,
        x_far: usize,
        y_far: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no reducible configuration found (M = {m}, {vertices} vertices, {edges} edges)")]
pub struct IrreducibleError {
    pub m: usize,
    pub vertices: usize,
    pub edges: usize,
}

pub fn max_alternator_k(m: usize) -> usize {
    (m + 2) / 4
}

impl ReducibleConfig {
    pub fn kind(&self) -> ConfigKind {
        match self {
            ReducibleConfig::SparseEdge { .. } => ConfigKind::SparseEdge,
            ReducibleConfig::LightEdge { .. } => ConfigKind::LightEdge,
            ReducibleConfig::Alternator(_) => ConfigKind::Alternator,
            ReducibleConfig::Deg4LowNbr { .. } => ConfigKind::Deg4LowNbr,
            ReducibleConfig::Face566 { .. } => ConfigKind::Face566,
            ReducibleConfig::Face567 { .. } => ConfigKind::Face567,
            ReducibleConfig::TwinLowNbr { .. } => ConfigKind::TwinLowNbr,
            ReducibleConfig::TwoDeg2 { .. } => ConfigKind::TwoDeg2,
        }
    }

    /// Elements realizing the configuration.
    pub fn witness(&self) -> Vec<Element> {
        use Element::Vertex as V;
        match *self {
            ReducibleConfig::SparseEdge { u, v } => vec![V(u), V(v), Element::edge(u, v)],
            ReducibleConfig::LightEdge { light, other } => {
                vec![V(light), V(other), Element::edge(light, other)]
            }
            ReducibleConfig::Alternator(ref a) => a.x.iter().chain(&a.y).map(|&w| V(w)).collect(),
            ReducibleConfig::Deg4LowNbr { u, v } => vec![V(u), V(v), Element::edge(u, v)],
            ReducibleConfig::Face566 { v1, v2, v3 } => vec![V(v1), V(v2), V(v3)],
            ReducibleConfig::Face567 { v1, v2, v3, v4 } => vec![V(v1), V(v2), V(v3), V(v4)],
            ReducibleConfig::TwinLowNbr { v, v1, v2, apex } => vec![V(v), V(v1), V(v2), V(apex)],
            ReducibleConfig::TwoDeg2 {
                v,
                x,
                y,
                x_far,
                y_far,
            } => vec![V(v), V(x), V(y), V(x_far), V(y_far)],
        }
    }

    /// Re-checks the defining condition from the graph alone.
    pub fn holds(&self, g: &Graph, m: usize) -> bool {
        let d = |v: usize| g.degree(v);
        let adj = |a: usize, b: usize| g.has_edge(a, b);
        match *self {
            ReducibleConfig::SparseEdge { u, v } => adj(u, v) && d(u) + d(v) + 2 <= m,
            ReducibleConfig::LightEdge { light, other } => {
                adj(light, other) && d(light) <= max_alternator_k(m) && d(light) + d(other) <= m + 1
            }
            ReducibleConfig::Alternator(ref a) => a.holds(g, m),
            ReducibleConfig::Deg4LowNbr { u, v } => adj(u, v) && d(u) == 4 && d(v) <= 7,
            ReducibleConfig::Face566 { v1, v2, v3 } => {
                adj(v1, v2) && adj(v2, v3) && adj(v1, v3) && d(v1) == 5 && d(v2) <= 6 && d(v3) <= 6
            }
            ReducibleConfig::Face567 { v1, v2, v3, v4 } => {
                adj(v1, v2)
                    && adj(v2, v3)
                    && adj(v1, v3)
                    && adj(v1, v4)
                    && v4 != v2
                    && (d(v1), d(v2), d(v3), d(v4)) == (5, 6, 7, 6)
            }
            ReducibleConfig::TwinLowNbr { v, v1, v2, apex } => {
                let t = (m + 2).checked_sub(d(v));
                v1 != v2
                    && adj(v, v1)
                    && adj(v, v2)
                    && matches!(t, Some(2 | 3))
                    && Some(d(v1)) == t
                    && Some(d(v2)) == t
                    && apex != v1
                    && apex != v2
                    && adj(apex, v)
                    && adj(apex, v1)
            }
            ReducibleConfig::TwoDeg2 {
                v,
                x,
                y,
                x_far,
                y_far,
            } => {
                x != y
                    && d(v) <= m
                    && adj(v, x)
                    && adj(v, y)
                    && d(x) == 2
                    && d(y) == 2
                    && adj(x, x_far)
                    && adj(y, y_far)
                    && x_far != v
                    && y_far != v
                    && x_far != y
                    && y_far != x
                    && (x_far == y_far || (!adj(v, x_far) && !adj(v, y_far)))
            }
        }
    }
}

pub fn sparse_edge(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    g.edges()
        .into_iter()
        .find(|e| g.degree(e.u()) + g.degree(e.v()) + 2 <= m)
        .map(|e| ReducibleConfig::SparseEdge { u: e.u(), v: e.v() })
}

pub fn light_edge(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    let cap = max_alternator_k(m);
    g.edges().into_iter().find_map(|e| {
        let (a, b) = e.endpoints();
        let (light, other) = if g.degree(b) < g.degree(a) { (b, a) } else { (a, b) };
        (g.degree(light) <= cap && g.degree(light) + g.degree(other) <= m + 1)
            .then_some(ReducibleConfig::LightEdge { light, other })
    })
}

pub fn deg4_low_neighbor(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    let _ = m;
    g.vertices().filter(|&u| g.degree(u) == 4).find_map(|u| {
        g.neighbors(u)
            .find(|&v| g.degree(v) <= 7)
            .map(|v| ReducibleConfig::Deg4LowNbr { u, v })
    })
}

pub fn two_deg2(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    let far = |x: usize, v: usize| g.neighbors(x).find(|&w| w != v).unwrap();
    for v in g.vertices().filter(|&v| g.degree(v) <= m) {
        let twos: Vec<usize> = g.neighbors(v).filter(|&w| g.degree(w) == 2).collect();
        for (i, &x) in twos.iter().enumerate() {
            for &y in &twos[i + 1..] {
                let cfg = ReducibleConfig::TwoDeg2 {
                    v,
                    x,
                    y,
                    x_far: far(x, v),
                    y_far: far(y, v),
                };
                if cfg.holds(g, m) {
                    return Some(cfg);
                }
            }
        }
    }
    None
}

pub fn twin_low_neighbors(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    for v in g.vertices() {
        let t = match (m + 2).checked_sub(g.degree(v)) {
            Some(t @ (2 | 3)) => t,
            _ => continue,
        };
        let low: Vec<usize> = g.neighbors(v).filter(|&w| g.degree(w) == t).collect();
        for (i, &a) in low.iter().enumerate() {
            for &b in &low[i + 1..] {
                for (v1, v2) in [(a, b), (b, a)] {
                    let apex = g
                        .neighbors(v1)
                        .find(|&u| u != v && u != v2 && g.has_edge(u, v));
                    if let Some(apex) = apex {
                        return Some(ReducibleConfig::TwinLowNbr { v, v1, v2, apex });
                    }
                }
            }
        }
    }
    None
}

/// Triangles `(v1, v2, v3)` through a 5-vertex `v1`, with `v2 < v3`.
fn triangles_at_five(g: &Graph) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    g.vertices().filter(move |&v| g.degree(v) == 5).flat_map(move |v1| {
        let nb: Vec<usize> = g.neighbors(v1).collect();
        let mut out = Vec::new();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.has_edge(a, b) {
                    out.push((v1, a, b));
                }
            }
        }
        out
    })
}

pub fn face_566(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    let _ = m;
    triangles_at_five(g)
        .find(|&(_, a, b)| g.degree(a) <= 6 && g.degree(b) <= 6)
        .map(|(v1, v2, v3)| ReducibleConfig::Face566 { v1, v2, v3 })
}

pub fn face_567(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    let _ = m;
    triangles_at_five(g).find_map(|(v1, a, b)| {
        let (v2, v3) = match (g.degree(a), g.degree(b)) {
            (6, 7) => (a, b),
            (7, 6) => (b, a),
            _ => return None,
        };
        g.neighbors(v1)
            .find(|&w| w != v2 && g.degree(w) == 6)
            .map(|v4| ReducibleConfig::Face567 { v1, v2, v3, v4 })
    })
}

/// The largest `k`-alternator, found by peeling: start from all vertices
/// of degree `1..=k` and their neighbors, then repeatedly drop `y` with too
/// few `B`-edges and `x` that lost an edge, until nothing changes.
pub fn find_k_alternator(g: &Graph, m: usize, k: usize) -> Option<Alternator> {
    assert!(
        (3..=max_alternator_k(m)).contains(&k),
        "k = {k} outside 3..={}",
        max_alternator_k(m)
    );
    let n = g.num_vertices();
    let mut in_x: Vec<bool> = g.vertices().map(|v| (1..=k).contains(&g.degree(v))).collect();
    let mut in_y = vec![false; n];
    for v in g.vertices().filter(|&v| in_x[v]) {
        for w in g.neighbors(v) {
            if !in_x[w] {
                in_y[w] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if in_x[v] && g.neighbors(v).any(|w| !in_y[w]) {
                in_x[v] = false;
                changed = true;
            }
        }
        for v in 0..n {
            if in_y[v] {
                let db = g.neighbors(v).filter(|&w| in_x[w]).count();
                if db == 0 || db + m < g.degree(v) + k {
                    in_y[v] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let x: Vec<usize> = (0..n).filter(|&v| in_x[v]).collect();
    if x.is_empty() {
        return None;
    }
    let y: Vec<usize> = (0..n).filter(|&v| in_y[v]).collect();
    let mut edges: Vec<Edge> = x.iter().flat_map(|&v| g.incident_edges(v)).collect();
    edges.sort_unstable();
    Some(Alternator { k, x, y, edges })
}

pub fn alternator(g: &Graph, m: usize) -> Option<ReducibleConfig> {
    (3..=max_alternator_k(m))
        .find_map(|k| find_k_alternator(g, m, k))
        .map(ReducibleConfig::Alternator)
}

type Detector = fn(&Graph, usize) -> Option<ReducibleConfig>;

/// Detectors in search order: cheap degree checks, then triangle scans,
/// then alternator peeling.
pub const DETECTORS: [(ConfigKind, Detector); 8] = [
    (ConfigKind::SparseEdge, sparse_edge),
    (ConfigKind::LightEdge, light_edge),
    (ConfigKind::Deg4LowNbr, deg4_low_neighbor),
    (ConfigKind::TwoDeg2, two_deg2),
    (ConfigKind::TwinLowNbr, twin_low_neighbors),
    (ConfigKind::Face566, face_566),
    (ConfigKind::Face567, face_567),
    (ConfigKind::Alternator, alternator),
];

pub fn find_configuration(g: &Graph, m: usize) -> Result<ReducibleConfig, IrreducibleError> {
    DETECTORS
        .iter()
        .find_map(|(_, detect)| detect(g, m))
        .ok_or(IrreducibleError {
            m,
            vertices: g.num_vertices(),
            edges: g.num_edges(),
        })
}
