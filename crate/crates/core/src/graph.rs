//! Simple undirected graphs and combinatorial plane embeddings.
//!
//! A [`PlaneGraph`] is a [`Graph`] together with a rotation system: for every
//! vertex, the cyclic order of its neighbors. Faces are recovered by tracing
//! the rotation system; nothing here tries to decide planarity on its own.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("rotation mismatch at vertex {vertex}: {detail}")]
    RotationMismatch { vertex: usize, detail: String },
    #[error("graph is disconnected ({} components, first vertices {:?})", .0.len(), .0.iter().map(|c| c[0]).collect::<Vec<_>>())]
    Disconnected(Vec<Vec<usize>>),
    #[error("graph has no vertices")]
    Empty,
    #[error("Euler check failed: V - E + F = {0}")]
    Euler(i64),
    #[error("no edge {0}-{1}")]
    NoSuchEdge(usize, usize),
}

/// An undirected edge, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(usize, usize);

impl Edge {
    /// Panics on a loop; graphs never contain one.
    pub fn new(a: usize, b: usize) -> Edge {
        assert_ne!(a, b, "edge endpoints must differ");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> usize {
        self.0
    }

    pub fn v(self) -> usize {
        self.1
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`.
    pub fn other(self, x: usize) -> usize {
        if self.0 == x {
            self.1
        } else {
            debug_assert_eq!(self.1, x);
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.adj.len();
        for x in [a, b] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if !self.adj[a].insert(b) {
            return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
        }
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        if a >= self.adj.len() || !self.adj[a].remove(&b) {
            return Err(GraphError::NoSuchEdge(a, b));
        }
        self.adj[b].remove(&a);
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        v < self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].contains(&b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn neighbor_set(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    /// Edges incident with `v`, in neighbor order.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = Edge> + '_ {
        self.adj[v].iter().map(move |&w| Edge::new(v, w))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).min().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb.range(u + 1..) {
                out.push(Edge(u, v));
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced by `keep`, relabelled densely in increasing order.
    /// Returns the subgraph and the map from new ids to old ids.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut old_to_new = vec![usize::MAX; self.adj.len()];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            old_to_new[v] = i;
        }
        let mut h = Graph::new(sorted.len());
        for (i, &v) in sorted.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = old_to_new[w];
                if j != usize::MAX && i < j {
                    h.adj[i].insert(j);
                    h.adj[j].insert(i);
                }
            }
        }
        (h, sorted)
    }
}

/// A face of a plane graph: the closed boundary walk, one vertex per
/// directed boundary edge. A cut edge is walked twice, so it counts twice
/// toward the degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub boundary: Vec<usize>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.boundary.len()
    }

    /// Vertex degrees read around the boundary.
    pub fn degree_pattern(&self, g: &Graph) -> Vec<usize> {
        self.boundary.iter().map(|&v| g.degree(v)).collect()
    }
}

/// A graph with a rotation system (cyclic neighbor order per vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
}

impl PlaneGraph {
    /// Validates simplicity and that every rotation lists exactly the
    /// neighbors of its vertex. Connectivity and Euler are checked by
    /// [`PlaneGraph::trace_faces`].
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        rotation: Vec<Vec<usize>>,
    ) -> Result<PlaneGraph, GraphError> {
        let graph = Graph::from_edges(n, edges)?;
        PlaneGraph::from_graph(graph, rotation)
    }

    pub fn from_graph(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<PlaneGraph, GraphError> {
        if rotation.len() != graph.num_vertices() {
            return Err(GraphError::RotationMismatch {
                vertex: rotation.len().min(graph.num_vertices()),
                detail: format!(
                    "{} rotations for {} vertices",
                    rotation.len(),
                    graph.num_vertices()
                ),
            });
        }
        for (v, rot) in rotation.iter().enumerate() {
            let listed: BTreeSet<usize> = rot.iter().copied().collect();
            if listed.len() != rot.len() {
                return Err(GraphError::RotationMismatch {
                    vertex: v,
                    detail: "neighbor listed twice".into(),
                });
            }
            if let Some(w) = listed.difference(graph.neighbor_set(v)).next() {
                return Err(GraphError::RotationMismatch {
                    vertex: v,
                    detail: format!("extra edge {}", Edge::new(v, *w)),
                });
            }
            if let Some(w) = graph.neighbor_set(v).difference(&listed).next() {
                return Err(GraphError::RotationMismatch {
                    vertex: v,
                    detail: format!("missing edge {}", Edge::new(v, *w)),
                });
            }
        }
        Ok(PlaneGraph { graph, rotation })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// Traces faces of a connected plane graph and checks Euler's formula.
    pub fn trace_faces(&self) -> Result<Vec<Face>, GraphError> {
        if self.graph.num_vertices() == 0 {
            return Err(GraphError::Empty);
        }
        let comps = self.graph.components();
        if comps.len() > 1 {
            return Err(GraphError::Disconnected(comps));
        }
        let faces = self.trace_faces_unchecked();
        let euler = self.num_vertices() as i64 - self.num_edges() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(GraphError::Euler(euler));
        }
        Ok(faces)
    }

    /// Face tracing without the connectivity/Euler checks. Arriving at `v`
    /// from `u`, the walk leaves towards the successor of `u` in the rotation
    /// of `v`. An edgeless graph yields one empty face per vertex.
    pub fn trace_faces_unchecked(&self) -> Vec<Face> {
        let n = self.num_vertices();
        // position of each neighbor within a rotation
        let pos: Vec<std::collections::HashMap<usize, usize>> = self
            .rotation
            .iter()
            .map(|r| r.iter().enumerate().map(|(i, &w)| (w, i)).collect())
            .collect();
        let mut used: Vec<Vec<bool>> = self.rotation.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for u in 0..n {
            if self.rotation[u].is_empty() {
                faces.push(Face {
                    boundary: Vec::new(),
                });
                continue;
            }
            for i in 0..self.rotation[u].len() {
                if used[u][i] {
                    continue;
                }
                let mut boundary = Vec::new();
                let (mut a, mut ai) = (u, i);
                while !used[a][ai] {
                    used[a][ai] = true;
                    boundary.push(a);
                    let b = self.rotation[a][ai];
                    let back = pos[b][&a];
                    let next = (back + 1) % self.rotation[b].len();
                    a = b;
                    ai = next;
                }
                faces.push(Face { boundary });
            }
        }
        faces
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.graph.remove_edge(a, b)?;
        self.rotation[a].retain(|&w| w != b);
        self.rotation[b].retain(|&w| w != a);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> PlaneGraph {
        // vertex 3 sits inside triangle 0,1,2
        PlaneGraph::new(
            4,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = PlaneGraph::new(3, &[(0, 1), (1, 2), (2, 0)], vec![vec![1, 2], vec![2, 0], vec![0, 1]])
            .unwrap();
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn k4_has_four_triangles() {
        let faces = k4().trace_faces().unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn bad_k4_rotation_fails_euler() {
        let g = PlaneGraph::new(
            4,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
            vec![vec![1, 2, 3], vec![2, 3, 0], vec![0, 3, 1], vec![1, 0, 2]],
        )
        .unwrap();
        assert!(matches!(g.trace_faces(), Err(GraphError::Euler(_))));
    }

    #[test]
    fn path_has_one_face_of_degree_four() {
        let g = PlaneGraph::new(3, &[(0, 1), (1, 2)], vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].degree(), 4);
    }

    #[test]
    fn single_vertex_has_one_empty_face() {
        let g = PlaneGraph::new(1, &[], vec![vec![]]).unwrap();
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].degree(), 0);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            PlaneGraph::new(2, &[(0, 0)], vec![vec![], vec![]]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        let missing = PlaneGraph::new(2, &[(0, 1)], vec![vec![1], vec![]]).unwrap_err();
        assert!(matches!(missing, GraphError::RotationMismatch { vertex: 1, .. }));
        let extra = PlaneGraph::new(3, &[(0, 1)], vec![vec![1, 2], vec![0], vec![]]).unwrap_err();
        assert!(matches!(extra, GraphError::RotationMismatch { vertex: 0, .. }));
    }

    #[test]
    fn disconnected_rejected_by_tracing() {
        let g = PlaneGraph::new(4, &[(0, 1), (2, 3)], vec![vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert!(matches!(g.trace_faces(), Err(GraphError::Disconnected(c)) if c.len() == 2));
    }

    #[test]
    fn removing_edge_keeps_embedding() {
        let mut g = k4();
        g.remove_edge(0, 3).unwrap();
        let faces = g.trace_faces().unwrap();
        assert_eq!(faces.len(), 3);
        let degs: usize = faces.iter().map(Face::degree).sum();
        assert_eq!(degs, 2 * g.num_edges());
    }
}
