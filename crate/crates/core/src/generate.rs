//! Families of connected plane graphs with explicit rotation systems.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, PlaneGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("{family}: parameter n = {n} out of range (need {need})")]
    OutOfRange {
        family: &'static str,
        n: usize,
        need: &'static str,
    },
    #[error("stacked triangulation: no face left with all corners below degree {0}")]
    DegreeCapExhausted(usize),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Wheel(usize),
    Cycle(usize),
    Star(usize),
    StackedTriangulation { n: usize, seed: u64 },
    RandomPlanar { n: usize, seed: u64 },
}

impl Family {
    /// Parses `name` plus positional parameters, e.g. `("wheel", 12, 0)`.
    pub fn parse(name: &str, n: usize, seed: u64) -> Result<Family, GenerateError> {
        Ok(match name {
            "wheel" => Family::Wheel(n),
            "cycle" => Family::Cycle(n),
            "star" => Family::Star(n),
            "stacked" | "stacked_triangulation" => Family::StackedTriangulation { n, seed },
            "random" | "random_planar" => Family::RandomPlanar { n, seed },
            other => return Err(GenerateError::UnknownFamily(other.to_string())),
        })
    }
}

pub fn generate(family: Family) -> Result<PlaneGraph, GenerateError> {
    match family {
        Family::Wheel(n) => wheel(n),
        Family::Cycle(n) => cycle(n),
        Family::Star(n) => star(n),
        Family::StackedTriangulation { n, seed } => stacked_triangulation(n, seed, None),
        Family::RandomPlanar { n, seed } => random_planar(&RandomPlanar::new(n, seed)),
    }
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Result<PlaneGraph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::OutOfRange {
            family: "cycle",
            n,
            need: "n >= 3",
        });
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let rotation = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
    Ok(PlaneGraph::new(n, &edges, rotation).expect("cycle is well formed"))
}

/// Star with center 0 and leaves `1..=n`, `n >= 1`.
pub fn star(n: usize) -> Result<PlaneGraph, GenerateError> {
    if n < 1 {
        return Err(GenerateError::OutOfRange {
            family: "star",
            n,
            need: "n >= 1",
        });
    }
    let edges: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    let mut rotation = vec![(1..=n).collect::<Vec<_>>()];
    rotation.extend((1..=n).map(|_| vec![0]));
    Ok(PlaneGraph::new(n + 1, &edges, rotation).expect("star is well formed"))
}

/// Wheel with hub 0 of degree `n >= 3` and rim `1..=n`.
pub fn wheel(n: usize) -> Result<PlaneGraph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::OutOfRange {
            family: "wheel",
            n,
            need: "n >= 3",
        });
    }
    let rim = |i: usize| 1 + (i % n);
    let mut edges: Vec<_> = (0..n).map(|i| (0, rim(i))).collect();
    edges.extend((0..n).map(|i| (rim(i), rim(i + 1))));
    let mut rotation = vec![(0..n).map(rim).collect::<Vec<_>>()];
    for i in 0..n {
        // hub rotation runs forward, so each rim vertex sees next, hub, previous
        rotation.push(vec![rim(i + 1), 0, rim(i + n - 1)]);
    }
    Ok(PlaneGraph::new(n + 1, &edges, rotation).expect("wheel is well formed"))
}

/// Random stacked (Apollonian) triangulation on `n >= 3` vertices: start from
/// a triangle, repeatedly insert a vertex into a uniformly chosen face. With
/// `max_degree`, only faces whose corners all have degree below the cap are
/// eligible.
pub fn stacked_triangulation(
    n: usize,
    seed: u64,
    max_degree: Option<usize>,
) -> Result<PlaneGraph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::OutOfRange {
            family: "stacked_triangulation",
            n,
            need: "n >= 3",
        });
    }
    if let Some(cap) = max_degree {
        if cap < 3 && n > 3 {
            return Err(GenerateError::DegreeCapExhausted(cap));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        g.add_edge(a, b).unwrap();
    }
    rotation[0] = vec![1, 2];
    rotation[1] = vec![2, 0];
    rotation[2] = vec![0, 1];
    // faces as oriented triples (a, b, c): succ_b(a) = c, succ_c(b) = a, succ_a(c) = b
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for w in 3..n {
        let eligible: Vec<usize> = (0..faces.len())
            .filter(|&i| max_degree.is_none_or(|cap| faces[i].iter().all(|&x| g.degree(x) < cap)))
            .collect();
        let &fi = eligible
            .choose(&mut rng)
            .ok_or(GenerateError::DegreeCapExhausted(max_degree.unwrap_or(0)))?;
        let [a, b, c] = faces[fi];
        insert_after(&mut rotation[b], a, w);
        insert_after(&mut rotation[c], b, w);
        insert_after(&mut rotation[a], c, w);
        rotation[w] = vec![b, a, c];
        for x in [a, b, c] {
            g.add_edge(w, x).unwrap();
        }
        faces[fi] = [a, b, w];
        faces.push([b, c, w]);
        faces.push([c, a, w]);
    }
    Ok(PlaneGraph::from_graph(g, rotation).expect("stacking keeps rotations consistent"))
}

fn insert_after(rot: &mut Vec<usize>, anchor: usize, w: usize) {
    let i = rot.iter().position(|&x| x == anchor).expect("anchor in rotation");
    rot.insert(i + 1, w);
}

/// Parameters for [`random_planar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPlanar {
    pub n: usize,
    pub seed: u64,
    pub max_degree: Option<usize>,
    /// Probability of attempting to delete each edge.
    pub delete_prob: f64,
}

impl RandomPlanar {
    pub fn new(n: usize, seed: u64) -> RandomPlanar {
        RandomPlanar {
            n,
            seed,
            max_degree: None,
            delete_prob: 0.3,
        }
    }
}

/// A stacked triangulation with a random subset of non-bridge edges removed.
/// The result is connected and inherits the triangulation's embedding.
pub fn random_planar(p: &RandomPlanar) -> Result<PlaneGraph, GenerateError> {
    let mut g = stacked_triangulation(p.n, p.seed, p.max_degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut edges = g.graph().edges();
    edges.shuffle(&mut rng);
    for e in edges {
        if !rng.gen_bool(p.delete_prob.clamp(0.0, 1.0)) {
            continue;
        }
        let (a, b) = e.endpoints();
        let mut trial = g.graph().clone();
        trial.remove_edge(a, b).unwrap();
        if still_reaches(&trial, a, b) {
            g.remove_edge(a, b).unwrap();
        }
    }
    Ok(g)
}

fn still_reaches(g: &Graph, from: usize, to: usize) -> bool {
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}
