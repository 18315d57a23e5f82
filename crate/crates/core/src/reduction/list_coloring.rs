//! List edge coloring of bipartite graphs.
//!
//! A bipartite graph whose edge `uv` carries a list of at least
//! `max(d(u), d(v))` colors always has a proper edge coloring from the
//! lists (Borodin, Kostochka and Woodall). The search here is exact
//! backtracking, so under that precondition it always succeeds.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::Edge;
use crate::labeling::{Color, ColorSet};

/// Node cap for the search; exceeding it under a valid precondition is an
/// invariant failure rather than an expected outcome.
const NODE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ListColoringError {
    #[error("{edges} edges but {lists} lists")]
    LengthMismatch { edges: usize, lists: usize },
    #[error("edge {0} listed twice")]
    DuplicateEdge(Edge),
    #[error("graph is not bipartite (odd cycle through {0})")]
    NotBipartite(usize),
    #[error("list of edge {edge} has {have} colors, needs {need}")]
    ListTooShort { edge: Edge, have: usize, need: usize },
    #[error("no list edge coloring found although lists are large enough")]
    Exhausted,
}

fn check_bipartite(edges: &[Edge]) -> Result<(), ListColoringError> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in edges {
        adj.entry(e.u()).or_default().push(e.v());
        adj.entry(e.v()).or_default().push(e.u());
    }
    let mut side: HashMap<usize, bool> = HashMap::new();
    let mut starts: Vec<usize> = adj.keys().copied().collect();
    starts.sort_unstable();
    for s in starts {
        if side.contains_key(&s) {
            continue;
        }
        side.insert(s, false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let su = side[&u];
            for &w in &adj[&u] {
                match side.get(&w) {
                    Some(&sw) if sw == su => return Err(ListColoringError::NotBipartite(w)),
                    Some(_) => {}
                    None => {
                        side.insert(w, !su);
                        stack.push(w);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Colors every edge from its list so that edges sharing an endpoint differ.
/// Returns the colors in input order.
pub fn list_edge_color_bipartite(
    edges: &[Edge],
    lists: &[ColorSet],
) -> Result<Vec<Color>, ListColoringError> {
    if edges.len() != lists.len() {
        return Err(ListColoringError::LengthMismatch {
            edges: edges.len(),
            lists: lists.len(),
        });
    }
    let mut degree: HashMap<usize, usize> = HashMap::new();
    let mut seen = std::collections::HashSet::new();
    for &e in edges {
        if !seen.insert(e) {
            return Err(ListColoringError::DuplicateEdge(e));
        }
        *degree.entry(e.u()).or_default() += 1;
        *degree.entry(e.v()).or_default() += 1;
    }
    check_bipartite(edges)?;
    for (&e, list) in edges.iter().zip(lists) {
        let need = degree[&e.u()].max(degree[&e.v()]);
        if list.len() < need {
            return Err(ListColoringError::ListTooShort {
                edge: e,
                have: list.len(),
                need,
            });
        }
    }

    let mut conflicts = vec![Vec::new(); edges.len()];
    let mut at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        at.entry(e.u()).or_default().push(i);
        at.entry(e.v()).or_default().push(i);
    }
    for group in at.values() {
        for &a in group {
            for &b in group {
                if a != b {
                    conflicts[a].push(b);
                }
            }
        }
    }
    let domains: Vec<Vec<Color>> = lists.iter().map(|l| l.iter().copied().collect()).collect();
    let mut colors = vec![None; edges.len()];
    let mut nodes = 0;
    if search(&conflicts, domains, &mut colors, &mut nodes)? {
        Ok(colors.into_iter().map(Option::unwrap).collect())
    } else {
        Err(ListColoringError::Exhausted)
    }
}

/// Smallest-domain-first backtracking with forward checking.
fn search(
    conflicts: &[Vec<usize>],
    domains: Vec<Vec<Color>>,
    colors: &mut [Option<Color>],
    nodes: &mut u64,
) -> Result<bool, ListColoringError> {
    let pick = (0..colors.len())
        .filter(|&i| colors[i].is_none())
        .min_by_key(|&i| (domains[i].len(), i));
    let Some(i) = pick else {
        return Ok(true);
    };
    *nodes += 1;
    if *nodes > NODE_LIMIT {
        return Err(ListColoringError::Exhausted);
    }
    for &c in &domains[i] {
        let mut next = domains.clone();
        let mut alive = true;
        for &j in &conflicts[i] {
            if colors[j].is_none() {
                next[j].retain(|&x| x != c);
                if next[j].is_empty() {
                    alive = false;
                    break;
                }
            }
        }
        if !alive {
            continue;
        }
        colors[i] = Some(c);
        if search(conflicts, next, colors, nodes)? {
            return Ok(true);
        }
        colors[i] = None;
    }
    Ok(false)
}
