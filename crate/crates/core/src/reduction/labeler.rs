//! Labels plane graphs with `Δ ≤ M` using colors `0..=M+2`.
//!
//! Reductions are applied iteratively until the remaining graph is tiny,
//! which is labeled by the exact solver; the reductions are then undone in
//! reverse order, extending the labeling at each level. Vertex ids never
//! change: vertices a reduction deletes stay behind as isolated vertices.

use serde::Serialize;
use thiserror::Error;

use super::config::{find_configuration, ConfigKind, IrreducibleError, ReducibleConfig};
use super::extend::{extend, replay, BoundCheck, ExtendError, TraceStep};
use crate::exact::{label_with_k, SolveError, DEFAULT_BUDGET};
use crate::graph::{Edge, Graph, GraphError, PlaneGraph};
use crate::labeling::{validate, Color, ColorInterval, Element, PartialLabeling, Violation};

pub const MIN_M: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelOptions {
    /// Graphs with at most this many non-isolated vertices plus edges go to
    /// the exact solver.
    pub base_threshold: usize,
    pub budget: u64,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions {
            base_threshold: 12,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// One undone reduction, in extension order.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionStep {
    pub config_kind: ConfigKind,
    pub witness: Vec<Element>,
    pub config: ReducibleConfig,
    pub assignments: Vec<TraceStep>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelRun {
    pub labeling: PartialLabeling,
    pub steps: Vec<ReductionStep>,
    pub checks: Vec<BoundCheck>,
    /// Elements (non-isolated vertices plus edges) of the base graph.
    pub base_elements: usize,
}

impl LabelRun {
    pub fn max_color(&self) -> Option<Color> {
        self.labeling.max_color()
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }
}

#[derive(Debug, Clone, Error)]
pub enum LabelError {
    #[error("M = {0} is below {MIN_M}")]
    MTooSmall(usize),
    #[error("maximum degree {delta} exceeds M = {m}")]
    DegreeExceedsM { delta: usize, m: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Irreducible(#[from] IrreducibleError),
    #[error(transparent)]
    Extend(#[from] ExtendError),
    #[error("base case: {0}")]
    Solve(#[from] SolveError),
    #[error("base graph has no labeling with colors 0..={0}")]
    BaseUnsolvable(Color),
    #[error("labeling at a reduction level fails validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidOutput(Vec<Violation>),
    #[error("replaying the trace of step {0} does not reproduce its labeling")]
    ReplayMismatch(usize),
}

impl LabelError {
    /// Failures that contradict the correctness argument rather than
    /// rejecting the input.
    pub fn is_invariant_failure(&self) -> bool {
        !matches!(
            self,
            LabelError::MTooSmall(_) | LabelError::DegreeExceedsM { .. } | LabelError::Graph(_)
        )
    }
}

/// Edge changes made by one reduction.
struct Undo {
    config: ReducibleConfig,
    removed: Vec<Edge>,
    added: Vec<Edge>,
}

fn reduce(g: &mut Graph, config: ReducibleConfig) -> Undo {
    let e = Edge::new;
    let (removed, added) = match config {
        ReducibleConfig::SparseEdge { u, v } | ReducibleConfig::Deg4LowNbr { u, v } => (vec![e(u, v)], vec![]),
        ReducibleConfig::LightEdge { light, other } => (vec![e(light, other)], vec![]),
        ReducibleConfig::Alternator(ref a) => (a.edges.clone(), vec![]),
        ReducibleConfig::Face566 { v1, v2, v3 } | ReducibleConfig::Face567 { v1, v2, v3, .. } => {
            (vec![e(v1, v2), e(v1, v3)], vec![])
        }
        ReducibleConfig::TwinLowNbr { v, v1, v2, .. } => (vec![e(v, v1), e(v, v2)], vec![]),
        ReducibleConfig::TwoDeg2 {
            v,
            x,
            y,
            x_far,
            y_far,
        } => {
            let removed = vec![e(v, x), e(x, x_far), e(v, y), e(y, y_far)];
            if x_far == y_far {
                (removed, vec![])
            } else {
                // suppress x and y: the paths v-x-x_far, v-y-y_far become edges
                (removed, vec![e(v, x_far), e(v, y_far)])
            }
        }
    };
    for f in &removed {
        g.remove_edge(f.u(), f.v()).expect("configuration edges exist");
    }
    for f in &added {
        g.add_edge(f.u(), f.v()).expect("suppressed paths end at non-neighbors of v");
    }
    Undo {
        config,
        removed,
        added,
    }
}

/// The graph `config` reduces `g` to: the same vertex set with the
/// configuration's edges removed (and, for two suppressed 2-vertices, the
/// shortcut edges added).
pub fn reduced_graph(g: &Graph, config: &ReducibleConfig) -> Graph {
    let mut h = g.clone();
    reduce(&mut h, config.clone());
    h
}

fn undo(g: &mut Graph, u: &Undo) {
    for f in &u.added {
        g.remove_edge(f.u(), f.v()).expect("added edge still present");
    }
    for f in &u.removed {
        g.add_edge(f.u(), f.v()).expect("removed edge still absent");
    }
}

fn elements(g: &Graph) -> usize {
    g.vertices().filter(|&v| g.degree(v) > 0).count() + g.num_edges()
}

/// Labels a connected plane graph with colors `0..=M+2`.
pub fn label_planar(g: &PlaneGraph, m: usize) -> Result<LabelRun, LabelError> {
    label_planar_with(g, m, LabelOptions::default())
}

pub fn label_planar_with(g: &PlaneGraph, m: usize, opts: LabelOptions) -> Result<LabelRun, LabelError> {
    g.trace_faces()?;
    label_graph(g.graph(), m, opts)
}

/// The labeler on an abstract graph. Planarity is not checked; on a
/// non-planar graph the search for a configuration may fail.
pub fn label_graph(g: &Graph, m: usize, opts: LabelOptions) -> Result<LabelRun, LabelError> {
    if m < MIN_M {
        return Err(LabelError::MTooSmall(m));
    }
    if g.max_degree() > m {
        return Err(LabelError::DegreeExceedsM {
            delta: g.max_degree(),
            m,
        });
    }
    let c = ColorInterval::for_planar(m);
    let mut work = g.clone();
    let mut stack = Vec::new();
    while work.num_edges() > 0 && elements(&work) > opts.base_threshold {
        let config = find_configuration(&work, m)?;
        debug_assert!(config.holds(&work, m));
        stack.push(reduce(&mut work, config));
    }
    let base_elements = elements(&work);
    let mut phi = label_with_k(&work, c.d(), c.k(), opts.budget)?.ok_or(LabelError::BaseUnsolvable(c.k()))?;

    let mut steps = Vec::with_capacity(stack.len());
    let mut checks = Vec::new();
    while let Some(u) = stack.pop() {
        undo(&mut work, &u);
        let sub = phi.clone();
        let ext = extend(&work, phi, &u.config, c, m)?;
        if replay(&sub, &ext.trace) != ext.labeling {
            return Err(LabelError::ReplayMismatch(steps.len()));
        }
        let violations = validate(&work, &ext.labeling, c).expect("labeling stays inside the graph");
        if !violations.is_empty() || !ext.labeling.is_total_on(&work) {
            return Err(LabelError::InvalidOutput(violations));
        }
        checks.extend(ext.checks);
        steps.push(ReductionStep {
            config_kind: u.config.kind(),
            witness: u.config.witness(),
            config: u.config,
            assignments: ext.trace,
        });
        phi = ext.labeling;
    }
    Ok(LabelRun {
        labeling: phi,
        steps,
        checks,
        base_elements,
    })
}
