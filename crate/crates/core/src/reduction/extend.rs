//! Extending a labeling of a reduced graph back to the graph it came from.
//!
//! Each configuration kind has its own procedure. At every step where a
//! color is drawn from an availability set, the measured size is recorded
//! together with the lower bound the counting argument promises for that
//! step, so callers can confirm the argument holds on the instance.

use serde::Serialize;
use thiserror::Error;

use super::config::{Alternator, ConfigKind, ReducibleConfig};
use super::list_coloring::{list_edge_color_bipartite, ListColoringError};
use crate::graph::{Edge, Graph};
use crate::labeling::{
    available_edge, available_vertex, forbidden_vertex_set, Color, ColorInterval, ColorSet,
    Element, PartialLabeling,
};

/// Node cap for the local recoloring search of [`Extender::resolve_star`].
const STAR_NODE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Action {
    Assign(Color),
    Erase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub element: Element,
    pub action: Action,
    /// Size of the availability set the color was drawn from, when any.
    pub available: Option<usize>,
}

/// Measured availability against the promised lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub kind: ConfigKind,
    pub step: String,
    pub measured: usize,
    pub claimed: i64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.measured as i64 >= self.claimed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("{kind:?}: no color available at step {step:?} for {element}")]
    Empty {
        kind: ConfigKind,
        step: String,
        element: Element,
        trace: Vec<TraceStep>,
    },
    #[error("{kind:?}: {msg}")]
    Invariant {
        kind: ConfigKind,
        msg: String,
        trace: Vec<TraceStep>,
    },
    #[error("{kind:?}: list edge coloring failed: {source}")]
    ListColoring {
        kind: ConfigKind,
        source: ListColoringError,
    },
}

#[derive(Debug, Clone)]
pub struct Extension {
    pub labeling: PartialLabeling,
    pub trace: Vec<TraceStep>,
    pub checks: Vec<BoundCheck>,
}

struct Extender<'a> {
    g: &'a Graph,
    m: i64,
    c: ColorInterval,
    kind: ConfigKind,
    phi: PartialLabeling,
    trace: Vec<TraceStep>,
    checks: Vec<BoundCheck>,
}

fn lowest(set: &ColorSet) -> Option<Color> {
    set.iter().next().copied()
}

impl<'a> Extender<'a> {
    fn deg(&self, v: usize) -> i64 {
        self.g.degree(v) as i64
    }

    /// |C| = M + 3.
    fn size(&self) -> i64 {
        self.m + 3
    }

    fn invariant(&self, msg: impl Into<String>) -> ExtendError {
        ExtendError::Invariant {
            kind: self.kind,
            msg: msg.into(),
            trace: self.trace.clone(),
        }
    }

    fn avail_edge(&self, a: usize, b: usize) -> Result<ColorSet, ExtendError> {
        available_edge(self.g, &self.phi, self.c, Edge::new(a, b)).map_err(|e| self.invariant(e.to_string()))
    }

    fn avail_vertex(&self, v: usize) -> Result<ColorSet, ExtendError> {
        available_vertex(self.g, &self.phi, self.c, v).map_err(|e| self.invariant(e.to_string()))
    }

    fn forbidden(&self, v: usize) -> ColorSet {
        forbidden_vertex_set(self.g, &self.phi, self.c, v)
    }

    fn measure(&mut self, step: &str, set: &ColorSet, claimed: i64) {
        self.checks.push(BoundCheck {
            kind: self.kind,
            step: step.to_string(),
            measured: set.len(),
            claimed,
        });
    }

    fn assign(&mut self, x: Element, color: Color, available: Option<usize>) {
        self.phi.set(x, color);
        self.trace.push(TraceStep {
            element: x,
            action: Action::Assign(color),
            available,
        });
    }

    fn erase(&mut self, x: Element) -> Option<Color> {
        let old = self.phi.erase(x);
        if old.is_some() {
            self.trace.push(TraceStep {
                element: x,
                action: Action::Erase,
                available: None,
            });
        }
        old
    }

    /// Assigns the lowest color of `set` to `x`.
    fn take_lowest(&mut self, step: &str, x: Element, set: &ColorSet) -> Result<Color, ExtendError> {
        let c = lowest(set).ok_or_else(|| ExtendError::Empty {
            kind: self.kind,
            step: step.to_string(),
            element: x,
            trace: self.trace.clone(),
        })?;
        self.assign(x, c, Some(set.len()));
        Ok(c)
    }

    /// Measures and colors edge `ab` with its lowest available color.
    fn color_edge(&mut self, step: &str, a: usize, b: usize, claimed: i64) -> Result<Color, ExtendError> {
        let set = self.avail_edge(a, b)?;
        self.measure(step, &set, claimed);
        self.take_lowest(step, Element::edge(a, b), &set)
    }

    /// Measures and colors vertex `v` with its lowest available color, where
    /// all neighbors and incident edges are colored: at most `4 d(v)` colors
    /// are blocked.
    fn color_low_vertex(&mut self, step: &str, v: usize) -> Result<Color, ExtendError> {
        let set = self.avail_vertex(v)?;
        let claimed = self.size() - 4 * self.deg(v);
        self.measure(step, &set, claimed);
        self.take_lowest(step, Element::Vertex(v), &set)
    }

    /// Assigns a color that a counting argument (not availability) says is
    /// free, verifying it really is.
    fn place(&mut self, a: usize, b: usize, color: Color) -> Result<(), ExtendError> {
        let set = self.avail_edge(a, b)?;
        if !set.contains(&color) {
            return Err(self.invariant(format!("color {color} not available on {}", Edge::new(a, b))));
        }
        self.assign(Element::edge(a, b), color, Some(set.len()));
        Ok(())
    }

    /// Colors two uncolored edges at a common vertex, `first` before
    /// `second`, after measuring both against their bounds.
    fn color_pair(
        &mut self,
        first: (usize, usize, i64),
        second: (usize, usize, i64),
    ) -> Result<(), ExtendError> {
        let a_first = self.avail_edge(first.0, first.1)?;
        let a_second = self.avail_edge(second.0, second.1)?;
        self.measure("first edge", &a_first, first.2);
        self.measure("second edge", &a_second, second.2);
        self.take_lowest("first edge", Element::edge(first.0, first.1), &a_first)?;
        let rest = self.avail_edge(second.0, second.1)?;
        self.take_lowest("second edge", Element::edge(second.0, second.1), &rest)?;
        Ok(())
    }

    /// Removing an edge between two vertices that keep their colors drops
    /// the constraint between those vertex colors, so the sub-labeling may
    /// give both the same color. Recolors one endpoint (first `a`, then
    /// `b`) so the counting arguments below start from a labeling in which
    /// the pair differs.
    fn separate_pair(&mut self, a: usize, b: usize) -> Result<(), ExtendError> {
        let (Some(ca), Some(cb)) = (self.phi.vertex(a), self.phi.vertex(b)) else {
            return Ok(());
        };
        if ca != cb {
            return Ok(());
        }
        for w in [a, b] {
            self.erase(Element::Vertex(w));
            let set = self.avail_vertex(w)?;
            if let Some(c) = lowest(&set) {
                self.assign(Element::Vertex(w), c, Some(set.len()));
                return Ok(());
            }
            self.assign(Element::Vertex(w), ca, None);
        }
        // no color fits as is: recolor a vertex together with its colored
        // edges
        for w in [a, b] {
            if self.resolve_star(w)? {
                return Ok(());
            }
        }
        Err(self.invariant(format!("cannot separate the colors of {a} and {b}")))
    }

    /// Erases `w` and its colored edges and searches for a recoloring of
    /// them with everything else fixed. Restores the old colors on failure.
    fn resolve_star(&mut self, w: usize) -> Result<bool, ExtendError> {
        let edges: Vec<(Edge, Color)> = self
            .g
            .incident_edges(w)
            .filter_map(|e| self.phi.get(Element::Edge(e)).map(|c| (e, c)))
            .collect();
        let mut trial = self.phi.clone();
        trial.erase(Element::Vertex(w));
        for (e, _) in &edges {
            trial.erase(Element::Edge(*e));
        }
        let mut order = vec![Element::Vertex(w)];
        order.extend(edges.iter().map(|(e, _)| Element::Edge(*e)));
        let mut nodes = 0u64;
        if !self.search_star(&mut trial, &order, &mut nodes) {
            return Ok(false);
        }
        self.erase(Element::Vertex(w));
        for (e, _) in &edges {
            self.erase(Element::Edge(*e));
        }
        for x in order {
            let c = trial.get(x).expect("search colors every element");
            self.assign(x, c, None);
        }
        Ok(true)
    }

    fn search_star(&self, phi: &mut PartialLabeling, order: &[Element], nodes: &mut u64) -> bool {
        let Some((&x, rest)) = order.split_first() else {
            return true;
        };
        *nodes += 1;
        if *nodes > STAR_NODE_LIMIT {
            return false;
        }
        let Ok(set) = crate::labeling::available(self.g, phi, self.c, x) else {
            return false;
        };
        for c in set {
            phi.set(x, c);
            if self.search_star(phi, rest, nodes) {
                return true;
            }
            phi.erase(x);
        }
        false
    }

    fn sparse_edge(&mut self, u: usize, v: usize) -> Result<(), ExtendError> {
        self.separate_pair(u, v)?;
        // F(u) ∪ F(v) has at most d(u) + d(v) − 2 + 6 colors
        let claimed = self.size() - (self.deg(u) + self.deg(v) + 4);
        self.color_edge("edge", u, v, claimed)?;
        Ok(())
    }

    fn light_edge(&mut self, light: usize, other: usize) -> Result<(), ExtendError> {
        self.erase(Element::Vertex(light));
        let claimed = self.size() - (self.deg(light) + self.deg(other) + 1);
        self.color_edge("edge", light, other, claimed)?;
        self.color_low_vertex("light vertex", light)?;
        Ok(())
    }

    fn deg4_low_neighbor(&mut self, u: usize, v: usize) -> Result<(), ExtendError> {
        self.erase(Element::Vertex(u));
        let a_u = self.avail_vertex(u)?;
        // four neighbor colors and three windows of three
        self.measure("vertex u", &a_u, self.size() - 13);
        let a_uv = self.avail_edge(u, v)?;
        self.measure("edge uv", &a_uv, self.size() - 3 - (self.deg(v) + 2));
        // a color for u whose window leaves something in A(uv); the lowest
        // one works unless A(uv) sits inside its window, and then the next
        // one does
        let c = self.c;
        let chosen = a_u
            .iter()
            .copied()
            .find(|&alpha| a_uv.iter().any(|x| !c.blocked_around(alpha).contains(x)))
            .ok_or_else(|| self.invariant("every color of u blocks all of A(uv)"))?;
        self.assign(Element::Vertex(u), chosen, Some(a_u.len()));
        let rest = self.avail_edge(u, v)?;
        self.take_lowest("edge uv", Element::edge(u, v), &rest)?;
        Ok(())
    }

    fn face_566(&mut self, v1: usize, v2: usize, v3: usize) -> Result<(), ExtendError> {
        self.separate_pair(v1, v2)?;
        self.separate_pair(v1, v3)?;
        let p1 = self.phi.vertex(v1).ok_or_else(|| self.invariant("v1 uncolored"))?;
        let (f2, f3) = (self.forbidden(v2), self.forbidden(v3));
        let heavy = if f2.contains(&p1) {
            v2
        } else if f3.contains(&p1) {
            v3
        } else {
            // Φ(v1) is free for v2v3: recolor it so Φ(v1) is shared with F(v2)
            self.erase(Element::edge(v2, v3));
            self.place(v2, v3, p1)?;
            v2
        };
        let light = if heavy == v2 { v3 } else { v2 };
        let f1 = self.deg(v1) + 1;
        let light_bound = self.size() - (f1 + self.deg(light) + 2);
        let heavy_bound = self.size() - (f1 + self.deg(heavy) + 2 - 1);
        self.color_pair((v1, light, light_bound), (v1, heavy, heavy_bound))
    }

    fn face_567(&mut self, v1: usize, v2: usize, v3: usize, v4: usize) -> Result<(), ExtendError> {
        self.separate_pair(v1, v2)?;
        self.separate_pair(v1, v3)?;
        let p1 = self.phi.vertex(v1).ok_or_else(|| self.invariant("v1 uncolored"))?;
        let f1 = self.deg(v1) + 1;
        let (d2, d3) = (self.deg(v2), self.deg(v3));
        let m = self.m;
        let bound = |overlap: i64, d: i64| m + 3 - (f1 + d + 2 - overlap);

        if self.phi.edge(v2, v3) == Some(p1) {
            return self.color_pair((v1, v3, bound(1, d3)), (v1, v2, bound(1, d2)));
        }
        let e1 = self.phi.edge_colors_at(self.g, v1);
        let (f2, f3) = (self.forbidden(v2), self.forbidden(v3));
        if let Some(&alpha) = e1.iter().find(|c| !f2.contains(c) && !f3.contains(c)) {
            self.erase(Element::edge(v2, v3));
            self.place(v2, v3, alpha)?;
            return self.color_pair((v1, v3, bound(1, d3)), (v1, v2, bound(1, d2)));
        }
        // E(v1) ⊆ F(v2) ∪ F(v3)
        let a = e1.intersection(&f2).count() as i64;
        let b = e1.intersection(&f3).count() as i64;
        if b > 0 {
            if a == 0 {
                return self.color_pair((v1, v2, bound(a, d2)), (v1, v3, bound(b, d3)));
            }
            return self.color_pair((v1, v3, bound(b, d3)), (v1, v2, bound(a, d2)));
        }
        // E(v1) ⊆ F(v2) and E(v1) ∩ F(v3) = ∅: move the color of v1v4 onto v1v3
        let mut candidates = vec![v4];
        candidates.extend(self.g.neighbors(v1).filter(|&w| ![v2, v3, v4].contains(&w)));
        for w in candidates {
            let Some(old) = self.phi.edge(v1, w) else { continue };
            self.erase(Element::edge(v1, w));
            let mut recolor = self.avail_edge(v1, w)?;
            recolor.remove(&old);
            if recolor.is_empty() {
                self.assign(Element::edge(v1, w), old, None);
                continue;
            }
            self.measure("recolor v1v4", &recolor, self.size() - (self.deg(v1) + self.deg(w) + 3));
            self.take_lowest("recolor v1v4", Element::edge(v1, w), &recolor)?;
            let a13 = self.avail_edge(v1, v3)?;
            self.measure("edge v1v3", &a13, 1);
            if !a13.contains(&old) {
                return Err(self.invariant(format!("freed color {old} not available on v1v3")));
            }
            self.assign(Element::edge(v1, v3), old, Some(a13.len()));
            let a12 = self.avail_edge(v1, v2)?;
            // measured after v1v3 is colored, so one less than the count
            // with both edges open
            self.measure("edge v1v2", &a12, bound(2, d2) - 1);
            self.take_lowest("edge v1v2", Element::edge(v1, v2), &a12)?;
            return Ok(());
        }
        Err(self.invariant("no neighbor edge of v1 can be recolored"))
    }

    fn twin_low_neighbors(&mut self, v: usize, v1: usize, v2: usize, apex: usize) -> Result<(), ExtendError> {
        self.erase(Element::Vertex(v1));
        self.erase(Element::Vertex(v2));
        let claimed = |s: &Self, w: usize| s.size() - (s.deg(w) + s.deg(v));
        let a1 = self.avail_edge(v, v1)?;
        let a2 = self.avail_edge(v, v2)?;
        self.measure("edge vv1", &a1, claimed(self, v1));
        self.measure("edge vv2", &a2, claimed(self, v2));
        if a1.len() == 1 && a1 == a2 {
            // both edges want the same single color: swap the colors of
            // apex-v1 and apex-v
            let c_av1 = self.erase(Element::edge(apex, v1)).ok_or_else(|| self.invariant("apex-v1 uncolored"))?;
            let c_av = self.erase(Element::edge(apex, v)).ok_or_else(|| self.invariant("apex-v uncolored"))?;
            self.place(apex, v1, c_av)?;
            self.place(apex, v, c_av1)?;
            let b1 = self.avail_edge(v, v1)?;
            let b2 = self.avail_edge(v, v2)?;
            self.measure("edge vv1 after exchange", &b1, claimed(self, v1));
            self.measure("edge vv2 after exchange", &b2, claimed(self, v2) + 1);
        }
        let (b1, b2) = (self.avail_edge(v, v1)?, self.avail_edge(v, v2)?);
        let (first, second) = if b1.len() <= b2.len() { (v1, v2) } else { (v2, v1) };
        let set = if first == v1 { b1 } else { b2 };
        self.take_lowest("first low edge", Element::edge(v, first), &set)?;
        let rest = self.avail_edge(v, second)?;
        self.take_lowest("second low edge", Element::edge(v, second), &rest)?;
        self.color_low_vertex("vertex v1", v1)?;
        self.color_low_vertex("vertex v2", v2)?;
        Ok(())
    }

    fn two_deg2(&mut self, v: usize, x: usize, y: usize, x_far: usize, y_far: usize) -> Result<(), ExtendError> {
        self.erase(Element::Vertex(x));
        self.erase(Element::Vertex(y));
        if x_far == y_far {
            let w = x_far;
            let edges = [Edge::new(v, x), Edge::new(v, y), Edge::new(w, x), Edge::new(w, y)];
            let mut lists = Vec::new();
            for e in edges {
                let hub = if e.contains(v) { v } else { w };
                let set = self.avail_edge(e.u(), e.v())?;
                self.measure("4-cycle edge", &set, self.size() - (self.deg(hub) + 1));
                lists.push(set);
            }
            let colors = list_edge_color_bipartite(&edges, &lists).map_err(|source| ExtendError::ListColoring {
                kind: self.kind,
                source,
            })?;
            for ((e, c), l) in edges.iter().zip(colors).zip(&lists) {
                self.assign(Element::Edge(*e), c, Some(l.len()));
            }
        } else {
            // the reduced graph carried v-x_far and v-y_far in place of the
            // two paths; hand their colors over crosswise
            let p = self
                .erase(Element::edge(v, x_far))
                .ok_or_else(|| self.invariant("v-x_far uncolored in reduced labeling"))?;
            let q = self
                .erase(Element::edge(v, y_far))
                .ok_or_else(|| self.invariant("v-y_far uncolored in reduced labeling"))?;
            self.place(x, x_far, p)?;
            self.place(v, y, p)?;
            self.place(y, y_far, q)?;
            self.place(v, x, q)?;
        }
        self.color_low_vertex("vertex x", x)?;
        self.color_low_vertex("vertex y", y)?;
        Ok(())
    }

    fn alternator(&mut self, alt: &Alternator) -> Result<(), ExtendError> {
        for &x in &alt.x {
            self.erase(Element::Vertex(x));
        }
        let mut lists = Vec::with_capacity(alt.edges.len());
        for &e in &alt.edges {
            let y = if alt.x.binary_search(&e.u()).is_ok() { e.v() } else { e.u() };
            let set = self.avail_edge(e.u(), e.v())?;
            // F(y) keeps only the d_G(y) − d_B(y) edges outside B
            let claimed = self.m - self.deg(y) + alt.b_degree(y) as i64;
            self.measure("alternator edge", &set, claimed);
            lists.push(set);
        }
        let colors = list_edge_color_bipartite(&alt.edges, &lists).map_err(|source| ExtendError::ListColoring {
            kind: self.kind,
            source,
        })?;
        for ((e, c), l) in alt.edges.iter().zip(colors).zip(&lists) {
            self.assign(Element::Edge(*e), c, Some(l.len()));
        }
        for &x in &alt.x {
            self.color_low_vertex("alternator vertex", x)?;
        }
        Ok(())
    }
}

/// Extends `sub`, a valid total labeling of the graph reduced by `config`,
/// to a total labeling of `g` with colors in `c`.
///
/// Vertex ids are shared between `g` and the reduced graph; vertices the
/// reduction isolates may carry colors in `sub` and are recolored here.
pub fn extend(
    g: &Graph,
    sub: PartialLabeling,
    config: &ReducibleConfig,
    c: ColorInterval,
    m: usize,
) -> Result<Extension, ExtendError> {
    let mut ex = Extender {
        g,
        m: m as i64,
        c,
        kind: config.kind(),
        phi: sub,
        trace: Vec::new(),
        checks: Vec::new(),
    };
    match *config {
        ReducibleConfig::SparseEdge { u, v } => ex.sparse_edge(u, v)?,
        ReducibleConfig::LightEdge { light, other } => ex.light_edge(light, other)?,
        ReducibleConfig::Alternator(ref a) => ex.alternator(a)?,
        ReducibleConfig::Deg4LowNbr { u, v } => ex.deg4_low_neighbor(u, v)?,
        ReducibleConfig::Face566 { v1, v2, v3 } => ex.face_566(v1, v2, v3)?,
        ReducibleConfig::Face567 { v1, v2, v3, v4 } => ex.face_567(v1, v2, v3, v4)?,
        ReducibleConfig::TwinLowNbr { v, v1, v2, apex } => ex.twin_low_neighbors(v, v1, v2, apex)?,
        ReducibleConfig::TwoDeg2 {
            v,
            x,
            y,
            x_far,
            y_far,
        } => ex.two_deg2(v, x, y, x_far, y_far)?,
    }
    Ok(Extension {
        labeling: ex.phi,
        trace: ex.trace,
        checks: ex.checks,
    })
}

/// Applies `trace` to `sub`; reproduces the extended labeling.
pub fn replay(sub: &PartialLabeling, trace: &[TraceStep]) -> PartialLabeling {
    let mut phi = sub.clone();
    for step in trace {
        match step.action {
            Action::Assign(c) => {
                phi.set(step.element, c);
            }
            Action::Erase => {
                phi.erase(step.element);
            }
        }
    }
    phi
}
