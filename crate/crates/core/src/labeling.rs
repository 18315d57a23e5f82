//! The (d,1)-total labeling constraint system and the availability calculus
//! for partial labelings.
//!
//! A labeling assigns colors from `{0, ..., k}` to vertices and edges such
//! that adjacent vertices differ, adjacent edges differ, and a vertex and an
//! incident edge differ by at least `d`. Uncolored elements impose nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph};

pub type Color = u32;
pub type ColorSet = BTreeSet<Color>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    Vertex(usize),
    Edge(Edge),
}

impl Element {
    pub fn edge(a: usize, b: usize) -> Element {
        Element::Edge(Edge::new(a, b))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "v{v}"),
            Element::Edge(e) => write!(f, "e{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error("element {0} is not in the graph")]
    NotInGraph(Element),
    #[error("element {0} is already colored")]
    AlreadyColored(Element),
    #[error("separation d must be at least 1")]
    ZeroSeparation,
}

/// Colors `{0, ..., k}` with vertex-edge separation `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorInterval {
    k: Color,
    d: Color,
}

impl ColorInterval {
    pub fn new(k: Color, d: Color) -> Result<ColorInterval, LabelingError> {
        if d == 0 {
            return Err(LabelingError::ZeroSeparation);
        }
        Ok(ColorInterval { k, d })
    }

    /// The interval used by the planar labeler: `|C| = M + 3`, `d = 2`.
    pub fn for_planar(m: usize) -> ColorInterval {
        ColorInterval {
            k: m as Color + 2,
            d: 2,
        }
    }

    pub fn k(self) -> Color {
        self.k
    }

    pub fn d(self) -> Color {
        self.d
    }

    pub fn size(self) -> usize {
        self.k as usize + 1
    }

    pub fn all(self) -> ColorSet {
        (0..=self.k).collect()
    }

    /// Colors within distance `d - 1` of `c`, clipped to the interval.
    pub fn blocked_around(self, c: Color) -> std::ops::RangeInclusive<Color> {
        let r = self.d - 1;
        c.saturating_sub(r)..=(c + r).min(self.k)
    }
}

/// A partial assignment of colors to vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartialLabeling {
    vertices: BTreeMap<usize, Color>,
    edges: BTreeMap<Edge, Color>,
}

impl PartialLabeling {
    pub fn new() -> PartialLabeling {
        PartialLabeling::default()
    }

    pub fn get(&self, x: Element) -> Option<Color> {
        match x {
            Element::Vertex(v) => self.vertices.get(&v).copied(),
            Element::Edge(e) => self.edges.get(&e).copied(),
        }
    }

    pub fn vertex(&self, v: usize) -> Option<Color> {
        self.vertices.get(&v).copied()
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<Color> {
        self.edges.get(&Edge::new(a, b)).copied()
    }

    pub fn set(&mut self, x: Element, c: Color) -> Option<Color> {
        match x {
            Element::Vertex(v) => self.vertices.insert(v, c),
            Element::Edge(e) => self.edges.insert(e, c),
        }
    }

    /// Removes the color of `x`, returning it.
    pub fn erase(&mut self, x: Element) -> Option<Color> {
        match x {
            Element::Vertex(v) => self.vertices.remove(&v),
            Element::Edge(e) => self.edges.remove(&e),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, Color)> + '_ {
        self.vertices
            .iter()
            .map(|(&v, &c)| (Element::Vertex(v), c))
            .chain(self.edges.iter().map(|(&e, &c)| (Element::Edge(e), c)))
    }

    pub fn max_color(&self) -> Option<Color> {
        self.vertices.values().chain(self.edges.values()).max().copied()
    }

    /// True when every vertex and edge of `g` is colored.
    pub fn is_total_on(&self, g: &Graph) -> bool {
        self.vertices.len() == g.num_vertices()
            && self.edges.len() == g.num_edges()
            && g.vertices().all(|v| self.vertices.contains_key(&v))
            && g.edges().iter().all(|e| self.edges.contains_key(e))
    }

    /// Colors of colored edges at `v`: E(v).
    pub fn edge_colors_at(&self, g: &Graph, v: usize) -> ColorSet {
        g.incident_edges(v)
            .filter_map(|e| self.edges.get(&e).copied())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    ColorOutOfRange,
    AdjacentVertices,
    AdjacentEdges,
    Incidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub first: Element,
    pub second: Option<Element>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.second {
            Some(s) => write!(f, "{:?}: {} vs {}", self.rule, self.first, s),
            None => write!(f, "{:?}: {}", self.rule, self.first),
        }
    }
}

fn check_membership(g: &Graph, x: Element) -> Result<(), LabelingError> {
    let ok = match x {
        Element::Vertex(v) => g.has_vertex(v),
        Element::Edge(e) => g.has_edge(e.u(), e.v()),
    };
    if ok {
        Ok(())
    } else {
        Err(LabelingError::NotInGraph(x))
    }
}

/// Every violated constraint among the colored elements of `phi`. An empty
/// list means `phi` is a valid partial labeling.
pub fn validate(
    g: &Graph,
    phi: &PartialLabeling,
    c: ColorInterval,
) -> Result<Vec<Violation>, LabelingError> {
    for (x, _) in phi.iter() {
        check_membership(g, x)?;
    }
    let mut out = Vec::new();
    for (x, col) in phi.iter() {
        if col > c.k {
            out.push(Violation {
                rule: Rule::ColorOutOfRange,
                first: x,
                second: None,
            });
        }
    }
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let (cu, cv) = (phi.vertex(u), phi.vertex(v));
        if let (Some(a), Some(b)) = (cu, cv) {
            if a == b {
                out.push(Violation {
                    rule: Rule::AdjacentVertices,
                    first: Element::Vertex(u),
                    second: Some(Element::Vertex(v)),
                });
            }
        }
        if let Some(ce) = phi.edges.get(&e) {
            for (w, cw) in [(u, cu), (v, cv)] {
                if let Some(cw) = cw {
                    if ce.abs_diff(cw) < c.d {
                        out.push(Violation {
                            rule: Rule::Incidence,
                            first: Element::Vertex(w),
                            second: Some(Element::Edge(e)),
                        });
                    }
                }
            }
        }
    }
    for v in g.vertices() {
        let colored: Vec<(usize, Color)> = g
            .neighbors(v)
            .filter_map(|w| phi.edges.get(&Edge::new(v, w)).map(|&c| (w, c)))
            .collect();
        for (i, &(a, ca)) in colored.iter().enumerate() {
            for &(b, cb) in &colored[i + 1..] {
                if ca == cb {
                    out.push(Violation {
                        rule: Rule::AdjacentEdges,
                        first: Element::edge(v, a),
                        second: Some(Element::edge(v, b)),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// F(v) = E(v) ∪ I(v): colors of colored edges at `v`, plus the colors
/// within `d - 1` of `v`'s own color when `v` is colored.
pub fn forbidden_vertex_set(g: &Graph, phi: &PartialLabeling, c: ColorInterval, v: usize) -> ColorSet {
    let mut out = phi.edge_colors_at(g, v);
    if let Some(cv) = phi.vertex(v) {
        out.extend(c.blocked_around(cv));
    }
    out
}

/// A(uv) = C \ (F(u) ∪ F(v)) for an uncolored edge.
pub fn available_edge(
    g: &Graph,
    phi: &PartialLabeling,
    c: ColorInterval,
    e: Edge,
) -> Result<ColorSet, LabelingError> {
    let x = Element::Edge(e);
    check_membership(g, x)?;
    if phi.get(x).is_some() {
        return Err(LabelingError::AlreadyColored(x));
    }
    let mut blocked = forbidden_vertex_set(g, phi, c, e.u());
    blocked.extend(forbidden_vertex_set(g, phi, c, e.v()));
    Ok(c.all().difference(&blocked).copied().collect())
}

/// A(u) for an uncolored vertex: colors not used on neighbors and not within
/// `d - 1` of any colored incident edge.
pub fn available_vertex(
    g: &Graph,
    phi: &PartialLabeling,
    c: ColorInterval,
    u: usize,
) -> Result<ColorSet, LabelingError> {
    let x = Element::Vertex(u);
    check_membership(g, x)?;
    if phi.get(x).is_some() {
        return Err(LabelingError::AlreadyColored(x));
    }
    let mut blocked = ColorSet::new();
    for w in g.neighbors(u) {
        if let Some(cw) = phi.vertex(w) {
            blocked.insert(cw);
        }
        if let Some(ce) = phi.edge(u, w) {
            blocked.extend(c.blocked_around(ce));
        }
    }
    Ok(c.all().difference(&blocked).copied().collect())
}

/// Availability of any uncolored element.
pub fn available(
    g: &Graph,
    phi: &PartialLabeling,
    c: ColorInterval,
    x: Element,
) -> Result<ColorSet, LabelingError> {
    match x {
        Element::Vertex(v) => available_vertex(g, phi, c, v),
        Element::Edge(e) => available_edge(g, phi, c, e),
    }
}
