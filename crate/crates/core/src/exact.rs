//! Exact (d,1)-total labeling numbers of small graphs by backtracking with
//! forward checking, and the classical lower/upper bounds used to bracket
//! them.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::labeling::{Color, Element, PartialLabeling};

/// Largest `k` the bitmask search supports.
pub const MAX_K: Color = 62;

pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search budget exhausted after {nodes} nodes (while trying k = {k}); result unknown")]
    BudgetExhausted { nodes: u64, k: Color },
    #[error("k = {0} exceeds the supported maximum {MAX_K}")]
    TooManyColors(Color),
    #[error("separation d must be at least 1")]
    ZeroSeparation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub lambda: Color,
    pub witness: PartialLabeling,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub lower: Color,
    pub upper: Color,
    pub chromatic_number: Color,
    pub chromatic_index: Color,
}

/// One connected component flattened into an element list with constraint
/// adjacency.
struct Instance {
    elements: Vec<Element>,
    /// Elements that must get a different color.
    differ: Vec<Vec<usize>>,
    /// Elements whose color must be at least `d` away.
    separate: Vec<Vec<usize>>,
    /// Search order (indices into `elements`).
    order: Vec<usize>,
}

impl Instance {
    fn new(g: &Graph, component: &[usize]) -> Instance {
        let mut elements: Vec<Element> = component.iter().map(|&v| Element::Vertex(v)).collect();
        let edges: Vec<Edge> = g
            .edges()
            .into_iter()
            .filter(|e| component.binary_search(&e.u()).is_ok())
            .collect();
        elements.extend(edges.iter().map(|&e| Element::Edge(e)));
        let index: std::collections::HashMap<Element, usize> =
            elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elements.len();
        let mut differ = vec![Vec::new(); n];
        let mut separate = vec![Vec::new(); n];
        for &e in &edges {
            let ie = index[&Element::Edge(e)];
            let (iu, iv) = (index[&Element::Vertex(e.u())], index[&Element::Vertex(e.v())]);
            differ[iu].push(iv);
            differ[iv].push(iu);
            for iw in [iu, iv] {
                separate[ie].push(iw);
                separate[iw].push(ie);
            }
        }
        for &v in component {
            let inc: Vec<usize> = g.incident_edges(v).map(|e| index[&Element::Edge(e)]).collect();
            for (a, &x) in inc.iter().enumerate() {
                for &y in &inc[a + 1..] {
                    differ[x].push(y);
                    differ[y].push(x);
                }
            }
        }
        // vertices weigh 2*d(v), edges d(u)+d(v); heavier first, vertices
        // before edges on ties, then by id
        let key = |x: &Element| match *x {
            Element::Vertex(v) => (2 * g.degree(v), 1),
            Element::Edge(e) => (g.degree(e.u()) + g.degree(e.v()), 0),
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let (ka, kb) = (key(&elements[a]), key(&elements[b]));
            kb.cmp(&ka).then(elements[a].cmp(&elements[b]))
        });
        Instance {
            elements,
            differ,
            separate,
            order,
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    k: Color,
    d: Color,
    position: Vec<usize>,
    colors: Vec<Color>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn window(&self, c: Color) -> u64 {
        let lo = c.saturating_sub(self.d - 1);
        let hi = (c + self.d - 1).min(self.k);
        let width = hi - lo + 1;
        (((1u128 << width) - 1) as u64) << lo
    }

    fn dfs(&mut self, depth: usize, domains: &[u64]) -> Result<bool, SolveError> {
        if depth == self.inst.order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::BudgetExhausted {
                nodes: self.nodes,
                k: self.k,
            });
        }
        let i = self.inst.order[depth];
        let mut dom = domains[i];
        if depth == 0 {
            // c -> k - c maps labelings to labelings
            dom &= (1u64 << (self.k / 2 + 1)) - 1;
        }
        while dom != 0 {
            let c = dom.trailing_zeros() as Color;
            dom &= dom - 1;
            self.colors[i] = c;
            let mut next = domains.to_vec();
            let bit = 1u64 << c;
            let window = self.window(c);
            let mut alive = true;
            for (list, mask) in [(&self.inst.differ[i], bit), (&self.inst.separate[i], window)] {
                for &j in list {
                    if self.position[j] > depth {
                        next[j] &= !mask;
                        if next[j] == 0 {
                            alive = false;
                            break;
                        }
                    }
                }
                if !alive {
                    break;
                }
            }
            if alive && self.dfs(depth + 1, &next)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Searches for a `k`-labeling of one component; `Ok(None)` means none
/// exists.
fn solve_instance(
    inst: &Instance,
    d: Color,
    k: Color,
    budget: u64,
    nodes: &mut u64,
) -> Result<Option<Vec<Color>>, SolveError> {
    if k > MAX_K {
        return Err(SolveError::TooManyColors(k));
    }
    let mut position = vec![0; inst.elements.len()];
    for (p, &i) in inst.order.iter().enumerate() {
        position[i] = p;
    }
    let full = ((1u128 << (k + 1)) - 1) as u64;
    let domains = vec![full; inst.elements.len()];
    let mut s = Search {
        inst,
        k,
        d,
        position,
        colors: vec![0; inst.elements.len()],
        nodes: 0,
        budget: budget.saturating_sub(*nodes),
    };
    let found = s.dfs(0, &domains);
    *nodes += s.nodes;
    Ok(found?.then_some(s.colors))
}

fn record(inst: &Instance, colors: &[Color], out: &mut PartialLabeling) {
    for (x, &c) in inst.elements.iter().zip(colors) {
        out.set(*x, c);
    }
}

/// Lower bound: `Δ + d − 1`, raised to `Δ + d` when `d ≥ Δ`, or when the
/// graph is regular and `d ≥ 2`. Regular graphs with `d = 1` can meet
/// `Δ + d − 1` (the triangle has total chromatic number 3). An edgeless
/// graph needs only color 0.
pub fn lower_bound(g: &Graph, d: Color) -> Color {
    if g.num_edges() == 0 {
        return 0;
    }
    let delta = g.max_degree() as Color;
    if d >= delta || (d >= 2 && g.is_regular()) {
        delta + d
    } else {
        delta + d - 1
    }
}

/// Exact `λ_d^T(g)`: for each component, tries `k = lower_bound, lower_bound
/// + 1, ...` until a labeling is found.
pub fn lambda_exact(g: &Graph, d: Color, budget: u64) -> Result<SolveResult, SolveError> {
    if d == 0 {
        return Err(SolveError::ZeroSeparation);
    }
    let mut witness = PartialLabeling::new();
    let mut lambda = 0;
    let mut nodes = 0;
    for comp in g.components() {
        let (h, _) = g.induced(&comp);
        let inst = Instance::new(g, &comp);
        let mut k = lower_bound(&h, d);
        loop {
            if let Some(colors) = solve_instance(&inst, d, k, budget, &mut nodes)? {
                record(&inst, &colors, &mut witness);
                lambda = lambda.max(k);
                break;
            }
            k += 1;
        }
    }
    Ok(SolveResult {
        lambda,
        witness,
        nodes,
    })
}

/// Any labeling with colors in `{0..k}`, or `None` when `k` is too small.
pub fn label_with_k(
    g: &Graph,
    d: Color,
    k: Color,
    budget: u64,
) -> Result<Option<PartialLabeling>, SolveError> {
    if d == 0 {
        return Err(SolveError::ZeroSeparation);
    }
    let mut out = PartialLabeling::new();
    let mut nodes = 0;
    for comp in g.components() {
        let inst = Instance::new(g, &comp);
        match solve_instance(&inst, d, k, budget, &mut nodes)? {
            Some(colors) => record(&inst, &colors, &mut out),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Whether the items `0..n` with the given conflict lists admit a proper
/// coloring with `c` colors.
fn colorable(conflicts: &[Vec<usize>], c: u32, budget: u64, nodes: &mut u64) -> Result<bool, SolveError> {
    fn go(
        i: usize,
        order: &[usize],
        conflicts: &[Vec<usize>],
        colors: &mut [Option<u32>],
        c: u32,
        budget: u64,
        nodes: &mut u64,
    ) -> Result<bool, SolveError> {
        if i == order.len() {
            return Ok(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(SolveError::BudgetExhausted { nodes: *nodes, k: c });
        }
        let x = order[i];
        // first item only needs color 0, later ones at most one new color
        let used = colors.iter().flatten().max().map_or(0, |m| m + 1);
        for col in 0..c.min(used + 1) {
            if conflicts[x].iter().all(|&y| colors[y] != Some(col)) {
                colors[x] = Some(col);
                if go(i + 1, order, conflicts, colors, c, budget, nodes)? {
                    return Ok(true);
                }
                colors[x] = None;
            }
        }
        Ok(false)
    }
    let mut order: Vec<usize> = (0..conflicts.len()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(conflicts[x].len()));
    let mut colors = vec![None; conflicts.len()];
    go(0, &order, conflicts, &mut colors, c, budget, nodes)
}

/// Chromatic number by exhaustive search (1 for an edgeless graph, 0 for
/// the empty graph).
pub fn chromatic_number(g: &Graph, budget: u64) -> Result<Color, SolveError> {
    if g.num_vertices() == 0 {
        return Ok(0);
    }
    let conflicts: Vec<Vec<usize>> = g.vertices().map(|v| g.neighbors(v).collect()).collect();
    let mut nodes = 0;
    let mut c = if g.num_edges() == 0 { 1 } else { 2 };
    while !colorable(&conflicts, c, budget, &mut nodes)? {
        c += 1;
    }
    Ok(c)
}

/// Chromatic index by exhaustive search, starting from `Δ`.
pub fn chromatic_index(g: &Graph, budget: u64) -> Result<Color, SolveError> {
    let edges = g.edges();
    let index: std::collections::HashMap<Edge, usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let conflicts: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| {
            g.incident_edges(e.u())
                .chain(g.incident_edges(e.v()))
                .filter(|f| f != e)
                .map(|f| index[&f])
                .collect()
        })
        .collect();
    let mut nodes = 0;
    let mut c = g.max_degree() as Color;
    while !colorable(&conflicts, c, budget, &mut nodes)? {
        c += 1;
    }
    Ok(c)
}

/// `lower_bound ≤ λ_d^T ≤ χ + χ′ + d − 2`.
pub fn bounds(g: &Graph, d: Color, budget: u64) -> Result<Bounds, SolveError> {
    if d == 0 {
        return Err(SolveError::ZeroSeparation);
    }
    let chi = chromatic_number(g, budget)?;
    let chi_prime = chromatic_index(g, budget)?;
    Ok(Bounds {
        lower: lower_bound(g, d),
        upper: (chi + chi_prime + d).saturating_sub(2),
        chromatic_number: chi,
        chromatic_index: chi_prime,
    })
}
