//! Discharging over plane graphs with exact rational charges.
//!
//! Every vertex and face starts with charge `d(x) − 4`, which sums to `−8`
//! on a connected plane graph. The rules below only move charge around, so
//! a graph in which every element ends non-negative cannot exist; the
//! structural scan reports which reducible configuration a given graph has
//! instead.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Face, Graph, GraphError, PlaneGraph};
use crate::reduction::config::{self, max_alternator_k, ReducibleConfig};

pub type Charge = Ratio<i64>;

fn ratio(n: i64, d: i64) -> Charge {
    Ratio::new(n, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasterError {
    #[error("master parameter k = {0} must be at least 2")]
    KOutOfRange(usize),
    #[error("no master assignment: {} low vertices share {} capacity at {:?}", .violator_x.len(), .capacity, .violator_y)]
    Hall {
        /// Low vertices that cannot all be served.
        violator_x: Vec<usize>,
        /// Their common neighborhood, all of it saturated.
        violator_y: Vec<usize>,
        capacity: usize,
        partial: MasterAssignment,
    },
}

/// `master[x] = y`: `y` is the `k`-master of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasterAssignment {
    pub k: usize,
    pub master: BTreeMap<usize, usize>,
}

impl MasterAssignment {
    /// Vertices `x` with `1 ≤ d(x) ≤ k`.
    pub fn domain(g: &Graph, k: usize) -> Vec<usize> {
        g.vertices().filter(|&v| (1..=k).contains(&g.degree(v))).collect()
    }

    /// Whether every low vertex has a neighboring master and no master
    /// serves more than `k − 1` vertices.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let domain = MasterAssignment::domain(g, self.k);
        let keys: Vec<usize> = self.master.keys().copied().collect();
        let mut load: BTreeMap<usize, usize> = BTreeMap::new();
        for (&x, &y) in &self.master {
            *load.entry(y).or_default() += 1;
            if !g.has_edge(x, y) {
                return false;
            }
        }
        keys == domain && load.values().all(|&l| l < self.k)
    }
}

/// Capacitated bipartite matching: every `x` with `1 ≤ d(x) ≤ k` gets one
/// neighbor as master, each neighbor serving at most `k − 1` of them.
/// Ties go to the lowest vertex id.
pub fn assign_masters(g: &Graph, k: usize) -> Result<MasterAssignment, MasterError> {
    if k < 2 {
        return Err(MasterError::KOutOfRange(k));
    }
    let cap = k - 1;
    let xs = MasterAssignment::domain(g, k);
    let mut master: BTreeMap<usize, usize> = BTreeMap::new();
    let mut served: BTreeMap<usize, Vec<usize>> = BTreeMap::new();

    fn augment(
        g: &Graph,
        x: usize,
        cap: usize,
        seen: &mut BTreeSet<usize>,
        master: &mut BTreeMap<usize, usize>,
        served: &mut BTreeMap<usize, Vec<usize>>,
    ) -> bool {
        for y in g.neighbors(x) {
            if !seen.insert(y) {
                continue;
            }
            let load = served.get(&y).map_or(0, Vec::len);
            if load < cap {
                served.entry(y).or_default().push(x);
                master.insert(x, y);
                return true;
            }
            let clients = served[&y].clone();
            for other in clients {
                if augment(g, other, cap, seen, master, served) {
                    let list = served.get_mut(&y).unwrap();
                    list.retain(|&c| c != other);
                    list.push(x);
                    master.insert(x, y);
                    return true;
                }
            }
        }
        false
    }

    let mut stuck = None;
    for &x in &xs {
        let mut seen = BTreeSet::new();
        if !augment(g, x, cap, &mut seen, &mut master, &mut served) && stuck.is_none() {
            stuck = Some(x);
        }
    }
    let partial = MasterAssignment { k, master };
    let Some(x0) = stuck else {
        return Ok(partial);
    };
    // alternating reachability from the unserved vertex: every reachable
    // master is full, and together they serve fewer vertices than reach them
    let mut sx = BTreeSet::from([x0]);
    let mut sy = BTreeSet::new();
    let mut stack = vec![x0];
    while let Some(x) = stack.pop() {
        for y in g.neighbors(x) {
            if sy.insert(y) {
                for &c in served.get(&y).into_iter().flatten() {
                    if sx.insert(c) {
                        stack.push(c);
                    }
                }
            }
        }
    }
    Err(MasterError::Hall {
        capacity: cap * sy.len(),
        violator_x: sx.into_iter().collect(),
        violator_y: sy.into_iter().collect(),
        partial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Initial,
    Final,
}

/// Charges of every vertex and every traced face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLedger {
    pub phase: Phase,
    pub vertex: Vec<Charge>,
    pub face: Vec<Charge>,
}

impl ChargeLedger {
    pub fn total(&self) -> Charge {
        self.vertex.iter().chain(&self.face).sum()
    }

    pub fn to_json(&self) -> Value {
        let s = |c: &Charge| Value::String(c.to_string());
        json!({
            "phase": self.phase,
            "vertices": self.vertex.iter().map(s).collect::<Vec<_>>(),
            "faces": self.face.iter().map(s).collect::<Vec<_>>(),
        })
    }
}

/// `d(x) − 4` for every vertex and every face of `faces`.
pub fn initial_charges(g: &PlaneGraph, faces: &[Face]) -> ChargeLedger {
    let gr = g.graph();
    ChargeLedger {
        phase: Phase::Initial,
        vertex: gr.vertices().map(|v| Charge::from(gr.degree(v) as i64 - 4)).collect(),
        face: faces.iter().map(|f| Charge::from(f.degree() as i64 - 4)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaceClass {
    /// Boundary degrees `{5, 6, 7}`.
    Special,
    Normal,
}

/// Class of every 3-face; `None` for longer faces.
pub fn classify_faces(g: &Graph, faces: &[Face]) -> Vec<Option<FaceClass>> {
    faces
        .iter()
        .map(|f| {
            (f.degree() == 3).then(|| {
                let mut pattern = f.degree_pattern(g);
                pattern.sort_unstable();
                if pattern == [5, 6, 7] {
                    FaceClass::Special
                } else {
                    FaceClass::Normal
                }
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOutcome {
    pub ledger: ChargeLedger,
    /// 2- and 3-vertices that should receive charge from a 3-master but
    /// have none in the given assignment.
    pub missing_masters: Vec<usize>,
}

/// Applies R1–R5 to an initial ledger. `masters` is a (possibly partial)
/// 3-master assignment; `Δ` is the maximum degree of `g`.
pub fn apply_rules(g: &PlaneGraph, faces: &[Face], initial: &ChargeLedger, masters: &MasterAssignment) -> RuleOutcome {
    let gr = g.graph();
    let delta = gr.max_degree();
    let classes = classify_faces(gr, faces);
    let mut ledger = initial.clone();
    ledger.phase = Phase::Final;
    let mut missing = Vec::new();
    let move_v = |ledger: &mut ChargeLedger, from: usize, to: usize, amount: Charge| {
        ledger.vertex[from] -= amount;
        ledger.vertex[to] += amount;
    };
    for v in gr.vertices() {
        let d = gr.degree(v);
        if d == 2 {
            // R1
            for u in gr.neighbors(v).filter(|&u| gr.degree(u) == delta) {
                move_v(&mut ledger, u, v, ratio(1, 2));
            }
        }
        if d == 2 || d == 3 {
            // R1, R2
            match masters.master.get(&v) {
                Some(&y) => move_v(&mut ledger, y, v, Charge::from(1)),
                None => missing.push(v),
            }
        }
    }
    for (fi, (f, class)) in faces.iter().zip(&classes).enumerate() {
        let Some(class) = class else { continue };
        for &v in &f.boundary {
            let d = gr.degree(v) as i64;
            let amount = match d {
                // R3
                5 if *class == FaceClass::Special => ratio(1, 4),
                5 => ratio(1, 6),
                // R4
                6 | 7 => ratio(d - 4, d),
                // R5
                8.. => ratio(1, 2),
                _ => continue,
            };
            ledger.vertex[v] -= amount;
            ledger.face[fi] += amount;
        }
    }
    RuleOutcome {
        ledger,
        missing_masters: missing,
    }
}

/// Status of one structural property; `witness` describes a violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyStatus {
    pub property: String,
    pub holds: bool,
    pub witness: Value,
}

impl PropertyStatus {
    fn from_config(property: &str, found: Option<ReducibleConfig>) -> PropertyStatus {
        PropertyStatus {
            property: property.to_string(),
            holds: found.is_none(),
            witness: found.map_or(Value::Null, |c| serde_json::to_value(c).expect("configs serialize")),
        }
    }
}

/// Triangle count at an `(M−1)`-vertex with at least two 3-neighbors,
/// which a minimal graph keeps at most `M − 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleCount {
    pub vertex: usize,
    pub triangles: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub properties: Vec<PropertyStatus>,
    pub face_classes: Vec<Option<FaceClass>>,
    pub triangle_counts: Vec<TriangleCount>,
}

impl StructureReport {
    /// Violated properties other than connectivity.
    pub fn violations(&self) -> impl Iterator<Item = &PropertyStatus> {
        self.properties.iter().filter(|p| !p.holds && p.property != "C1")
    }

    pub fn property(&self, name: &str) -> Option<&PropertyStatus> {
        self.properties.iter().find(|p| p.property == name)
    }
}

fn master_status(g: &Graph, k: usize) -> PropertyStatus {
    let property = format!("C4(j={k})");
    match assign_masters(g, k) {
        Ok(_) => PropertyStatus {
            property,
            holds: true,
            witness: Value::Null,
        },
        Err(MasterError::Hall {
            violator_x,
            violator_y,
            capacity,
            ..
        }) => PropertyStatus {
            property,
            holds: false,
            witness: json!({"low_vertices": violator_x, "masters": violator_y, "capacity": capacity}),
        },
        Err(e) => unreachable!("k = {k} is in range: {e}"),
    }
}

/// Checks the structural properties a minimal counterexample would have,
/// reporting a witness for each one that fails.
pub fn scan_structure(g: &PlaneGraph, faces: &[Face], m: usize) -> StructureReport {
    let gr = g.graph();
    let comps = gr.components();
    let mut properties = vec![PropertyStatus {
        property: "C1".into(),
        holds: comps.len() == 1,
        witness: if comps.len() == 1 { Value::Null } else { json!(comps) },
    }];
    properties.push(PropertyStatus::from_config("C2", config::sparse_edge(gr, m)));
    properties.push(PropertyStatus::from_config("C3", config::light_edge(gr, m)));
    properties.push(master_status(gr, 2));
    properties.push(master_status(gr, 3));
    let alternator = if max_alternator_k(m) >= 3 {
        config::alternator(gr, m)
    } else {
        None
    };
    properties.push(PropertyStatus::from_config("C5", alternator));
    properties.push(PropertyStatus::from_config("C6(a)", config::deg4_low_neighbor(gr, m)));
    properties.push(PropertyStatus::from_config("C6(b)", config::face_566(gr, m)));
    properties.push(PropertyStatus::from_config("C6(c)", config::face_567(gr, m)));
    properties.push(PropertyStatus::from_config("C6(d)", config::twin_low_neighbors(gr, m)));
    properties.push(PropertyStatus::from_config("C6(e)", config::two_deg2(gr, m)));

    let face_classes = classify_faces(gr, faces);
    let mut triangles_at = vec![0usize; gr.num_vertices()];
    for (f, class) in faces.iter().zip(&face_classes) {
        if class.is_some() {
            for &v in &f.boundary {
                triangles_at[v] += 1;
            }
        }
    }
    let triangle_counts = gr
        .vertices()
        .filter(|&v| gr.degree(v) + 1 == m && gr.neighbors(v).filter(|&w| gr.degree(w) == 3).count() >= 2)
        .map(|v| TriangleCount {
            vertex: v,
            triangles: triangles_at[v],
            bound: m - 4,
            holds: triangles_at[v] + 4 <= m,
        })
        .collect();
    StructureReport {
        properties,
        face_classes,
        triangle_counts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Some reducible configuration is present.
    #[serde(rename = "reducible")]
    Reducible,
    /// No configuration found: either the scan or the theory is wrong.
    #[serde(rename = "CONTRADICTION-CANDIDATE")]
    ContradictionCandidate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Reducible => "reducible",
            Verdict::ContradictionCandidate => "CONTRADICTION-CANDIDATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("M = {0} is below 12")]
    MTooSmall(usize),
    #[error("maximum degree {delta} exceeds M = {m}")]
    DegreeExceedsM { delta: usize, m: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub verdict: Verdict,
    pub structure: StructureReport,
    pub initial: ChargeLedger,
    pub outcome: RuleOutcome,
}

impl AuditReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "verdict": self.verdict,
            "violations": self.structure.violations().map(|p| json!({"property": p.property, "witness": p.witness})).collect::<Vec<_>>(),
            "initial_total": self.initial.total().to_string(),
            "final_total": self.outcome.ledger.total().to_string(),
            "missing_masters": self.outcome.missing_masters,
            "triangle_counts": self.structure.triangle_counts,
            "face_classes": self.structure.face_classes,
            "ledger": {
                "initial": self.initial.to_json(),
                "final": self.outcome.ledger.to_json(),
            },
        })
    }
}

/// Runs the scan and the charge computation on a connected plane graph.
pub fn audit(g: &PlaneGraph, m: usize) -> Result<AuditReport, AuditError> {
    if m < 12 {
        return Err(AuditError::MTooSmall(m));
    }
    let delta = g.graph().max_degree();
    if delta > m {
        return Err(AuditError::DegreeExceedsM { delta, m });
    }
    let faces = g.trace_faces()?;
    let structure = scan_structure(g, &faces, m);
    let initial = initial_charges(g, &faces);
    let masters = match assign_masters(g.graph(), 3) {
        Ok(a) => a,
        Err(MasterError::Hall { partial, .. }) => partial,
        Err(e) => unreachable!("k = 3 is in range: {e}"),
    };
    let outcome = apply_rules(g, &faces, &initial, &masters);
    let verdict = if structure.violations().next().is_some() {
        Verdict::Reducible
    } else {
        Verdict::ContradictionCandidate
    };
    Ok(AuditReport {
        verdict,
        structure,
        initial,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    /// Triangle 0, 1, 2 with leaves raising the degrees to `degs`; the
    /// leaves sit in the outer face so the inner face is a clean 3-face.
    pub(crate) fn padded_triangle(degs: [usize; 3]) -> PlaneGraph {
        let n = 3 + degs.iter().map(|d| d - 2).sum::<usize>();
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        let mut rotation = vec![vec![2, 1], vec![0, 2], vec![1, 0]];
        rotation.resize(n, Vec::new());
        let mut next = 3;
        for (v, &d) in degs.iter().enumerate() {
            for _ in 2..d {
                edges.push((v, next));
                rotation[v].push(next);
                rotation[next] = vec![v];
                next += 1;
            }
        }
        PlaneGraph::new(n, &edges, rotation).unwrap()
    }

    fn total(g: &PlaneGraph) -> Charge {
        initial_charges(g, &g.trace_faces().unwrap()).total()
    }

    #[test]
    fn initial_totals() {
        let tri = generate::cycle(3).unwrap();
        let faces = tri.trace_faces().unwrap();
        let ledger = initial_charges(&tri, &faces);
        assert_eq!(ledger.vertex, vec![Charge::from(-2); 3]);
        assert_eq!(ledger.face, vec![Charge::from(-1); 2]);
        assert_eq!(ledger.total(), Charge::from(-8));

        let w = generate::wheel(12).unwrap();
        let faces = w.trace_faces().unwrap();
        let ledger = initial_charges(&w, &faces);
        assert_eq!(ledger.vertex[0], Charge::from(8));
        assert_eq!(faces.iter().filter(|f| f.degree() == 12).count(), 1);
        assert_eq!(ledger.total(), Charge::from(-8));

        let path = PlaneGraph::new(3, &[(0, 1), (1, 2)], vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        let ledger = initial_charges(&path, &path.trace_faces().unwrap());
        assert_eq!(ledger.vertex, vec![Charge::from(-3), Charge::from(-2), Charge::from(-3)]);
        assert_eq!(ledger.face, vec![Charge::from(0)]);
        assert_eq!(total(&path), Charge::from(-8));
    }

    #[test]
    fn special_face_ends_at_one_eighty_fourth() {
        let g = padded_triangle([5, 6, 7]);
        let faces = g.trace_faces().unwrap();
        let classes = classify_faces(g.graph(), &faces);
        let inner = faces.iter().position(|f| f.degree() == 3).unwrap();
        assert_eq!(classes[inner], Some(FaceClass::Special));
        let initial = initial_charges(&g, &faces);
        let masters = assign_masters(g.graph(), 3).unwrap_err();
        let MasterError::Hall { partial, .. } = masters else { panic!() };
        let out = apply_rules(&g, &faces, &initial, &partial);
        assert_eq!(ratio(1, 4) + ratio(1, 3) + ratio(3, 7), ratio(85, 84));
        assert_eq!(out.ledger.face[inner], ratio(1, 84));
        assert_eq!(out.ledger.total(), Charge::from(-8));
    }

    #[test]
    fn normal_face_balances() {
        let g = padded_triangle([5, 6, 8]);
        let faces = g.trace_faces().unwrap();
        let inner = faces.iter().position(|f| f.degree() == 3).unwrap();
        assert_eq!(classify_faces(g.graph(), &faces)[inner], Some(FaceClass::Normal));
        let initial = initial_charges(&g, &faces);
        let empty = MasterAssignment {
            k: 3,
            master: BTreeMap::new(),
        };
        let out = apply_rules(&g, &faces, &initial, &empty);
        assert_eq!(out.ledger.face[inner], Charge::from(0));
        // leaves are 1-vertices: no rule touches them
        assert!(out.missing_masters.is_empty());
    }

    #[test]
    fn star_masters_fail_at_center() {
        let s = generate::star(5).unwrap();
        let err = assign_masters(s.graph(), 3).unwrap_err();
        match err {
            MasterError::Hall {
                violator_y,
                violator_x,
                capacity,
                partial,
            } => {
                assert_eq!(violator_y, vec![0]);
                assert_eq!(capacity, 2);
                assert!(violator_x.len() > capacity);
                assert_eq!(partial.master.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn high_min_degree_has_no_low_vertices() {
        // octahedron: 4-regular
        let mut edges = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                if b != 5 - a {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(6, &edges).unwrap();
        let a = assign_masters(&g, 3).unwrap();
        assert!(a.master.is_empty());
        assert!(a.is_valid(&g));
        assert!(matches!(assign_masters(&g, 1), Err(MasterError::KOutOfRange(1))));
    }

    #[test]
    fn masters_respect_capacity() {
        // two 12-vertices sharing 2-vertices: each 2-vertex picks one
        let mut edges = vec![(0, 1)];
        for x in 2..6 {
            edges.push((0, x));
            edges.push((1, x));
        }
        let g = Graph::from_edges(6, &edges).unwrap();
        let a = assign_masters(&g, 3).unwrap();
        assert!(a.is_valid(&g));
        assert_eq!(a.master.len(), 4);
    }

    #[test]
    fn wheel_audit() {
        let w = generate::wheel(12).unwrap();
        let r = audit(&w, 12).unwrap();
        assert_eq!(r.verdict, Verdict::Reducible);
        assert!(r.structure.property("C1").unwrap().holds);
        assert!(!r.structure.property("C2").unwrap().holds);
        assert_eq!(r.outcome.ledger.total(), Charge::from(-8));
        let j = r.to_json();
        assert_eq!(j["verdict"], "reducible");
        assert_eq!(j["initial_total"], "-8");
        assert_eq!(j["violations"][0]["property"], "C2");
        assert_eq!(j["violations"][0]["witness"]["kind"], "SparseEdge");
    }

    #[test]
    fn audit_preconditions() {
        let s = generate::star(13).unwrap();
        assert!(matches!(audit(&s, 11), Err(AuditError::MTooSmall(11))));
        assert!(matches!(audit(&s, 12), Err(AuditError::DegreeExceedsM { .. })));
    }
}
