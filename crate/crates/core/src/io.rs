//! Line-oriented text formats for graphs and labelings.
//!
//! Graph files:
//!
//! ```text
//! c optional comment
//! p tlabel <n> <m>
//! e <u> <v>
//! r <v> <w1> <w2> ... <wk>
//! ```
//!
//! `r` lines give the clockwise neighbor order of `v`; when every vertex of
//! positive degree has one, the file describes a plane graph. Vertex labels
//! are non-negative integers; if they do not already form `0..n`, distinct
//! labels are mapped to dense ids in increasing order.
//!
//! Labeling files hold `v <id> <color>` and `e <u> <w> <color>` lines and may
//! omit elements.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, PlaneGraph};
use crate::labeling::{Color, Element, PartialLabeling};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `p tlabel <n> <m>` header")]
    MissingHeader,
    #[error("header declares {declared} edges, file has {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("{0}")]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<u64>, ParseError> {
    fields
        .iter()
        .map(|f| f.parse::<u64>().map_err(|_| syntax(line, format!("bad integer {f:?}"))))
        .collect()
}

/// A graph read from a file, with its rotation system when fully given.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    pub rotation: Option<Vec<Vec<usize>>>,
    /// Original label of each dense vertex id.
    pub labels: Vec<u64>,
}

impl GraphFile {
    pub fn into_plane(self) -> Result<PlaneGraph, ParseError> {
        match self.rotation {
            Some(r) => Ok(PlaneGraph::from_graph(self.graph, r)?),
            None => Err(ParseError::Syntax {
                line: 0,
                msg: "no rotation system (`r` lines) for a plane graph".into(),
            }),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, u64, u64)> = Vec::new();
    let mut rots: Vec<(usize, u64, Vec<u64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if fields.len() != 4 || fields[1] != "tlabel" {
                    return Err(syntax(ln, "expected `p tlabel <n> <m>`"));
                }
                let v = numbers(ln, &fields[2..])?;
                header = Some((v[0] as usize, v[1] as usize));
            }
            Some("e") => {
                if fields.len() != 3 {
                    return Err(syntax(ln, "expected `e <u> <v>`"));
                }
                let v = numbers(ln, &fields[1..])?;
                edges.push((ln, v[0], v[1]));
            }
            Some("r") => {
                if fields.len() < 2 {
                    return Err(syntax(ln, "expected `r <v> <w1> ...`"));
                }
                let v = numbers(ln, &fields[1..])?;
                rots.push((ln, v[0], v[1..].to_vec()));
            }
            Some(other) => return Err(syntax(ln, format!("unknown record {other:?}"))),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if m != edges.len() {
        return Err(ParseError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }

    let mut distinct: Vec<u64> = edges
        .iter()
        .flat_map(|&(_, a, b)| [a, b])
        .chain(rots.iter().flat_map(|(_, v, ws)| std::iter::once(*v).chain(ws.iter().copied())))
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    let labels: Vec<u64> = if distinct.iter().all(|&x| (x as usize) < n) {
        (0..n as u64).collect()
    } else {
        if distinct.len() > n {
            return Err(syntax(0, format!("{} distinct labels exceed n = {n}", distinct.len())));
        }
        let mut l = distinct.clone();
        let mut next = l.last().map_or(0, |x| x + 1);
        while l.len() < n {
            l.push(next);
            next += 1;
        }
        l
    };
    let id: BTreeMap<u64, usize> = labels.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    let mut graph = Graph::new(n);
    for &(ln, a, b) in &edges {
        graph
            .add_edge(id[&a], id[&b])
            .map_err(|e| syntax(ln, e.to_string()))?;
    }
    let rotation = if rots.is_empty() && graph.num_edges() > 0 {
        None
    } else {
        let mut r: Vec<Option<Vec<usize>>> = vec![None; n];
        for (ln, v, ws) in &rots {
            let slot = &mut r[id[v]];
            if slot.is_some() {
                return Err(syntax(*ln, format!("second rotation for vertex {v}")));
            }
            *slot = Some(ws.iter().map(|w| id[w]).collect());
        }
        let complete = (0..n).all(|v| r[v].is_some() || graph.degree(v) == 0);
        complete.then(|| r.into_iter().map(Option::unwrap_or_default).collect())
    };
    Ok(GraphFile {
        graph,
        rotation,
        labels,
    })
}

/// Writes `g` in graph-file format; rotation lines are emitted when given.
pub fn write_graph(g: &Graph, rotation: Option<&dyn Fn(usize) -> Vec<usize>>) -> String {
    let mut out = String::new();
    writeln!(out, "p tlabel {} {}", g.num_vertices(), g.num_edges()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {}", e.u(), e.v()).unwrap();
    }
    if let Some(rot) = rotation {
        for v in g.vertices() {
            let ws = rot(v);
            if ws.is_empty() {
                continue;
            }
            write!(out, "r {v}").unwrap();
            for w in ws {
                write!(out, " {w}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_plane_graph(g: &PlaneGraph) -> String {
    write_graph(g.graph(), Some(&|v| g.rotation(v).to_vec()))
}

pub fn parse_labeling(text: &str) -> Result<PartialLabeling, ParseError> {
    let mut phi = PartialLabeling::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("v") if fields.len() == 3 => {
                let v = numbers(ln, &fields[1..])?;
                phi.set(Element::Vertex(v[0] as usize), v[1] as Color);
            }
            Some("e") if fields.len() == 4 => {
                let v = numbers(ln, &fields[1..])?;
                if v[0] == v[1] {
                    return Err(syntax(ln, "edge endpoints must differ"));
                }
                phi.set(Element::edge(v[0] as usize, v[1] as usize), v[2] as Color);
            }
            _ => return Err(syntax(ln, format!("bad labeling record {raw:?}"))),
        }
    }
    Ok(phi)
}

pub fn write_labeling(phi: &PartialLabeling) -> String {
    let mut out = String::new();
    for (x, c) in phi.iter() {
        match x {
            Element::Vertex(v) => writeln!(out, "v {v} {c}").unwrap(),
            Element::Edge(e) => writeln!(out, "e {} {} {c}", e.u(), e.v()).unwrap(),
        }
    }
    out
}
