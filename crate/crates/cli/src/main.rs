//! `tlabel`: generate plane graphs, label them with colors `0..=M+2`,
//! compute exact labeling numbers, verify labelings and audit charges.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use tlabel_core::discharging::{audit, AuditError, Verdict};
use tlabel_core::exact::{lambda_exact, lower_bound, DEFAULT_BUDGET};
use tlabel_core::generate::{self, Family, RandomPlanar};
use tlabel_core::io::{self, GraphFile};
use tlabel_core::labeling::validate;
use tlabel_core::reduction::labeler::MIN_M;
use tlabel_core::reduction::{label_graph, LabelError, LabelOptions};
use tlabel_core::{Color, ColorInterval, Element, Graph, PartialLabeling, PlaneGraph};

#[derive(Parser)]
#[command(name = "tlabel", version, about = "(d,1)-total labelings of plane graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated plane graph (wheel, cycle, star, stacked, random).
    Gen {
        family: String,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degree cap for the stacked and random families.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Label a plane graph with colors 0..=M+2.
    Label {
        graph: PathBuf,
        #[arg(short = 'M')]
        m: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Write the reduction trace as JSON to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print a JSON summary instead of the labeling.
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact (d,1)-total labeling number of a small graph.
    Exact {
        graph: PathBuf,
        #[arg(short, default_value_t = 2)]
        d: Color,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
        /// Write the optimal labeling to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a labeling against a graph.
    Verify {
        graph: PathBuf,
        labeling: PathBuf,
        #[arg(short, default_value_t = 2)]
        d: Color,
        /// Largest allowed color; defaults to M+2 with M = max(12, Δ).
        #[arg(short)]
        k: Option<Color>,
        #[arg(long)]
        json: bool,
    },
    /// Structural scan and discharging ledger of a plane graph.
    Audit {
        graph: PathBuf,
        #[arg(short = 'M')]
        m: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Label, verify and audit every graph file in a directory, in parallel.
    Bench {
        dir: PathBuf,
        #[arg(short = 'M')]
        m: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    /// Bad input or parameters: exit 1.
    Domain { msg: String, hint: &'static str },
    /// A result that should be impossible: exit 2.
    Invariant(String),
}

fn domain(msg: impl ToString, hint: &'static str) -> Failure {
    Failure::Domain {
        msg: msg.to_string(),
        hint,
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            family,
            n,
            seed,
            max_degree,
            output,
        } => cmd_gen(&family, n, seed, max_degree, output.as_deref()),
        Command::Label {
            graph,
            m,
            budget,
            trace,
            json,
            output,
        } => cmd_label(&graph, m, budget, trace.as_deref(), json, output.as_deref()),
        Command::Exact {
            graph,
            d,
            budget,
            json,
            output,
        } => cmd_exact(&graph, d, budget, json, output.as_deref()),
        Command::Verify {
            graph,
            labeling,
            d,
            k,
            json,
        } => cmd_verify(&graph, &labeling, d, k, json),
        Command::Audit { graph, m, json } => cmd_audit(&graph, m, json),
        Command::Bench { dir, m, budget, json } => cmd_bench(&dir, m, budget, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain { msg, hint }) => {
            eprintln!("error: {msg}\nhint: {hint}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}\nhint: this is a bug; please report the input graph");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display()), "check the file path"))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| domain(format!("{}: {e}", p.display()), "check that the directory exists and is writable")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

const FORMAT_HINT: &str = "graph files hold `p tlabel <n> <m>`, `e <u> <v>` and `r <v> <w1> ... <wk>` lines";

fn load(path: &Path) -> Result<GraphFile, Failure> {
    io::parse_graph(&read(path)?).map_err(|e| domain(format!("{}: {e}", path.display()), FORMAT_HINT))
}

fn load_plane(path: &Path) -> Result<(PlaneGraph, Vec<u64>), Failure> {
    let file = load(path)?;
    let labels = file.labels.clone();
    let g = file.into_plane().map_err(|e| {
        domain(
            format!("{}: {e}", path.display()),
            "give a rotation (`r` line) for every non-isolated vertex of a connected plane embedding",
        )
    })?;
    Ok((g, labels))
}

fn default_m(g: &Graph, m: Option<usize>) -> usize {
    m.unwrap_or_else(|| g.max_degree().max(MIN_M))
}

/// Renames vertex ids of `phi` through `f`.
fn relabel(phi: &PartialLabeling, f: impl Fn(usize) -> Option<usize>) -> Option<PartialLabeling> {
    let mut out = PartialLabeling::new();
    for (x, c) in phi.iter() {
        let y = match x {
            Element::Vertex(v) => Element::Vertex(f(v)?),
            Element::Edge(e) => {
                let (a, b) = (f(e.u())?, f(e.v())?);
                if a == b {
                    return None;
                }
                Element::edge(a, b)
            }
        };
        out.set(y, c);
    }
    Some(out)
}

fn to_file_labels(phi: &PartialLabeling, labels: &[u64]) -> PartialLabeling {
    relabel(phi, |v| Some(labels[v] as usize)).expect("labels are distinct")
}

fn cmd_gen(family: &str, n: usize, seed: u64, max_degree: Option<usize>, output: Option<&Path>) -> Outcome {
    const HINT: &str = "families: wheel, cycle, star (n >= 3), stacked (n >= 3), random (n >= 3)";
    let fam = Family::parse(family, n, seed).map_err(|e| domain(e, HINT))?;
    let g = match (fam, max_degree) {
        (Family::StackedTriangulation { n, seed }, cap) => generate::stacked_triangulation(n, seed, cap),
        (Family::RandomPlanar { n, seed }, cap) => {
            let mut p = RandomPlanar::new(n, seed);
            p.max_degree = cap;
            generate::random_planar(&p)
        }
        (other, _) => generate::generate(other),
    }
    .map_err(|e| domain(e, HINT))?;
    let mut text = format!("c {family} {n} seed {seed}\n");
    text.push_str(&io::write_plane_graph(&g));
    emit(output, &text)
}

fn label_error(e: LabelError) -> Failure {
    if e.is_invariant_failure() {
        return Failure::Invariant(e.to_string());
    }
    let hint = match e {
        LabelError::MTooSmall(_) => "pass -M 12 or larger",
        LabelError::DegreeExceedsM { .. } => "raise -M to at least the maximum degree, or omit it",
        _ => "the rotation system must describe a connected plane embedding",
    };
    domain(e, hint)
}

fn cmd_label(path: &Path, m: Option<usize>, budget: u64, trace: Option<&Path>, json: bool, output: Option<&Path>) -> Outcome {
    let (g, labels) = load_plane(path)?;
    let m = default_m(g.graph(), m);
    g.trace_faces().map_err(|e| {
        domain(
            format!("{}: {e}", path.display()),
            "the rotation system must describe a connected plane embedding",
        )
    })?;
    let opts = LabelOptions {
        budget,
        ..LabelOptions::default()
    };
    let run = label_graph(g.graph(), m, opts).map_err(label_error)?;
    if let Some(bad) = run.failed_checks().next() {
        return Err(Failure::Invariant(format!("bound check failed: {bad:?}")));
    }
    if let Some(t) = trace {
        let doc = json!({
            "schema": 1,
            "M": m,
            "note": "vertex ids in the trace are dense ids 0..n in file order of labels",
            "vertex_labels": labels,
            "base_elements": run.base_elements,
            "steps": run.steps,
            "checks": run.checks,
        });
        std::fs::write(t, to_json(&doc))
            .map_err(|e| domain(format!("{}: {e}", t.display()), "check that the trace path is writable"))?;
    }
    let phi = to_file_labels(&run.labeling, &labels);
    let text = io::write_labeling(&phi);
    if json {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for s in &run.steps {
            *counts.entry(format!("{:?}", s.config_kind)).or_default() += 1;
        }
        let doc = json!({
            "schema": 1,
            "M": m,
            "max_color": run.max_color(),
            "steps": run.steps.len(),
            "configurations": counts,
            "bound_checks": run.checks.len(),
            "base_elements": run.base_elements,
        });
        if let Some(p) = output {
            emit(Some(p), &text)?;
        }
        print!("{}", to_json(&doc));
        Ok(())
    } else {
        emit(output, &text)
    }
}

fn cmd_exact(path: &Path, d: Color, budget: u64, json: bool, output: Option<&Path>) -> Outcome {
    let file = load(path)?;
    let g = &file.graph;
    let res = lambda_exact(g, d, budget).map_err(|e| domain(e, "raise --budget or try a smaller graph"))?;
    let witness = to_file_labels(&res.witness, &file.labels);
    if let Some(p) = output {
        emit(Some(p), &io::write_labeling(&witness))?;
    }
    if json {
        let doc = json!({
            "schema": 1,
            "d": d,
            "lambda": res.lambda,
            "witness": witness_json(&witness),
            "lower_bound": lower_bound(g, d),
            "max_degree": g.max_degree(),
            "nodes": res.nodes,
        });
        print!("{}", to_json(&doc));
    } else {
        println!("lambda_{d}^T = {}", res.lambda);
    }
    Ok(())
}

/// `{"vertices": {"<id>": color}, "edges": [[u, w, color], ...]}`
fn witness_json(phi: &PartialLabeling) -> Value {
    let mut vertices = serde_json::Map::new();
    let mut edges = Vec::new();
    for (x, c) in phi.iter() {
        match x {
            Element::Vertex(v) => {
                vertices.insert(v.to_string(), json!(c));
            }
            Element::Edge(e) => edges.push(json!([e.u(), e.v(), c])),
        }
    }
    json!({"vertices": vertices, "edges": edges})
}

fn cmd_verify(graph: &Path, labeling: &Path, d: Color, k: Option<Color>, json: bool) -> Outcome {
    let file = load(graph)?;
    let g = &file.graph;
    let raw = io::parse_labeling(&read(labeling)?).map_err(|e| {
        domain(
            format!("{}: {e}", labeling.display()),
            "labeling files hold `v <id> <color>` and `e <u> <v> <color>` lines",
        )
    })?;
    let ids: BTreeMap<usize, usize> = file.labels.iter().enumerate().map(|(i, &l)| (l as usize, i)).collect();
    const UNKNOWN: &str = "the labeling refers to vertices or edges the graph does not have";
    let phi = relabel(&raw, |v| ids.get(&v).copied()).ok_or_else(|| domain("unknown vertex in labeling", UNKNOWN))?;
    let k = k.unwrap_or_else(|| default_m(g, None) as Color + 2);
    let c = ColorInterval::new(k, d).map_err(|e| domain(e, "pass -d 1 or larger"))?;
    let violations = validate(g, &phi, c).map_err(|e| domain(e, UNKNOWN))?;
    let mut unlabeled: Vec<Element> = g.vertices().map(Element::Vertex).collect();
    unlabeled.extend(g.edges().into_iter().map(Element::Edge));
    unlabeled.retain(|&x| phi.get(x).is_none());
    let ok = violations.is_empty() && unlabeled.is_empty();
    if json {
        let doc = json!({
            "schema": 1,
            "d": d,
            "k": k,
            "valid": ok,
            "max_color": phi.max_color(),
            "violations": violations,
            "unlabeled": unlabeled,
        });
        print!("{}", to_json(&doc));
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        for x in &unlabeled {
            println!("unlabeled: {x}");
        }
        if ok {
            println!("valid ({d},1)-total labeling with colors 0..={k}");
        }
    }
    if ok {
        Ok(())
    } else {
        Err(domain(
            format!("{} violations, {} unlabeled elements", violations.len(), unlabeled.len()),
            "relabel the graph with `tlabel label`",
        ))
    }
}

fn audit_error(e: AuditError) -> Failure {
    let hint = match e {
        AuditError::MTooSmall(_) => "pass -M 12 or larger",
        AuditError::DegreeExceedsM { .. } => "raise -M to at least the maximum degree, or omit it",
        AuditError::Graph(_) => "the rotation system must describe a connected plane embedding",
    };
    domain(e, hint)
}

fn cmd_audit(path: &Path, m: Option<usize>, json: bool) -> Outcome {
    let (g, _) = load_plane(path)?;
    let m = default_m(g.graph(), m);
    let report = audit(&g, m).map_err(audit_error)?;
    if json {
        print!("{}", to_json(&report.to_json()));
    } else {
        println!("verdict: {}", report.verdict);
        for p in report.structure.violations() {
            println!("  {} present: {}", p.property, p.witness);
        }
        println!("initial total: {}", report.initial.total());
        println!("final total:   {}", report.outcome.ledger.total());
    }
    if report.verdict == Verdict::ContradictionCandidate {
        return Err(Failure::Invariant(format!(
            "{}: no reducible configuration found",
            path.display()
        )));
    }
    Ok(())
}

struct BenchRow {
    name: String,
    result: Result<BenchStats, String>,
    millis: u128,
}

struct BenchStats {
    n: usize,
    edges: usize,
    delta: usize,
    m: usize,
    max_color: Option<Color>,
    steps: usize,
    violations: usize,
    failed_checks: usize,
    verdict: Verdict,
}

fn bench_one(path: &Path, m: Option<usize>, budget: u64) -> Result<BenchStats, String> {
    let msg = |f: Failure| match f {
        Failure::Domain { msg, .. } | Failure::Invariant(msg) => msg,
    };
    let (g, _) = load_plane(path).map_err(msg)?;
    let m = default_m(g.graph(), m);
    g.trace_faces().map_err(|e| e.to_string())?;
    let opts = LabelOptions {
        budget,
        ..LabelOptions::default()
    };
    let run = label_graph(g.graph(), m, opts).map_err(|e| e.to_string())?;
    let c = ColorInterval::for_planar(m);
    let violations = validate(g.graph(), &run.labeling, c).map_err(|e| e.to_string())?.len();
    let report = audit(&g, m).map_err(|e| e.to_string())?;
    Ok(BenchStats {
        n: g.num_vertices(),
        edges: g.graph().num_edges(),
        delta: g.graph().max_degree(),
        m,
        max_color: run.max_color(),
        steps: run.steps.len(),
        violations,
        failed_checks: run.failed_checks().count(),
        verdict: report.verdict,
    })
}

fn cmd_bench(dir: &Path, m: Option<usize>, budget: u64, json: bool) -> Outcome {
    const HINT: &str = "pass a directory of graph files, e.g. written by `tlabel gen`";
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| domain(format!("{}: {e}", dir.display()), HINT))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(domain(format!("{}: no files", dir.display()), HINT));
    }
    let rows: Vec<BenchRow> = files
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let result = bench_one(p, m, budget);
            BenchRow {
                name: p.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
                result,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    let failures = rows
        .iter()
        .filter(|r| match &r.result {
            Ok(s) => s.violations > 0 || s.failed_checks > 0 || s.verdict != Verdict::Reducible,
            Err(_) => true,
        })
        .count();
    if json {
        // timings are left out so that the document is reproducible
        let doc = json!({
            "schema": 1,
            "graphs": rows.len(),
            "failures": failures,
            "results": rows.iter().map(|r| match &r.result {
                Ok(s) => json!({
                    "file": r.name, "n": s.n, "edges": s.edges, "max_degree": s.delta, "M": s.m,
                    "max_color": s.max_color, "steps": s.steps, "violations": s.violations,
                    "failed_checks": s.failed_checks, "verdict": s.verdict,
                }),
                Err(e) => json!({"file": r.name, "error": e}),
            }).collect::<Vec<_>>(),
        });
        print!("{}", to_json(&doc));
    } else {
        let mut out = String::new();
        writeln!(
            out,
            "{:<28} {:>6} {:>6} {:>4} {:>4} {:>5} {:>6} {:>5} {:>9}  verdict",
            "file", "n", "edges", "Δ", "M", "max", "steps", "viol", "ms"
        )
        .unwrap();
        for r in &rows {
            match &r.result {
                Ok(s) => writeln!(
                    out,
                    "{:<28} {:>6} {:>6} {:>4} {:>4} {:>5} {:>6} {:>5} {:>9}  {}",
                    r.name,
                    s.n,
                    s.edges,
                    s.delta,
                    s.m,
                    s.max_color.map_or("-".into(), |c| c.to_string()),
                    s.steps,
                    s.violations + s.failed_checks,
                    r.millis,
                    s.verdict
                ),
                Err(e) => writeln!(out, "{:<28} error: {e}", r.name),
            }
            .unwrap();
        }
        let total: u128 = rows.iter().map(|r| r.millis).sum();
        let worst = rows.iter().map(|r| r.millis).max().unwrap_or(0);
        writeln!(
            out,
            "{} graphs, {failures} failures, {total} ms total, {worst} ms worst",
            rows.len()
        )
        .unwrap();
        print!("{out}");
    }
    if failures > 0 {
        return Err(Failure::Invariant(format!("{failures} of {} graphs failed", rows.len())));
    }
    Ok(())
}
