//! Command-line front end. Every subcommand reads JSON files, dispatches to
//! grpd-core, and prints one deterministic JSON report to standard output:
//! sorted keys, integers and rationals as canonical strings, no timestamps.
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 internal
//! inconsistency.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use grpd_core::decide::{af_cycle, af_lp, af_stiemke, decide, verify_verdict, Certificate, Verdict};
use grpd_core::drgroupoid::{
    dg_equal, dg_positive, diagram_check, window_paths, DimensionGroupElement, GraphSection, Path as GPath,
    PathFunction, Positivity,
};
use grpd_core::dynsys::{compression_exists, pseudoloop_exists, FiniteSystem, MetricModel};
use grpd_core::exactlin::{format_rational, parse_rational, Int};
use grpd_core::fibered::{diagonal_indicator, fiber_sum, homology, trace_phi, FiberedSet, Section};
use grpd_core::graphmodel::{adjacency_transfer, require_admissible, validate, DirectedGraph};
use grpd_core::{Error, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const SCHEMA: &str = "grpd-report/1";

#[derive(Parser)]
#[command(
    name = "grpd",
    version,
    about = "Exact decision procedures for graph shift groupoid algebras",
    after_help = "Set GRPD_GUARD_OVERRIDE (integer) to raise enumeration guards."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph for sinks and sources
    Validate { file: PathBuf },
    /// Decide AF embeddability for a graph
    Decide {
        file: PathBuf,
        /// Decision route; "all" cross-checks every method
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Decide for the transfer matrix raised to this power
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Replay every emitted certificate by exact arithmetic
        #[arg(long)]
        verify: bool,
    },
    /// Present groupoid homology of a fibered set
    Homology {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Trace the diagonal identity through a section
    Trace {
        file: PathBuf,
        /// Section file (JSON object mapping each base point to a fiber
        /// point) or "auto" for the least choice in every fiber
        #[arg(long)]
        section: String,
    },
    /// Compare or order dimension-group elements over a graph
    Dimgroup {
        file: PathBuf,
        /// Element as "level,c1,...,ck"; repeat the flag for equality
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
        #[arg(long, value_enum)]
        op: OpArg,
        /// Search depth for positivity
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Check the window square for a graph section on every basis function
    Diagram {
        file: PathBuf,
        /// Window length (at least 2)
        #[arg(long)]
        window: usize,
        /// Section file (JSON object mapping each vertex to an outgoing
        /// edge id) or "auto" for the least edge at every vertex
        #[arg(long)]
        section: String,
    },
    /// Search for a pseudoloop at a base point
    Pseudoloop {
        file: PathBuf,
        #[arg(long)]
        base: String,
        /// Tolerance as a rational "p/q"
        #[arg(long)]
        eps: String,
    },
    /// Check a finite bijection for compressible subsets
    Compress { file: PathBuf },
    /// Run decide over every .json file in a directory
    Batch { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    All,
    Lp,
    Stiemke,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Equal,
    Positive,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, report) = run_command(&cli.command);
    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    ExitCode::from(code)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Decide { .. } => "decide",
        Command::Homology { .. } => "homology",
        Command::Trace { .. } => "trace",
        Command::Dimgroup { .. } => "dimgroup",
        Command::Diagram { .. } => "diagram",
        Command::Pseudoloop { .. } => "pseudoloop",
        Command::Compress { .. } => "compress",
        Command::Batch { .. } => "batch",
    }
}

fn command_path(cmd: &Command) -> &Path {
    match cmd {
        Command::Validate { file }
        | Command::Decide { file, .. }
        | Command::Homology { file, .. }
        | Command::Trace { file, .. }
        | Command::Dimgroup { file, .. }
        | Command::Diagram { file, .. }
        | Command::Pseudoloop { file, .. }
        | Command::Compress { file } => file,
        Command::Batch { dir } => dir,
    }
}

fn run_command(cmd: &Command) -> (u8, Value) {
    match dispatch(cmd) {
        Ok(pair) => pair,
        Err(e) => (
            error_exit(&e),
            json!({
                "schema": SCHEMA,
                "tool_version": env!("CARGO_PKG_VERSION"),
                "command": command_name(cmd),
                "input": {"path": command_path(cmd).display().to_string()},
                "error": {"kind": error_kind(&e), "message": e.to_string()},
            }),
        ),
    }
}

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::Inconsistency(_) => 3,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Structural(_) => "structural",
        Error::Guard { .. } => "guard",
        Error::Dimension(_) => "dimension",
        Error::Precondition(_) => "precondition",
        Error::Boundary(_) => "boundary",
        Error::Unsupported(_) => "unsupported",
        Error::Inconsistency(_) => "inconsistency",
    }
}

/// Reads a file and returns its text with the digest of the raw bytes.
fn read_input(path: &Path) -> Result<(String, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Structural(format!("cannot read {}: {}", path.display(), e)))?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Structural(format!("{} is not UTF-8", path.display())))?;
    Ok((text, digest))
}

fn envelope(command: &str, path: &Path, digest: &str, params: Value, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input": {"path": path.display().to_string(), "digest": digest},
        "params": params,
        "result": result,
    })
}

fn int_vec(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn cone_value(cone: &Option<Vec<Vec<Int>>>) -> Value {
    match cone {
        None => Value::Null,
        Some(rows) => Value::Array(rows.iter().map(|r| int_vec(r)).collect()),
    }
}

fn certificate_value(c: &Certificate) -> Value {
    match c {
        Certificate::Witness { f, h } => json!({"type": "witness", "f": int_vec(f), "h": int_vec(h)}),
        Certificate::FixedVector { y } => json!({"type": "fixed_vector", "y": int_vec(y)}),
    }
}

fn verdict_value(v: &Verdict) -> Value {
    json!({
        "method": v.method.name(),
        "power": v.power,
        "embeddable": v.embeddable,
        "certificate": v.certificate.as_ref().map(certificate_value).unwrap_or(Value::Null),
    })
}

fn dispatch(cmd: &Command) -> Result<(u8, Value)> {
    match cmd {
        Command::Validate { file } => run_validate(file),
        Command::Decide { file, method, power, verify } => run_decide(file, *method, *power, *verify),
        Command::Homology { file, degree } => run_homology(file, *degree),
        Command::Trace { file, section } => run_trace(file, section),
        Command::Dimgroup { file, elements, op, depth } => run_dimgroup(file, elements, *op, *depth),
        Command::Diagram { file, window, section } => run_diagram(file, *window, section),
        Command::Pseudoloop { file, base, eps } => run_pseudoloop(file, base, eps),
        Command::Compress { file } => run_compress(file),
        Command::Batch { dir } => run_batch(dir),
    }
}

fn run_validate(file: &Path) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let g = DirectedGraph::from_json(&text)?;
    let report = validate(&g);
    let admissible = report.is_admissible();
    let result = json!({
        "admissible": admissible,
        "sinks": report.sinks,
        "sources": report.sources,
        "row_finite": report.row_finite,
    });
    Ok((
        u8::from(!admissible),
        envelope("validate", file, &digest, json!({}), result),
    ))
}

fn run_decide(file: &Path, method: MethodArg, power: u32, verify: bool) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let g = DirectedGraph::from_json(&text)?;
    let verdicts = match method {
        MethodArg::All => decide(&g, power)?.verdicts,
        MethodArg::Lp => {
            require_admissible(&g)?;
            vec![af_lp(&adjacency_transfer(&g)?, power)?]
        }
        MethodArg::Stiemke => {
            require_admissible(&g)?;
            vec![af_stiemke(&adjacency_transfer(&g)?, power)?]
        }
        MethodArg::Cycle => vec![af_cycle(&g, power)?],
    };
    let embeddable = verdicts[0].embeddable;
    if verify {
        let tm = adjacency_transfer(&g)?;
        for v in &verdicts {
            verify_verdict(&tm, v)?;
        }
    }
    let method_name = match method {
        MethodArg::All => "all",
        MethodArg::Lp => "lp",
        MethodArg::Stiemke => "stiemke",
        MethodArg::Cycle => "cycle",
    };
    let mut result = json!({
        "embeddable": embeddable,
        "verdicts": Value::Array(verdicts.iter().map(verdict_value).collect()),
    });
    if verify {
        result["verified"] = Value::Bool(true);
    }
    Ok((
        u8::from(!embeddable),
        envelope(
            "decide",
            file,
            &digest,
            json!({"method": method_name, "power": power, "verify": verify}),
            result,
        ),
    ))
}

fn run_homology(file: &Path, degree: usize) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let fs = FiberedSet::from_json(&text)?;
    let pres = homology(&fs, degree)?;
    let result = json!({
        "degree": degree,
        "free_rank": pres.free_rank,
        "torsion": Value::Array(pres.torsion.iter().map(|t| Value::String(t.to_string())).collect()),
        "positive_cone": cone_value(&pres.positive_cone),
    });
    Ok((0, envelope("homology", file, &digest, json!({"degree": degree}), result)))
}

/// Least fiber element for every base point: the canonical section.
fn auto_section(fs: &FiberedSet) -> Result<Section> {
    let mut phi = BTreeMap::new();
    for y in fs.sorted_y() {
        let fiber = fs.fiber(&y);
        phi.insert(y.clone(), fiber[0].clone());
    }
    Section::new(fs, phi)
}

fn section_from_arg(fs: &FiberedSet, arg: &str) -> Result<Section> {
    if arg == "auto" {
        return auto_section(fs);
    }
    let (text, _) = read_input(Path::new(arg))?;
    let phi: BTreeMap<String, String> = serde_json::from_str(&text)
        .map_err(|e| Error::Structural(format!("section json: {}", e)))?;
    Section::new(fs, phi)
}

fn run_trace(file: &Path, section: &str) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let fs = FiberedSet::from_json(&text)?;
    let phi = section_from_arg(&fs, section)?;
    let unit = diagonal_indicator(&fs.sorted_x());
    let traced = trace_phi(&fs, &phi, &unit)?;
    let sums = fiber_sum(&fs, &traced)?;
    let values: BTreeMap<String, String> = traced
        .values()
        .iter()
        .map(|(key, c)| (key[0].clone(), c.to_string()))
        .collect();
    let result = json!({
        "section": phi.phi,
        "trace": values,
        "fiber_sums": int_vec(&sums),
    });
    Ok((0, envelope("trace", file, &digest, json!({"section": section}), result)))
}

fn parse_element(arg: &str, dim: usize) -> Result<DimensionGroupElement> {
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != dim + 1 {
        return Err(Error::Precondition(format!(
            "element {:?} needs a level and {} coordinates",
            arg, dim
        )));
    }
    let level: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Precondition(format!("bad element level {:?}", parts[0])))?;
    let v = parts[1..]
        .iter()
        .map(|p| {
            p.trim()
                .parse::<Int>()
                .map_err(|_| Error::Precondition(format!("bad element coordinate {:?}", p)))
        })
        .collect::<Result<Vec<Int>>>()?;
    Ok(DimensionGroupElement::new(level, v))
}

fn element_value(e: &DimensionGroupElement) -> Value {
    json!({"level": e.level, "v": int_vec(&e.v)})
}

fn run_dimgroup(file: &Path, elements: &[String], op: OpArg, depth: Option<u32>) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let g = DirectedGraph::from_json(&text)?;
    require_admissible(&g)?;
    let tm = adjacency_transfer(&g)?;
    let dim = tm.order.len();
    let parsed = elements
        .iter()
        .map(|s| parse_element(s, dim))
        .collect::<Result<Vec<_>>>()?;
    let params = json!({
        "op": match op { OpArg::Equal => "equal", OpArg::Positive => "positive" },
        "depth": depth,
    });
    match op {
        OpArg::Equal => {
            if parsed.len() != 2 {
                return Err(Error::Precondition(format!(
                    "equal compares exactly two elements, got {}",
                    parsed.len()
                )));
            }
            let equal = dg_equal(&parsed[0], &parsed[1], &tm)?;
            let result = json!({
                "op": "equal",
                "elements": [element_value(&parsed[0]), element_value(&parsed[1])],
                "equal": equal,
            });
            Ok((u8::from(!equal), envelope("dimgroup", file, &digest, params, result)))
        }
        OpArg::Positive => {
            if parsed.len() != 1 {
                return Err(Error::Precondition(format!(
                    "positive takes exactly one element, got {}",
                    parsed.len()
                )));
            }
            let depth = depth.ok_or_else(|| {
                Error::Precondition("positive needs --depth".into())
            })?;
            let (exit, verdict) = match dg_positive(&parsed[0], &tm, depth)? {
                Positivity::Positive(k) => (0, json!({"positivity": "positive", "power": k})),
                Positivity::NotPositive => (1, json!({"positivity": "not_positive"})),
                Positivity::Unknown(d) => (0, json!({"positivity": "unknown", "depth": d})),
            };
            let mut result = json!({"op": "positive", "element": element_value(&parsed[0])});
            result["verdict"] = verdict;
            Ok((exit, envelope("dimgroup", file, &digest, params, result)))
        }
    }
}

/// Least outgoing edge at every vertex: the canonical graph section.
fn auto_graph_section(g: &DirectedGraph) -> Result<GraphSection> {
    let mut preferred: BTreeMap<String, String> = BTreeMap::new();
    for e in &g.edges {
        preferred
            .entry(e.src.clone())
            .and_modify(|cur| {
                if e.id < *cur {
                    *cur = e.id.clone();
                }
            })
            .or_insert_with(|| e.id.clone());
    }
    GraphSection::new(g, preferred)
}

fn graph_section_from_arg(g: &DirectedGraph, arg: &str) -> Result<GraphSection> {
    if arg == "auto" {
        return auto_graph_section(g);
    }
    let (text, _) = read_input(Path::new(arg))?;
    let preferred: BTreeMap<String, String> = serde_json::from_str(&text)
        .map_err(|e| Error::Structural(format!("section json: {}", e)))?;
    GraphSection::new(g, preferred)
}

fn run_diagram(file: &Path, window: usize, section: &str) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let g = DirectedGraph::from_json(&text)?;
    require_admissible(&g)?;
    let phi = graph_section_from_arg(&g, section)?;
    // Both sides of the square are linear, so checking every basis delta
    // checks every window function.
    let paths = window_paths(&g, window)?;
    let mut commutes = true;
    for ids in &paths.paths {
        let f = PathFunction::delta(&g, GPath::Edges(ids.clone()))?;
        if !diagram_check(&g, &phi, &f)? {
            commutes = false;
        }
    }
    let result = json!({
        "window": window,
        "section": phi.preferred,
        "paths_checked": paths.paths.len(),
        "commutes": commutes,
    });
    Ok((
        u8::from(!commutes),
        envelope("diagram", file, &digest, json!({"window": window, "section": section}), result),
    ))
}

fn run_pseudoloop(file: &Path, base: &str, eps: &str) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let model = MetricModel::from_json(&text)?;
    let tolerance = parse_rational(eps)?;
    let report = pseudoloop_exists(&model, base, &tolerance)?;
    let result = json!({
        "base": base,
        "eps": format_rational(&tolerance),
        "exists": report.exists,
        "witness": report.witness,
        "cap": report.cap,
    });
    Ok((
        u8::from(!report.exists),
        envelope(
            "pseudoloop",
            file,
            &digest,
            json!({"base": base, "eps": format_rational(&tolerance)}),
            result,
        ),
    ))
}

fn run_compress(file: &Path) -> Result<(u8, Value)> {
    let (text, digest) = read_input(file)?;
    let sys = FiniteSystem::from_json(&text)?;
    let report = compression_exists(&sys)?;
    let checked = u64::try_from(report.subsets_checked)
        .map_err(|_| Error::Unsupported("subset count exceeds u64".into()))?;
    let result = json!({
        "exists": report.exists,
        "subsets_checked": checked,
    });
    Ok((u8::from(report.exists), envelope("compress", file, &digest, json!({}), result)))
}

fn batch_entry(path: &Path) -> Value {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    match batch_decide(path) {
        Ok((embeddable, digest, verdicts)) => json!({
            "file": name,
            "digest": digest,
            "embeddable": embeddable,
            "verdicts": verdicts,
        }),
        Err(e) => json!({
            "file": name,
            "error": {"kind": error_kind(&e), "message": e.to_string()},
        }),
    }
}

fn batch_decide(path: &Path) -> Result<(bool, String, Value)> {
    let (text, digest) = read_input(path)?;
    let g = DirectedGraph::from_json(&text)?;
    let decision = decide(&g, 1)?;
    Ok((
        decision.embeddable,
        digest,
        Value::Array(decision.verdicts.iter().map(verdict_value).collect()),
    ))
}

fn run_batch(dir: &Path) -> Result<(u8, Value)> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Error::Structural(format!("cannot read directory {}: {}", dir.display(), e)))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    // Per-file work is pure, so files are processed concurrently and the
    // report is reassembled in filename order.
    let slots = Mutex::new(vec![Value::Null; files.len()]);
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(files.len().max(1));
    std::thread::scope(|scope| {
        for t in 0..threads {
            let files = &files;
            let slots = &slots;
            scope.spawn(move || {
                let mut i = t;
                while i < files.len() {
                    let value = batch_entry(&files[i]);
                    slots.lock().expect("batch slots")[i] = value;
                    i += threads;
                }
            });
        }
    });
    let reports = slots.into_inner().expect("batch slots");

    let mut embeddable = 0u64;
    let mut not_embeddable = 0u64;
    let mut errors = 0u64;
    for r in &reports {
        match r.get("embeddable").and_then(Value::as_bool) {
            Some(true) => embeddable += 1,
            Some(false) => not_embeddable += 1,
            None => errors += 1,
        }
    }
    let result = json!({
        "files": reports,
        "aggregate": {
            "total": files.len(),
            "embeddable": embeddable,
            "not_embeddable": not_embeddable,
            "errors": errors,
        },
    });
    Ok((
        0,
        json!({
            "schema": SCHEMA,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command": "batch",
            "input": {"path": dir.display().to_string()},
            "params": {},
            "result": result,
        }),
    ))
}
