//! The `twl` command line: every subcommand parses its inputs, calls one
//! library operation and prints a JSON report on stdout.
//!
//! Exit codes: 0 success, 1 a checked bound was violated, 2 bad input,
//! 3 resource limit.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cells::{cell_partition, decode_cell, CellPartition};
use crate::constants::{PatternConstants, Variant};
use crate::distal::{cutting_with, regularity_with, SamplingConfig};
use crate::error::{Error, Result};
use crate::generate::{gen_certified, CertifiedInstance};
use crate::graph::{gen_matching, parse_vertex_set, Graph, VertexOrder};
use crate::matrix::{corner_matrix, corner_row_pairs, BitMatrix};
use crate::minors::{max_minor, MinorKind};
use crate::neighborhoods::{neighborhoods_in, representative_set, shatter_profile, vc_dimension};
use crate::trigraph::{verify_sequence, ContractionSequence};
use crate::twinwidth::{exact_twinwidth, DEFAULT_VERTEX_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Input(_) | Error::InvalidSequence { .. } => EXIT_INPUT,
            Error::ResourceLimit(_) => EXIT_RESOURCE,
            Error::Invariant(_) => EXIT_VERIFY,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "twl",
    version,
    about = "Twin-width and neighborhood-complexity toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a certified bounded twin-width instance or a matching instance.
    Gen(GenArgs),
    /// Exact twin-width, or replay of a contraction sequence.
    Tww(TwwArgs),
    /// Largest grid or mixed minor of a matrix, or the pattern constants.
    Minors(MinorsArgs),
    /// Corner matrix and corner row-pair count of a matrix.
    Corners(MatrixIn),
    /// Neighborhood family of a vertex set, or the shatter profile.
    Nbhd(NbhdArgs),
    /// Partition into neighborhood cells, or decode stored cells.
    Cells(CellsArgs),
    /// Verified cutting of V with respect to A.
    Cutting(CuttingArgs),
    /// Verified 0-1 regularity partition.
    Regularity(RegularityArgs),
    /// Run the experiment suite and write CSV/JSON artifacts.
    Suite(SuiteArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenMode {
    Certified,
    Matching,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum, default_value = "certified")]
    mode: GenMode,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Vertex count; for `matching`, the number of matching edges.
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write instance.graph, instance.ord and instance.json here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TwwMode {
    Exact,
    Verify,
}

#[derive(Args, Debug)]
struct TwwArgs {
    #[arg(value_enum, default_value = "exact")]
    mode: TwwMode,
    /// Graph file, or a certified instance JSON (which carries its sequence).
    #[arg(long = "in")]
    input: PathBuf,
    /// Sequence JSON `[[u,v],...]` for `verify`.
    #[arg(long)]
    seq: Option<PathBuf>,
    /// Width bound for `verify`; defaults to the instance's `t`.
    #[arg(long)]
    t: Option<usize>,
    /// Vertex cap for the exact solver.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MinorsMode {
    Search,
    Constants,
}

#[derive(Args, Debug)]
struct MinorsArgs {
    #[arg(value_enum, default_value = "search")]
    mode: MinorsMode,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "mixed")]
    grid: bool,
    #[arg(long)]
    mixed: bool,
    #[arg(long, default_value_t = usize::MAX)]
    cap: usize,
    #[arg(long, default_value_t = 1)]
    t: u64,
    #[arg(long, default_value = "ck")]
    variant: String,
}

#[derive(Args, Debug)]
struct MatrixIn {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum NbhdMode {
    Family,
    Shatter,
}

#[derive(Args, Debug)]
struct NbhdArgs {
    #[arg(value_enum, default_value = "family")]
    mode: NbhdMode,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    set: Option<String>,
}

#[derive(Args, Debug)]
struct GraphOrderSet {
    /// Graph file or certified instance JSON.
    #[arg(long = "in")]
    input: PathBuf,
    /// Order file; defaults to the instance's order, else the identity.
    #[arg(long)]
    order: Option<PathBuf>,
    /// Comma-separated vertex ids.
    #[arg(long)]
    set: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CellsMode {
    Partition,
    Decode,
}

#[derive(Args, Debug)]
struct CellsArgs {
    #[arg(value_enum, default_value = "partition")]
    mode: CellsMode,
    #[command(flatten)]
    gos: GraphOrderSet,
    /// Sweep threshold; defaults to 2t.
    #[arg(long)]
    theta: Option<usize>,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Partition JSON (or a report wrapping one) for `decode`.
    #[arg(long)]
    cells: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = SamplingConfig::default().theta)]
    theta: usize,
    #[arg(long, default_value_t = SamplingConfig::default().c0)]
    c0: f64,
}

impl SamplingArgs {
    fn config(&self) -> SamplingConfig {
        SamplingConfig {
            c0: self.c0,
            theta: self.theta,
        }
    }
}

#[derive(Args, Debug)]
struct CuttingArgs {
    #[command(flatten)]
    gos: GraphOrderSet,
    #[arg(long)]
    r: f64,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args, Debug)]
struct RegularityArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    order: Option<PathBuf>,
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long)]
    out: PathBuf,
    /// Suite configuration JSON; the built-in default when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport {
    command: Vec<String>,
    inputs: BTreeMap<String, String>,
    seed: Option<u64>,
    result: Value,
    timing_ms: u128,
}

/// Reads input files and remembers their digests for the report.
#[derive(Default)]
struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        self.digests.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        );
        String::from_utf8(bytes)
            .map_err(|_| Error::input(format!("{} is not UTF-8", path.display())))
    }

    /// A graph file, or a certified instance JSON.
    fn graph(&mut self, path: &Path) -> Result<(Graph, Option<CertifiedInstance>)> {
        let text = self.read(path)?;
        if text.trim_start().starts_with('{') {
            let inst = CertifiedInstance::from_json(&text)?;
            Ok((inst.graph.clone(), Some(inst)))
        } else {
            Ok((Graph::parse(&text)?, None))
        }
    }

    fn graph_order(&mut self, input: &Path, order: Option<&Path>) -> Result<(Graph, VertexOrder)> {
        let (g, inst) = self.graph(input)?;
        let ord = match (order, inst) {
            (Some(p), _) => VertexOrder::parse(&self.read(p)?)?,
            (None, Some(inst)) => inst.order,
            (None, None) => VertexOrder::identity(g.n()),
        };
        ord.check_graph(&g)?;
        Ok((g, ord))
    }

    fn json(&mut self, path: &Path) -> Result<Value> {
        serde_json::from_str(&self.read(path)?)
            .map_err(|e| Error::input(format!("{}: {e}", path.display())))
    }
}

struct Outcome {
    result: Value,
    seed: Option<u64>,
    /// A checked bound failed; the report is still printed.
    violated: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            seed: None,
            violated: false,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, body)
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn gen(a: &GenArgs) -> Result<Outcome> {
    let (result, files) = match a.mode {
        GenMode::Certified => {
            let inst = gen_certified(a.t, a.n, a.seed)?;
            let files = (
                inst.graph.to_text(),
                inst.order.to_text(),
                inst.to_json().to_string(),
            );
            (inst.to_json(), files)
        }
        GenMode::Matching => {
            let (g, set) = gen_matching(a.n)?;
            let ord = VertexOrder::identity(g.n());
            let set_text = set
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let result = json!({"n": g.n(), "edges": g.edges(), "set": set});
            (result.clone(), (g.to_text(), ord.to_text(), set_text))
        }
    };
    if let Some(dir) = &a.out {
        write_file(dir, "instance.graph", &files.0)?;
        write_file(dir, "instance.ord", &files.1)?;
        let last = if a.mode == GenMode::Certified {
            "instance.json"
        } else {
            "instance.set"
        };
        write_file(dir, last, &files.2)?;
    }
    Ok(Outcome {
        result,
        seed: Some(a.seed),
        violated: false,
    })
}

fn tww(a: &TwwArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let (g, inst) = inputs.graph(&a.input)?;
    match a.mode {
        TwwMode::Exact => {
            let r = exact_twinwidth(&g, a.cap)?;
            Ok(Outcome::ok(to_value(&r)))
        }
        TwwMode::Verify => {
            let seq = match (&a.seq, &inst) {
                (Some(p), _) => serde_json::from_value::<ContractionSequence>(inputs.json(p)?)
                    .map_err(|e| Error::input(format!("sequence JSON: {e}")))?,
                (None, Some(inst)) => inst.sequence.clone(),
                (None, None) => return Err(Error::input("verify needs --seq or an instance JSON")),
            };
            let d =
                a.t.or(inst.map(|i| i.t))
                    .ok_or_else(|| Error::input("verify needs --t"))?;
            let check = verify_sequence(&g, &seq, d)?;
            Ok(Outcome {
                violated: !check.ok,
                result: to_value(&check),
                seed: None,
            })
        }
    }
}

fn minors(a: &MinorsArgs, inputs: &mut Inputs) -> Result<Outcome> {
    match a.mode {
        MinorsMode::Constants => {
            let variant: Variant = a.variant.parse()?;
            Ok(Outcome::ok(to_value(&PatternConstants::new(a.t, variant)?)))
        }
        MinorsMode::Search => {
            let path = a
                .input
                .as_ref()
                .ok_or_else(|| Error::input("minors needs --in"))?;
            let m = BitMatrix::parse(&inputs.read(path)?)?;
            let kind = if a.grid {
                MinorKind::Grid
            } else {
                MinorKind::Mixed
            };
            Ok(Outcome::ok(to_value(&max_minor(&m, kind, a.cap))))
        }
    }
}

fn corners(a: &MatrixIn, inputs: &mut Inputs) -> Result<Outcome> {
    let m = BitMatrix::parse(&inputs.read(&a.input)?)?;
    let c = corner_matrix(&m)?;
    let pairs = corner_row_pairs(&m);
    Ok(Outcome {
        violated: !pairs.ok,
        result: json!({"corner": c.row_strings(), "rowPairs": to_value(&pairs)}),
        seed: None,
    })
}

fn nbhd(a: &NbhdArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let (g, _) = inputs.graph(&a.input)?;
    match a.mode {
        NbhdMode::Family => {
            let text = a
                .set
                .as_deref()
                .ok_or_else(|| Error::input("family needs --set"))?;
            let set = parse_vertex_set(text, g.n())?;
            let fam = neighborhoods_in(&g, &set)?;
            Ok(Outcome::ok(json!({
                "size": fam.size(),
                "hasEmpty": fam.has_empty,
                "ratio": fam.ratio(),
                "traces": fam.traces,
                "representatives": representative_set(&g, &set)?,
            })))
        }
        NbhdMode::Shatter => Ok(Outcome::ok(json!({
            "shatter": shatter_profile(&g)?,
            "vcDimension": vc_dimension(&g)?,
        }))),
    }
}

fn partition_stats(p: &CellPartition) -> Value {
    json!({
        "theta": p.theta,
        "cells": to_value(&p.cells),
        "blockCount": p.blocks.len(),
        "maxAnchors": p.max_anchors(),
        "anchorTuples": p.anchor_tuple_count(),
        "descriptorKinds": p.descriptor_kinds(),
    })
}

fn cells(a: &CellsArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let (g, ord) = inputs.graph_order(&a.gos.input, a.gos.order.as_deref())?;
    let set = parse_vertex_set(&a.gos.set, g.n())?;
    match a.mode {
        CellsMode::Partition => {
            let theta = a.theta.unwrap_or((2 * a.t).max(1));
            let p = cell_partition(&g, &ord, &set, theta)?;
            Ok(Outcome::ok(partition_stats(&p)))
        }
        CellsMode::Decode => {
            let path = a
                .cells
                .as_ref()
                .ok_or_else(|| Error::input("decode needs --cells"))?;
            let mut v = inputs.json(path)?;
            if let Some(inner) = v.get_mut("result") {
                v = inner.take();
            }
            let p: CellPartition = serde_json::from_value(v)
                .map_err(|e| Error::input(format!("partition JSON: {e}")))?;
            let mut all = true;
            let mut rows = Vec::with_capacity(p.cells.len());
            for c in &p.cells {
                let decoded = decode_cell(&g, &ord, &set, &c.descriptor)?;
                let matches = decoded == c.members;
                all &= matches;
                rows.push(json!({"members": c.members, "decoded": decoded, "match": matches}));
            }
            Ok(Outcome {
                result: json!({"cells": rows, "allMatch": all}),
                seed: None,
                violated: !all,
            })
        }
    }
}

fn cutting_cmd(a: &CuttingArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let (g, ord) = inputs.graph_order(&a.gos.input, a.gos.order.as_deref())?;
    let set = parse_vertex_set(&a.gos.set, g.n())?;
    let c = cutting_with(&g, &ord, &set, a.r, a.sampling.seed, &a.sampling.config())?;
    let mut result = c.summary();
    result["partition"] = json!(c.parts);
    result["crossingCounts"] = json!(c.crossing_counts);
    Ok(Outcome {
        result,
        seed: Some(a.sampling.seed),
        violated: false,
    })
}

fn regularity_cmd(a: &RegularityArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let (g, ord) = inputs.graph_order(&a.input, a.order.as_deref())?;
    let r = regularity_with(&g, &ord, a.eps, a.sampling.seed, &a.sampling.config())?;
    let mut result = r.summary();
    result["partition"] = json!(r.parts);
    result["goodPairs"] = json!(r.good_pairs.len());
    Ok(Outcome {
        result,
        seed: Some(a.sampling.seed),
        violated: false,
    })
}

fn suite_cmd(a: &SuiteArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let cfg = match &a.config {
        Some(p) => crate::suite::SuiteConfig::from_json(&inputs.read(p)?)?,
        None => crate::suite::SuiteConfig::default(),
    };
    let report = crate::suite::emit_suite(&cfg, &a.out)?;
    Ok(Outcome {
        violated: !report.failures.is_empty(),
        result: to_value(&report),
        seed: None,
    })
}

fn dispatch(cmd: &Cmd, inputs: &mut Inputs) -> Result<Outcome> {
    match cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Tww(a) => tww(a, inputs),
        Cmd::Minors(a) => minors(a, inputs),
        Cmd::Corners(a) => corners(a, inputs),
        Cmd::Nbhd(a) => nbhd(a, inputs),
        Cmd::Cells(a) => cells(a, inputs),
        Cmd::Cutting(a) => cutting_cmd(a, inputs),
        Cmd::Regularity(a) => regularity_cmd(a, inputs),
        Cmd::Suite(a) => suite_cmd(a, inputs),
    }
}

/// Runs one command line (including the program name). Returns the exit
/// code, the stdout text, and the stderr text.
pub fn run<I, S>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                (code, text, String::new())
            } else {
                (code, String::new(), text)
            };
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs::default();
    match dispatch(&cli.cmd, &mut inputs) {
        Ok(out) => {
            let report = RunReport {
                command: argv.iter().skip(1).cloned().collect(),
                inputs: inputs.digests,
                seed: out.seed,
                result: out.result,
                timing_ms: start.elapsed().as_millis(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            if out.violated {
                (
                    EXIT_VERIFY,
                    text,
                    "verification failed: a checked bound was violated\n".into(),
                )
            } else {
                (EXIT_OK, text, String::new())
            }
        }
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
