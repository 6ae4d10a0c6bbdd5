//! The `clc` front end. Every command prints one JSON document (or CSV
//! where offered); identical inputs give byte-identical output.
//!
//! Exit codes: 0 ok (findings included), 1 input error, 2 failure under
//! `--strict`, 3 instance over a resource cap.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{self, CatalogSpec, SweepConfig, DEFAULT_ROTATION_CAP};
use crate::census::{
    build_patch_from_tuple, census_csv, census_report, choose_basis, enumerate_patches, find_strip, run_checks,
    BasisChoice, CensusConfig, Status, DEFAULT_ISO_CAP, DEFAULT_MAX_MBC,
};
use crate::cycle_space::CycleBasis;
use crate::error::{Error, Result};
use crate::intersection::{build_h, check_p_lower_bound, disjoint_tuples, simple_paths, PathTuple, MAX_Q};
use crate::multigraph::{cubic_resolution, parse_graph, MultiGraph};
use crate::ribbon::{default_rotation, min_genus_rotation, RibbonGraph, RotationSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_STRICT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "clc", version, about = "Patches and strips on small multigraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graph invariants: q, bridges, cyclic part, m_bc, basis, p, c.
    Analyze(GraphCmd),
    /// Classify every patch.
    Census(GraphCmd),
    /// Run the bound and lemma checks.
    Verify(VerifyCmd),
    /// Run the checks over a catalog of small cyclic multigraphs.
    Sweep(SweepCmd),
    /// First strip in twist-counter order.
    Strip(GraphCmd),
    /// Patch with k + 1 boundary circles for a tuple of disjoint paths.
    TuplePatch(TupleCmd),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    #[default]
    Bfs,
    MinC,
}

impl From<BasisArg> for BasisChoice {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Bfs => BasisChoice::Bfs,
            BasisArg::MinC => BasisChoice::MinC,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum RotationArg {
    /// The document's rotations if present, otherwise a minimum-genus one.
    #[default]
    Auto,
    /// The document's rotations (an error if absent).
    File,
    /// Darts in edge order at every vertex.
    Default,
    /// Most boundary circles at zero twist.
    MinGenus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph JSON file.
    pub input: PathBuf,
    /// Expand vertices of degree four or more into cubic trees first.
    #[arg(long)]
    pub resolve_cubic: bool,
    #[arg(long, value_enum, default_value_t)]
    pub basis: BasisArg,
    /// Explicit cycle basis as JSON, e.g. '[["a","b"],["b","c"]]'.
    #[arg(long, conflicts_with = "basis")]
    pub cycles: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub rotation: RotationArg,
    /// Refuse censuses with more free edges than this.
    #[arg(long, default_value_t = DEFAULT_MAX_MBC)]
    pub max_mbc: usize,
}

#[derive(Debug, Args)]
pub struct GraphCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Exit 2 on any failure or finding.
    #[arg(long)]
    pub strict: bool,
    /// Comma-separated check names (default: all).
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SweepCmd {
    #[arg(long, default_value_t = 6)]
    pub max_edges: usize,
    #[arg(long)]
    pub cubic: bool,
    #[arg(long)]
    pub bridgeless: bool,
    #[arg(long)]
    pub no_loops: bool,
    /// Also include the single loop (cyclic part of any cycle graph).
    #[arg(long)]
    pub include_loop: bool,
    #[arg(long)]
    pub resolve_cubic: bool,
    #[arg(long, value_enum, default_value_t)]
    pub basis: BasisArg,
    #[arg(long, default_value_t = DEFAULT_MAX_MBC)]
    pub max_mbc: usize,
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Print the catalog as JSON lines instead of sweeping it.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TupleCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Tuple as JSON: a list of paths, each a list of 1-based basis cycle
    /// indices, e.g. '[[1,2]]'. Default: every tuple.
    #[arg(long)]
    pub paths: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// A graph with its rotation and basis, ready for the census.
struct Prepared {
    ribbon: Arc<RibbonGraph>,
    basis: CycleBasis,
    warnings: Vec<String>,
}

fn read_graph(path: &Path) -> Result<(MultiGraph, Option<RotationSystem>)> {
    let text = fs::read_to_string(path)?;
    let parsed = parse_graph(&text)?;
    let mut g = parsed.graph;
    if g.name().is_empty() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        g = g.with_name(stem);
    }
    let rot = parsed.rotations.map(|r| RotationSystem::from_spec(&g, &r)).transpose()?;
    Ok((g, rot))
}

fn prepare(args: &GraphArgs) -> Result<Prepared> {
    let (g, file_rot) = read_graph(&args.input)?;
    let mut warnings = Vec::new();
    let rot = match (args.rotation, file_rot) {
        (RotationArg::Auto | RotationArg::File, Some(r)) => r,
        (RotationArg::File, None) => return Err(Error::Rotation("document has no rotations".into())),
        (RotationArg::Default, _) => default_rotation(&g),
        (RotationArg::Auto | RotationArg::MinGenus, _) => min_genus_rotation(&g, DEFAULT_ROTATION_CAP).unwrap_or_else(|| {
            warnings.push("rotation search capped; using the default rotation".into());
            default_rotation(&g)
        }),
    };
    let (g, rot) = if args.resolve_cubic && g.max_degree() > 3 {
        let name = g.name().to_string();
        let (rg, rr) = cubic_resolution(&g, &rot);
        (rg.with_name(name), rr)
    } else {
        (g, rot)
    };
    let basis = match &args.cycles {
        Some(text) => {
            let cycles: Vec<Vec<String>> = serde_json::from_str(text)?;
            CycleBasis::from_ids(&g, &cycles)?
        }
        None => {
            let (b, w) = choose_basis(&g, args.basis.into());
            warnings.extend(w);
            b
        }
    };
    if basis.q() > MAX_Q {
        return Err(Error::InstanceTooLarge {
            m_bc: g.m(),
            cap: MAX_Q,
        });
    }
    Ok(Prepared {
        ribbon: RibbonGraph::new(g, rot),
        basis,
        warnings,
    })
}

fn census_config(max_mbc: usize) -> CensusConfig {
    CensusConfig {
        max_mbc,
        parallel: true,
        iso_cap: DEFAULT_ISO_CAP,
    }
}

fn emit(out: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(out: &OutputArgs, value: &Value, stdout: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text, stdout)
}

fn analyze(cmd: &GraphCmd, stdout: &mut dyn Write) -> Result<i32> {
    let prep = prepare(&cmd.graph)?;
    let g = prep.ribbon.graph();
    let cp = g.cyclic_part();
    let m_bc = g.m_bc();
    let h = build_h(g, &prep.basis);
    let paths = simple_paths(&h);
    let tuples = crate::intersection::count_disjoint_tuples(&paths, h.q);
    let lower = check_p_lower_bound(g, &prep.basis);
    let report = json!({
        "graph": g.name(),
        "n": g.n(),
        "m": g.m(),
        "q": g.q(),
        "bridges": g.bridges(),
        "cyclic_part": {
            "n": cp.graph.n(),
            "m": cp.graph.m(),
            "bridges": cp.graph.bridges(),
            "edge_map": cp.edge_map,
        },
        "m_bc": m_bc,
        "basis": prep.basis.to_ids(g),
        "basis_kind": prep.basis.kind,
        "H": h.summary(g),
        "simple_paths": paths.len(),
        "p": tuples.to_string(),
        "p_lower_bound": lower.to_json(),
        "c": prep.basis.c(),
        "bound_T4": ((1i128 << m_bc) - tuples as i128).to_string(),
        "warnings": prep.warnings,
    });
    match cmd.out.format {
        Format::Json => emit_json(&cmd.out, &report, stdout)?,
        Format::Csv => {
            let text = format!(
                "graph,n,m,q,m_bc,p,c,bound_T4\n{},{},{},{},{},{},{},{}\n",
                g.name(),
                g.n(),
                g.m(),
                g.q(),
                m_bc,
                tuples,
                prep.basis.c(),
                (1i128 << m_bc) - tuples as i128
            );
            emit(&cmd.out, &text, stdout)?;
        }
    }
    Ok(EXIT_OK)
}

fn census(cmd: &GraphCmd, stdout: &mut dyn Write) -> Result<i32> {
    let prep = prepare(&cmd.graph)?;
    let census = enumerate_patches(prep.ribbon, prep.basis, &census_config(cmd.graph.max_mbc))?;
    match cmd.out.format {
        Format::Json => {
            let v = run_checks(&census, &[])?;
            let mut report = census_report(&census, &v, DEFAULT_ISO_CAP);
            if let Some(w) = report["warnings"].as_array_mut() {
                w.extend(prep.warnings.into_iter().map(Value::from));
            }
            emit_json(&cmd.out, &report, stdout)?;
        }
        Format::Csv => emit(&cmd.out, &census_csv(&census), stdout)?,
    }
    Ok(EXIT_OK)
}

fn status_counts<'a>(statuses: impl Iterator<Item = &'a Status>) -> Value {
    let mut counts = [0usize; 4];
    for s in statuses {
        counts[*s as usize] += 1;
    }
    json!({"pass": counts[0], "fail": counts[1], "finding": counts[2], "not_applicable": counts[3]})
}

fn verify(cmd: &VerifyCmd, stdout: &mut dyn Write) -> Result<i32> {
    let prep = prepare(&cmd.graph)?;
    let census = enumerate_patches(prep.ribbon, prep.basis, &census_config(cmd.graph.max_mbc))?;
    let v = run_checks(&census, &cmd.checks)?;
    let g = census.graph();
    let mut warnings = prep.warnings;
    warnings.extend(census.warnings.iter().cloned());
    let report = json!({
        "graph": g.name(),
        "n": g.n(),
        "m": g.m(),
        "q": census.q(),
        "m_bc": census.m_bc,
        "p": census.p.to_string(),
        "c": census.c(),
        "S": census.s(),
        "O": census.o(),
        "N": census.n(),
        "checks": v.checks,
        "summary": status_counts(v.checks.iter().map(|c| &c.status)),
        "warnings": warnings,
    });
    match cmd.out.format {
        Format::Json => emit_json(&cmd.out, &report, stdout)?,
        Format::Csv => {
            let mut text = String::from("check,status\n");
            for c in &v.checks {
                let status = serde_json::to_value(c.status)?;
                text.push_str(&format!("{},{}\n", c.name, status.as_str().unwrap_or_default()));
            }
            emit(&cmd.out, &text, stdout)?;
        }
    }
    let bad = v.failed() || v.findings() > 0;
    Ok(if cmd.strict && bad { EXIT_STRICT } else { EXIT_OK })
}

fn sweep(cmd: &SweepCmd, stdout: &mut dyn Write) -> Result<i32> {
    let spec = CatalogSpec {
        max_edges: cmd.max_edges,
        cubic_only: cmd.cubic,
        bridgeless_only: cmd.bridgeless,
        allow_loops: !cmd.no_loops,
        include_degree_two_cyclic: cmd.include_loop,
    };
    if cmd.list {
        let graphs = catalog::generate(&spec)?;
        emit(&cmd.out, &catalog::to_jsonl(&graphs), stdout)?;
        return Ok(EXIT_OK);
    }
    let cfg = SweepConfig {
        checks: cmd.checks.clone(),
        basis: cmd.basis.into(),
        resolve_cubic: cmd.resolve_cubic,
        rotation_cap: DEFAULT_ROTATION_CAP,
        census: census_config(cmd.max_mbc),
    };
    let report = catalog::sweep(&spec, &cfg)?;
    match cmd.out.format {
        Format::Json => emit_json(&cmd.out, &report.to_json(&cfg), stdout)?,
        Format::Csv => {
            let mut text = String::from("graph,n,m,q,m_bc,p,S,O,N,failures,findings,flags\n");
            for row in &report.rows {
                let v = &row.value;
                let count = |s: Status| row.statuses.iter().filter(|(_, x)| *x == s).count();
                let field = |k: &str| match &v[k] {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                };
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    row.name,
                    field("n"),
                    field("m"),
                    field("q"),
                    field("m_bc"),
                    field("p"),
                    field("S"),
                    field("O"),
                    field("N"),
                    count(Status::Fail),
                    count(Status::Finding),
                    row.flags
                ));
            }
            emit(&cmd.out, &text, stdout)?;
        }
    }
    let bad = report.failures() > 0 || report.findings() > 0;
    Ok(if cmd.strict && bad { EXIT_STRICT } else { EXIT_OK })
}

fn strip(cmd: &GraphCmd, stdout: &mut dyn Write) -> Result<i32> {
    let prep = prepare(&cmd.graph)?;
    let g = prep.ribbon.graph();
    let free = prep.ribbon.free_edges().len();
    if free > cmd.graph.max_mbc {
        return Err(Error::InstanceTooLarge {
            m_bc: free,
            cap: cmd.graph.max_mbc,
        });
    }
    let report = match find_strip(&prep.ribbon) {
        Some(p) => json!({
            "graph": g.name(),
            "found": true,
            "patch": p.to_json(),
            "switched": p.twists().switched_ids(g),
            "boundary": p.surface_class(&prep.basis)?.to_json(g, true),
        }),
        None => json!({"graph": g.name(), "found": false}),
    };
    emit_json(&cmd.out, &report, stdout)?;
    Ok(EXIT_OK)
}

/// Path index in `paths` with the given H-vertex sequence (either direction).
fn find_path(paths: &[crate::intersection::HPath], wanted: &[usize]) -> Option<usize> {
    let mut rev = wanted.to_vec();
    rev.reverse();
    paths.iter().position(|p| p.vertices == wanted || p.vertices == rev)
}

fn tuple_patch(cmd: &TupleCmd, stdout: &mut dyn Write) -> Result<i32> {
    let prep = prepare(&cmd.graph)?;
    let g = prep.ribbon.graph();
    if prep.ribbon.free_edges().len() > cmd.graph.max_mbc {
        return Err(Error::InstanceTooLarge {
            m_bc: prep.ribbon.free_edges().len(),
            cap: cmd.graph.max_mbc,
        });
    }
    let h = build_h(g, &prep.basis);
    let paths = simple_paths(&h);
    let tuples: Vec<PathTuple> = match &cmd.paths {
        Some(text) => {
            let spec: Vec<Vec<usize>> = serde_json::from_str(text)?;
            let mut idx = Vec::with_capacity(spec.len());
            for path in &spec {
                if path.is_empty() || path.iter().any(|&v| v == 0 || v > h.q) {
                    return Err(Error::Tuple(format!("path {path:?} names no basis cycle")));
                }
                let zero_based: Vec<usize> = path.iter().map(|v| v - 1).collect();
                let i = find_path(&paths, &zero_based)
                    .ok_or_else(|| Error::Tuple(format!("{path:?} is not a simple path of H")))?;
                idx.push(i);
            }
            idx.sort_unstable();
            vec![PathTuple { paths: idx }]
        }
        None => disjoint_tuples(&paths),
    };
    let mut results = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let tp = build_patch_from_tuple(&prep.ribbon, &prep.basis, &h, &paths, t)?;
        let mut v = tp.to_json(g);
        v["tuple"] = t.to_json(&paths, &h, g);
        results.push(v);
    }
    let report = json!({
        "graph": g.name(),
        "basis": prep.basis.to_ids(g),
        "results": results,
        "warnings": prep.warnings,
    });
    emit_json(&cmd.out, &report, stdout)?;
    Ok(EXIT_OK)
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InstanceTooLarge { .. } => EXIT_CAP,
        _ => EXIT_INPUT,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("CLC_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` and runs the command, writing results to `stdout` and
/// diagnostics to stderr. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Analyze(c) => analyze(c, stdout),
        Command::Census(c) => census(c, stdout),
        Command::Verify(c) => verify(c, stdout),
        Command::Sweep(c) => sweep(c, stdout),
        Command::Strip(c) => strip(c, stdout),
        Command::TuplePatch(c) => tuple_patch(c, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commands() {
        let cli = Cli::try_parse_from(["clc", "verify", "g.json", "--strict", "--checks", "odd_q,switch_lemma"]).unwrap();
        match cli.command {
            Command::Verify(v) => {
                assert!(v.strict);
                assert_eq!(v.checks, vec!["odd_q", "switch_lemma"]);
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from(["clc", "sweep", "--cubic", "--max-edges", "8"]).unwrap();
        assert!(matches!(cli.command, Command::Sweep(SweepCmd { cubic: true, max_edges: 8, .. })));
        assert!(Cli::try_parse_from(["clc", "census", "g.json", "--basis", "min-c", "--cycles", "[]"]).is_err());
    }

    #[test]
    fn bad_input_exits_one() {
        let mut out = Vec::new();
        assert_eq!(run(["clc", "analyze", "/nonexistent.json"], &mut out), EXIT_INPUT);
        assert_eq!(run(["clc", "sweep", "--max-edges", "0"], &mut out), EXIT_INPUT);
        assert!(out.is_empty());
    }
}
