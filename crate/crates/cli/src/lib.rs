//! Argument handling and output rendering for the `chevalley` binary.

use std::path::PathBuf;

use chevalley::classical_orbits::{BilinearSpace, ClassicalModule};
use chevalley::liealg::verify_chain_lemma;
use chevalley::orbit_geometry::{is_minimal_orbit, nilpotent_orbit_dim, weighted_dynkin};
use chevalley::parabolic::{first_piece_matches, grade_nilradical, levi_type, module_descriptor};
use chevalley::tables::{self, Dataset, VerificationReport};
use chevalley::{AlgebraElement, CartanType, ChevalleyBasis, RootSystem};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "chevalley", version, about = "Exact orbit computations for internal Chevalley modules")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Dataset file or directory used instead of the embedded tables.
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the positive roots of a simple type.
    Roots { kind: CartanType },
    /// Graded pieces of the nilradical of a maximal parabolic.
    Grade {
        kind: CartanType,
        #[arg(long)]
        node: usize,
    },
    /// Orbit table rows with recomputed dimensions and diagrams.
    Orbits {
        kind: CartanType,
        #[arg(long)]
        node: usize,
        #[arg(long)]
        piece: Option<usize>,
    },
    /// Closed-form orbit enumerations for classical modules.
    Classical {
        #[command(subcommand)]
        module: ClassicalCommand,
    },
    /// Weighted Dynkin diagram of a sum of root vectors.
    Dynkin {
        kind: CartanType,
        #[arg(long)]
        element: String,
    },
    /// Rank and minimal-polynomial checks along the E7, E6, D5 chain.
    LemmaChain {
        #[arg(long)]
        n: usize,
    },
    /// Recompute the orbit tables and summary rows.
    Verify {
        #[arg(long)]
        group: Option<CartanType>,
        #[arg(long)]
        node: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum ClassicalCommand {
    /// GL(n1) x GL(n2) on n1 x n2 matrices.
    Tensor { n1: usize, n2: usize },
    /// GL(k) x (split orthogonal or symplectic group) on k x N matrices.
    Bilinear {
        k: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        skew: bool,
    },
    /// GL(n) on symmetric matrices.
    Sym2 { n: usize },
    /// GL(n) on skew matrices.
    Ext2 { n: usize },
}

/// Result of one invocation: the structured payload plus its text rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub format: Format,
    pub payload: Value,
    #[serde(skip)]
    pub text: String,
}

impl OutputDocument {
    fn new(format: Format, payload: Value, text: String) -> Self {
        Self { format, payload, text }
    }

    /// What the binary prints on standard output.
    pub fn render(&self) -> String {
        match self.format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.payload).expect("payload is valid JSON") + "\n",
        }
    }
}

struct Failed(i32, String);

impl<E: std::fmt::Display> From<E> for Failed {
    fn from(e: E) -> Self {
        Failed(1, e.to_string())
    }
}

/// Runs one command line (without the program name) and returns the exit
/// code and output: 0 on success, 1 on a failed computation or verification,
/// 2 on a usage error.
pub fn run<I, S>(args: I) -> (i32, OutputDocument)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once("chevalley".into()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let payload = json!({ "schema": SCHEMA, "error": text.trim_end() });
            return (code, OutputDocument::new(Format::Text, payload, text));
        }
    };
    let format = cli.format;
    match dispatch(&cli) {
        Ok((code, payload, text)) => (code, OutputDocument::new(format, with_schema(payload), text)),
        Err(Failed(code, msg)) => {
            let payload = json!({ "schema": SCHEMA, "error": msg });
            (code, OutputDocument::new(format, payload, format!("error: {msg}\n")))
        }
    }
}

fn with_schema(mut payload: Value) -> Value {
    if let Value::Object(map) = &mut payload {
        map.insert("schema".into(), json!(SCHEMA));
    }
    payload
}

fn dataset(cli: &Cli) -> Result<Dataset, Failed> {
    Ok(match &cli.dataset {
        Some(p) => Dataset::load_path(p)?,
        None => tables::load_paper_tables()?,
    })
}

fn dispatch(cli: &Cli) -> Result<(i32, Value, String), Failed> {
    match &cli.command {
        Command::Roots { kind } => Ok(roots(*kind)),
        Command::Grade { kind, node } => grade(*kind, *node),
        Command::Orbits { kind, node, piece } => orbits(&dataset(cli)?, *kind, *node, *piece),
        Command::Classical { module } => classical(module),
        Command::Dynkin { kind, element } => dynkin(*kind, element),
        Command::LemmaChain { n } => lemma_chain(*n),
        Command::Verify { group, node } => verify(&dataset(cli)?, cli.dataset.is_some(), *group, *node),
    }
}

fn roots(kind: CartanType) -> (i32, Value, String) {
    let sys = RootSystem::new(kind);
    let labels: Vec<String> = (0..sys.num_positive()).map(|r| sys.label(r)).collect();
    let payload = json!({
        "command": "roots",
        "type": kind,
        "group": kind.split_name(),
        "rank": kind.rank(),
        "dimension": sys.dimension(),
        "positive_roots": sys.num_positive(),
        "roots": sys.num_roots(),
        "highest_root": sys.label(sys.highest_index()),
        "labels": labels,
    });
    let mut text = format!(
        "{kind} ({}): rank {}, dimension {}, {} roots, {} positive, highest root {}\n",
        kind.split_name(),
        kind.rank(),
        sys.dimension(),
        sys.num_roots(),
        sys.num_positive(),
        sys.label(sys.highest_index())
    );
    for r in 0..sys.num_positive() {
        text += &format!("  {:>3}  height {:>2}  {}\n", r + 1, sys.height(r), sys.label(r));
    }
    (0, payload, text)
}

fn grade(kind: CartanType, node: usize) -> Result<(i32, Value, String), Failed> {
    let sys = RootSystem::new(kind);
    let g = grade_nilradical(&sys, &[node])?;
    let levi: Vec<String> = levi_type(&g).iter().map(|t| t.to_string()).collect();
    let mut pieces = Vec::new();
    let mut text = format!("{kind} node {node}: [L,L] = {}\n", if levi.is_empty() { "trivial".into() } else { levi.join(" x ") });
    text += &format!("{:>3} {:>5}  {:<34} {:<18} {}\n", "i", "dim", "action", "highest weight", "first piece of");
    for i in 1..=g.m() {
        let d = module_descriptor(&g, i)?;
        let matches: Vec<String> = if i >= 2 {
            first_piece_matches(kind, node, i)?.iter().map(|r| format!("{} node {}", r.kind, r.node)).collect()
        } else {
            Vec::new()
        };
        let weight = weight_string(&d.highest_weight);
        text += &format!("{:>3} {:>5}  {:<34} {:<18} {}\n", i, d.dim, d.name, weight, matches.join(", "));
        pieces.push(json!({
            "index": i,
            "dim": d.dim,
            "action": d.name,
            "highest_weight": d.highest_weight,
            "highest_root": d.highest_root,
            "first_piece_of": matches,
        }));
    }
    let payload = json!({
        "command": "grade",
        "type": kind,
        "node": node,
        "levi": levi,
        "abelian": g.is_abelian(),
        "pieces": pieces,
    });
    Ok((0, payload, text))
}

fn weight_string(w: &std::collections::BTreeMap<usize, i64>) -> String {
    if w.is_empty() {
        return "0".into();
    }
    w.iter()
        .map(|(k, c)| if *c == 1 { format!("w{k}") } else { format!("{c}w{k}") })
        .collect::<Vec<_>>()
        .join("+")
}

fn orbits(ds: &Dataset, kind: CartanType, node: usize, piece: Option<usize>) -> Result<(i32, Value, String), Failed> {
    let mut sub = ds.restrict(Some(kind), Some(node));
    if let Some(i) = piece {
        sub.modules.retain(|m| m.piece == i);
    }
    if sub.modules.is_empty() {
        return Err(Failed(1, format!("no orbit table for {kind} node {node}")));
    }
    let report = tables::verify_dataset(&sub);
    let mut text = String::new();
    let mut modules = Vec::new();
    for m in &sub.modules {
        text += &format!("{kind} node {node} piece {} (dim {})\n", m.piece, m.dim);
        text += &format!("  {:<48} {:>4} {:>4}  {:<10} {:<10} {}\n", "basepoint", "dim", "calc", "diagram", "calc", "status");
        let rows: Vec<Value> = report
            .records
            .iter()
            .filter(|c| c.piece == m.piece)
            .map(|c| {
                let status = if c.passed() { "ok" } else if c.erratum.is_some() { "erratum" } else { "MISMATCH" };
                text += &format!(
                    "  {:<48} {:>4} {:>4}  {:<10} {:<10} {}\n",
                    c.basepoint,
                    c.expected_dim,
                    c.computed_dim.map_or("-".into(), |d| d.to_string()),
                    c.expected_wdd,
                    c.computed_wdd.clone().unwrap_or_else(|| "-".into()),
                    status
                );
                json!({
                    "basepoint": c.basepoint,
                    "dim": c.expected_dim,
                    "computed_dim": c.computed_dim,
                    "wdd": c.expected_wdd,
                    "computed_wdd": c.computed_wdd,
                    "nilpotent_orbit_dim": c.nilpotent_dim,
                    "status": status,
                })
            })
            .collect();
        modules.push(json!({ "piece": m.piece, "dim": m.dim, "orbits": rows }));
    }
    let payload = json!({ "command": "orbits", "type": kind, "node": node, "modules": modules });
    Ok((0, payload, text))
}

fn classical(cmd: &ClassicalCommand) -> Result<(i32, Value, String), Failed> {
    let module = match cmd {
        ClassicalCommand::Tensor { n1, n2 } if *n1 > 0 && *n2 > 0 => ClassicalModule::Tensor { n1: *n1, n2: *n2 },
        ClassicalCommand::Bilinear { k, dim, skew } => {
            let space = if *skew { BilinearSpace::split_skew(*dim)? } else { BilinearSpace::split_symmetric(*dim) };
            ClassicalModule::Bilinear { k: *k, space }
        }
        ClassicalCommand::Sym2 { n } if *n > 0 => ClassicalModule::SymmetricSquare(*n),
        ClassicalCommand::Ext2 { n } if *n > 1 => ClassicalModule::ExteriorSquare(*n),
        _ => return Err(Failed(2, "sizes must be positive (n >= 2 for ext2)".into())),
    };
    let realized = module.realization().ok();
    let with_dims: Vec<(chevalley::classical_orbits::ClassicalOrbit, Option<usize>)> = match module.orbit_dimensions() {
        Ok(v) => v.into_iter().map(|(o, d)| (o, Some(d))).collect(),
        Err(_) => module.enumerate()?.into_iter().map(|o| (o, None)).collect(),
    };
    let mut text = format!("{module}: {} orbits", with_dims.len());
    if let Some((t, n)) = realized {
        text += &format!(" (dimensions computed in {t} node {n})");
    }
    text += "\n";
    text += &format!("  {:>6} {:>10} {:>6} {:>8}\n", "rank", "witt rank", "split", "dim");
    let rows: Vec<Value> = with_dims
        .iter()
        .map(|(o, d)| {
            let tag = o.split_tag.map(|t| format!("{t:?}").to_lowercase());
            text += &format!(
                "  {:>6} {:>10} {:>6} {:>8}\n",
                o.rank_a,
                o.witt_rank,
                tag.clone().unwrap_or_else(|| "-".into()),
                d.map_or("-".into(), |d| d.to_string())
            );
            json!({
                "rank_a": o.rank_a,
                "witt_rank": o.witt_rank,
                "split_tag": tag,
                "orbit_dim": d,
                "representative": o.representative,
            })
        })
        .collect();
    let payload = json!({
        "command": "classical",
        "module": module.to_string(),
        "realization": realized.map(|(t, n)| json!({ "type": t, "node": n })),
        "orbits": rows,
    });
    Ok((0, payload, text))
}

fn dynkin(kind: CartanType, element: &str) -> Result<(i32, Value, String), Failed> {
    let basis = ChevalleyBasis::for_type(kind);
    let sys = basis.system();
    let x = AlgebraElement::from_labels(sys, element)?;
    if x.support().iter().any(|&r| !sys.is_positive(r)) {
        return Err(Failed(2, "the element must be a sum of positive root vectors".into()));
    }
    let wdd = weighted_dynkin(&basis, &x)?;
    let dim = nilpotent_orbit_dim(sys, &wdd);
    let minimal = is_minimal_orbit(sys, &wdd);
    let payload = json!({
        "command": "dynkin",
        "type": kind,
        "element": element,
        "wdd": wdd.to_string(),
        "orbit_dim": dim,
        "minimal": minimal,
    });
    let text = format!("{wdd} (orbit dim {dim}){}\n", if minimal { ", minimal orbit" } else { "" });
    Ok((0, payload, text))
}

fn lemma_chain(n: usize) -> Result<(i32, Value, String), Failed> {
    let r = verify_chain_lemma(n).map_err(|e| Failed(2, e.to_string()))?;
    let mut text = format!(
        "n = {}: {} node {}, {}-dimensional representation, {} coefficients\n",
        r.n, r.group, r.node, r.rep_dim, r.coefficients
    );
    text += &format!("  base rank {}, base squares to zero: {}\n", r.base_rank, r.base_squares_to_zero);
    text += &format!("  eliminated by linear entries of the square: {}\n", r.eliminated.len());
    if !r.remaining.is_empty() {
        text += &format!("  remaining: {}\n", r.remaining.join(", "));
        for c in &r.certificates {
            text += &format!("  rank >= 4 for {}: minor rows {:?} cols {:?} = {}\n", c.root, c.rows, c.cols, c.minor);
        }
    }
    text += &format!("  method {:?}: {}\n", r.method, if r.passed { "pass" } else { "FAIL" });
    let code = if r.passed { 0 } else { 1 };
    let mut payload = serde_json::to_value(&r)?;
    payload["command"] = json!("lemma-chain");
    Ok((code, payload, text))
}

fn verify(ds: &Dataset, custom: bool, group: Option<CartanType>, node: Option<usize>) -> Result<(i32, Value, String), Failed> {
    let sub = ds.restrict(group, node);
    let report: VerificationReport = tables::verify_with_summary(&sub, group, node);
    let records_passed = report.records.iter().filter(|c| c.passed()).count();
    let mut text = format!(
        "records: {} checked, {} agree; modules: {}; summary rows: {}\n",
        report.records.len(),
        records_passed,
        report.modules.len(),
        report.descriptors.len()
    );
    let classical = report.modules.iter().filter(|m| m.classical.is_some()).count();
    text += &format!("classical cross-checks: {classical}\n");
    for f in &report.failures {
        let kind = if f.erratum { "erratum" } else { "FAIL" };
        text += &format!("{kind} {}: {} expected {} found {}\n", f.location, f.check, f.expected, f.found);
    }
    for n in &report.notes {
        text += &format!("note: {n}\n");
    }
    let mut support = Vec::new();
    if node.is_none() {
        for g in ["E6", "E7"] {
            let g: CartanType = g.parse().expect("valid type");
            if group.is_none_or(|x| x == g) {
                let s = tables::minimal_support_check_with(ds, g)?;
                text += &format!(
                    "minimal support chain from {}: {} (minimal orbit dim {}, next {})\n",
                    g,
                    if s.passed { "pass" } else { "FAIL" },
                    s.minimal_orbit_dim,
                    s.next_orbit_dim
                );
                support.push(s);
            }
        }
    }
    let ok = report.passed() && support.iter().all(|s| s.passed);
    text += &format!("{}: {} regressions, {} errata\n", if ok { "PASS" } else { "FAIL" }, report.regressions() + support.iter().filter(|s| !s.passed).count(), report.errata());
    let payload = json!({
        "command": "verify",
        "dataset": if custom { "custom" } else { "embedded" },
        "records": report.records.len(),
        "records_passed": records_passed,
        "modules": report.modules.len(),
        "summary_rows": report.descriptors.len(),
        "classical_checks": classical,
        "regressions": report.regressions(),
        "errata": report.errata(),
        "failures": report.failures,
        "notes": report.notes,
        "support": support,
        "passed": ok,
    });
    Ok((if ok { 0 } else { 1 }, payload, text))
}
