//! The embedded orbit tables and the harness that recomputes them.
//!
//! Dataset files are line oriented: `#` starts a comment, a header
//! `module <TYPE> node <k> piece <i> dim <d>` opens a table and each
//! `orbit <label>[+<label>...]|0 dim <d> wdd <digits>` line is one orbit. An
//! optional trailing `erratum <text>` marks a row whose printed values are
//! known to disagree with the recomputation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::classical_orbits::{literal_constraint_discrepancy, ClassicalModule};
use crate::error::{Error, Result};
use crate::liealg::{verify_chain_lemma, AlgebraElement, CartanType, ChevalleyBasis, Family, RootSystem};
use crate::orbit_geometry::{
    diagram_of_triple, is_minimal_orbit, jm_triple, minimal_orbit_diagram, nilpotent_orbit_dim, orbit_dimension,
    weighted_dynkin, WeightedDynkinDiagram,
};
use crate::parabolic::{first_piece_matches, grade_nilradical, levi_type, module_descriptor, ParabolicGrading};

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/", $name)))),*]
    };
}

const TABLE_FILES: &[(&str, &str)] = embedded![
    "d4_node1.txt", "d4_node2.txt",
    "d5_node1.txt", "d5_node2.txt", "d5_node3.txt", "d5_node4.txt", "d5_node5.txt",
    "e6_node1.txt", "e6_node2.txt", "e6_node3.txt", "e6_node4.txt",
    "e7_node1.txt", "e7_node2.txt", "e7_node3.txt", "e7_node4.txt", "e7_node5.txt", "e7_node6.txt", "e7_node7.txt",
    "e8_node1.txt", "e8_node2.txt", "e8_node3.txt", "e8_node4.txt", "e8_node5.txt", "e8_node6.txt", "e8_node7.txt",
    "e8_node8.txt",
    "f4_node1.txt", "f4_node2.txt", "f4_node3.txt", "f4_node4.txt",
    "g2_node1.txt", "g2_node2.txt",
];

const SUMMARY: &str = include_str!("../data/summary.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub group: CartanType,
    pub node: usize,
    pub piece: usize,
    /// Root labels; empty for the zero orbit.
    pub basepoint: Vec<String>,
    pub dim: usize,
    pub coadjoint_label: String,
    pub erratum: Option<String>,
    pub location: String,
}

impl OrbitRecord {
    pub fn basepoint_label(&self) -> String {
        if self.basepoint.is_empty() {
            "0".into()
        } else {
            self.basepoint.join("+")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleTable {
    pub group: CartanType,
    pub node: usize,
    pub piece: usize,
    pub dim: usize,
    pub location: String,
    pub records: Vec<OrbitRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Dataset {
    pub modules: Vec<ModuleTable>,
}

impl Dataset {
    /// Parses one dataset file. `source` is used in error and record locations.
    pub fn parse(source: &str, text: &str) -> Result<Dataset> {
        let mut modules: Vec<ModuleTable> = Vec::new();
        let mut systems: HashMap<CartanType, RootSystem> = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let location = format!("{source}:{}", n + 1);
            let bad = |reason: String| Error::Dataset { location: location.clone(), reason };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "module" => {
                    let [_, group, "node", node, "piece", piece, "dim", dim] = tokens[..] else {
                        return Err(bad(format!("malformed header {line:?}")));
                    };
                    let group: CartanType = group.parse().map_err(|e: Error| bad(e.to_string()))?;
                    let num = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("not a number: {s:?}")));
                    let (node, piece, dim) = (num(node)?, num(piece)?, num(dim)?);
                    if node == 0 || node > group.rank() || piece == 0 {
                        return Err(bad(format!("node {node} piece {piece} out of range for {group}")));
                    }
                    systems.entry(group).or_insert_with(|| RootSystem::new(group));
                    modules.push(ModuleTable { group, node, piece, dim, location, records: Vec::new() });
                }
                "orbit" => {
                    let Some(module) = modules.last_mut() else {
                        return Err(bad("orbit line before any module header".into()));
                    };
                    if tokens.len() < 6 || tokens[2] != "dim" || tokens[4] != "wdd" {
                        return Err(bad(format!("malformed orbit line {line:?}")));
                    }
                    if tokens.len() > 6 && (tokens[6] != "erratum" || tokens.len() == 7) {
                        return Err(bad(format!("unexpected trailing text in {line:?}")));
                    }
                    let sys = &systems[&module.group];
                    let basepoint: Vec<String> =
                        if tokens[1] == "0" { Vec::new() } else { tokens[1].split('+').map(str::to_string).collect() };
                    for label in &basepoint {
                        let idx = sys.label_index(label).map_err(|e| bad(e.to_string()))?;
                        if !sys.is_positive(idx) {
                            return Err(bad(format!("{label} is not a positive root")));
                        }
                    }
                    let dim = tokens[3].parse::<usize>().map_err(|_| bad(format!("bad dimension {:?}", tokens[3])))?;
                    let wdd = tokens[5];
                    if wdd.len() != module.group.rank() || !wdd.chars().all(|c| c.is_ascii_digit()) {
                        return Err(bad(format!("bad diagram {wdd:?} for {}", module.group)));
                    }
                    let erratum = (tokens.len() > 7).then(|| tokens[7..].join(" "));
                    module.records.push(OrbitRecord {
                        group: module.group,
                        node: module.node,
                        piece: module.piece,
                        basepoint,
                        dim,
                        coadjoint_label: wdd.to_string(),
                        erratum,
                        location,
                    });
                }
                other => return Err(bad(format!("unknown directive {other:?}"))),
            }
        }
        Ok(Dataset { modules })
    }

    /// Reads a dataset file, or every `*.txt` file of a directory in name order.
    pub fn load_path(path: &Path) -> Result<Dataset> {
        let io = |e: std::io::Error| Error::Dataset { location: path.display().to_string(), reason: e.to_string() };
        let mut files: Vec<std::path::PathBuf> = if path.is_dir() {
            fs::read_dir(path)
                .map_err(io)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "txt") && p.file_name().is_some_and(|n| n != "summary.txt"))
                .collect()
        } else {
            vec![path.to_path_buf()]
        };
        files.sort();
        let mut out = Dataset::default();
        for f in files {
            let text = fs::read_to_string(&f).map_err(io)?;
            out.modules.extend(Dataset::parse(&f.display().to_string(), &text)?.modules);
        }
        Ok(out.with_symmetry_images())
    }

    /// Adds E6 nodes 6 and 5 as images of nodes 1 and 3 under the diagram
    /// automorphism, unless the dataset already lists them.
    pub fn with_symmetry_images(mut self) -> Self {
        let present: BTreeSet<(CartanType, usize)> = self.modules.iter().map(|m| (m.group, m.node)).collect();
        let images: Vec<ModuleTable> = self
            .modules
            .iter()
            .filter(|m| m.group.family() == Family::E && m.group.rank() == 6)
            .filter_map(|m| {
                let node = E6_AUTOMORPHISM[m.node - 1];
                (node != m.node && !present.contains(&(m.group, node)) && m.node < node).then(|| e6_image(m, node))
            })
            .collect();
        self.modules.extend(images);
        self
    }

    pub fn records(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.modules.iter().flat_map(|m| m.records.iter())
    }

    pub fn record_count(&self) -> usize {
        self.modules.iter().map(|m| m.records.len()).sum()
    }

    pub fn module(&self, group: CartanType, node: usize, piece: usize) -> Option<&ModuleTable> {
        self.modules.iter().find(|m| m.group == group && m.node == node && m.piece == piece)
    }

    pub fn restrict(&self, group: Option<CartanType>, node: Option<usize>) -> Dataset {
        Dataset {
            modules: self
                .modules
                .iter()
                .filter(|m| group.is_none_or(|g| g == m.group) && node.is_none_or(|n| n == m.node))
                .cloned()
                .collect(),
        }
    }

    /// Renders the dataset back into the file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.modules {
            out += &format!("module {} node {} piece {} dim {}\n", m.group, m.node, m.piece, m.dim);
            for r in &m.records {
                out += &format!("orbit {} dim {} wdd {}", r.basepoint_label(), r.dim, r.coadjoint_label);
                if let Some(e) = &r.erratum {
                    out += &format!(" erratum {e}");
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

/// Node `i + 1` of E6 is sent to `E6_AUTOMORPHISM[i]`.
const E6_AUTOMORPHISM: [usize; 6] = [6, 2, 5, 4, 3, 1];

fn e6_image(m: &ModuleTable, node: usize) -> ModuleTable {
    let permute = |s: &str| -> String {
        let chars: Vec<char> = s.chars().collect();
        let mut out = vec!['0'; 6];
        for (i, c) in chars.iter().enumerate() {
            out[E6_AUTOMORPHISM[i] - 1] = *c;
        }
        out.into_iter().collect()
    };
    let location = format!("{} (diagram automorphism image)", m.location);
    ModuleTable {
        group: m.group,
        node,
        piece: m.piece,
        dim: m.dim,
        location: location.clone(),
        records: m
            .records
            .iter()
            .map(|r| OrbitRecord {
                node,
                basepoint: r.basepoint.iter().map(|l| permute(l)).collect(),
                coadjoint_label: permute(&r.coadjoint_label),
                location: format!("{} (diagram automorphism image)", r.location),
                ..r.clone()
            })
            .collect(),
    }
}

/// The complete embedded dataset.
pub fn load_paper_tables() -> Result<Dataset> {
    let mut out = Dataset::default();
    for (name, text) in TABLE_FILES {
        out.modules.extend(Dataset::parse(name, text)?.modules);
    }
    Ok(out.with_symmetry_images())
}

/// Type, node and piece index.
pub type PieceKey = (CartanType, usize, usize);

/// Per-node summary data: Levi types, piece descriptors and cross-references.
#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub levi: BTreeMap<(CartanType, usize), Vec<String>>,
    /// Dimension and highest weight of each piece.
    pub pieces: BTreeMap<PieceKey, (usize, BTreeMap<usize, i64>)>,
    pub cross_refs: BTreeMap<PieceKey, (CartanType, usize)>,
}

pub fn summary() -> &'static Summary {
    static CELL: OnceLock<Summary> = OnceLock::new();
    CELL.get_or_init(|| parse_summary(SUMMARY).expect("embedded summary parses"))
}

fn parse_summary(text: &str) -> Result<Summary> {
    let mut s = Summary::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| Error::Dataset { location: format!("summary.txt:{}", n + 1), reason: reason.into() };
        let t: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("not a number"));
        if t.len() < 3 {
            return Err(bad("short line"));
        }
        let group: CartanType = t[1].parse()?;
        let node = num(t[2])?;
        match (t[0], t.len()) {
            ("levi", _) => {
                s.levi.insert((group, node), t[3..].iter().map(|x| x.to_string()).collect());
            }
            ("piece", 8) if t[4] == "dim" && t[6] == "weight" => {
                let mut weight = BTreeMap::new();
                if t[7] != "0" {
                    for term in t[7].split('+') {
                        let (c, k) = match term.split_once('*') {
                            Some((c, k)) => (c.parse::<i64>().map_err(|_| bad("bad coefficient"))?, num(k)?),
                            None => (1, num(term)?),
                        };
                        weight.insert(k, c);
                    }
                }
                s.pieces.insert((group, node, num(t[3])?), (num(t[5])?, weight));
            }
            ("xref", 6) => {
                s.cross_refs.insert((group, node, num(t[3])?), (t[4].parse()?, num(t[5])?));
            }
            _ => return Err(bad("unrecognised line")),
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordCheck {
    pub location: String,
    pub group: CartanType,
    pub node: usize,
    pub piece: usize,
    pub basepoint: String,
    pub expected_dim: usize,
    pub computed_dim: Option<usize>,
    pub expected_wdd: String,
    pub computed_wdd: Option<String>,
    pub in_piece: bool,
    pub triple_holds: bool,
    /// Dimension of the nilpotent orbit of the whole algebra through the basepoint.
    pub nilpotent_dim: Option<usize>,
    pub error: Option<String>,
    pub erratum: Option<String>,
}

impl RecordCheck {
    pub fn dim_matches(&self) -> bool {
        self.computed_dim == Some(self.expected_dim)
    }

    pub fn wdd_matches(&self) -> bool {
        self.computed_wdd.as_deref() == Some(self.expected_wdd.as_str())
    }

    pub fn passed(&self) -> bool {
        self.dim_matches() && self.wdd_matches() && self.in_piece && self.triple_holds && self.error.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleCheck {
    pub location: String,
    pub group: CartanType,
    pub node: usize,
    pub piece: usize,
    pub header_dim: usize,
    pub computed_dim: Option<usize>,
    pub records: usize,
    pub zero_orbits: usize,
    pub max_dim: usize,
    /// Number of rows whose dimension equals the module dimension.
    pub dense_orbits: usize,
    pub distinct_basepoints: bool,
    pub classical: Option<ClassicalCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalCheck {
    pub module: String,
    pub realization: String,
    pub enumerated: usize,
    pub listed: usize,
    pub enumerated_dims: Vec<usize>,
    pub listed_dims: Vec<usize>,
}

impl ClassicalCheck {
    pub fn passed(&self) -> bool {
        self.enumerated == self.listed && self.enumerated_dims == self.listed_dims
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DescriptorCheck {
    pub group: CartanType,
    pub node: usize,
    pub piece: usize,
    pub expected_dim: usize,
    pub computed_dim: Option<usize>,
    pub expected_weight: BTreeMap<usize, i64>,
    pub computed_weight: Option<BTreeMap<usize, i64>>,
    pub expected_levi: Vec<String>,
    pub computed_levi: Vec<String>,
    pub name: Option<String>,
    pub cross_ref: Option<String>,
    pub cross_ref_found: Option<bool>,
}

impl DescriptorCheck {
    pub fn passed(&self) -> bool {
        let mut a = self.expected_levi.clone();
        let mut b = self.computed_levi.clone();
        a.sort();
        b.sort();
        a == b
            && self.computed_dim == Some(self.expected_dim)
            && self.computed_weight.as_ref() == Some(&self.expected_weight)
            && self.cross_ref_found != Some(false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub location: String,
    pub check: String,
    pub expected: String,
    pub found: String,
    pub erratum: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub records: Vec<RecordCheck>,
    pub modules: Vec<ModuleCheck>,
    pub descriptors: Vec<DescriptorCheck>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Failures not covered by an erratum annotation.
    pub fn regressions(&self) -> usize {
        self.failures.iter().filter(|f| !f.erratum).count()
    }

    pub fn errata(&self) -> usize {
        self.failures.iter().filter(|f| f.erratum).count()
    }

    pub fn passed(&self) -> bool {
        self.regressions() == 0
    }

    fn fail(&mut self, location: &str, check: &str, expected: impl ToString, found: impl ToString, erratum: bool) {
        self.failures.push(Failure {
            location: location.to_string(),
            check: check.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
            erratum,
        });
    }
}

/// Chevalley bases and gradings shared across the records of one run.
struct Context {
    bases: HashMap<CartanType, ChevalleyBasis>,
    gradings: HashMap<(CartanType, usize), ParabolicGrading>,
}

impl Context {
    fn new(keys: impl IntoIterator<Item = (CartanType, usize)>) -> Self {
        let keys: BTreeSet<(CartanType, usize)> = keys.into_iter().collect();
        let groups: BTreeSet<CartanType> = keys.iter().map(|k| k.0).collect();
        let bases: HashMap<CartanType, ChevalleyBasis> =
            groups.into_par_iter().map(|g| (g, ChevalleyBasis::for_type(g))).collect();
        let gradings = keys
            .into_iter()
            .filter_map(|(g, n)| grade_nilradical(bases[&g].system(), &[n]).ok().map(|gr| ((g, n), gr)))
            .collect();
        Self { bases, gradings }
    }
}

fn check_record(ctx: &Context, r: &OrbitRecord) -> RecordCheck {
    let mut out = RecordCheck {
        location: r.location.clone(),
        group: r.group,
        node: r.node,
        piece: r.piece,
        basepoint: r.basepoint_label(),
        expected_dim: r.dim,
        computed_dim: None,
        expected_wdd: r.coadjoint_label.clone(),
        computed_wdd: None,
        in_piece: false,
        triple_holds: false,
        nilpotent_dim: None,
        error: None,
        erratum: r.erratum.clone(),
    };
    let basis = &ctx.bases[&r.group];
    let sys = basis.system();
    let Some(grading) = ctx.gradings.get(&(r.group, r.node)) else {
        out.error = Some(format!("node {} is not a node of {}", r.node, r.group));
        return out;
    };
    let result = (|| -> Result<()> {
        let piece = grading.piece(r.piece)?;
        let mut x = AlgebraElement::zero(sys.rank());
        let mut in_piece = true;
        for label in &r.basepoint {
            let idx = sys.label_index(label)?;
            in_piece &= piece.roots.contains(&idx);
            x.add_root(idx, crate::linalg::q(1));
        }
        out.in_piece = in_piece;
        if !in_piece {
            return Ok(());
        }
        out.computed_dim = Some(orbit_dimension(basis, grading, r.piece, &x)?);
        let triple = jm_triple(basis, &x)?;
        out.triple_holds = triple.holds(basis);
        let wdd = diagram_of_triple(basis, &triple)?;
        out.nilpotent_dim = Some(nilpotent_orbit_dim(sys, &wdd));
        out.computed_wdd = Some(wdd.to_string());
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out
}

fn check_module(ctx: &Context, m: &ModuleTable) -> ModuleCheck {
    let computed_dim = ctx.gradings.get(&(m.group, m.node)).and_then(|g| g.piece(m.piece).ok()).map(|p| p.dim);
    let sets: BTreeSet<BTreeSet<&String>> = m.records.iter().map(|r| r.basepoint.iter().collect()).collect();
    ModuleCheck {
        location: m.location.clone(),
        group: m.group,
        node: m.node,
        piece: m.piece,
        header_dim: m.dim,
        computed_dim,
        records: m.records.len(),
        zero_orbits: m.records.iter().filter(|r| r.basepoint.is_empty()).count(),
        max_dim: m.records.iter().map(|r| r.dim).max().unwrap_or(0),
        dense_orbits: m.records.iter().filter(|r| r.dim == m.dim).count(),
        distinct_basepoints: sets.len() == m.records.len(),
        classical: classical_check(m),
    }
}

fn classical_module_for(group: CartanType, node: usize, piece: usize) -> Option<ClassicalModule> {
    first_piece_matches(group, node, piece)
        .ok()?
        .into_iter()
        .filter_map(|r| ClassicalModule::from_realization(r.kind, r.node))
        .find(|m| m.realization().is_ok())
}

fn classical_check(m: &ModuleTable) -> Option<ClassicalCheck> {
    let module = classical_module_for(m.group, m.node, m.piece)?;
    let (kind, node) = module.realization().ok()?;
    let mut enumerated_dims: Vec<usize> = match module.orbit_dimensions() {
        Ok(v) => v.into_iter().map(|(_, d)| d).collect(),
        Err(_) => Vec::new(),
    };
    let mut listed_dims: Vec<usize> = m.records.iter().map(|r| r.dim).collect();
    enumerated_dims.sort_unstable_by(|a, b| b.cmp(a));
    listed_dims.sort_unstable_by(|a, b| b.cmp(a));
    Some(ClassicalCheck {
        module: module.to_string(),
        realization: format!("{kind} node {node}"),
        enumerated: enumerated_dims.len(),
        listed: m.records.len(),
        enumerated_dims,
        listed_dims,
    })
}

/// Checks every summary row for the given group and node (all when `None`).
pub fn verify_summary(group: Option<CartanType>, node: Option<usize>) -> Vec<DescriptorCheck> {
    let s = summary();
    s.pieces
        .par_iter()
        .filter(|((g, n, _), _)| group.is_none_or(|x| x == *g) && node.is_none_or(|x| x == *n))
        .map(|(&(g, n, i), (dim, weight))| {
            let grading = grade_nilradical(&RootSystem::new(g), &[n]).expect("summary nodes are valid");
            let desc = module_descriptor(&grading, i).ok();
            let xref = s.cross_refs.get(&(g, n, i));
            DescriptorCheck {
                group: g,
                node: n,
                piece: i,
                expected_dim: *dim,
                computed_dim: desc.as_ref().map(|d| d.dim),
                expected_weight: weight.clone(),
                computed_weight: desc.as_ref().map(|d| d.highest_weight.clone()),
                expected_levi: s.levi.get(&(g, n)).cloned().unwrap_or_default(),
                computed_levi: levi_type(&grading).iter().map(|t| t.to_string()).collect(),
                name: desc.map(|d| d.name),
                cross_ref: xref.map(|(t, k)| format!("{t} node {k}")),
                cross_ref_found: xref.map(|&(t, k)| {
                    first_piece_matches(g, n, i).is_ok_and(|v| v.iter().any(|r| r.kind == t && r.node == k))
                }),
            }
        })
        .collect()
}

/// Recomputes every record and module invariant of the dataset.
pub fn verify_dataset(dataset: &Dataset) -> VerificationReport {
    let ctx = Context::new(dataset.modules.iter().map(|m| (m.group, m.node)));
    let records: Vec<&OrbitRecord> = dataset.records().collect();
    let mut report = VerificationReport {
        records: records.par_iter().map(|r| check_record(&ctx, r)).collect(),
        modules: dataset.modules.par_iter().map(|m| check_module(&ctx, m)).collect(),
        ..Default::default()
    };

    let checks = std::mem::take(&mut report.records);
    for c in &checks {
        let erratum = c.erratum.is_some();
        let loc = &c.location;
        if let Some(e) = &c.error {
            report.fail(loc, "recomputation", "success", e, false);
            continue;
        }
        if !c.in_piece {
            report.fail(loc, "basepoint in piece", format!("piece {}", c.piece), "root outside piece", false);
            continue;
        }
        if !c.dim_matches() {
            report.fail(loc, "orbit dimension", c.expected_dim, fmt_opt(&c.computed_dim), erratum);
        }
        if !c.wdd_matches() {
            report.fail(loc, "weighted Dynkin diagram", &c.expected_wdd, fmt_opt(&c.computed_wdd), erratum);
        }
        if !c.triple_holds {
            report.fail(loc, "sl2-triple identities", "hold", "fail", false);
        }
        if let (Some(d), Some(n)) = (c.computed_dim, c.nilpotent_dim) {
            if d > n {
                report.fail(loc, "orbit inside its nilpotent orbit", format!("<= {n}"), d, false);
            }
        }
    }
    report.records = checks;

    let modules = std::mem::take(&mut report.modules);
    for m in &modules {
        let loc = &m.location;
        if m.computed_dim != Some(m.header_dim) {
            report.fail(loc, "module dimension", m.header_dim, fmt_opt(&m.computed_dim), false);
        }
        if m.zero_orbits != 1 {
            report.fail(loc, "zero orbit listed once", 1, m.zero_orbits, false);
        }
        if m.max_dim != m.header_dim || m.dense_orbits != 1 {
            report.fail(loc, "single dense orbit", format!("one row of dim {}", m.header_dim), format!("{} rows, max {}", m.dense_orbits, m.max_dim), false);
        }
        if !m.distinct_basepoints {
            report.fail(loc, "distinct basepoints", "distinct", "repeated", false);
        }
        if let Some(c) = &m.classical {
            if !c.passed() {
                report.fail(loc, &format!("classical enumeration ({})", c.module), format!("{:?}", c.enumerated_dims), format!("{:?}", c.listed_dims), false);
            }
        }
    }
    report.modules = modules;

    let mut flagged = BTreeSet::new();
    for m in &report.modules {
        if let Some(ClassicalModule::Bilinear { k, space }) = classical_module_for(m.group, m.node, m.piece) {
            if let Ok(Some(d)) = literal_constraint_discrepancy(k, &space) {
                if flagged.insert((k, space.dim)) {
                    report.notes.push(format!(
                        "row bound 2s+p <= k (k={k}, form dimension {}) would exclude realized (s, p) = {:?}",
                        space.dim, d.excluded_but_realized
                    ));
                }
            }
        }
    }
    report
}

fn fmt_opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "none".into(), T::to_string)
}

/// Runs the dataset checks plus the summary rows for the groups present.
pub fn verify_with_summary(dataset: &Dataset, group: Option<CartanType>, node: Option<usize>) -> VerificationReport {
    let mut report = verify_dataset(dataset);
    report.descriptors = verify_summary(group, node);
    let descriptors = std::mem::take(&mut report.descriptors);
    for d in &descriptors {
        if !d.passed() {
            let loc = format!("summary {} node {} piece {}", d.group, d.node, d.piece);
            report.fail(
                &loc,
                "module descriptor",
                format!("dim {} weight {:?} levi {:?} xref {}", d.expected_dim, d.expected_weight, d.expected_levi, fmt_opt(&d.cross_ref)),
                format!("dim {} weight {:?} levi {:?} xref found {}", fmt_opt(&d.computed_dim), d.computed_weight, d.computed_levi, fmt_opt(&d.cross_ref_found)),
                false,
            );
        }
    }
    report.descriptors = descriptors;
    report
}

pub fn verify_module(group: CartanType, node: usize, piece: usize) -> Result<VerificationReport> {
    let ds = load_paper_tables()?;
    let m = ds
        .module(group, node, piece)
        .ok_or_else(|| Error::Dataset { location: format!("{group} node {node} piece {piece}"), reason: "no such table".into() })?;
    let one = Dataset { modules: vec![m.clone()] };
    let mut report = verify_dataset(&one);
    report.descriptors = verify_summary(Some(group), Some(node)).into_iter().filter(|d| d.piece == piece).collect();
    for d in report.descriptors.clone() {
        if !d.passed() {
            report.fail(&m.location, "module descriptor", d.expected_dim, fmt_opt(&d.computed_dim), false);
        }
    }
    Ok(report)
}

pub fn verify_all() -> Result<VerificationReport> {
    Ok(verify_with_summary(&load_paper_tables()?, None, None))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    pub group: CartanType,
    pub node: usize,
    pub abelian: bool,
    pub source: String,
    /// Nontrivial orbits as (basepoint, diagram, nilpotent orbit dimension).
    pub orbits: Vec<(String, String, usize)>,
    pub minimal_entries: usize,
    pub minimal_dim: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalSupportReport {
    pub group: CartanType,
    pub steps: Vec<ChainStep>,
    pub chain_lemmas: Vec<(usize, bool)>,
    pub minimal_orbit_dim: usize,
    /// Smallest nilpotent orbit dimension among the other nontrivial orbits of the first step.
    pub next_orbit_dim: usize,
    pub passed: bool,
}

fn chain_for(group: CartanType) -> Result<Vec<(CartanType, usize)>> {
    let t = |s: &str| s.parse::<CartanType>();
    let tail = vec![(t("D5")?, 5), (t("A4")?, 3), (t("A2")?, 2), (t("A1")?, 1), (t("A1")?, 1)];
    let head = match (group.family(), group.rank()) {
        (Family::E, 7) => vec![(group, 7), (t("E6")?, 6)],
        (Family::E, 6) => vec![(group, 6)],
        _ => return Err(Error::Unsupported(format!("the support chain starts at E6 or E7, not {group}"))),
    };
    Ok(head.into_iter().chain(tail).collect())
}

fn chain_step(dataset: &Dataset, kind: CartanType, node: usize) -> Result<ChainStep> {
    let basis = ChevalleyBasis::for_type(kind);
    let sys = basis.system();
    let grading = grade_nilradical(sys, &[node])?;
    let mut elements: Vec<(String, AlgebraElement)> = Vec::new();
    let source;
    if let Some(table) = dataset.module(kind, node, 1) {
        source = table.location.clone();
        for r in table.records.iter().filter(|r| !r.basepoint.is_empty()) {
            let x = AlgebraElement::from_labels(sys, &r.basepoint_label())?;
            elements.push((r.basepoint_label(), x));
        }
    } else {
        let module = ClassicalModule::from_realization(kind, node)
            .ok_or_else(|| Error::Unsupported(format!("no table or closed form for {kind} node {node}")))?;
        source = format!("closed form ({module})");
        for o in module.enumerate()?.into_iter().filter(|o| o.rank_a > 0) {
            let x = module.embed(&o, sys)?;
            elements.push((x.label(sys), x));
        }
    }
    let mut orbits = Vec::new();
    let mut minimal_entries = 0;
    for (label, x) in &elements {
        let wdd: WeightedDynkinDiagram = weighted_dynkin(&basis, x)?;
        if is_minimal_orbit(sys, &wdd) {
            minimal_entries += 1;
        }
        orbits.push((label.clone(), wdd.to_string(), nilpotent_orbit_dim(sys, &wdd)));
    }
    let minimal_dim = nilpotent_orbit_dim(sys, &minimal_orbit_diagram(sys));
    let minimal_label = minimal_orbit_diagram(sys).to_string();
    let others_larger = orbits.iter().filter(|o| o.1 != minimal_label).all(|o| o.2 > minimal_dim);
    let abelian = grading.is_abelian();
    Ok(ChainStep {
        group: kind,
        node,
        abelian,
        source,
        passed: abelian && minimal_entries == 1 && others_larger,
        orbits,
        minimal_entries,
        minimal_dim,
    })
}

pub fn minimal_support_check(group: CartanType) -> Result<MinimalSupportReport> {
    minimal_support_check_with(&load_paper_tables()?, group)
}

pub fn minimal_support_check_with(dataset: &Dataset, group: CartanType) -> Result<MinimalSupportReport> {
    let chain = chain_for(group)?;
    let steps: Vec<ChainStep> = chain.iter().map(|&(k, n)| chain_step(dataset, k, n)).collect::<Result<_>>()?;
    let lemma_range: Vec<usize> = if group.rank() == 7 { vec![7, 6, 5] } else { vec![6, 5] };
    let chain_lemmas: Vec<(usize, bool)> =
        lemma_range.par_iter().map(|&n| (n, verify_chain_lemma(n).map(|r| r.passed).unwrap_or(false))).collect();
    let first = &steps[0];
    let minimal_orbit_dim = first.minimal_dim;
    let next_orbit_dim = first.orbits.iter().map(|o| o.2).filter(|&d| d > minimal_orbit_dim).min().unwrap_or(0);
    let passed = steps.iter().all(|s| s.passed) && chain_lemmas.iter().all(|c| c.1);
    Ok(MinimalSupportReport { group, steps, chain_lemmas, minimal_orbit_dim, next_orbit_dim, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_locations() {
        let err = Dataset::parse("x.txt", "module G2 node 2 piece 1 dim 4\norbit 77 dim 1 wdd 00\n").unwrap_err();
        assert!(err.to_string().contains("x.txt:2"), "{err}");
        assert!(Dataset::parse("x.txt", "orbit 0 dim 0 wdd 00\n").is_err());
        assert!(Dataset::parse("x.txt", "module G2 node 2 piece 1 dim 4\norbit 0 dim 0 wdd 000\n").is_err());
    }

    #[test]
    fn erratum_annotation() {
        let ds = Dataset::parse("x.txt", "module G2 node 2 piece 1 dim 4\norbit 21 dim 3 wdd 10 erratum printed as 3\n").unwrap();
        assert_eq!(ds.modules[0].records[0].erratum.as_deref(), Some("printed as 3"));
        assert_eq!(Dataset::parse("y.txt", &ds.render()).unwrap().modules[0].records, ds.modules[0].records.iter().map(|r| OrbitRecord { location: "y.txt:2".into(), ..r.clone() }).collect::<Vec<_>>());
    }

    #[test]
    fn summary_parses() {
        let s = summary();
        assert_eq!(s.pieces[&("E8".parse().unwrap(), 5, 1)].1, BTreeMap::from([(3, 1), (8, 1)]));
        assert_eq!(s.pieces[&("F4".parse().unwrap(), 2, 1)].1, BTreeMap::from([(1, 1), (4, 2)]));
    }
}
