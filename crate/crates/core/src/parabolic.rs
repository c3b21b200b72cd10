//! Standard parabolics: Levi type, the grading of the nilradical by the
//! marked nodes, highest weights of the pieces, and cross-references between
//! higher pieces and first pieces of other modules.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{CartanType, ChevalleyBasis, Family, RootSystem};
use crate::linalg::{q, Q};

#[derive(Debug, Clone, Serialize)]
pub struct GradedPiece {
    pub index: usize,
    /// Root indices in the ambient system.
    pub roots: Vec<usize>,
    pub dim: usize,
}

/// A simple factor of the Levi. `nodes[j]` is the ambient (one-based) node
/// playing the role of node `j + 1` of the standard diagram of `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeviComponent {
    pub kind: CartanType,
    pub nodes: Vec<usize>,
    pub name: String,
}

#[derive(Debug, Clone)]
pub struct ParabolicGrading {
    pub system: RootSystem,
    pub marked: BTreeSet<usize>,
    pub pieces: Vec<GradedPiece>,
    pub levi_components: Vec<LeviComponent>,
    /// Positive roots of the Levi.
    pub levi_roots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleDescriptor {
    pub levi_type: Vec<CartanType>,
    /// Ambient node -> coefficient of the corresponding fundamental weight.
    pub highest_weight: BTreeMap<usize, i64>,
    pub highest_root: String,
    pub dim: usize,
    pub name: String,
}

pub fn grade_nilradical(system: &RootSystem, marked: &[usize]) -> Result<ParabolicGrading> {
    let n = system.rank();
    let marked: BTreeSet<usize> = marked.iter().copied().collect();
    if marked.is_empty() {
        return Err(Error::InvalidNodes("empty marked set".into()));
    }
    if let Some(bad) = marked.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidNodes(format!("node {bad} outside 1..={n}")));
    }
    let level = |r: usize| -> usize {
        marked.iter().map(|&k| system.root(r).coeffs()[k - 1]).sum::<i64>() as usize
    };
    let m = level(system.highest_index());
    let mut pieces: Vec<GradedPiece> =
        (1..=m).map(|i| GradedPiece { index: i, roots: Vec::new(), dim: 0 }).collect();
    let mut levi_roots = Vec::new();
    for r in 0..system.num_positive() {
        match level(r) {
            0 => levi_roots.push(r),
            l => pieces[l - 1].roots.push(r),
        }
    }
    for p in &mut pieces {
        p.dim = p.roots.len();
    }
    let unmarked: Vec<usize> = (1..=n).filter(|k| !marked.contains(k)).collect();
    let levi_components = components(system.cartan(), &unmarked)
        .into_iter()
        .map(|nodes| name_component(system, &nodes))
        .collect();
    Ok(ParabolicGrading { system: system.clone(), marked, pieces, levi_components, levi_roots })
}

impl ParabolicGrading {
    pub fn m(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.m() == 1
    }

    pub fn piece(&self, i: usize) -> Result<&GradedPiece> {
        if i == 0 || i > self.m() {
            return Err(Error::InvalidNodes(format!("piece {i} outside 1..={}", self.m())));
        }
        Ok(&self.pieces[i - 1])
    }

    pub fn levi_simple(&self) -> Vec<usize> {
        (1..=self.system.rank()).filter(|k| !self.marked.contains(k)).collect()
    }

    /// Level of a root (sum of its marked coefficients), negative for negative roots.
    pub fn level(&self, r: usize) -> i64 {
        self.marked.iter().map(|&k| self.system.root(r).coeffs()[k - 1]).sum()
    }

    pub fn node(&self) -> Option<usize> {
        (self.marked.len() == 1).then(|| *self.marked.iter().next().unwrap())
    }
}

pub fn levi_type(grading: &ParabolicGrading) -> Vec<CartanType> {
    grading.levi_components.iter().map(|c| c.kind).collect()
}

/// Connected components of the diagram restricted to `nodes` (one-based).
fn components(cartan: &[Vec<i64>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut left: BTreeSet<usize> = nodes.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&start) = left.iter().next() {
        let mut comp = vec![start];
        left.remove(&start);
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            let nbrs: Vec<usize> = left.iter().copied().filter(|&b| cartan[a - 1][b - 1] != 0).collect();
            for b in nbrs {
                left.remove(&b);
                comp.push(b);
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// All bijections `p` with `std[i][j] == ambient[p(i)][p(j)]`.
fn isomorphisms(kind: CartanType, ambient: &[Vec<i64>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let std = kind.cartan_matrix();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(std: &[Vec<i64>], amb: &[Vec<i64>], nodes: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == std.len() {
            out.push(cur.clone());
            return;
        }
        for &cand in nodes {
            if cur.contains(&cand) {
                continue;
            }
            let ok = (0..i).all(|j| {
                std[i][j] == amb[cand - 1][cur[j] - 1] && std[j][i] == amb[cur[j] - 1][cand - 1]
            }) && amb[cand - 1][cand - 1] == 2;
            if ok {
                cur.push(cand);
                go(std, amb, nodes, cur, out);
                cur.pop();
            }
        }
    }
    if std.len() == nodes.len() {
        go(&std, ambient, nodes, &mut current, &mut out);
    }
    out
}

/// Type of a connected sub-diagram, by search through the standard diagrams.
fn classify(ambient: &[Vec<i64>], nodes: &[usize]) -> (CartanType, Vec<usize>) {
    for family in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
        if let Ok(kind) = CartanType::new(family, nodes.len()) {
            if let Some(iso) = isomorphisms(kind, ambient, nodes).into_iter().next() {
                return (kind, iso);
            }
        }
    }
    unreachable!("connected sub-diagram of a Dynkin diagram has a type")
}

fn name_component(system: &RootSystem, nodes: &[usize]) -> LeviComponent {
    let ambient = system.kind();
    let n = ambient.rank();
    let (mut kind, mut iso) = classify(system.cartan(), nodes);
    // tails of classical diagrams keep the ambient family: D3 rather than A3, C2 rather than B2
    let tail = match ambient.family() {
        Family::B | Family::C => nodes.contains(&n) && nodes.len() >= 2,
        Family::D => nodes.contains(&n) && nodes.contains(&(n - 1)) && nodes.len() >= 3,
        _ => false,
    };
    if tail {
        let renamed = CartanType::new(ambient.family(), nodes.len()).expect("valid tail rank");
        if let Some(i) = isomorphisms(renamed, system.cartan(), nodes).into_iter().next() {
            kind = renamed;
            iso = i;
        }
    }
    LeviComponent { kind, nodes: iso, name: kind.split_name() }
}

impl ParabolicGrading {
    fn require_maximal(&self) -> Result<usize> {
        self.node().ok_or_else(|| {
            Error::Unsupported("module descriptors are defined for maximal parabolics only".into())
        })
    }

    /// The roots of piece `i` that are killed by every Levi simple root.
    pub fn highest_roots(&self, i: usize) -> Result<Vec<usize>> {
        let piece = self.piece(i)?;
        let simple = self.levi_simple();
        Ok(piece
            .roots
            .iter()
            .copied()
            .filter(|&r| simple.iter().all(|&j| self.system.sum_index(r, self.system.simple(j - 1)).is_none()))
            .collect())
    }
}

pub fn module_descriptor(grading: &ParabolicGrading, i: usize) -> Result<ModuleDescriptor> {
    grading.require_maximal()?;
    let sys = &grading.system;
    let piece = grading.piece(i)?;
    let tops = grading.highest_roots(i)?;
    let [lambda] = tops.as_slice() else {
        return Err(Error::Unsupported(format!("piece {i} has {} highest roots", tops.len())));
    };
    let lambda = *lambda;
    let simple = grading.levi_simple();
    let highest_weight: BTreeMap<usize, i64> = simple
        .iter()
        .map(|&j| (j, sys.pairing(lambda, j - 1)))
        .filter(|(_, v)| *v != 0)
        .collect();
    let weyl = weyl_dimension(grading, lambda);
    if weyl != Q::from_integer(piece.dim.into()) {
        return Err(Error::Unsupported(format!(
            "Weyl dimension {weyl} disagrees with piece dimension {}",
            piece.dim
        )));
    }
    Ok(ModuleDescriptor {
        levi_type: levi_type(grading),
        highest_weight,
        highest_root: sys.label(lambda),
        dim: piece.dim,
        name: module_name(grading, lambda),
    })
}

/// Weyl's dimension formula over the Levi for the weight of root `lambda`.
pub fn weyl_dimension(grading: &ParabolicGrading, lambda: usize) -> Q {
    let sys = &grading.system;
    let mut num = Q::one();
    let mut den = Q::one();
    for &b in &grading.levi_roots {
        let co = sys.coroot(b);
        let rho: i64 = co.iter().sum();
        let lam: i64 = co.iter().enumerate().map(|(i, c)| c * sys.pairing(lambda, i)).sum();
        num *= q(lam + rho);
        den *= q(rho);
    }
    num / den
}

/// Weight of root `lambda` on each Levi component, in that component's numbering.
fn component_weights(grading: &ParabolicGrading, lambda: usize) -> Vec<(LeviComponent, Vec<i64>)> {
    grading
        .levi_components
        .iter()
        .map(|c| {
            let w = c.nodes.iter().map(|&k| grading.system.pairing(lambda, k - 1)).collect();
            (c.clone(), w)
        })
        .collect()
}

fn rep_name(kind: CartanType, w: &[i64]) -> String {
    let n = kind.rank();
    let nonzero: Vec<(usize, i64)> = w.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (i + 1, *v)).collect();
    let name = match (kind.family(), nonzero.as_slice()) {
        (_, []) => Some("Trivial"),
        (Family::A, [(k, 1)]) if *k == 1 || *k == n => Some("Standard"),
        (Family::A, [(k, 1)]) if n >= 3 && (*k == 2 || *k == n - 1) => Some("Exterior square"),
        (Family::A, [(k, 1)]) if n >= 5 && (*k == 3 || *k == n - 2) => Some("Exterior cube"),
        (Family::A, [(k, 2)]) if *k == 1 || *k == n => Some("Symmetric square"),
        (Family::A, [(k, 3)]) if *k == 1 || *k == n => Some("Symmetric cube"),
        (Family::B | Family::D, [(1, 1)]) => Some("Vector"),
        (Family::B, [(k, 1)]) if *k == n => Some("Spin"),
        (Family::D, [(k, 1)]) if *k + 1 >= n => Some("Spin"),
        (Family::C, [(1, 1)]) => Some("Standard"),
        (Family::E, [(1 | 6, 1)]) if n == 6 => Some("27"),
        (Family::E, [(7, 1)]) if n == 7 => Some("56"),
        _ => None,
    };
    name.map(str::to_string).unwrap_or_else(|| {
        let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
        format!("V({})", parts.join(","))
    })
}

fn module_name(grading: &ParabolicGrading, lambda: usize) -> String {
    let parts: Vec<String> = component_weights(grading, lambda)
        .into_iter()
        .filter(|(_, w)| w.iter().any(|v| *v != 0))
        .map(|(c, w)| rep_name(c.kind, &w))
        .collect();
    if parts.is_empty() {
        "Trivial".into()
    } else {
        parts.join(" ⊗ ")
    }
}

/// Isomorphism invariant of a piece as a module for the semisimple Levi:
/// the nontrivial factors with canonical weights, plus the dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleSignature {
    pub factors: Vec<(CartanType, Vec<i64>)>,
    pub dim: usize,
}

pub fn module_signature(grading: &ParabolicGrading, i: usize) -> Result<ModuleSignature> {
    grading.require_maximal()?;
    let tops = grading.highest_roots(i)?;
    let [lambda] = tops.as_slice() else {
        return Err(Error::Unsupported(format!("piece {i} has {} highest roots", tops.len())));
    };
    let sys = &grading.system;
    let mut factors = Vec::new();
    for c in &grading.levi_components {
        let (kind, _) = classify(sys.cartan(), &c.nodes);
        let best = isomorphisms(kind, sys.cartan(), &c.nodes)
            .into_iter()
            .map(|iso| iso.iter().map(|&k| sys.pairing(*lambda, k - 1)).collect::<Vec<i64>>())
            .min()
            .expect("component is isomorphic to its own type");
        if best.iter().any(|v| *v != 0) {
            factors.push((kind, best));
        }
    }
    factors.sort();
    Ok(ModuleSignature { factors, dim: grading.piece(i)?.dim })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub kind: CartanType,
    pub node: usize,
}

fn first_piece_catalogue() -> &'static Vec<(ModuleSignature, Realization)> {
    static CATALOGUE: OnceLock<Vec<(ModuleSignature, Realization)>> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        let mut out = Vec::new();
        for kind in CartanType::all_up_to(8) {
            let sys = RootSystem::new(kind);
            for node in 1..=kind.rank() {
                let g = grade_nilradical(&sys, &[node]).expect("valid node");
                let sig = module_signature(&g, 1).expect("first piece is irreducible");
                out.push((sig, Realization { kind, node }));
            }
        }
        out
    })
}

/// Every (type, node) up to rank 8 whose first piece is isomorphic to piece
/// `i` of the given module, smallest rank first and, within a rank, largest
/// node first.
pub fn first_piece_matches(kind: CartanType, node: usize, i: usize) -> Result<Vec<Realization>> {
    let g = grade_nilradical(&RootSystem::new(kind), &[node])?;
    let sig = module_signature(&g, i)?;
    let mut found: Vec<Realization> =
        first_piece_catalogue().iter().filter(|(s, _)| *s == sig).map(|(_, r)| r.clone()).collect();
    found.sort_by_key(|r| (r.kind.rank(), r.kind.family(), std::cmp::Reverse(r.node)));
    Ok(found)
}

pub fn first_piece_realization(kind: CartanType, node: usize, i: usize) -> Result<Option<Realization>> {
    if i < 2 {
        return Err(Error::InvalidNodes("cross-references are defined for pieces i >= 2".into()));
    }
    Ok(first_piece_matches(kind, node, i)?.into_iter().next())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerCentralSeries {
    pub holds: bool,
    /// Dimensions of u, [u,u], [u,[u,u]], ... down to zero.
    pub dims: Vec<usize>,
}

/// Compares the lower central series of `u`, computed with structure
/// constants, against the tails of the grading.
pub fn lower_central_series_check(basis: &ChevalleyBasis, grading: &ParabolicGrading) -> LowerCentralSeries {
    let all_u: BTreeSet<usize> = grading.pieces.iter().flat_map(|p| p.roots.iter().copied()).collect();
    let mut current = all_u.clone();
    let mut dims = vec![current.len()];
    let mut holds = true;
    let mut j = 1;
    while !current.is_empty() {
        let mut next = BTreeSet::new();
        for &a in &all_u {
            for &b in &current {
                if let Some(s) = basis.sum(a, b) {
                    if basis.n(a, b) != 0 {
                        next.insert(s);
                    }
                }
            }
        }
        let expected: BTreeSet<usize> =
            grading.pieces.iter().filter(|p| p.index > j).flat_map(|p| p.roots.iter().copied()).collect();
        holds &= next == expected;
        dims.push(next.len());
        current = next;
        j += 1;
    }
    LowerCentralSeries { holds, dims }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grading(t: &str, node: usize) -> ParabolicGrading {
        grade_nilradical(&RootSystem::new(t.parse().unwrap()), &[node]).unwrap()
    }

    #[test]
    fn levi_types() {
        let names = |t: &str, k: usize| -> Vec<String> { levi_type(&grading(t, k)).iter().map(ToString::to_string).collect() };
        assert_eq!(names("E7", 7), ["E6"]);
        assert_eq!(names("F4", 1), ["C3"]);
        assert_eq!(names("A3", 2), ["A1", "A1"]);
        assert_eq!(names("D5", 2), ["A1", "D3"]);
        assert_eq!(names("F4", 4), ["B3"]);
        assert_eq!(names("C4", 2), ["A1", "C2"]);
    }

    #[test]
    fn empty_marked_rejected() {
        assert!(grade_nilradical(&RootSystem::new("A2".parse().unwrap()), &[]).is_err());
        assert!(grade_nilradical(&RootSystem::new("A2".parse().unwrap()), &[3]).is_err());
    }

    #[test]
    fn descriptors() {
        let d = module_descriptor(&grading("E6", 2), 1).unwrap();
        assert_eq!(d.highest_weight, BTreeMap::from([(4, 1)]));
        assert_eq!(d.dim, 20);
        let d = module_descriptor(&grading("A2", 1), 1).unwrap();
        assert_eq!(d.highest_weight, BTreeMap::from([(2, 1)]));
        let two = grade_nilradical(&RootSystem::new("A3".parse().unwrap()), &[1, 3]).unwrap();
        assert!(module_descriptor(&two, 1).is_err());
    }
}
