//! Orbit dimensions, sl2-triples and weighted Dynkin diagrams.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::liealg::{AlgebraElement, ChevalleyBasis, Representation, RootSystem};
use crate::linalg::{add_scaled, q, q_to_i64, solve_sparse, sparse_rank, SparseRow, Q};
use crate::parabolic::ParabolicGrading;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightedDynkinDiagram {
    pub values: Vec<i64>,
}

impl WeightedDynkinDiagram {
    pub fn zero(rank: usize) -> Self {
        Self { values: vec![0; rank] }
    }

    pub fn parse(digits: &str) -> Option<Self> {
        let values = digits.chars().map(|c| c.to_digit(10).map(i64::from)).collect::<Option<Vec<_>>>()?;
        Some(Self { values })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }
}

impl fmt::Display for WeightedDynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: AlgebraElement,
    pub h: AlgebraElement,
    pub f: AlgebraElement,
    /// Root conjugations `exp(ad t X_gamma)` applied to the input before solving.
    pub conjugations: Vec<(usize, i64)>,
}

impl Sl2Triple {
    pub fn holds(&self, basis: &ChevalleyBasis) -> bool {
        let br = |x: &AlgebraElement, y: &AlgebraElement| basis.bracket_unchecked(x, y);
        br(&self.h, &self.e) == self.e.scale(&q(2))
            && br(&self.h, &self.f) == self.f.scale(&q(-2))
            && br(&self.e, &self.f) == self.h
    }
}

/// Dimension of the orbit of `x` under the Levi: the rank of `l -> [l, x]`.
pub fn orbit_dimension(
    basis: &ChevalleyBasis,
    grading: &ParabolicGrading,
    i: usize,
    x: &AlgebraElement,
) -> Result<usize> {
    basis.check(x)?;
    let piece = grading.piece(i)?;
    if let Some(bad) = x.support().into_iter().find(|r| !piece.roots.contains(r)) {
        return Err(Error::OutsidePiece { piece: i, detail: grading.system.label(bad) });
    }
    if x.cartan.iter().any(|c| !c.is_zero()) {
        return Err(Error::OutsidePiece { piece: i, detail: "nonzero Cartan part".into() });
    }
    let sys = basis.system();
    let mut rows: Vec<SparseRow> = Vec::new();
    for k in 0..sys.rank() {
        rows.push(
            x.roots
                .iter()
                .filter(|(&a, _)| sys.pairing(a, k) != 0)
                .map(|(&a, c)| (a, c * q(sys.pairing(a, k))))
                .collect(),
        );
    }
    for &b in &grading.levi_roots {
        for g in [b, sys.negative(b)] {
            let mut row = SparseRow::new();
            for (&a, c) in &x.roots {
                if let Some(s) = basis.sum(g, a) {
                    let e = row.entry(s).or_insert_with(Q::zero);
                    *e += c * q(basis.n(g, a));
                    if e.is_zero() {
                        row.remove(&s);
                    }
                }
            }
            rows.push(row);
        }
    }
    Ok(sparse_rank(rows))
}

/// Linear system in unknown coefficients over root vectors: the root part of
/// `[e, y]` must vanish and the Cartan part must equal `target` (or, when
/// `target` is `None`, must take the value 2 on every root in the support of `e`).
fn solve_for(
    basis: &ChevalleyBasis,
    e: &AlgebraElement,
    unknowns: &[usize],
    target: Option<&[Q]>,
) -> Option<AlgebraElement> {
    let sys = basis.system();
    let rank = sys.rank();
    let mut root_rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    let mut cartan_rows: Vec<SparseRow> = vec![SparseRow::new(); rank];
    for (u, &g) in unknowns.iter().enumerate() {
        for (&a, c) in &e.roots {
            if g == sys.negative(a) {
                for (k, v) in sys.coroot(a).into_iter().enumerate() {
                    if v != 0 {
                        *cartan_rows[k].entry(u).or_insert_with(Q::zero) += c * q(v);
                    }
                }
            } else if let Some(s) = basis.sum(a, g) {
                *root_rows.entry(s).or_default().entry(u).or_insert_with(Q::zero) += c * q(basis.n(a, g));
            }
        }
    }
    let clean = |mut r: SparseRow| {
        r.retain(|_, v| !v.is_zero());
        r
    };
    let mut eqs: Vec<(SparseRow, Q)> = root_rows.into_values().map(|r| (clean(r), Q::zero())).collect();
    match target {
        Some(h) => {
            for (k, row) in cartan_rows.into_iter().enumerate() {
                eqs.push((clean(row), h[k].clone()));
            }
        }
        None => {
            for &b in e.roots.keys() {
                let mut row = SparseRow::new();
                for (k, crow) in cartan_rows.iter().enumerate() {
                    let p = sys.pairing(b, k);
                    if p == 0 {
                        continue;
                    }
                    for (&u, v) in crow {
                        *row.entry(u).or_insert_with(Q::zero) += v * q(p);
                    }
                }
                eqs.push((clean(row), q(2)));
            }
        }
    }
    let sol = solve_sparse(unknowns.len(), eqs)?;
    let mut y = AlgebraElement::zero(rank);
    for (u, v) in sol.into_iter().enumerate() {
        y.add_root(unknowns[u], v);
    }
    Some(y)
}

fn triple_with_cartan_h(basis: &ChevalleyBasis, e: &AlgebraElement) -> Option<(AlgebraElement, AlgebraElement)> {
    let sys = basis.system();
    let all: Vec<usize> = (0..sys.num_roots()).collect();
    let y = solve_for(basis, e, &all, None)?;
    let h = basis.bracket_unchecked(e, &y);
    debug_assert!(h.is_cartan());
    let h_int: Vec<i64> = h.cartan.iter().map(q_to_i64).collect::<Option<_>>()?;
    let minus_two: Vec<usize> = all.iter().copied().filter(|&g| sys.eval_on_coroots(g, &h_int) == -2).collect();
    let f = solve_for(basis, e, &minus_two, Some(&h.cartan))?;
    Some((h, f))
}

/// `exp(ad t X_g) x`.
pub fn conjugate(basis: &ChevalleyBasis, g: usize, t: i64, x: &AlgebraElement) -> AlgebraElement {
    let rank = basis.system().rank();
    let xg = AlgebraElement::root_vector(rank, g);
    let mut term = x.clone();
    let mut out = x.clone();
    let mut k = 1i64;
    let mut factorial = 1i64;
    loop {
        term = basis.bracket_unchecked(&xg, &term);
        if term.is_zero() {
            return out;
        }
        factorial *= k;
        let coef = Q::new(t.pow(k as u32).into(), factorial.into());
        out = out.add(&term.scale(&coef));
        k += 1;
    }
}

/// Coordinates on the algebra: the Cartan part first, then root vectors.
fn coords(x: &AlgebraElement) -> SparseRow {
    let rank = x.cartan.len();
    let cartan = x.cartan.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone()));
    cartan.chain(x.roots.iter().map(|(&r, c)| (rank + r, c.clone()))).collect()
}

fn from_coords(rank: usize, v: Vec<Q>) -> AlgebraElement {
    let mut x = AlgebraElement::cartan_element(v[..rank].to_vec());
    for (r, c) in v.into_iter().enumerate().skip(rank) {
        x.add_root(r - rank, c);
    }
    x
}

fn basis_vector(rank: usize, j: usize) -> AlgebraElement {
    if j < rank {
        let mut h = vec![Q::zero(); rank];
        h[j] = q(1);
        AlgebraElement::cartan_element(h)
    } else {
        AlgebraElement::root_vector(rank, j - rank)
    }
}

/// Rows of the matrix of `ad x`.
fn ad_rows(basis: &ChevalleyBasis, x: &AlgebraElement) -> Vec<SparseRow> {
    let rank = basis.system().rank();
    let n = basis.system().dimension();
    let mut rows = vec![SparseRow::new(); n];
    for j in 0..n {
        for (i, v) in coords(&basis.bracket_unchecked(x, &basis_vector(rank, j))) {
            rows[i].insert(j, v);
        }
    }
    rows
}

fn mat_mul(a: &[SparseRow], b: &[SparseRow]) -> Vec<SparseRow> {
    a.iter()
        .map(|row| {
            let mut out = SparseRow::new();
            for (&k, v) in row {
                add_scaled(&mut out, &b[k], v);
            }
            out
        })
        .collect()
}

fn shifted(rows: &[SparseRow], lambda: &Q) -> Vec<SparseRow> {
    let mut out = rows.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        add_scaled(row, &SparseRow::from([(i, q(1))]), &-lambda);
    }
    out
}

/// Triple through `e` with an arbitrary neutral element: any `h = [e, z]`
/// with `[h, e] = 2e` is the neutral element of a unique triple.
fn general_triple(basis: &ChevalleyBasis, e: &AlgebraElement) -> Option<Sl2Triple> {
    let rank = basis.system().rank();
    let n = basis.system().dimension();
    let ad_e = ad_rows(basis, e);
    let target = coords(e);
    let eqs = mat_mul(&ad_e, &ad_e)
        .into_iter()
        .enumerate()
        .map(|(i, row)| (row, -q(2) * target.get(&i).cloned().unwrap_or_else(Q::zero)))
        .collect();
    let z = from_coords(rank, solve_sparse(n, eqs)?);
    let h = basis.bracket_unchecked(e, &z);
    let h_coords = coords(&h);
    let mut eqs: Vec<(SparseRow, Q)> =
        ad_e.into_iter().enumerate().map(|(i, row)| (row, h_coords.get(&i).cloned().unwrap_or_else(Q::zero))).collect();
    eqs.extend(shifted(&ad_rows(basis, &h), &q(-2)).into_iter().map(|row| (row, Q::zero())));
    let f = from_coords(rank, solve_sparse(n, eqs)?);
    Some(Sl2Triple { e: e.clone(), h, f, conjugations: vec![] })
}

/// Tries a Cartan neutral element for `e`, then for `exp(ad t X_g) e` over all
/// roots `g` and `t` in 1..=3, then falls back to a general triple through `e`.
pub fn jm_triple(basis: &ChevalleyBasis, e: &AlgebraElement) -> Result<Sl2Triple> {
    basis.check(e)?;
    let sys = basis.system();
    if e.is_zero() {
        let z = AlgebraElement::zero(sys.rank());
        return Ok(Sl2Triple { e: z.clone(), h: z.clone(), f: z, conjugations: vec![] });
    }
    if let Some((h, f)) = triple_with_cartan_h(basis, e) {
        return Ok(Sl2Triple { e: e.clone(), h, f, conjugations: vec![] });
    }
    for g in 0..sys.num_roots() {
        for t in 1..=3 {
            let e2 = conjugate(basis, g, t, e);
            if let Some((h, f)) = triple_with_cartan_h(basis, &e2) {
                return Ok(Sl2Triple { e: e2, h, f, conjugations: vec![(g, t)] });
            }
        }
    }
    general_triple(basis, e).ok_or_else(|| Error::NoTriple(e.label(sys)))
}

/// Moves a Cartan element (given by its values on the simple roots) into the
/// dominant chamber, always reflecting in the lowest-index negative node.
pub fn make_dominant(system: &RootSystem, mut values: Vec<i64>) -> Vec<i64> {
    let a = system.cartan();
    while let Some(i) = values.iter().position(|v| *v < 0) {
        let vi = values[i];
        for j in 0..values.len() {
            values[j] -= vi * a[i][j];
        }
    }
    values
}

fn diagram_from_h(system: &RootSystem, h: &[Q]) -> Result<WeightedDynkinDiagram> {
    let values: Vec<i64> = (0..system.rank())
        .map(|i| {
            let v = (0..system.rank()).fold(Q::zero(), |acc, k| acc + &h[k] * q(system.pairing(i, k)));
            q_to_i64(&v)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Unsupported("non-integral eigenvalue of h".into()))?;
    let values = make_dominant(system, values);
    if values.iter().any(|v| !(0..=2).contains(v)) {
        return Err(Error::Unsupported(format!("diagram value outside 0..=2: {values:?}")));
    }
    Ok(WeightedDynkinDiagram { values })
}

pub fn weighted_dynkin(basis: &ChevalleyBasis, e: &AlgebraElement) -> Result<WeightedDynkinDiagram> {
    diagram_of_triple(basis, &jm_triple(basis, e)?)
}

/// Diagram of the orbit of `triple.e`. A Cartan neutral element is read off
/// directly. Otherwise the diagram is the unique dominant candidate whose
/// eigenvalue multiplicities match those of `h` on the adjoint and minuscule
/// representations and which is realised by a generic element of degree 2.
pub fn diagram_of_triple(basis: &ChevalleyBasis, triple: &Sl2Triple) -> Result<WeightedDynkinDiagram> {
    let sys = basis.system();
    if triple.h.is_cartan() {
        return diagram_from_h(sys, &triple.h.cartan);
    }
    let ad_h = ad_rows(basis, &triple.h);
    let n = sys.dimension();
    let kernel = |rows: &[SparseRow], lambda: i64| rows.len() - sparse_rank(shifted(rows, &q(lambda)));
    let mut profile = Vec::new();
    let mut seen = 0;
    while seen < n {
        let k = profile.len() as i64;
        if k > 2 * n as i64 {
            return Err(Error::Unsupported("neutral element has non-integral eigenvalues".into()));
        }
        let m = kernel(&ad_h, k);
        seen += if k == 0 { m } else { 2 * m };
        profile.push(m);
    }
    let mut candidates: Vec<WeightedDynkinDiagram> =
        diagrams(sys.rank()).filter(|d| adjoint_profile(sys, d) == profile).collect();
    let reps: Vec<Representation> = (1..=sys.rank()).filter_map(|k| Representation::minuscule(basis, k).ok()).collect();
    for rep in &reps {
        if candidates.len() < 2 {
            break;
        }
        let rows = rep_rows(rep, &triple.h);
        candidates.retain(|d| {
            let h = cartan_of_diagram(sys, d);
            let mut mults: BTreeMap<Q, usize> = BTreeMap::new();
            for mu in &rep.weights {
                *mults.entry(mu.iter().zip(&h).map(|(m, c)| c * q(*m)).sum()).or_default() += 1;
            }
            mults.iter().all(|(lambda, m)| rows.len() - sparse_rank(shifted(&rows, lambda)) == *m)
        });
    }
    if candidates.len() > 1 {
        candidates.retain(|d| is_characteristic(basis, d));
    }
    match candidates.as_slice() {
        [d] => Ok(d.clone()),
        [] => Err(Error::Unsupported("no diagram matches the neutral element".into())),
        _ => Err(Error::Unsupported(format!(
            "neutral element matches several diagrams: {}",
            candidates.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn diagrams(rank: usize) -> impl Iterator<Item = WeightedDynkinDiagram> {
    (0..3usize.pow(rank as u32)).map(move |mut code| {
        let values = (0..rank)
            .map(|_| {
                let v = (code % 3) as i64;
                code /= 3;
                v
            })
            .collect();
        WeightedDynkinDiagram { values }
    })
}

fn root_degree(system: &RootSystem, r: usize, wdd: &WeightedDynkinDiagram) -> i64 {
    system.root(r).coeffs().iter().zip(&wdd.values).map(|(c, w)| c * w).sum()
}

/// Multiplicity of each eigenvalue `k >= 0` of the diagram's neutral element
/// on the adjoint representation.
fn adjoint_profile(system: &RootSystem, wdd: &WeightedDynkinDiagram) -> Vec<usize> {
    let mut profile = vec![system.rank()];
    for r in 0..system.num_positive() {
        let k = root_degree(system, r, wdd) as usize;
        if profile.len() <= k {
            profile.resize(k + 1, 0);
        }
        profile[k] += if k == 0 { 2 } else { 1 };
    }
    profile
}

/// Coefficients over the simple coroots of the Cartan element with the
/// diagram's values on the simple roots.
fn cartan_of_diagram(system: &RootSystem, wdd: &WeightedDynkinDiagram) -> Vec<Q> {
    let rank = system.rank();
    let eqs = (0..rank)
        .map(|i| {
            let row = (0..rank).filter(|&k| system.pairing(system.simple(i), k) != 0);
            (row.map(|k| (k, q(system.pairing(system.simple(i), k)))).collect(), q(wdd.values[i]))
        })
        .collect();
    solve_sparse(rank, eqs).expect("the Cartan matrix is invertible")
}

fn rep_rows(rep: &Representation, x: &AlgebraElement) -> Vec<SparseRow> {
    let mut rows = vec![SparseRow::new(); rep.dim];
    let terms = x.cartan.iter().zip(&rep.cartan).chain(x.roots.iter().map(|(&r, c)| (c, &rep.action[r])));
    for (c, m) in terms {
        for (i, j, v) in m.entries() {
            add_scaled(&mut rows[i], &SparseRow::from([(j, q(v))]), c);
        }
    }
    rows
}

/// Whether a generic element of degree 2 has the diagram's Cartan element as
/// a neutral element. The element is pseudo-random with a fixed seed.
fn is_characteristic(basis: &ChevalleyBasis, wdd: &WeightedDynkinDiagram) -> bool {
    let sys = basis.system();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut e = AlgebraElement::zero(sys.rank());
    let mut minus_two = Vec::new();
    for r in 0..sys.num_positive() {
        if root_degree(sys, r, wdd) == 2 {
            e.add_root(r, q(rng.gen_range(1..=1_000_000)));
            minus_two.push(sys.negative(r));
        }
    }
    if e.is_zero() {
        return wdd.is_zero();
    }
    solve_for(basis, &e, &minus_two, Some(&cartan_of_diagram(sys, wdd))).is_some()
}

/// `dim g - dim g_0 - dim g_1` for the grading defined by the diagram.
pub fn nilpotent_orbit_dim(system: &RootSystem, wdd: &WeightedDynkinDiagram) -> usize {
    let mut g0 = system.rank();
    let mut g1 = 0;
    for r in 0..system.num_roots() {
        let v: i64 = system.root(r).coeffs().iter().zip(&wdd.values).map(|(c, w)| c * w).sum();
        match v {
            0 => g0 += 1,
            1 => g1 += 1,
            _ => {}
        }
    }
    system.dimension() - g0 - g1
}

/// Diagram of the orbit through a highest root vector.
pub fn minimal_orbit_diagram(system: &RootSystem) -> WeightedDynkinDiagram {
    let h: Vec<Q> = system.coroot(system.highest_index()).into_iter().map(q).collect();
    diagram_from_h(system, &h).expect("coroot of the highest root is integral")
}

pub fn is_minimal_orbit(system: &RootSystem, wdd: &WeightedDynkinDiagram) -> bool {
    *wdd == minimal_orbit_diagram(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::grade_nilradical;

    fn basis(t: &str) -> ChevalleyBasis {
        ChevalleyBasis::for_type(t.parse().unwrap())
    }

    #[test]
    fn highest_root_triple() {
        let cb = basis("E7");
        let sys = cb.system();
        let e = AlgebraElement::from_labels(sys, "2234321").unwrap();
        let t = jm_triple(&cb, &e).unwrap();
        assert!(t.holds(&cb));
        let theta = sys.highest_index();
        assert_eq!(t.f, AlgebraElement::root_vector(7, sys.negative(theta)));
        assert_eq!(weighted_dynkin(&cb, &e).unwrap().to_string(), "1000000");
        assert_eq!(nilpotent_orbit_dim(sys, &WeightedDynkinDiagram::parse("1000000").unwrap()), 34);
    }

    #[test]
    fn regular_a2() {
        let cb = basis("A2");
        let e = AlgebraElement::from_labels(cb.system(), "10+01").unwrap();
        let t = jm_triple(&cb, &e).unwrap();
        assert!(t.holds(&cb));
        assert_eq!(weighted_dynkin(&cb, &e).unwrap().to_string(), "22");
    }

    /// The three orbits exchanged by triality, reached through the general
    /// triple and told apart by the vector and spin representations.
    #[test]
    fn general_triples_separate_triality() {
        let cb = basis("D4");
        let sys = cb.system();
        let mut seen = Vec::new();
        for labels in ["1000+0010", "1000+0001", "0010+0001", "1100", "0110", "0111+1110"] {
            let e = AlgebraElement::from_labels(sys, labels).unwrap();
            let want = weighted_dynkin(&cb, &e).unwrap();
            let moved = conjugate(&cb, sys.negative(sys.simple(1)), 1, &e);
            let t = general_triple(&cb, &moved).unwrap();
            assert!(t.holds(&cb));
            assert_eq!(diagram_of_triple(&cb, &t).unwrap(), want, "{labels}");
            seen.push(want.to_string());
        }
        for d in ["2000", "0020", "0002"] {
            assert!(seen.iter().any(|s| s == d), "{seen:?}");
        }
    }

    #[test]
    fn orbit_dims() {
        let cb = basis("G2");
        let g = grade_nilradical(cb.system(), &[2]).unwrap();
        let x = AlgebraElement::from_labels(cb.system(), "21").unwrap();
        assert_eq!(orbit_dimension(&cb, &g, 1, &x).unwrap(), 3);
        let outside = AlgebraElement::from_labels(cb.system(), "10").unwrap();
        assert!(orbit_dimension(&cb, &g, 1, &outside).is_err());
    }
}
