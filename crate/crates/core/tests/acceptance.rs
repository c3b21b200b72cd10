//! One line per acceptance criterion. Runs without the libtest harness so the
//! report reads top to bottom; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use chevalley::classical_orbits::{
    classify, enumerate_bilinear_tensor, enumerate_exterior_square, enumerate_symmetric_square, enumerate_tensor_gl,
};
use chevalley::liealg::verify_chain_lemma;
use chevalley::linalg::q;
use chevalley::parabolic::{grade_nilradical, module_descriptor};
use chevalley::tables::{load_paper_tables, minimal_support_check, summary, verify_all, verify_summary, VerificationReport};
use chevalley::{AlgebraElement, CartanType, ChevalleyBasis, RootSystem};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn t(s: &str) -> CartanType {
    s.parse().unwrap()
}

static REPORT: OnceLock<(VerificationReport, Duration)> = OnceLock::new();

fn report() -> &'static (VerificationReport, Duration) {
    REPORT.get_or_init(|| {
        let start = Instant::now();
        let r = verify_all().expect("embedded tables load");
        (r, start.elapsed())
    })
}

fn closed_form_positive_roots(kind: CartanType) -> usize {
    let name = kind.to_string();
    let n: usize = name[1..].parse().unwrap();
    match &name[..1] {
        "A" => n * (n + 1) / 2,
        "B" | "C" => n * n,
        "D" => n * (n - 1),
        "E" => [36, 63, 120][n - 6],
        "F" => 24,
        "G" => 6,
        _ => unreachable!(),
    }
}

fn root_counts() -> Outcome {
    let types = common::all_types();
    for &kind in &types {
        let sys = RootSystem::new(kind);
        ensure(sys.num_positive() == closed_form_positive_roots(kind), || format!("{kind}: {} positive roots", sys.num_positive()))?;
        ensure(sys.num_roots() == 2 * sys.num_positive(), || format!("{kind}: roots not symmetric"))?;
    }
    let c2 = RootSystem::new(t("C2")).num_roots();
    let g2 = RootSystem::new(t("G2")).num_roots();
    ensure(c2 == 8 && g2 == 12, || format!("C2 has {c2} roots, G2 has {g2}"))?;
    Ok(format!("{} types of rank <= 8; C2 has 8 roots", types.len()))
}

fn grading_dims() -> Outcome {
    let dims = |k: &str, n: usize| -> Vec<usize> {
        grade_nilradical(&RootSystem::new(t(k)), &[n]).unwrap().pieces.iter().map(|p| p.dim).collect()
    };
    for (k, n, want) in [("E8", 4, vec![30, 30, 20, 15, 6, 5]), ("E7", 3, vec![30, 15, 2]), ("F4", 3, vec![6, 9, 2, 3])] {
        let got = dims(k, n);
        ensure(got == want, || format!("{k} node {n}: {got:?}"))?;
    }
    let s = summary();
    for (&(g, n, i), (dim, _)) in &s.pieces {
        let got = dims(&g.to_string(), n);
        ensure(got.get(i - 1) == Some(dim), || format!("{g} node {n} piece {i}: {got:?}, expected {dim}"))?;
    }
    Ok(format!("{} summary pieces", s.pieces.len()))
}

fn descriptors() -> Outcome {
    let checks = verify_summary(None, None);
    if let Some(bad) = checks.iter().find(|d| !d.passed()) {
        return Err(format!("{} node {} piece {}: {bad:?}", bad.group, bad.node, bad.piece));
    }
    let g = grade_nilradical(&RootSystem::new(t("E8")), &[5]).unwrap();
    let d = module_descriptor(&g, 1).map_err(|e| e.to_string())?;
    ensure(d.dim == 40 && d.highest_weight == BTreeMap::from([(3, 1), (8, 1)]), || format!("E8 node 5: {d:?}"))?;
    Ok(format!("{} Levi types and highest weights", checks.len()))
}

fn orbit_tables() -> Outcome {
    let (r, elapsed) = report();
    ensure(r.records.len() > 300, || format!("only {} records", r.records.len()))?;
    let bad: Vec<_> = r.records.iter().filter(|c| c.erratum.is_none() && !(c.dim_matches() && c.wdd_matches())).collect();
    ensure(bad.is_empty(), || format!("{} mismatches, first at {}", bad.len(), bad[0].location))?;
    ensure(r.regressions() == 0, || format!("{} regressions: {:?}", r.regressions(), r.failures))?;
    let ds = load_paper_tables().map_err(|e| e.to_string())?;
    let listed = |g: &str, n: usize| -> Vec<(usize, String)> {
        ds.module(t(g), n, 1).unwrap().records.iter().map(|x| (x.dim, x.coadjoint_label.clone())).collect()
    };
    let e7: Vec<(usize, String)> = listed("E7", 7).into_iter().take(3).collect();
    let want = [(27, "0000002"), (26, "0000010"), (17, "1000000")];
    ensure(e7.iter().zip(want).all(|(a, b)| a.0 == b.0 && a.1 == b.1), || format!("E7 node 7: {e7:?}"))?;
    let e8: Vec<usize> = listed("E8", 1).into_iter().map(|x| x.0).collect();
    ensure(e8 == [64, 63, 59, 54, 50, 44, 43, 35, 22, 0], || format!("E8 node 1: {e8:?}"))?;
    ensure(elapsed.as_secs() < 300, || format!("took {elapsed:?}"))?;
    Ok(format!("{} records recomputed in {:.1?}, {} annotated erratum", r.records.len(), elapsed, r.errata()))
}

fn dense_orbits() -> Outcome {
    let (r, _) = report();
    for m in &r.modules {
        ensure(m.computed_dim == Some(m.header_dim) && m.max_dim == m.header_dim, || {
            format!("{}: header {} computed {:?} max {}", m.location, m.header_dim, m.computed_dim, m.max_dim)
        })?;
        ensure(m.zero_orbits == 1 && m.dense_orbits == 1, || format!("{}: {m:?}", m.location))?;
    }
    Ok(format!("{} tables", r.modules.len()))
}

fn classical() -> Outcome {
    for a in 1..=8 {
        for b in 1..=8 {
            ensure(enumerate_tensor_gl(a, b).len() == a.min(b) + 1, || format!("tensor {a} {b}"))?;
        }
        ensure(enumerate_symmetric_square(a).len() == a + 1, || format!("symmetric square {a}"))?;
        ensure(enumerate_exterior_square(a).len() == a / 2 + 1, || format!("exterior square {a}"))?;
    }
    let mut split_pairs = 0;
    for (k, n, skew) in common::bilinear_cases() {
        let sp = common::space(n, skew);
        for o in enumerate_bilinear_tensor(k, &sp).map_err(|e| e.to_string())? {
            let half = !skew && n % 2 == 0 && o.rank_a == n / 2 && o.rank_a > 0 && o.witt_rank == 0;
            ensure(o.split_tag.is_some() == half, || format!("k={k} n={n}: {:?}", o.key()))?;
            ensure(classify(&o.representative, &sp).map_err(|e| e.to_string())? == o.key(), || format!("k={k} n={n}"))?;
            split_pairs += usize::from(o.split_tag.is_some());
        }
    }
    let mut oracle_cases = 0;
    for k in 1..=2 {
        for n in 1..=6 {
            for skew in [false, true].into_iter().filter(|&s| !s || n % 2 == 0) {
                let found = common::finite_field_keys(k, n, skew, 3);
                let want = common::enumerated_keys(k, n, skew);
                ensure(found == want, || format!("k={k} n={n} skew={skew}: {found:?} vs {want:?}"))?;
                oracle_cases += 1;
            }
        }
    }
    Ok(format!("{} split orbits, {oracle_cases} cases checked over F_3", split_pairs))
}

fn chain_lemma() -> Outcome {
    let mut parts = Vec::new();
    for (n, coefficients) in [(7, Some(36)), (6, Some(20)), (5, None)] {
        let r = verify_chain_lemma(n).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("n = {n}: {r:?}"))?;
        if let Some(c) = coefficients {
            ensure(r.coefficients == c, || format!("n = {n}: {} coefficients", r.coefficients))?;
        }
        parts.push(format!("n={n} ({} coefficients)", r.coefficients));
    }
    Ok(parts.join(", "))
}

fn minimal_support() -> Outcome {
    let mut parts = Vec::new();
    for (g, min, next, half) in [("E6", 22, 32, 16), ("E7", 34, 52, 26)] {
        let r = minimal_support_check(t(g)).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{g}: {r:?}"))?;
        ensure(r.steps.iter().all(|s| s.minimal_entries == 1), || format!("{g}: a step lacks a unique minimal entry"))?;
        ensure((r.minimal_orbit_dim, r.next_orbit_dim) == (min, next), || {
            format!("{g}: minimal {} next {}", r.minimal_orbit_dim, r.next_orbit_dim)
        })?;
        ensure(r.next_orbit_dim / 2 >= half, || format!("{g}: next orbit too small"))?;
        parts.push(format!("{g} {}/{} over {} steps", r.minimal_orbit_dim, r.next_orbit_dim, r.steps.len()));
    }
    Ok(parts.join(", "))
}

fn jacobi_on_roots(cb: &ChevalleyBasis) -> Result<(), String> {
    let r = cb.system().num_roots();
    (0..r).into_par_iter().try_for_each(|a| {
        for b in 0..r {
            for c in 0..r {
                let (h, roots) = common::jacobi_defect(cb, a, b, c);
                if h.iter().any(|x| *x != 0) || !roots.is_empty() {
                    return Err(format!("{}: roots {a} {b} {c}", cb.system().kind()));
                }
            }
        }
        Ok(())
    })
}

/// Triples with at least one Cartan element, through the general bracket.
fn jacobi_with_cartan(cb: &ChevalleyBasis) -> Result<(), String> {
    let sys = cb.system();
    let rank = sys.rank();
    let h = |i: usize| {
        let mut v = vec![q(0); rank];
        v[i] = q(1);
        AlgebraElement::cartan_element(v)
    };
    let x = |a: usize| AlgebraElement::root_vector(rank, a);
    let br = |u: &AlgebraElement, v: &AlgebraElement| cb.bracket(u, v).expect("same rank");
    (0..sys.num_roots()).into_par_iter().try_for_each(|a| {
        for i in 0..rank {
            for b in 0..sys.num_roots() {
                let (u, v, w) = (h(i), x(a), x(b));
                let sum = br(&u, &br(&v, &w)).add(&br(&v, &br(&w, &u))).add(&br(&w, &br(&u, &v)));
                if !sum.is_zero() {
                    return Err(format!("{}: h{} with roots {a} {b}", sys.kind(), i + 1));
                }
            }
            for j in 0..rank {
                let (u, v, w) = (h(i), h(j), x(a));
                let sum = br(&u, &br(&v, &w)).add(&br(&v, &br(&w, &u))).add(&br(&w, &br(&u, &v)));
                if !sum.is_zero() {
                    return Err(format!("{}: h{} h{} with root {a}", sys.kind(), i + 1, j + 1));
                }
            }
        }
        Ok(())
    })
}

fn properties() -> Outcome {
    let types = common::all_types();
    types.par_iter().try_for_each(|&kind| {
        let cb = ChevalleyBasis::for_type(kind);
        jacobi_on_roots(&cb)?;
        jacobi_with_cartan(&cb)
    })?;
    let (r, _) = report();
    for c in &r.records {
        ensure(c.error.is_none() && c.triple_holds, || format!("{}: no valid triple", c.location))?;
        let (Some(d), Some(nd)) = (c.computed_dim, c.nilpotent_dim) else {
            return Err(format!("{}: missing dimensions", c.location));
        };
        ensure(d <= nd, || format!("{}: orbit dim {d} exceeds nilpotent orbit dim {nd}", c.location))?;
    }
    let cases = [(1, 4, false), (2, 4, false), (3, 6, false), (1, 5, false), (2, 5, false), (3, 7, false), (2, 2, true), (2, 4, true), (3, 6, true)];
    for (i, &(k, n, skew)) in cases.iter().enumerate() {
        common::isometry_trials(k, n, skew, 100, i as u64)?;
    }
    Ok(format!(
        "Jacobi on {} types, {} triples, {} isometry cases x 100 trials",
        types.len(),
        r.records.len(),
        cases.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("root counts", root_counts, Duration::from_secs(1)),
        ("grading dimensions", grading_dims, Duration::from_secs(5)),
        ("module descriptors", descriptors, Duration::from_secs(60)),
        ("orbit tables", orbit_tables, Duration::from_secs(300)),
        ("dense orbits", dense_orbits, Duration::from_secs(300)),
        ("classical enumerations", classical, Duration::from_secs(60)),
        ("chain lemma", chain_lemma, Duration::from_secs(120)),
        ("minimal support", minimal_support, Duration::from_secs(120)),
        ("property suites", properties, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed > budget {
                Err(format!("{msg}; took {elapsed:.1?}, budget {budget:?}"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} [{elapsed:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
