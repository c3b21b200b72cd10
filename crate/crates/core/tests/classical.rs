mod common;

use std::collections::BTreeSet;

use chevalley::classical_orbits::{
    classify, enumerate_bilinear_tensor, enumerate_exterior_square, enumerate_symmetric_square, enumerate_tensor_gl,
    ClassicalModule,
};
use chevalley::linalg::{q, QMatrix};
use common::{
    bilinear_cases as cases, enumerated_keys as keys, finite_field_keys, gram, isometry_trials, key_mod, mat_vec,
    matrix_from_code, rank_mod, space,
};
use rayon::prelude::*;

#[test]
fn counts() {
    for (k, n, skew) in cases() {
        let orbits = enumerate_bilinear_tensor(k, &space(n, skew)).unwrap();
        // Pairs (r, w) with w <= r <= min(k, n), r - w <= n - r, plus one for the split pair.
        let mut expected = 0;
        for r in 0..=k.min(n) {
            for w in 0..=r {
                if r - w <= n - r && !(skew && w % 2 == 1) {
                    expected += if !skew && n % 2 == 0 && r == n / 2 && w == 0 && r > 0 { 2 } else { 1 };
                }
            }
        }
        assert_eq!(orbits.len(), expected, "k={k} n={n} skew={skew}");
        assert_eq!(keys(k, n, skew).len(), orbits.len());
    }
    for n1 in 1..=8 {
        for n2 in 1..=8 {
            assert_eq!(enumerate_tensor_gl(n1, n2).len(), n1.min(n2) + 1);
        }
    }
    for n in 1..=8 {
        assert_eq!(enumerate_symmetric_square(n).len(), n + 1);
        assert_eq!(enumerate_exterior_square(n).len(), n / 2 + 1);
    }
}

#[test]
fn split_pair_only_at_half_rank() {
    for (k, n, skew) in cases() {
        let sp = space(n, skew);
        for o in enumerate_bilinear_tensor(k, &sp).unwrap() {
            let half = !skew && n % 2 == 0 && o.rank_a == n / 2 && o.rank_a > 0 && o.witt_rank == 0;
            assert_eq!(o.split_tag.is_some(), half, "k={k} n={n} {:?}", o.key());
            assert_eq!(classify(&o.representative, &sp).unwrap(), o.key());
        }
    }
}

#[test]
fn invariants_obey_inequalities() {
    for (k, n, skew) in cases() {
        for (r, w, _) in keys(k, n, skew) {
            assert!(w <= r && r <= k.min(n));
            assert!(2 * r <= n + w, "k={k} n={n} r={r} w={w}");
            assert!(!skew || w % 2 == 0);
        }
    }
}

#[test]
fn realized_dimensions() {
    let dims = |m: ClassicalModule| -> Vec<usize> { m.orbit_dimensions().unwrap().into_iter().map(|(_, d)| d).collect() };
    let bilinear = |k, n, skew| ClassicalModule::Bilinear { k, space: space(n, skew) };
    let mut b4 = dims(bilinear(1, 7, false));
    b4.sort_unstable();
    assert_eq!(b4, [0, 6, 7]);
    let mut d8 = dims(bilinear(1, 14, false));
    d8.sort_unstable();
    assert_eq!(d8, [0, 13, 14]);
    assert_eq!(dims(ClassicalModule::SymmetricSquare(3)), [0, 3, 5, 6]);
    assert_eq!(dims(ClassicalModule::ExteriorSquare(5)), [0, 7, 10]);
    assert_eq!(dims(ClassicalModule::Tensor { n1: 3, n2: 5 }), [0, 7, 12, 15]);
    let skew: BTreeSet<usize> = keys(2, 2, true).into_iter().map(|k| k.1).collect();
    assert_eq!(skew, BTreeSet::from([0, 2]));
    // Orbits of GL(a) x GL(b) on a x b matrices of rank r have dimension r(a + b - r).
    for (o, d) in (ClassicalModule::Tensor { n1: 4, n2: 3 }).orbit_dimensions().unwrap() {
        assert_eq!(d, o.rank_a * (7 - o.rank_a));
    }
}

#[test]
fn finite_field_classes_match() {
    for k in 1..=2 {
        for n in 1..=6 {
            let mut fields = vec![(false, 3), (false, 5)];
            if n % 2 == 0 {
                fields.push((true, 3));
            }
            for (skew, p) in fields.into_iter().filter(|&(_, p)| p == 3 || k * n <= 8) {
                assert_eq!(finite_field_keys(k, n, skew, p), keys(k, n, skew), "k={k} n={n} skew={skew} p={p}");
            }
        }
    }
}

#[test]
fn finite_field_rank_classes() {
    let p = 3;
    let ranks: BTreeSet<usize> = (0..3u64.pow(12)).into_par_iter().map(|c| rank_mod(matrix_from_code(c, 3, 4, p), p)).collect();
    let want: BTreeSet<usize> = enumerate_tensor_gl(3, 4).iter().map(|o| o.rank_a).collect();
    assert_eq!(ranks, want);
    for n in 1..=3 {
        let mut sym = BTreeSet::new();
        let mut alt = BTreeSet::new();
        for c in 0..3u64.pow((n * n) as u32) {
            let m = matrix_from_code(c, n, n, p);
            let t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
            if m == t {
                sym.insert(rank_mod(m.clone(), p));
            }
            if m.iter().zip(&t).all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x + y) % p == 0)) {
                alt.insert(rank_mod(m, p));
            }
        }
        assert_eq!(sym, enumerate_symmetric_square(n).iter().map(|o| o.rank_a).collect());
        assert_eq!(alt, enumerate_exterior_square(n).iter().map(|o| o.rank_a).collect());
    }
}

/// Elementary row operations and isometries of determinant one preserve
/// the invariant of every matrix over a small field.
#[test]
fn finite_field_generators_preserve_keys() {
    let p = 3;
    for (k, n, skew) in [(2, 4, false), (2, 4, true), (1, 4, false), (2, 3, false), (2, 2, false)] {
        let j = gram(n, skew);
        let gens = special_isometries(n, skew);
        let total = (p as u64).pow((k * n) as u32);
        (0..total).into_par_iter().for_each(|c| {
            let a = matrix_from_code(c, k, n, p);
            let key = key_mod(&a, &j, skew, p);
            for s in &gens {
                let moved: Vec<Vec<i64>> = a.iter().map(|row| mat_vec(row, s, p)).collect();
                assert_eq!(key_mod(&moved, &j, skew, p), key);
            }
            if k == 2 {
                let mut added = a.clone();
                added[0] = (0..n).map(|t| (a[0][t] + a[1][t]).rem_euclid(p)).collect();
                assert_eq!(key_mod(&added, &j, skew, p), key);
                let mut scaled = a.clone();
                scaled[1] = a[1].iter().map(|x| (2 * x) % p).collect();
                assert_eq!(key_mod(&scaled, &j, skew, p), key);
            }
        });
    }
}

/// Integer isometries of the split form that have determinant one, as
/// matrices acting on row vectors.
fn special_isometries(n: usize, skew: bool) -> Vec<Vec<Vec<i64>>> {
    let h = n / 2;
    let id = |n: usize| -> Vec<Vec<i64>> { (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() };
    let mut out = Vec::new();
    for i in 0..h {
        for j in 0..h {
            // Unipotent elements of the Levi GL(h) and of the two Siegel radicals.
            if i != j {
                let mut s = id(n);
                s[i][j] = 1;
                s[h + j][h + i] = -1;
                out.push(s);
            }
            let sign = if skew { 1 } else { -1 };
            if i != j || skew {
                let mut s = id(n);
                s[i][h + j] += 1;
                if i != j {
                    s[j][h + i] += sign;
                }
                out.push(s);
                let mut s = id(n);
                s[h + i][j] += 1;
                if i != j {
                    s[h + j][i] += sign;
                }
                out.push(s);
            }
        }
        if n % 2 == 1 {
            let w = n - 1;
            let mut s = id(n);
            s[i][w] = 2;
            s[w][h + i] = -2;
            s[i][h + i] = -2;
            out.push(s);
            let mut s = id(n);
            s[h + i][w] = 2;
            s[w][i] = -2;
            s[h + i][i] = -2;
            out.push(s);
        }
    }
    let j = gram(n, skew);
    for s in &out {
        let sj: Vec<Vec<i64>> =
            s.iter().map(|row| (0..n).map(|c| row.iter().zip(&j).map(|(x, jr)| x * jr[c]).sum()).collect()).collect();
        let sjst: Vec<Vec<i64>> = sj.iter().map(|row| s.iter().map(|o| row.iter().zip(o).map(|(x, y)| x * y).sum()).collect()).collect();
        assert_eq!(sjst, j, "generator {s:?} is not an isometry");
    }
    out
}

#[test]
fn isometry_invariance() {
    for (k, n, skew) in [(1, 4, false), (2, 4, false), (3, 6, false), (2, 5, false), (3, 7, false), (2, 4, true), (3, 6, true), (2, 2, true)] {
        isometry_trials(k, n, skew, 120, 7).unwrap();
    }
}

/// A reflection swaps the two families of maximal isotropic subspaces.
#[test]
fn reflection_swaps_split_tag() {
    for n in [2, 4, 6] {
        let sp = space(n, false);
        let h = n / 2;
        let mut swap = QMatrix::identity(n);
        swap[(h - 1, h - 1)] = q(0);
        swap[(2 * h - 1, 2 * h - 1)] = q(0);
        swap[(h - 1, 2 * h - 1)] = q(1);
        swap[(2 * h - 1, h - 1)] = q(1);
        assert_eq!(swap.mul(&sp.gram).mul(&swap.transpose()), sp.gram);
        for o in enumerate_bilinear_tensor(h, &sp).unwrap().into_iter().filter(|o| o.split_tag.is_some()) {
            let (r, w, tag) = classify(&o.representative.mul(&swap), &sp).unwrap();
            assert_eq!((r, w), (o.rank_a, o.witt_rank));
            assert_ne!(tag, o.split_tag);
        }
    }
}
