#![allow(dead_code)]

use std::collections::BTreeMap;

use std::collections::BTreeSet;

use chevalley::classical_orbits::{classify, enumerate_bilinear_tensor, BilinearSpace, SplitTag, Symmetry};
use chevalley::linalg::{q, q_frac, QMatrix};
use chevalley::{CartanType, ChevalleyBasis, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;

pub type Key = (usize, usize, Option<SplitTag>);

pub fn all_types() -> Vec<CartanType> {
    CartanType::all_up_to(8)
}

/// Integer-only evaluation of the Jacobi sum on the root-vector triple
/// `(a, b, c)`; returns the Cartan and root parts of the result.
pub fn jacobi_defect(cb: &ChevalleyBasis, a: usize, b: usize, c: usize) -> (Vec<i64>, BTreeMap<usize, i64>) {
    let sys = cb.system();
    let rank = sys.rank();
    let mut h = vec![0i64; rank];
    let mut roots: BTreeMap<usize, i64> = BTreeMap::new();
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        if y == sys.negative(x) {
            // [[X_x, X_-x], X_z] = <z, x^vee> X_z
            let co = sys.coroot(x);
            let v: i64 = (0..rank).map(|i| co[i] * sys.pairing(z, i)).sum();
            *roots.entry(z).or_default() += v;
        } else if let Some(s) = cb.sum(x, y) {
            let n1 = cb.n(x, y);
            if z == sys.negative(s) {
                for (hi, ci) in h.iter_mut().zip(sys.coroot(s)) {
                    *hi += n1 * ci;
                }
            } else if let Some(t) = cb.sum(s, z) {
                *roots.entry(t).or_default() += n1 * cb.n(s, z);
            }
        }
    }
    roots.retain(|_, v| *v != 0);
    (h, roots)
}

pub fn space(n: usize, skew: bool) -> BilinearSpace {
    if skew {
        BilinearSpace::split_skew(n).unwrap()
    } else {
        BilinearSpace::split_symmetric(n)
    }
}

// Arithmetic over a prime field, independent of the library.

pub fn rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|x| (m[rank][c] * x).rem_euclid(p) == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] % p != 0 {
                let f = (m[r][c] * inv).rem_euclid(p);
                for j in 0..cols {
                    m[r][j] = (m[r][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn gram(n: usize, skew: bool) -> Vec<Vec<i64>> {
    space(n, skew).gram.to_i64()
}

pub fn key_mod(a: &[Vec<i64>], j: &[Vec<i64>], skew: bool, p: i64) -> Key {
    let n = j.len();
    let r = rank_mod(a.to_vec(), p);
    let aj: Vec<Vec<i64>> = a.iter().map(|row| (0..n).map(|c| (0..n).map(|t| row[t] * j[t][c]).sum()).collect()).collect();
    let ajat: Vec<Vec<i64>> =
        aj.iter().map(|row| a.iter().map(|other| row.iter().zip(other).map(|(x, y)| x * y).sum()).collect()).collect();
    let w = rank_mod(ajat, p);
    let h = n / 2;
    let tag = (!skew && n.is_multiple_of(2) && r == h && r > 0 && w == 0).then(|| {
        let mut stacked = a.to_vec();
        stacked.extend((0..h).map(|i| (0..n).map(|c| i64::from(c == i)).collect()));
        let meet = r + h - rank_mod(stacked, p);
        if (h - meet).is_multiple_of(2) {
            SplitTag::Plus
        } else {
            SplitTag::Minus
        }
    });
    (r, w, tag)
}

pub fn matrix_from_code(mut code: u64, k: usize, n: usize, p: i64) -> Vec<Vec<i64>> {
    (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let v = (code % p as u64) as i64;
                    code /= p as u64;
                    v
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(row: &[i64], s: &[Vec<i64>], p: i64) -> Vec<i64> {
    (0..s.len()).map(|c| row.iter().enumerate().map(|(t, x)| x * s[t][c]).sum::<i64>().rem_euclid(p)).collect()
}


// Random isometries over the rationals.

pub fn random_q(rng: &mut ChaCha8Rng) -> Q {
    let d = rng.gen_range(1..=4);
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-5..=5);
    }
    q_frac(n, d)
}

pub fn random_invertible(rng: &mut ChaCha8Rng, k: usize) -> QMatrix {
    loop {
        let mut c = QMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                c[(i, j)] = q(rng.gen_range(-3..=3));
            }
        }
        if c.rank() == k {
            return c;
        }
    }
}

pub fn random_isometry(rng: &mut ChaCha8Rng, sp: &BilinearSpace) -> QMatrix {
    let n = sp.dim;
    let h = n / 2;
    let mut s = QMatrix::identity(n);
    for _ in 0..8 {
        let mut g = QMatrix::identity(n);
        let c = random_q(rng);
        match (sp.symmetry, rng.gen_range(0..3)) {
            (Symmetry::Skew, _) => {
                // Transvection x -> x + c <x, v> v.
                let v: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-2..=2))).collect();
                for a in 0..n {
                    let jv: Q = (0..n).map(|b| &sp.gram[(a, b)] * &v[b]).fold(Q::zero(), |x, y| x + y);
                    for b in 0..n {
                        g[(a, b)] += &c * &jv * &v[b];
                    }
                }
            }
            (_, 0) if h > 0 => {
                let i = rng.gen_range(0..h);
                g[(i, i)] = c.clone();
                g[(h + i, h + i)] = q(1) / c;
            }
            (_, 1) if h > 1 => {
                let i = rng.gen_range(0..h);
                let j = (i + rng.gen_range(1..h)) % h;
                g[(i, h + j)] = c.clone();
                g[(j, h + i)] = -c;
            }
            (_, 2) if h > 0 && n % 2 == 1 => {
                let i = rng.gen_range(0..h);
                g[(i, n - 1)] = c.clone();
                g[(n - 1, h + i)] = -c.clone();
                g[(i, h + i)] = -(&c * &c) / q(2);
            }
            _ => {}
        }
        s = s.mul(&g);
    }
    s
}

/// Every `(k, n, skew)` with `k, n <= 8` and `n` even in the skew case.
pub fn bilinear_cases() -> impl Iterator<Item = (usize, usize, bool)> {
    (1..=8).flat_map(|k| (1..=8).flat_map(move |n| [(k, n, false), (k, n, true)])).filter(|&(_, n, skew)| !skew || n % 2 == 0)
}

pub fn enumerated_keys(k: usize, n: usize, skew: bool) -> BTreeSet<Key> {
    enumerate_bilinear_tensor(k, &space(n, skew)).unwrap().iter().map(|o| o.key()).collect()
}

/// Invariants realized by all `k x n` matrices over the field with `p` elements.
pub fn finite_field_keys(k: usize, n: usize, skew: bool, p: i64) -> BTreeSet<Key> {
    let j = gram(n, skew);
    let total = (p as u64).pow((k * n) as u32);
    (0..total).into_par_iter().map(|c| key_mod(&matrix_from_code(c, k, n, p), &j, skew, p)).collect()
}

/// Compares the invariant of `C A S` with that of `A` for random invertible
/// `C` and random isometries `S` of determinant one.
pub fn isometry_trials(k: usize, n: usize, skew: bool, trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = space(n, skew);
    let reps = enumerate_bilinear_tensor(k, &sp).map_err(|e| e.to_string())?;
    for trial in 0..trials {
        let a = if trial % 2 == 0 {
            reps[trial / 2 % reps.len()].representative.clone()
        } else {
            let mut a = QMatrix::zeros(k, n);
            for i in 0..k {
                for j in 0..n {
                    a[(i, j)] = q(rng.gen_range(-1..=1));
                }
            }
            a
        };
        let s = random_isometry(&mut rng, &sp);
        if s.mul(&sp.gram).mul(&s.transpose()) != sp.gram {
            return Err(format!("k={k} n={n}: generated matrix is not an isometry"));
        }
        let moved = random_invertible(&mut rng, k).mul(&a).mul(&s);
        let (before, after) = (classify(&a, &sp).unwrap(), classify(&moved, &sp).unwrap());
        if before != after {
            return Err(format!("k={k} n={n} skew={skew}: {before:?} became {after:?}"));
        }
    }
    Ok(())
}
