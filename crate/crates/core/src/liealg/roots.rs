use std::cmp::Reverse;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use super::cartan::CartanType;
use crate::error::{Error, Result};

/// A root written over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root {
    coeffs: Vec<i64>,
}

impl Root {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn negated(&self) -> Root {
        Root::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Concatenated coefficient digits, with a leading `-` for negative roots.
    pub fn label(&self) -> String {
        let digits: String = self.coeffs.iter().map(|c| c.abs().to_string()).collect();
        if self.is_positive() {
            digits
        } else {
            format!("-{digits}")
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Roots of a simple Lie algebra. Roots are addressed by index: positive
/// roots occupy `0..N` in height order, and `N + k` is the negative of root `k`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: CartanType,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    roots: Vec<Root>,
    index: HashMap<Vec<i64>, usize>,
    pairings: Vec<Vec<i64>>,
    half_norms: Vec<i64>,
}

pub fn build_root_system(kind: CartanType) -> RootSystem {
    RootSystem::new(kind)
}

impl RootSystem {
    pub fn new(kind: CartanType) -> Self {
        let cartan = kind.cartan_matrix();
        let n = kind.rank();
        let symmetrizer = symmetrizer(&cartan);
        let pair = |c: &[i64], i: usize| -> i64 { (0..n).map(|j| c[j] * cartan[i][j]).sum() };

        let mut found: HashSet<Vec<i64>> = HashSet::new();
        let mut layer: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        found.extend(layer.iter().cloned());
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    let mut p = 0;
                    let mut probe = beta.clone();
                    loop {
                        probe[i] -= 1;
                        if found.contains(&probe) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p - pair(beta, i) > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if found.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            layer = next;
        }

        let mut positive: Vec<Vec<i64>> = found.into_iter().collect();
        positive.sort_by_key(|c| (c.iter().sum::<i64>(), Reverse(c.clone())));
        let mut roots: Vec<Root> = positive.iter().cloned().map(Root::new).collect();
        roots.extend(positive.iter().map(|c| Root::new(c.iter().map(|x| -x).collect())));
        let index = roots.iter().enumerate().map(|(k, r)| (r.coeffs.clone(), k)).collect();
        let pairings = roots.iter().map(|r| (0..n).map(|i| pair(&r.coeffs, i)).collect()).collect();
        let half_norms = roots
            .iter()
            .map(|r| {
                let c = &r.coeffs;
                let s: i64 = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| c[i] * c[j] * symmetrizer[i] * cartan[i][j])
                    .sum();
                s / 2
            })
            .collect();
        Self { kind, cartan, symmetrizer, roots, index, pairings, half_norms }
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Integers `d_i` with `d_i * a_ij` symmetric; `d_i = (alpha_i, alpha_i) / 2`.
    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn dimension(&self) -> usize {
        self.rank() + self.num_roots()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.num_positive()]
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.num_positive()
    }

    pub fn negative(&self, idx: usize) -> usize {
        let n = self.num_positive();
        if idx < n {
            idx + n
        } else {
            idx - n
        }
    }

    /// Index of the `i`-th simple root (zero-based).
    pub fn simple(&self, i: usize) -> usize {
        i
    }

    pub fn highest_root(&self) -> &Root {
        &self.roots[self.highest_index()]
    }

    pub fn highest_index(&self) -> usize {
        self.num_positive() - 1
    }

    pub fn index_of(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    /// Index of `a + b` when it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> =
            self.roots[a].coeffs.iter().zip(&self.roots[b].coeffs).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    pub fn height(&self, idx: usize) -> i64 {
        self.roots[idx].height()
    }

    /// `<alpha, alpha_i^vee>` for root `idx`.
    pub fn pairing(&self, idx: usize, i: usize) -> i64 {
        self.pairings[idx][i]
    }

    /// `(alpha, alpha) / 2`, equal to 1 on short roots.
    pub fn half_norm(&self, idx: usize) -> i64 {
        self.half_norms[idx]
    }

    /// Coordinates of the coroot of `idx` over the simple coroots.
    pub fn coroot(&self, idx: usize) -> Vec<i64> {
        let d = self.half_norms[idx];
        self.roots[idx]
            .coeffs
            .iter()
            .zip(&self.symmetrizer)
            .map(|(c, di)| {
                debug_assert_eq!((c * di) % d, 0);
                c * di / d
            })
            .collect()
    }

    /// Value of root `idx` on a Cartan element given over the simple coroots.
    pub fn eval_on_coroots(&self, idx: usize, h: &[i64]) -> i64 {
        (0..self.rank()).map(|i| h[i] * self.pairings[idx][i]).sum()
    }

    /// Largest `p` with `beta - p*alpha` a root.
    pub fn string_down(&self, alpha: usize, beta: usize) -> i64 {
        let a = &self.roots[alpha].coeffs;
        let mut probe = self.roots[beta].coeffs.clone();
        let mut p = 0;
        loop {
            for (x, y) in probe.iter_mut().zip(a) {
                *x -= y;
            }
            if self.index.contains_key(&probe) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    pub fn parse_root_label(&self, label: &str) -> Result<Root> {
        self.label_index(label).map(|k| self.roots[k].clone())
    }

    pub fn root_label(&self, root: &Root) -> String {
        root.label()
    }

    /// Root index named by a digit label; a leading `-` names a negative root.
    pub fn label_index(&self, label: &str) -> Result<usize> {
        let bad = |reason: &str| Error::BadLabel {
            kind: self.kind.to_string(),
            label: label.to_string(),
            reason: reason.to_string(),
        };
        let (sign, digits) = match label.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, label),
        };
        if digits.len() != self.rank() {
            return Err(bad("wrong length"));
        }
        let coeffs = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| sign * d as i64))
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| bad("non-digit character"))?;
        self.index_of(&coeffs).ok_or_else(|| bad("not a root"))
    }

    pub fn label(&self, idx: usize) -> String {
        self.roots[idx].label()
    }
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    let n = cartan.len();
    let mut d: Vec<Option<Rational64>> = vec![None; n];
    d[0] = Some(Rational64::from_integer(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                let di = d[i].unwrap();
                d[j] = Some(di * Rational64::new(cartan[i][j], cartan[j][i]));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Rational64> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let lcm = d.iter().fold(1i64, |acc, x| lcm(acc, *x.denom()));
    let ints: Vec<i64> = d.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| gcd(acc, *x));
    ints.iter().map(|x| x / g).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}
