use std::collections::{BTreeMap, HashMap, VecDeque};

use super::cartan::CartanType;
use super::chevalley::ChevalleyBasis;
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix};

/// Sparse square integer matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    rows: Vec<BTreeMap<usize, i64>>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![BTreeMap::new(); dim] }
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.add(i, i, *v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r].get(&c).copied().unwrap_or(0)
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.rows[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.rows[r].remove(&c);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, *v)))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for (&k, &a) in row {
                for (&j, &b) in &other.rows[k] {
                    out.add(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: i64) -> IntMatrix {
        let mut out = Self::zeros(self.dim);
        for (r, c, v) in self.entries() {
            out.add(r, c, v * s);
        }
        out
    }

    pub fn plus(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add(r, c, v);
        }
        out
    }

    pub fn commutator(&self, other: &IntMatrix) -> IntMatrix {
        self.mul(other).plus(&other.mul(self).scaled(-1))
    }

    /// Exact division of every entry; `None` if some entry is not divisible.
    pub fn div_exact(&self, d: i64) -> Option<IntMatrix> {
        let mut out = Self::zeros(self.dim);
        for (r, c, v) in self.entries() {
            if v % d != 0 {
                return None;
            }
            out.add(r, c, v / d);
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = q(v);
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_qmatrix().rank()
    }
}

/// A minuscule representation on its weight basis. `action[k]` is the matrix
/// of the root vector with index `k`; `cartan[i]` that of the `i`-th simple coroot.
#[derive(Debug, Clone)]
pub struct Representation {
    pub kind: CartanType,
    pub highest_weight: usize,
    pub dim: usize,
    pub weights: Vec<Vec<i64>>,
    pub action: Vec<IntMatrix>,
    pub cartan: Vec<IntMatrix>,
}

pub fn build_small_rep(kind: CartanType, fundamental_index: usize) -> Result<Representation> {
    Representation::minuscule(&ChevalleyBasis::for_type(kind), fundamental_index)
}

impl Representation {
    /// Builds the representation with highest weight the `k`-th fundamental
    /// weight (one-based), provided it is minuscule.
    pub fn minuscule(cb: &ChevalleyBasis, k: usize) -> Result<Representation> {
        let sys = cb.system();
        let kind = sys.kind();
        let n = sys.rank();
        let unsupported = || Error::Unsupported(format!("{kind} fundamental weight {k} is not minuscule"));
        if k == 0 || k > n {
            return Err(unsupported());
        }
        let cartan = sys.cartan();
        let mut top = vec![0i64; n];
        top[k - 1] = 1;
        let mut weights = vec![top.clone()];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(top.clone(), 0)]);
        let mut queue = VecDeque::from([top]);
        while let Some(mu) = queue.pop_front() {
            for i in 0..n {
                if mu[i] > 1 || mu[i] < -1 {
                    return Err(unsupported());
                }
                if mu[i] == 1 {
                    let lower: Vec<i64> = (0..n).map(|j| mu[j] - cartan[j][i]).collect();
                    if !index.contains_key(&lower) {
                        index.insert(lower.clone(), weights.len());
                        weights.push(lower.clone());
                        queue.push_back(lower);
                    }
                }
            }
        }
        let dim = weights.len();
        // minuscule iff every root pairs with every weight in {-1, 0, 1}
        for mu in &weights {
            for r in 0..sys.num_positive() {
                let c = sys.coroot(r);
                let v: i64 = (0..n).map(|i| c[i] * mu[i]).sum();
                if v.abs() > 1 {
                    return Err(unsupported());
                }
            }
        }

        let raise = |i: usize, sign: i64| {
            let mut m = IntMatrix::zeros(dim);
            for (src, mu) in weights.iter().enumerate() {
                if mu[i] == -sign {
                    let to: Vec<i64> = (0..n).map(|j| mu[j] + sign * cartan[j][i]).collect();
                    m.add(index[&to], src, 1);
                }
            }
            m
        };
        let np = sys.num_positive();
        let mut action: Vec<Option<IntMatrix>> = vec![None; 2 * np];
        for i in 0..n {
            action[sys.simple(i)] = Some(raise(i, 1));
            action[sys.negative(sys.simple(i))] = Some(raise(i, -1));
        }
        for xi in 0..np {
            if action[xi].is_some() {
                continue;
            }
            let (i, beta) = (0..n)
                .find_map(|i| {
                    let mut c = sys.root(xi).coeffs().to_vec();
                    c[i] -= 1;
                    sys.index_of(&c).filter(|&b| sys.is_positive(b)).map(|b| (i, b))
                })
                .expect("non-simple positive root has a simple predecessor");
            let ai = sys.simple(i);
            for (a, b) in [(ai, beta), (sys.negative(ai), sys.negative(beta))] {
                let target = cb.sum(a, b).expect("root sum");
                let m = action[a].as_ref().unwrap().commutator(action[b].as_ref().unwrap());
                let m = m.div_exact(cb.n(a, b)).expect("exact division by structure constant");
                action[target] = Some(m);
            }
        }
        let action = action.into_iter().map(|m| m.expect("all roots assigned")).collect();
        let cartan_mats =
            (0..n).map(|i| IntMatrix::diagonal(&weights.iter().map(|mu| mu[i]).collect::<Vec<_>>())).collect();
        Ok(Representation { kind, highest_weight: k, dim, weights, action, cartan: cartan_mats })
    }

    /// Matrix of a Cartan element given over the simple coroots.
    pub fn cartan_matrix(&self, h: &[i64]) -> IntMatrix {
        let vals: Vec<i64> =
            self.weights.iter().map(|mu| mu.iter().zip(h).map(|(a, b)| a * b).sum()).collect();
        IntMatrix::diagonal(&vals)
    }

    /// Checks `[rho X_a, rho X_b]` against the bracket for every pair of root
    /// vectors, and the Cartan action on every root vector.
    pub fn check_relations(&self, cb: &ChevalleyBasis) -> std::result::Result<(), String> {
        let sys = cb.system();
        let r = sys.num_roots();
        for a in 0..r {
            for b in 0..r {
                let lhs = self.action[a].commutator(&self.action[b]);
                let rhs = if b == sys.negative(a) {
                    self.cartan_matrix(&sys.coroot(a))
                } else if let Some(s) = cb.sum(a, b) {
                    self.action[s].scaled(cb.n(a, b))
                } else {
                    IntMatrix::zeros(self.dim)
                };
                if lhs != rhs {
                    return Err(format!("relation fails for roots {} and {}", sys.label(a), sys.label(b)));
                }
            }
            for i in 0..sys.rank() {
                let lhs = self.cartan[i].commutator(&self.action[a]);
                if lhs != self.action[a].scaled(sys.pairing(a, i)) {
                    return Err(format!("Cartan action fails on {}", sys.label(a)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        let dim = |t: &str, k: usize| build_small_rep(t.parse().unwrap(), k).map(|r| r.dim);
        assert_eq!(dim("E6", 1), Ok(27));
        assert_eq!(dim("E7", 7), Ok(56));
        assert_eq!(dim("D5", 1), Ok(10));
        assert_eq!(dim("D5", 5), Ok(16));
        assert_eq!(dim("A1", 1), Ok(2));
        assert!(dim("E8", 8).is_err());
        assert!(dim("B3", 1).is_err());
    }

    #[test]
    fn sl2_standard() {
        let rep = build_small_rep("A1".parse().unwrap(), 1).unwrap();
        assert_eq!(rep.action[0].get(0, 1), 1);
        assert_eq!(rep.action[1].get(1, 0), 1);
    }
}
