use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::cartan::CartanType;
use super::roots::RootSystem;
use crate::error::{Error, Result};
use crate::linalg::{q, Q};

/// Structure constants `N_{a,b}` of a Chevalley basis, with signs fixed by
/// making every extraspecial pair positive.
#[derive(Debug, Clone)]
pub struct ChevalleyBasis {
    system: RootSystem,
    // row-major over root indices; 0 when a + b is not a root
    n: Vec<i64>,
    sums: Vec<Option<usize>>,
}

pub fn structure_constants(system: RootSystem) -> ChevalleyBasis {
    ChevalleyBasis::new(system)
}

impl ChevalleyBasis {
    pub fn new(system: RootSystem) -> Self {
        let r = system.num_roots();
        let np = system.num_positive();
        let mut sums = vec![None; r * r];
        for a in 0..r {
            for b in 0..r {
                sums[a * r + b] = system.sum_index(a, b);
            }
        }

        let mut pos: HashMap<(usize, usize), i64> = HashMap::new();
        for xi in 0..np {
            if system.height(xi) == 1 {
                continue;
            }
            let special: Vec<(usize, usize)> = (0..xi)
                .filter_map(|a| {
                    let b = system.index_of(&diff(&system, xi, a))?;
                    (system.is_positive(b) && a < b).then_some((a, b))
                })
                .collect();
            let (a, b) = special[0];
            let nab = system.string_down(a, b) + 1;
            pos.insert((a, b), nab);
            pos.insert((b, a), -nab);
            for &(g, d) in &special[1..] {
                let hn = |k: usize| Rational64::from_integer(system.half_norm(k));
                let mut total = Rational64::zero();
                if let Some(bg) = system.index_of(&diff(&system, b, g)) {
                    let t = mixed(&system, &pos, b, system.negative(g))
                        * mixed(&system, &pos, a, system.negative(d));
                    total += Rational64::from_integer(t) / hn(bg);
                }
                if let Some(ag) = system.index_of(&diff(&system, a, g)) {
                    let t = mixed(&system, &pos, system.negative(g), a)
                        * mixed(&system, &pos, b, system.negative(d));
                    total += Rational64::from_integer(t) / hn(ag);
                }
                let val = total * hn(xi) / Rational64::from_integer(nab);
                assert!(val.is_integer(), "non-integral structure constant");
                let val = val.to_integer();
                pos.insert((g, d), val);
                pos.insert((d, g), -val);
            }
        }

        let mut n = vec![0i64; r * r];
        for a in 0..r {
            for b in 0..r {
                if sums[a * r + b].is_some() {
                    n[a * r + b] = mixed(&system, &pos, a, b);
                }
            }
        }
        Self { system, n, sums }
    }

    pub fn for_type(kind: CartanType) -> Self {
        Self::new(RootSystem::new(kind))
    }

    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    /// `N_{a,b}`; zero when `a + b` is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.n[a * self.system.num_roots() + b]
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sums[a * self.system.num_roots() + b]
    }

    /// `[X_a, X_b]` as an element.
    pub fn bracket_roots(&self, a: usize, b: usize) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.system.rank());
        if b == self.system.negative(a) {
            out.cartan = self.system.coroot(a).into_iter().map(q).collect();
        } else if let Some(s) = self.sum(a, b) {
            out.roots.insert(s, q(self.n(a, b)));
        }
        out
    }

    pub fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.cartan.len() != self.system.rank() {
            return Err(Error::Dimension(format!(
                "Cartan part has length {}, expected {}",
                x.cartan.len(),
                self.system.rank()
            )));
        }
        if let Some((&k, _)) = x.roots.iter().next_back() {
            if k >= self.system.num_roots() {
                return Err(Error::Dimension(format!("root index {k} out of range")));
            }
        }
        Ok(())
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let sys = &self.system;
        let rank = sys.rank();
        let mut out = AlgebraElement::zero(rank);
        let h_value = |h: &[Q], k: usize| -> Q {
            (0..rank).fold(Q::zero(), |acc, i| acc + &h[i] * q(sys.pairing(k, i)))
        };
        if x.cartan.iter().any(|c| !c.is_zero()) {
            for (&k, c) in &y.roots {
                out.add_root(k, h_value(&x.cartan, k) * c);
            }
        }
        if y.cartan.iter().any(|c| !c.is_zero()) {
            for (&k, c) in &x.roots {
                out.add_root(k, -(h_value(&y.cartan, k) * c));
            }
        }
        for (&a, ca) in &x.roots {
            for (&b, cb) in &y.roots {
                if b == sys.negative(a) {
                    let coef = ca * cb;
                    for (i, v) in sys.coroot(a).into_iter().enumerate() {
                        out.cartan[i] += &coef * q(v);
                    }
                } else if let Some(s) = self.sum(a, b) {
                    out.add_root(s, ca * cb * q(self.n(a, b)));
                }
            }
        }
        out
    }
}

fn diff(system: &RootSystem, a: usize, b: usize) -> Vec<i64> {
    system.root(a).coeffs().iter().zip(system.root(b).coeffs()).map(|(x, y)| x - y).collect()
}

/// `N_{a,b}` for arbitrary signs, from the table of positive pairs, using
/// `N_{-a,-b} = -N_{a,b}` and the cyclic rule for `a + b + c = 0`.
fn mixed(system: &RootSystem, pos: &HashMap<(usize, usize), i64>, a: usize, b: usize) -> i64 {
    let s = system.sum_index(a, b).expect("mixed() needs a root sum");
    let (pa, pb) = (system.is_positive(a), system.is_positive(b));
    if pa && pb {
        return pos[&(a, b)];
    }
    if !pa && !pb {
        return -pos[&(system.negative(a), system.negative(b))];
    }
    let c = system.negative(s);
    let hn = |k: usize| system.half_norm(k);
    // N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b); pick the same-sign pair
    let (num, den) = if system.is_positive(s) == pa {
        // c has the sign of b
        (mixed(system, pos, b, c) * hn(c), hn(a))
    } else {
        (mixed(system, pos, c, a) * hn(c), hn(b))
    };
    assert_eq!(num % den, 0, "non-integral structure constant");
    num / den
}

/// An element of the Lie algebra: a Cartan part over the simple coroots and
/// root-vector coefficients keyed by root index.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub cartan: Vec<Q>,
    pub roots: BTreeMap<usize, Q>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.cartan.iter().map(ToString::to_string).collect();
        let r: Vec<String> = self.roots.iter().map(|(k, v)| format!("{v}*X[{k}]")).collect();
        write!(f, "H({}) + {}", h.join(","), r.join(" + "))
    }
}

impl AlgebraElement {
    pub fn zero(rank: usize) -> Self {
        Self { cartan: vec![Q::zero(); rank], roots: BTreeMap::new() }
    }

    pub fn root_vector(rank: usize, idx: usize) -> Self {
        let mut x = Self::zero(rank);
        x.roots.insert(idx, Q::one());
        x
    }

    pub fn cartan_element(h: Vec<Q>) -> Self {
        Self { cartan: h, roots: BTreeMap::new() }
    }

    /// Sum of root vectors named by labels joined with `+`; `0` is the zero element.
    pub fn from_labels(system: &RootSystem, labels: &str) -> Result<Self> {
        let mut x = Self::zero(system.rank());
        let trimmed = labels.trim();
        if trimmed == "0" || trimmed.is_empty() {
            return Ok(x);
        }
        for part in trimmed.split('+') {
            let k = system.label_index(part.trim())?;
            x.add_root(k, Q::one());
        }
        Ok(x)
    }

    pub fn add_root(&mut self, idx: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.roots.entry(idx).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.roots.remove(&idx);
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (a, b) in out.cartan.iter_mut().zip(&other.cartan) {
            *a += b;
        }
        for (&k, v) in &other.roots {
            out.add_root(k, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> AlgebraElement {
        if c.is_zero() {
            return Self::zero(self.cartan.len());
        }
        Self {
            cartan: self.cartan.iter().map(|x| x * c).collect(),
            roots: self.roots.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.roots.is_empty() && self.cartan.iter().all(Zero::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        self.roots.keys().copied().collect()
    }

    pub fn is_cartan(&self) -> bool {
        self.roots.is_empty()
    }

    /// Basepoint-style label such as `0101+1110`, or `0` for the zero element.
    pub fn label(&self, system: &RootSystem) -> String {
        if self.roots.is_empty() {
            return "0".into();
        }
        self.roots
            .iter()
            .map(|(k, v)| {
                if v.is_one() {
                    system.label(*k)
                } else {
                    format!("{v}*{}", system.label(*k))
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}
