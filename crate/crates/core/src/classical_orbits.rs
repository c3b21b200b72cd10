//! Orbits of classical Levi actions on matrices, classified by Witt's theorem.
//!
//! A `k x N` matrix is read as `k` row vectors in an `N`-dimensional bilinear
//! space with Gram matrix `J`; its invariants are `rank A` and `rank A J A^t`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{AlgebraElement, CartanType, ChevalleyBasis, Family, RootSystem};
use crate::linalg::{q, QMatrix, Q};
use crate::orbit_geometry::orbit_dimension;
use crate::parabolic::grade_nilradical;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Skew,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilinearSpace {
    pub dim: usize,
    pub symmetry: Symmetry,
    pub gram: QMatrix,
}

impl BilinearSpace {
    pub fn new(gram: QMatrix, symmetry: Symmetry) -> Result<Self> {
        if gram.rows != gram.cols {
            return Err(Error::Dimension(format!("Gram matrix is {}x{}", gram.rows, gram.cols)));
        }
        let ok = match symmetry {
            Symmetry::Symmetric => gram.is_symmetric(),
            Symmetry::Skew => gram.is_skew(),
            Symmetry::Zero => gram.is_zero(),
        };
        if !ok {
            return Err(Error::Unsupported(format!("Gram matrix is not {symmetry:?}")));
        }
        Ok(Self { dim: gram.rows, symmetry, gram })
    }

    /// Basis `e_1..e_q, f_1..f_q` with `<e_i, f_i> = 1`, followed by a unit
    /// vector `w_0` when `dim` is odd.
    pub fn split_symmetric(dim: usize) -> Self {
        let h = dim / 2;
        let mut gram = QMatrix::zeros(dim, dim);
        for i in 0..h {
            gram[(i, h + i)] = Q::one();
            gram[(h + i, i)] = Q::one();
        }
        if dim % 2 == 1 {
            gram[(dim - 1, dim - 1)] = Q::one();
        }
        Self { dim, symmetry: Symmetry::Symmetric, gram }
    }

    pub fn split_skew(dim: usize) -> Result<Self> {
        if dim % 2 == 1 {
            return Err(Error::Unsupported(format!("no nondegenerate skew form in odd dimension {dim}")));
        }
        let h = dim / 2;
        let mut gram = QMatrix::zeros(dim, dim);
        for i in 0..h {
            gram[(i, h + i)] = Q::one();
            gram[(h + i, i)] = q(-1);
        }
        Ok(Self { dim, symmetry: Symmetry::Skew, gram })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self { dim, symmetry: Symmetry::Symmetric, gram: QMatrix::identity(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, symmetry: Symmetry::Zero, gram: QMatrix::zeros(dim, dim) }
    }

    /// Number of hyperbolic pairs in the split basis.
    pub fn witt_index(&self) -> usize {
        self.dim / 2
    }

    fn is_split(&self) -> bool {
        match self.symmetry {
            Symmetry::Symmetric => *self == Self::split_symmetric(self.dim),
            Symmetry::Skew => Self::split_skew(self.dim).is_ok_and(|s| s == *self),
            Symmetry::Zero => false,
        }
    }
}

/// Which of the two families of maximal isotropic subspaces (even symmetric
/// case) the row space belongs to, relative to `span(e_1..e_q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalOrbit {
    pub rank_a: usize,
    pub witt_rank: usize,
    pub split_tag: Option<SplitTag>,
    pub representative: QMatrix,
}

impl ClassicalOrbit {
    pub fn key(&self) -> (usize, usize, Option<SplitTag>) {
        (self.rank_a, self.witt_rank, self.split_tag)
    }
}

pub fn witt_invariants(a: &QMatrix, space: &BilinearSpace) -> Result<(usize, usize)> {
    if a.cols != space.dim {
        return Err(Error::Dimension(format!("matrix has {} columns, space has dimension {}", a.cols, space.dim)));
    }
    Ok((a.rank(), a.mul(&space.gram).mul(&a.transpose()).rank()))
}

/// Full invariant, including the family of a maximal isotropic row space in
/// the even split symmetric case.
pub fn classify(a: &QMatrix, space: &BilinearSpace) -> Result<(usize, usize, Option<SplitTag>)> {
    let (r, w) = witt_invariants(a, space)?;
    let q = space.witt_index();
    let tag = (space.symmetry == Symmetry::Symmetric && space.dim.is_multiple_of(2) && space.is_split() && r == q && r > 0 && w == 0)
        .then(|| {
            let mut stacked = QMatrix::zeros(a.rows + q, space.dim);
            for i in 0..a.rows {
                for j in 0..space.dim {
                    stacked[(i, j)] = a[(i, j)].clone();
                }
            }
            for i in 0..q {
                stacked[(a.rows + i, i)] = Q::one();
            }
            let meet = r + q - stacked.rank();
            if (q - meet).is_multiple_of(2) {
                SplitTag::Plus
            } else {
                SplitTag::Minus
            }
        });
    Ok((r, w, tag))
}

fn orbit(rep: QMatrix, space: &BilinearSpace, tag: Option<SplitTag>) -> ClassicalOrbit {
    let (rank_a, witt_rank) = witt_invariants(&rep, space).expect("representative fits its space");
    ClassicalOrbit { rank_a, witt_rank, split_tag: tag, representative: rep }
}

pub fn enumerate_tensor_gl(n1: usize, n2: usize) -> Vec<ClassicalOrbit> {
    let space = BilinearSpace::zero(n2);
    (0..=n1.min(n2))
        .map(|r| {
            let mut a = QMatrix::zeros(n1, n2);
            for i in 0..r {
                a[(i, i)] = Q::one();
            }
            orbit(a, &space, None)
        })
        .collect()
}

pub fn enumerate_bilinear_tensor(k: usize, space: &BilinearSpace) -> Result<Vec<ClassicalOrbit>> {
    if k == 0 || !space.is_split() {
        return Err(Error::Unsupported("expected k >= 1 and a split nondegenerate form".into()));
    }
    let n = space.dim;
    let h = space.witt_index();
    let skew = space.symmetry == Symmetry::Skew;
    let odd = n % 2 == 1;
    let mut out = Vec::new();
    for r in 0..=k.min(n) {
        for w in 0..=r {
            if 2 * r > n + w || (skew && w % 2 == 1) {
                continue;
            }
            let t = r - w;
            let mut a = QMatrix::zeros(k, n);
            for i in 0..t {
                a[(i, i)] = Q::one();
            }
            for j in 0..w / 2 {
                a[(t + 2 * j, t + j)] = Q::one();
                a[(t + 2 * j + 1, h + t + j)] = Q::one();
            }
            if w % 2 == 1 {
                let row = r - 1;
                if odd {
                    a[(row, n - 1)] = Q::one();
                } else {
                    let m = t + w / 2;
                    a[(row, m)] = Q::one();
                    a[(row, h + m)] = Q::one();
                }
            }
            let split = !skew && !odd && r == h && w == 0 && r > 0;
            if split {
                let mut b = a.clone();
                b[(r - 1, r - 1)] = q(0);
                b[(r - 1, h + r - 1)] = Q::one();
                out.push(orbit(a, space, Some(SplitTag::Plus)));
                out.push(orbit(b, space, Some(SplitTag::Minus)));
            } else {
                out.push(orbit(a, space, None));
            }
        }
    }
    Ok(out)
}

/// Orbits of `GL(n)` on symmetric `n x n` matrices: one per rank.
pub fn enumerate_symmetric_square(n: usize) -> Vec<ClassicalOrbit> {
    let space = BilinearSpace::euclidean(n);
    (0..=n)
        .map(|r| {
            let mut a = QMatrix::zeros(n, n);
            for i in 0..r {
                a[(i, i)] = Q::one();
            }
            orbit(a, &space, None)
        })
        .collect()
}

/// Orbits of `GL(n)` on skew `n x n` matrices: one per even rank, with
/// antidiagonal blocks `A[i][n-1-i] = 1 = -A[n-1-i][i]` for `i < p`.
pub fn enumerate_exterior_square(n: usize) -> Vec<ClassicalOrbit> {
    let space = BilinearSpace::euclidean(n);
    (0..=n / 2)
        .map(|p| {
            let mut a = QMatrix::zeros(n, n);
            for i in 0..p {
                a[(i, n - 1 - i)] = Q::one();
                a[(n - 1 - i, i)] = q(-1);
            }
            orbit(a, &space, None)
        })
        .collect()
}

/// Orbits admitted by reading the row bound literally as `2s + p <= k`, with
/// `s = rank_a - witt_rank` isotropic rows and `p = witt_rank`, that differ from
/// the orbits that actually occur.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintDiscrepancy {
    pub k: usize,
    pub space_dim: usize,
    /// `(s, p)` pairs that exist but violate `2s + p <= k`.
    pub excluded_but_realized: Vec<(usize, usize)>,
}

pub fn literal_constraint_discrepancy(k: usize, space: &BilinearSpace) -> Result<Option<ConstraintDiscrepancy>> {
    let orbits = enumerate_bilinear_tensor(k, space)?;
    let mut excluded: Vec<(usize, usize)> = orbits
        .iter()
        .map(|o| (o.rank_a - o.witt_rank, o.witt_rank))
        .filter(|(s, p)| 2 * s + p > k)
        .collect();
    excluded.dedup();
    Ok((!excluded.is_empty()).then_some(ConstraintDiscrepancy { k, space_dim: space.dim, excluded_but_realized: excluded }))
}

/// A classical internal module, identified with matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalModule {
    Tensor { n1: usize, n2: usize },
    Bilinear { k: usize, space: BilinearSpace },
    SymmetricSquare(usize),
    ExteriorSquare(usize),
}

impl fmt::Display for ClassicalModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tensor { n1, n2 } => write!(f, "tensor {n1}x{n2}"),
            Self::Bilinear { k, space } => {
                let kind = if space.symmetry == Symmetry::Skew { "skew" } else { "symmetric" };
                write!(f, "bilinear k={k} {kind} dim {}", space.dim)
            }
            Self::SymmetricSquare(n) => write!(f, "sym2 n={n}"),
            Self::ExteriorSquare(n) => write!(f, "ext2 n={n}"),
        }
    }
}

impl ClassicalModule {
    pub fn enumerate(&self) -> Result<Vec<ClassicalOrbit>> {
        Ok(match self {
            Self::Tensor { n1, n2 } => enumerate_tensor_gl(*n1, *n2),
            Self::Bilinear { k, space } => enumerate_bilinear_tensor(*k, space)?,
            Self::SymmetricSquare(n) => enumerate_symmetric_square(*n),
            Self::ExteriorSquare(n) => enumerate_exterior_square(*n),
        })
    }

    /// Recognises the first graded piece of a maximal parabolic of a classical group.
    pub fn from_realization(kind: CartanType, node: usize) -> Option<Self> {
        let n = kind.rank();
        if node == 0 || node > n {
            return None;
        }
        match kind.family() {
            Family::A => Some(Self::Tensor { n1: node, n2: n + 1 - node }),
            Family::B if node < n => Some(Self::Bilinear { k: node, space: BilinearSpace::split_symmetric(2 * (n - node) + 1) }),
            Family::C if node < n => BilinearSpace::split_skew(2 * (n - node)).ok().map(|space| Self::Bilinear { k: node, space }),
            Family::C => Some(Self::SymmetricSquare(n)),
            Family::D if node + 2 <= n => Some(Self::Bilinear { k: node, space: BilinearSpace::split_symmetric(2 * (n - node)) }),
            Family::D => Some(Self::ExteriorSquare(n)),
            _ => None,
        }
    }

    /// Classical group and node whose first graded piece is this module.
    pub fn realization(&self) -> Result<(CartanType, usize)> {
        let (family, rank, node) = match self {
            Self::Tensor { n1, n2 } => (Family::A, n1 + n2 - 1, *n1),
            Self::Bilinear { k, space } => {
                let q = space.witt_index();
                match (space.symmetry, space.dim % 2) {
                    (Symmetry::Symmetric, 1) => (Family::B, k + q, *k),
                    (Symmetry::Skew, _) => (Family::C, k + q, *k),
                    (Symmetry::Symmetric, _) if q >= 2 => (Family::D, k + q, *k),
                    _ => return Err(Error::Unsupported(format!("no parabolic realizes {self}"))),
                }
            }
            Self::SymmetricSquare(n) => (Family::C, *n, *n),
            Self::ExteriorSquare(n) => (Family::D, *n, *n),
        };
        Ok((CartanType::new(family, rank)?, node))
    }

    /// The representative as a sum of root vectors in the realizing algebra.
    /// Supports of all emitted representatives are linearly independent, so
    /// the torus makes the coefficients irrelevant.
    pub fn embed(&self, orbit: &ClassicalOrbit, system: &RootSystem) -> Result<AlgebraElement> {
        let (kind, _) = self.realization()?;
        if system.kind() != kind {
            return Err(Error::InvalidType(format!("{self} lives in {kind}, not {}", system.kind())));
        }
        let eps = EpsilonCoordinates::new(system);
        let a = &orbit.representative;
        let mut x = AlgebraElement::zero(system.rank());
        let mut put = |v: Vec<i64>, c: &Q| -> Result<()> {
            let idx = eps.index(&v).ok_or_else(|| Error::Unsupported(format!("no root with coordinates {v:?}")))?;
            x.add_root(idx, c.clone());
            Ok(())
        };
        let unit = |dim: usize, terms: &[(usize, i64)]| {
            let mut v = vec![0i64; dim];
            for &(i, c) in terms {
                v[i] += c;
            }
            v
        };
        let d = eps.dim;
        for i in 0..a.rows {
            for j in 0..a.cols {
                let c = &a[(i, j)];
                if c.is_zero() {
                    continue;
                }
                match self {
                    Self::Tensor { n1, .. } => put(unit(d, &[(i, 1), (n1 + j, -1)]), c)?,
                    Self::SymmetricSquare(_) if i <= j => put(unit(d, &[(i, 1), (j, 1)]), c)?,
                    Self::ExteriorSquare(_) if i < j => put(unit(d, &[(i, 1), (j, 1)]), c)?,
                    Self::Bilinear { k, space } => {
                        let h = space.witt_index();
                        let v = if j < h {
                            unit(d, &[(i, 1), (k + j, -1)])
                        } else if j < 2 * h {
                            unit(d, &[(i, 1), (k + j - h, 1)])
                        } else {
                            unit(d, &[(i, 1)])
                        };
                        put(v, c)?;
                    }
                    _ => {}
                }
            }
        }
        Ok(x)
    }

    /// Orbit dimensions of the enumerated representatives, computed in the
    /// realizing parabolic.
    pub fn orbit_dimensions(&self) -> Result<Vec<(ClassicalOrbit, usize)>> {
        let (kind, node) = self.realization()?;
        let basis = ChevalleyBasis::for_type(kind);
        let grading = grade_nilradical(basis.system(), &[node])?;
        self.enumerate()?
            .into_iter()
            .map(|o| {
                let x = self.embed(&o, basis.system())?;
                let d = orbit_dimension(&basis, &grading, 1, &x)?;
                Ok((o, d))
            })
            .collect()
    }
}

/// Positive roots of a classical system in orthonormal coordinates.
struct EpsilonCoordinates {
    dim: usize,
    lookup: HashMap<Vec<i64>, usize>,
}

impl EpsilonCoordinates {
    fn new(system: &RootSystem) -> Self {
        let n = system.rank();
        let kind = system.kind();
        let dim = if kind.family() == Family::A { n + 1 } else { n };
        let simple: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; dim];
                match (kind.family(), i + 1 == n) {
                    (Family::B, true) => v[i] = 1,
                    (Family::C, true) => v[i] = 2,
                    (Family::D, true) => {
                        v[i - 1] = 1;
                        v[i] = 1;
                    }
                    _ => {
                        v[i] = 1;
                        v[i + 1] = -1;
                    }
                }
                v
            })
            .collect();
        let lookup = (0..system.num_positive())
            .map(|r| {
                let mut v = vec![0i64; dim];
                for (c, s) in system.root(r).coeffs().iter().zip(&simple) {
                    for (x, y) in v.iter_mut().zip(s) {
                        *x += c * y;
                    }
                }
                (v, r)
            })
            .collect();
        Self { dim, lookup }
    }

    fn index(&self, v: &[i64]) -> Option<usize> {
        self.lookup.get(v).copied()
    }
}
