//! Exact computations for the graded pieces of maximal parabolic nilradicals
//! ("internal Chevalley modules") of the simple Lie algebras.
//!
//! Everything is done over the rationals: root systems and Chevalley
//! structure constants, Levi gradings, orbit dimensions, sl2-triples and
//! weighted Dynkin diagrams, plus an embedded set of orbit tables with a
//! harness that recomputes every entry.

pub mod classical_orbits;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod orbit_geometry;
pub mod parabolic;
pub mod tables;

pub use error::{Error, Result};
pub use liealg::{
    AlgebraElement, CartanType, ChevalleyBasis, Family, Representation, Root, RootSystem,
};
pub use linalg::Q;
