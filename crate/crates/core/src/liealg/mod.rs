//! Root systems, Chevalley structure constants, brackets and minuscule
//! representations.

mod cartan;
pub mod chain;
mod chevalley;
pub mod rep;
mod roots;

pub use cartan::{CartanType, Family};
pub use chain::{verify_chain_lemma, ChainLemmaReport};
pub use chevalley::{structure_constants, AlgebraElement, ChevalleyBasis};
pub use rep::{build_small_rep, IntMatrix, Representation};
pub use roots::{build_root_system, Root, RootSystem};
