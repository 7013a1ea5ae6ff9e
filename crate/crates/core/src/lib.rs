//! Homogeneous finite-dimensional permutation structures at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: finite posets and lattices, distributivity, chain covers and
//!   the order-count bounds derived from them;
//! - [`ultrametric`]: lattice-valued ultrametric spaces, their equivalent
//!   systems of equivalence relations, and canonical amalgamation;
//! - [`sqorder`]: subquotient orders and the structures they decorate;
//! - [`generic`]: finite approximations of the generic structures, with
//!   extension-property and homogeneity checks;
//! - [`permstruct`]: tuples of linear orders, encoding and decoding;
//! - [`io`]: the plain-text file formats.

// Dense tables are indexed in lock-step; explicit index loops read better.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod generic;
pub mod io;
pub mod lattice;
pub mod permstruct;
pub mod sqorder;
pub mod ultrametric;

pub use error::{Error, Result};
pub use lattice::{Elem, FiniteLattice, FinitePoset};
pub use permstruct::PermStructure;
pub use sqorder::{OrderedLambdaStructure, SubquotientOrder};
pub use ultrametric::{LambdaSpace, PointId};

/// Seeded generator used for every random choice in the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's generator from a seed.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
