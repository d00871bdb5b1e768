//! Generating hypergraphs of small finite groups.
//!
//! Groups are given as permutation groups and stored as explicit element
//! tables. On top of that the crate computes the subgroup lattice and its
//! Möbius function, the hypergraphs of minimal generating sets, the
//! probability of generating with random tuples, and the exchange
//! properties of generating sets.

pub mod bitset;
pub mod budget;
pub mod catalog;
pub mod corpus;
pub mod dirichlet;
pub mod error;
pub mod field;
pub mod generation;
pub mod group;
pub mod hypergraph;
pub mod lattice;
pub mod mgse;
pub mod perm;
pub mod quotient;
pub mod semidirect;
pub mod structure;
pub mod union_find;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupConfig, Subgroup};
pub use perm::Permutation;
