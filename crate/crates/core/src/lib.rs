//! Finite-scale workbench for the classification of structures: back-and-forth
//! equivalence, Scott ranks and sentences, duplicate-free enumeration of
//! isomorphism types, enumeration-operator embeddings between classes, tree
//! ranks with Kleene–Brouwer linearization, and Ulm invariants of finite
//! Abelian p-groups.

pub mod logic;
pub mod backforth;
pub mod trees;
pub mod pgroups;
pub mod operators;
pub mod cli;
