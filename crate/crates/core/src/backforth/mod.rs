//! Back-and-forth relations, Scott ranks, isomorphism oracles, Scott sentences
//! and duplicate-free enumeration of isomorphism types, all for finite structures.
//!
//! Finite structures have finite Scott rank, so every ordinal here is a plain
//! `usize`. Tuple ranks are computed for tuples of length at most the size of
//! the structure, the empty tuple included; longer tuples repeat entries and
//! carry no extra information.

mod equiv;
mod friedberg;
mod iso;
mod scott;

pub use equiv::{equiv_alpha, BackForth};
pub use friedberg::friedberg_enumerate;
pub use iso::{automorphic, automorphisms, iso, orbits};
pub use scott::{check_nadel_finite, scott_rank, scott_sentence, tuple_rank, ScottReport};

use thiserror::Error;

use crate::logic::{Elem, FinStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackForthError {
    #[error("tuple lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("element {0} is outside the universe")]
    OutOfRange(Elem),
}

/// Which structure of a compared pair a tuple lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A query `left ≡^level right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BFKey {
    pub left: (Side, Vec<Elem>),
    pub right: (Side, Vec<Elem>),
    pub level: usize,
}

impl BFKey {
    pub fn new(left: (Side, Vec<Elem>), right: (Side, Vec<Elem>), level: usize) -> Self {
        BFKey { left, right, level }
    }
}

/// A bijection `bijection[x]` from the left universe onto the right one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub bijection: Vec<Elem>,
}

impl IsoWitness {
    /// Checks that the map is a bijection preserving and reflecting every table.
    pub fn verify(&self, a: &FinStructure, b: &FinStructure) -> bool {
        let f = &self.bijection;
        if f.len() != a.size() || a.size() != b.size() || a.signature() != b.signature() {
            return false;
        }
        let mut seen = vec![false; b.size()];
        for &y in f {
            if y >= b.size() || std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        (0..a.signature().len()).all(|r| {
            a.table(r).len() == b.table(r).len()
                && a.table(r).iter().all(|t| {
                    let img: Vec<Elem> = t.iter().map(|&x| f[x]).collect();
                    b.holds(r, &img)
                })
        })
    }
}

impl std::fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, y) in self.bijection.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}->{y}")?;
        }
        Ok(())
    }
}
