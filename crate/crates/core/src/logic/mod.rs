//! Finite relational structures identified with their atomic diagrams.
//!
//! A [`FinStructure`] has universe `{0, .., size-1}` and one table of argument
//! tuples per relation symbol. Input fact lists are read under the closed-world
//! convention: anything not listed is false.

mod formula;

pub use formula::{satisfies, Formula, Term};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Element of a finite universe.
pub type Elem = usize;

/// A natural naming an element in a fact; wide enough for encoded images.
pub type Name = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("duplicate relation name `{0}`")]
    DuplicateRelation(String),
    #[error("relation `{0}` has arity 0")]
    ZeroArity(String),
    #[error("unknown relation in fact {0}")]
    UnknownRelation(String),
    #[error("arity mismatch in fact {fact}: expected {expected} arguments")]
    ArityMismatch { fact: String, expected: usize },
    #[error("out-of-range element in fact {fact} (universe size {size})")]
    OutOfRange { fact: String, size: usize },
    #[error("element {elem} is not in a universe of size {size}")]
    NotASubset { elem: Elem, size: usize },
    #[error("unbound free variable `{0}`")]
    UnboundVariable(String),
    #[error("signature mismatch")]
    SignatureMismatch,
}

/// A relation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of relation symbols. The empty signature is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature {
    relations: Vec<Relation>,
}

impl Signature {
    pub fn new<S: Into<String>>(
        relations: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self, LogicError> {
        let mut out: Vec<Relation> = Vec::new();
        for (name, arity) in relations {
            let name = name.into();
            if arity == 0 {
                return Err(LogicError::ZeroArity(name));
            }
            if out.iter().any(|r| r.name == name) {
                return Err(LogicError::DuplicateRelation(name));
            }
            out.push(Relation { name, arity });
        }
        Ok(Signature { relations: out })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    /// `{E/2}`, the signature of (directed) graphs.
    pub fn graph() -> Self {
        Signature::new([("E", 2)]).unwrap()
    }

    /// `{</2}`, the signature of orders.
    pub fn order() -> Self {
        Signature::new([("<", 2)]).unwrap()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].arity
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", r.name, r.arity)?;
        }
        write!(f, "}}")
    }
}

/// A ground atomic sentence or its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicFact {
    pub relation: String,
    pub args: Vec<Name>,
    pub positive: bool,
}

impl AtomicFact {
    pub fn pos(relation: &str, args: impl IntoIterator<Item = Name>) -> Self {
        AtomicFact { relation: relation.to_string(), args: args.into_iter().collect(), positive: true }
    }

    pub fn neg(relation: &str, args: impl IntoIterator<Item = Name>) -> Self {
        AtomicFact { relation: relation.to_string(), args: args.into_iter().collect(), positive: false }
    }
}

impl fmt::Display for AtomicFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.relation)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// Dense membership table for one relation, indexed by the mixed-radix value
/// of the argument tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Table {
    tuples: BTreeSet<Vec<Elem>>,
    bits: Vec<u64>,
}

const DENSE_LIMIT: usize = 1 << 24;

impl Table {
    fn build(tuples: BTreeSet<Vec<Elem>>, size: usize, arity: usize) -> Self {
        let cells = size.checked_pow(arity as u32).filter(|&c| c <= DENSE_LIMIT);
        let bits = match cells {
            Some(cells) => {
                let mut bits = vec![0u64; cells.div_ceil(64)];
                for t in &tuples {
                    let i = tuple_index(t, size);
                    bits[i / 64] |= 1 << (i % 64);
                }
                bits
            }
            None => Vec::new(),
        };
        Table { tuples, bits }
    }

    #[inline]
    fn contains(&self, args: &[Elem], size: usize) -> bool {
        if self.bits.is_empty() && !self.tuples.is_empty() {
            return self.tuples.contains(args);
        }
        if self.tuples.is_empty() {
            return false;
        }
        let i = tuple_index(args, size);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }
}

#[inline]
fn tuple_index(args: &[Elem], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// A finite structure over `{0, .., size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinStructure {
    sig: Signature,
    size: usize,
    tables: Vec<Table>,
}

impl FinStructure {
    /// Builds a structure from per-relation tables, checking arities and ranges.
    pub fn from_tables(
        sig: Signature,
        size: usize,
        tables: Vec<BTreeSet<Vec<Elem>>>,
    ) -> Result<Self, LogicError> {
        assert_eq!(tables.len(), sig.len(), "one table per relation");
        for (rel, table) in sig.relations().iter().zip(&tables) {
            for t in table {
                let fact = || render_fact(&rel.name, t.iter().map(|&a| a as Name));
                if t.len() != rel.arity {
                    return Err(LogicError::ArityMismatch { fact: fact(), expected: rel.arity });
                }
                if t.iter().any(|&a| a >= size) {
                    return Err(LogicError::OutOfRange { fact: fact(), size });
                }
            }
        }
        let tables = sig
            .relations()
            .iter()
            .zip(tables)
            .map(|(r, t)| Table::build(t, size, r.arity))
            .collect();
        Ok(FinStructure { sig, size, tables })
    }

    pub fn empty(sig: Signature, size: usize) -> Self {
        let n = sig.len();
        FinStructure::from_tables(sig, size, vec![BTreeSet::new(); n]).unwrap()
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, rel: usize) -> &BTreeSet<Vec<Elem>> {
        &self.tables[rel].tuples
    }

    #[inline]
    pub fn holds(&self, rel: usize, args: &[Elem]) -> bool {
        self.tables[rel].contains(args, self.size)
    }

    /// Positive facts, relations in signature order and tuples in lexicographic order.
    pub fn positive_facts(&self) -> Vec<AtomicFact> {
        let mut out = Vec::new();
        for (rel, t) in self.sig.relations().iter().zip(&self.tables) {
            for args in &t.tuples {
                out.push(AtomicFact::pos(&rel.name, args.iter().map(|&a| a as Name)));
            }
        }
        out
    }

    /// Applies a bijection `perm` (old element -> new element).
    pub fn relabel(&self, perm: &[Elem]) -> FinStructure {
        assert_eq!(perm.len(), self.size);
        let tables = self
            .tables
            .iter()
            .map(|t| t.tuples.iter().map(|tup| tup.iter().map(|&a| perm[a]).collect()).collect())
            .collect();
        FinStructure::from_tables(self.sig.clone(), self.size, tables).unwrap()
    }

    /// The linear order `0 < 1 < .. < n-1` over `{</2}`.
    pub fn chain(n: usize) -> FinStructure {
        let table = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
        FinStructure::from_tables(Signature::order(), n, vec![table]).unwrap()
    }

    /// `{</2}` with an empty table.
    pub fn antichain(n: usize) -> FinStructure {
        FinStructure::empty(Signature::order(), n)
    }
}

pub(crate) fn render_fact(rel: &str, args: impl Iterator<Item = Name>) -> String {
    let mut s = rel.to_string();
    for a in args {
        s.push(' ');
        s.push_str(&a.to_string());
    }
    s
}

/// Validates a closed-world fact list into a structure. Negative facts in the
/// input are ignored except for arity/range checks.
pub fn validate_structure(
    sig: &Signature,
    size: usize,
    facts: &[AtomicFact],
) -> Result<FinStructure, LogicError> {
    let mut tables = vec![BTreeSet::new(); sig.len()];
    for f in facts {
        let rendered = f.to_string();
        let rel = sig
            .index_of(&f.relation)
            .ok_or_else(|| LogicError::UnknownRelation(rendered.clone()))?;
        if f.args.len() != sig.arity(rel) {
            return Err(LogicError::ArityMismatch { fact: rendered, expected: sig.arity(rel) });
        }
        if f.args.iter().any(|&a| a >= size as Name) {
            return Err(LogicError::OutOfRange { fact: rendered, size });
        }
        if f.positive {
            tables[rel].insert(f.args.iter().map(|&a| a as Elem).collect());
        }
    }
    FinStructure::from_tables(sig.clone(), size, tables)
}

/// Normalizes a structure presented on a sparse subset of the naturals.
/// Returns the structure on `{0, .., n-1}` and the sorted old names.
pub fn normalize_sparse(
    sig: &Signature,
    universe: &BTreeSet<Name>,
    facts: &[AtomicFact],
) -> Result<(FinStructure, Vec<Name>), LogicError> {
    let names: Vec<Name> = universe.iter().copied().collect();
    let index: BTreeMap<Name, Name> = names.iter().enumerate().map(|(i, &v)| (v, i as Name)).collect();
    let mut renamed = Vec::with_capacity(facts.len());
    for f in facts {
        let args = f
            .args
            .iter()
            .map(|a| {
                index.get(a).copied().ok_or_else(|| LogicError::OutOfRange {
                    fact: f.to_string(),
                    size: names.len(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        renamed.push(AtomicFact { relation: f.relation.clone(), args, positive: f.positive });
    }
    Ok((validate_structure(sig, names.len(), &renamed)?, names))
}

/// All `size^k` tuples of length `k` in lexicographic order.
pub fn all_tuples(size: usize, k: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = size.checked_pow(k as u32).expect("tuple count overflow");
    let total = if k == 0 { 1 } else { total };
    (0..total).map(move |mut i| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = i % size.max(1);
            i /= size.max(1);
        }
        t
    })
}

/// The complete atomic diagram in canonical order.
pub fn diagram(a: &FinStructure) -> Vec<AtomicFact> {
    let mut out = Vec::new();
    for (ri, rel) in a.sig.relations().iter().enumerate() {
        for t in all_tuples(a.size, rel.arity) {
            let positive = a.holds(ri, &t);
            out.push(AtomicFact {
                relation: rel.name.clone(),
                args: t.iter().map(|&x| x as Name).collect(),
                positive,
            });
        }
    }
    out
}

/// Induced substructure on `subset`, renumbered order-preservingly.
/// The returned map sends new names to old names.
pub fn substructure(
    a: &FinStructure,
    subset: &BTreeSet<Elem>,
) -> Result<(FinStructure, Vec<Elem>), LogicError> {
    if let Some(&bad) = subset.iter().find(|&&e| e >= a.size) {
        return Err(LogicError::NotASubset { elem: bad, size: a.size });
    }
    let old: Vec<Elem> = subset.iter().copied().collect();
    let mut new_of = vec![usize::MAX; a.size];
    for (i, &o) in old.iter().enumerate() {
        new_of[o] = i;
    }
    let tables = a
        .tables
        .iter()
        .map(|t| {
            t.tuples
                .iter()
                .filter(|tup| tup.iter().all(|&x| new_of[x] != usize::MAX))
                .map(|tup| tup.iter().map(|&x| new_of[x]).collect())
                .collect()
        })
        .collect();
    Ok((FinStructure::from_tables(a.sig.clone(), old.len(), tables)?, old))
}

/// Every structure on `{0, .., n-1}` exactly once. Relation tables are read
/// as one bit-vector over the canonical tuple list, counted in lexicographic
/// order (first tuple is the most significant bit).
pub fn enumerate_structures(sig: &Signature, n: usize) -> impl Iterator<Item = FinStructure> {
    let slots: Vec<(usize, Vec<Elem>)> = (0..sig.len())
        .flat_map(|ri| all_tuples(n, sig.arity(ri)).map(move |t| (ri, t)))
        .collect();
    assert!(slots.len() < 64, "too many atomic sentences to enumerate");
    let total: u64 = 1 << slots.len();
    let sig = sig.clone();
    (0..total).map(move |code| {
        let mut tables = vec![BTreeSet::new(); sig.len()];
        let m = slots.len();
        for (pos, (ri, t)) in slots.iter().enumerate() {
            if code >> (m - 1 - pos) & 1 == 1 {
                tables[*ri].insert(t.clone());
            }
        }
        FinStructure::from_tables(sig.clone(), n, tables).unwrap()
    })
}

/// Number of structures `enumerate_structures` yields.
pub fn structure_count(sig: &Signature, n: usize) -> u128 {
    let atoms: u32 = sig.relations().iter().map(|r| n.pow(r.arity as u32) as u32).sum();
    1u128 << atoms
}
