//! Enumeration operators between classes of structures, applied to finite
//! fragments of atomic diagrams under a budget.
//!
//! An operator maps a fact set to the facts about image elements it can
//! enumerate within the budget. Each operator documents its own complexity
//! measure on image elements; an image element is admitted at budget `b` when
//! its complexity is at most `b`. Positive facts are emitted for every admitted
//! element; negative facts on the arithmetic operators are only emitted among
//! elements of complexity at most `b/2` to keep fragments small. The order and
//! graph images carry full diagrams of the admitted elements.

mod encoding;
pub mod field;
mod fvs;
mod lo;
pub mod poly;
mod tree_graph;

pub use encoding::{decode_naturals, encode_naturals, unzigzag, zigzag};
pub use field::{field_arith, field_edge_root, field_has_edge_root, graph_to_field, ArithOp, FieldElement, GraphToField};
pub use fvs::{decode_vector, flo_to_fvs, fvs_dimension, FloToFvs};
pub use lo::{decode_sequence, graph_to_lo, GraphToLo};
pub use tree_graph::{tree_to_graph, TreeToGraph};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::logic::{diagram, AtomicFact, FinStructure, LogicError, Name, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("fact set signature {found} does not match operator input {expected}")]
    SignatureMismatch { expected: String, found: String },
    #[error("unknown relation in fact {0}")]
    UnknownRelation(String),
    #[error("arity mismatch in fact {0}")]
    ArityMismatch(String),
    #[error("fact {0} asserted with both polarities")]
    Inconsistent(String),
    #[error("chain is not increasing at position {0}")]
    ChainNotIncreasing(usize),
    #[error("input is not a linear order: {0}")]
    NotALinearOrder(String),
    #[error("input is not a loop-free undirected graph: {0}")]
    NotAGraph(String),
    #[error("input is not a tree: {0}")]
    NotATree(String),
    #[error("element code does not fit in a fact argument")]
    EncodingOverflow,
    #[error("malformed image fragment: {0}")]
    MalformedFragment(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("vertices must be distinct")]
    SameVertex,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// How far an enumeration is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Budget(pub u32);

impl Budget {
    pub fn level(self) -> u32 {
        self.0
    }

    /// The level below which negative facts are emitted.
    pub fn half(self) -> u32 {
        self.0 / 2
    }
}

/// A consistent finite set of ground literals over a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactSet {
    signature: Signature,
    facts: BTreeMap<(usize, Vec<Name>), bool>,
}

impl FactSet {
    pub fn new(signature: Signature) -> Self {
        FactSet { signature, facts: BTreeMap::new() }
    }

    pub fn from_facts(
        signature: Signature,
        facts: impl IntoIterator<Item = AtomicFact>,
    ) -> Result<Self, OperatorError> {
        let mut set = FactSet::new(signature);
        for f in facts {
            set.insert(f)?;
        }
        Ok(set)
    }

    /// The full atomic diagram, so that every element is mentioned.
    pub fn from_structure(a: &FinStructure) -> Self {
        FactSet::from_facts(a.signature().clone(), diagram(a)).expect("a diagram is consistent")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn insert(&mut self, fact: AtomicFact) -> Result<(), OperatorError> {
        let rel = self
            .signature
            .index_of(&fact.relation)
            .ok_or_else(|| OperatorError::UnknownRelation(fact.to_string()))?;
        if self.signature.arity(rel) != fact.args.len() {
            return Err(OperatorError::ArityMismatch(fact.to_string()));
        }
        self.insert_at(rel, fact.args, fact.positive)
    }

    pub(crate) fn insert_at(&mut self, rel: usize, args: Vec<Name>, positive: bool) -> Result<(), OperatorError> {
        debug_assert_eq!(self.signature.arity(rel), args.len());
        match self.facts.get(&(rel, args.clone())) {
            Some(&p) if p != positive => {
                let name = &self.signature.relations()[rel].name;
                Err(OperatorError::Inconsistent(AtomicFact::pos(name, args).to_string()))
            }
            _ => {
                self.facts.insert((rel, args), positive);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Truth value of a ground atom, if decided.
    pub fn holds(&self, rel: usize, args: &[Name]) -> Option<bool> {
        self.facts.get(&(rel, args.to_vec())).copied()
    }

    /// Argument tuples of the positive facts for one relation.
    pub fn positives(&self, rel: usize) -> impl Iterator<Item = &[Name]> {
        self.facts
            .range((rel, Vec::new())..)
            .take_while(move |((r, _), _)| *r == rel)
            .filter(|(_, &p)| p)
            .map(|((_, args), _)| args.as_slice())
    }

    pub fn facts(&self) -> impl Iterator<Item = AtomicFact> + '_ {
        self.facts.iter().map(|((rel, args), &positive)| AtomicFact {
            relation: self.signature.relations()[*rel].name.clone(),
            args: args.clone(),
            positive,
        })
    }

    /// Every element mentioned by some fact.
    pub fn universe(&self) -> BTreeSet<Name> {
        self.facts.keys().flat_map(|(_, args)| args.iter().copied()).collect()
    }

    pub fn is_subset(&self, other: &FactSet) -> bool {
        self.signature == other.signature
            && self.facts.iter().all(|(k, v)| other.facts.get(k) == Some(v))
    }
}

impl fmt::Display for FactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in self.facts() {
            writeln!(f, "{fact}")?;
        }
        Ok(())
    }
}

/// A budgeted enumeration operator between two signatures.
pub trait EnumOperator {
    fn name(&self) -> &'static str;
    fn input_signature(&self) -> Signature;
    fn output_signature(&self) -> Signature;
    /// Facts enumerated from `input` within `budget`. Callers go through
    /// [`apply_operator`], which checks the signatures.
    fn transform(&self, input: &FactSet, budget: Budget) -> Result<FactSet, OperatorError>;
}

pub fn apply_operator(op: &dyn EnumOperator, input: &FactSet, budget: Budget) -> Result<FactSet, OperatorError> {
    let expected = op.input_signature();
    if input.signature() != &expected {
        return Err(OperatorError::SignatureMismatch {
            expected: expected.to_string(),
            found: input.signature().to_string(),
        });
    }
    let out = op.transform(input, budget)?;
    debug_assert_eq!(out.signature(), &op.output_signature());
    Ok(out)
}

/// Images of a `⊆`-increasing chain are `⊆`-increasing at a fixed budget.
pub fn check_monotone(op: &dyn EnumOperator, chain: &[FactSet], budget: Budget) -> Result<bool, OperatorError> {
    if let Some(i) = chain.windows(2).position(|w| !w[0].is_subset(&w[1])) {
        return Err(OperatorError::ChainNotIncreasing(i + 1));
    }
    let images = chain.iter().map(|f| apply_operator(op, f, budget)).collect::<Result<Vec<_>, _>>()?;
    Ok(images.windows(2).all(|w| w[0].is_subset(&w[1])))
}

/// The four shipped operators.
pub fn all_operators() -> Vec<Box<dyn EnumOperator>> {
    vec![Box::new(flo_to_fvs()), Box::new(graph_to_field()), Box::new(graph_to_lo()), Box::new(tree_to_graph())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarity_is_enforced() {
        let mut f = FactSet::new(Signature::graph());
        f.insert(AtomicFact::pos("E", [0, 1])).unwrap();
        f.insert(AtomicFact::pos("E", [0, 1])).unwrap();
        assert!(matches!(f.insert(AtomicFact::neg("E", [0, 1])), Err(OperatorError::Inconsistent(_))));
        assert!(matches!(f.insert(AtomicFact::pos("F", [0])), Err(OperatorError::UnknownRelation(_))));
        assert!(matches!(f.insert(AtomicFact::pos("E", [0])), Err(OperatorError::ArityMismatch(_))));
        assert_eq!(f.universe(), [0, 1].into_iter().collect());
    }

    #[test]
    fn structure_diagram_mentions_every_element() {
        let f = FactSet::from_structure(&FinStructure::antichain(3));
        assert_eq!(f.universe().len(), 3);
        assert!(f.positives(0).next().is_none());
    }

    #[test]
    fn signature_is_checked() {
        let f = FactSet::new(Signature::graph());
        assert!(matches!(
            apply_operator(&flo_to_fvs(), &f, Budget(1)),
            Err(OperatorError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn chain_must_increase() {
        let small = FactSet::from_structure(&FinStructure::chain(1));
        let big = FactSet::from_structure(&FinStructure::chain(2));
        let op = flo_to_fvs();
        assert!(check_monotone(&op, &[small.clone(), big.clone()], Budget(2)).unwrap());
        assert_eq!(check_monotone(&op, &[big, small], Budget(2)), Err(OperatorError::ChainNotIncreasing(1)));
    }
}
