//! Graphs to linear orders: a graph maps to a suborder of `Q^{<ω}` under the
//! lexicographic order, made of sequences `r_0 q_1 r_1 … q_n r_n k` where some
//! tuple `(a_1, …, a_n)` realizes the `m`-th atomic type, `q_i ∈ Q_{a_i}`,
//! `r_i ∈ Q_0` for `i < n`, `r_n ∈ Q_n` and `k ≤ m`.
//!
//! `Q_a` is the set of dyadic rationals `z + f` whose fractional part `f` has
//! binary expansion `0.w 1 0^a 1` for some bit string `w`. These sets are
//! dense and pairwise disjoint. A coordinate costs `|z| + |w|`, and a
//! sequence costs `2n + k` plus the cost of its coordinates, so the number of
//! admitted sequences does not depend on vertex names.
//!
//! The image is the full diagram of the finite order on admitted sequences:
//! whether `s < t` never changes once both are admitted, so negative facts
//! can be emitted for every pair.

use std::cmp::Ordering;

use super::{decode_naturals, encode_naturals, unzigzag, zigzag, Budget, EnumOperator, FactSet, OperatorError};
use super::field::read_graph;
use crate::logic::{Name, Signature};

/// Largest colour accepted; colours are vertex names or tuple lengths.
const MAX_COLOUR: Name = 1 << 12;

/// A point of `Q_colour`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub int: i128,
    pub word: Vec<bool>,
    pub colour: Name,
}

impl Dyadic {
    fn cost(&self) -> u64 {
        self.int.unsigned_abs() as u64 + self.word.len() as u64
    }

    /// Binary digits after the point: `w 1 0^a 1`.
    fn fraction(&self) -> impl Iterator<Item = bool> + '_ {
        let zeros = std::iter::repeat(false).take(self.colour as usize);
        self.word.iter().copied().chain([true]).chain(zeros).chain([true])
    }
}

/// One coordinate of a sequence: a coloured dyadic or the closing natural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Coord {
    Dyadic(Dyadic),
    Nat(u64),
}

impl Coord {
    fn cmp_value(&self, other: &Coord) -> Ordering {
        let int = |c: &Coord| match c {
            Coord::Dyadic(d) => d.int,
            Coord::Nat(k) => *k as i128,
        };
        let frac = |c: &Coord| -> Vec<bool> {
            match c {
                Coord::Dyadic(d) => d.fraction().collect(),
                Coord::Nat(_) => Vec::new(),
            }
        };
        int(self).cmp(&int(other)).then_with(|| {
            // every nonempty fraction ends in 1, so a proper prefix is smaller
            frac(self).cmp(&frac(other))
        })
    }
}

/// An admitted sequence, kept with the tuple that admitted it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoSequence {
    pub tuple: Vec<Name>,
    pub coords: Vec<Dyadic>,
    pub k: u64,
}

impl LoSequence {
    fn values(&self) -> impl Iterator<Item = Coord> + '_ {
        self.coords.iter().cloned().map(Coord::Dyadic).chain([Coord::Nat(self.k)])
    }

    pub fn lex_cmp(&self, other: &LoSequence) -> Ordering {
        let (a, b): (Vec<Coord>, Vec<Coord>) = (self.values().collect(), other.values().collect());
        for (x, y) in a.iter().zip(&b) {
            let o = x.cmp_value(y);
            if o != Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    }

    pub fn cost(&self) -> u64 {
        2 * self.tuple.len() as u64 + self.k + self.coords.iter().map(Dyadic::cost).sum::<u64>()
    }

    /// `[n, a_1 … a_n, k, (zigzag(z), 1w, colour) per coordinate]`.
    pub fn encode(&self) -> Result<Name, OperatorError> {
        let mut seq = vec![self.tuple.len() as u128];
        seq.extend(&self.tuple);
        seq.push(self.k as u128);
        for d in &self.coords {
            let word = d.word.iter().fold(1u128, |acc, &b| (acc << 1) | b as u128);
            seq.extend([zigzag(d.int), word, d.colour]);
        }
        encode_naturals(&seq)
    }
}

/// Inverse of the element naming used by [`graph_to_lo`].
pub fn decode_sequence(code: Name) -> Option<LoSequence> {
    let seq = decode_naturals(code)?;
    let n = *seq.first()? as usize;
    let tuple = seq.get(1..=n)?.to_vec();
    let k = u64::try_from(*seq.get(n + 1)?).ok()?;
    let rest = seq.get(n + 2..)?;
    if rest.len() != 3 * (2 * n + 1) {
        return None;
    }
    let coords = rest
        .chunks(3)
        .map(|c| {
            let bits = 127 - c[1].leading_zeros();
            let word = (0..bits).rev().map(|i| (c[1] >> i) & 1 == 1).collect();
            Dyadic { int: unzigzag(c[0]), word, colour: c[2] }
        })
        .collect();
    Some(LoSequence { tuple, coords, k })
}

/// Points of `Q_colour` costing exactly `cost`.
fn dyadics(colour: Name, cost: u64) -> Vec<Dyadic> {
    let mut out = Vec::new();
    for z in 0..=cost as i128 {
        let len = (cost - z as u64) as u32;
        for bits in 0..(1u64 << len) {
            let word: Vec<bool> = (0..len).rev().map(|i| (bits >> i) & 1 == 1).collect();
            for int in if z == 0 { vec![0] } else { vec![z, -z] } {
                out.push(Dyadic { int, word: word.clone(), colour });
            }
        }
    }
    out
}

/// Index of the atomic type of a tuple among all types of loop-free graphs,
/// listed by length, then equality pattern, then edge set between classes.
fn type_index(pattern: &[usize], edges: u64) -> u64 {
    let n = pattern.len();
    let mut index = 0u64;
    for len in 1..n {
        index += rgs(len).iter().map(|p| 1u64 << pairs(classes(p))).sum::<u64>();
    }
    for p in rgs(n) {
        if p == pattern {
            return index + edges;
        }
        index += 1 << pairs(classes(&p));
    }
    unreachable!("pattern is a restricted growth string")
}

fn classes(p: &[usize]) -> usize {
    p.iter().max().map_or(0, |m| m + 1)
}

fn pairs(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Restricted growth strings of length `n`, lexicographically.
fn rgs(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let top = classes(&p);
                (0..=top).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Atomic type of `tuple`, when every needed edge is decided by `input`.
fn atomic_type(input: &FactSet, tuple: &[Name]) -> Option<u64> {
    let mut firsts: Vec<Name> = Vec::new();
    let pattern: Vec<usize> = tuple
        .iter()
        .map(|a| {
            firsts.iter().position(|b| b == a).unwrap_or_else(|| {
                firsts.push(*a);
                firsts.len() - 1
            })
        })
        .collect();
    let mut edges = 0u64;
    let mut bit = 0;
    for j in 1..firsts.len() {
        for i in 0..j {
            let (a, b) = (firsts[i], firsts[j]);
            let e = input.holds(0, &[a, b]).or_else(|| input.holds(0, &[b, a]))?;
            if e {
                edges |= 1 << bit;
            }
            bit += 1;
        }
    }
    Some(type_index(&pattern, edges))
}

fn tuples(universe: &[Name], n: usize) -> Vec<Vec<Name>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                universe.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect()
    })
}

/// Coordinate lists over the given colours with total cost at most `budget`.
fn coordinate_lists(colours: &[Name], budget: u64) -> Vec<Vec<Dyadic>> {
    let Some((&c, rest)) = colours.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for cost in 0..=budget {
        let heads = dyadics(c, cost);
        for tail in coordinate_lists(rest, budget - cost) {
            for h in &heads {
                let mut v = vec![h.clone()];
                v.extend(tail.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}

/// Every admitted sequence of cost at most `budget`.
fn admitted(input: &FactSet, budget: u64) -> Result<Vec<LoSequence>, OperatorError> {
    let universe: Vec<Name> = input.universe().into_iter().collect();
    if let Some(&v) = universe.iter().find(|&&v| v > MAX_COLOUR) {
        return Err(OperatorError::MalformedFragment(format!("vertex name {v} exceeds {MAX_COLOUR}")));
    }
    let mut out = Vec::new();
    for n in 1..=(budget / 2) as usize {
        for tuple in tuples(&universe, n) {
            let Some(m) = atomic_type(input, &tuple) else { continue };
            let mut colours = Vec::with_capacity(2 * n + 1);
            for &a in &tuple {
                colours.extend([0, a]);
            }
            colours.push(n as Name);
            let room = budget - 2 * n as u64;
            for k in 0..=m.min(room) {
                for coords in coordinate_lists(&colours, room - k) {
                    out.push(LoSequence { tuple: tuple.clone(), coords, k });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GraphToLo;

pub fn graph_to_lo() -> GraphToLo {
    GraphToLo
}

impl EnumOperator for GraphToLo {
    fn name(&self) -> &'static str {
        "graph-lo"
    }

    fn input_signature(&self) -> Signature {
        Signature::graph()
    }

    fn output_signature(&self) -> Signature {
        Signature::order()
    }

    fn transform(&self, input: &FactSet, budget: Budget) -> Result<FactSet, OperatorError> {
        read_graph(input)?;
        let mut elems = admitted(input, budget.level() as u64)?;
        elems.sort_by(|a, b| a.lex_cmp(b));
        let codes = elems.iter().map(LoSequence::encode).collect::<Result<Vec<_>, _>>()?;
        let mut out = FactSet::new(Signature::order());
        for i in 0..elems.len() {
            for j in 0..elems.len() {
                out.insert_at(0, vec![codes[i], codes[j]], i < j)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::FinStructure;
    use crate::operators::apply_operator;

    fn image(g: &FinStructure, b: u32) -> FactSet {
        apply_operator(&graph_to_lo(), &FactSet::from_structure(g), Budget(b)).unwrap()
    }

    #[test]
    fn type_listing() {
        assert_eq!(type_index(&[0], 0), 0);
        assert_eq!(type_index(&[0, 0], 0), 1);
        assert_eq!(type_index(&[0, 1], 0), 2);
        assert_eq!(type_index(&[0, 1], 1), 3);
        assert_eq!(type_index(&[0, 0, 0], 0), 4);
        assert_eq!(rgs(3).len(), 5);
    }

    #[test]
    fn colour_classes_are_disjoint() {
        let pts: Vec<Dyadic> = (0..4).flat_map(|c| (0..3).flat_map(move |k| dyadics(c, k))).collect();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                assert_ne!(Coord::Dyadic(a.clone()).cmp_value(&Coord::Dyadic(b.clone())), Ordering::Equal);
            }
        }
        assert_eq!(dyadics(0, 1).len(), dyadics(7, 1).len());
    }

    #[test]
    fn empty_graph_gives_empty_order() {
        assert!(image(&FinStructure::empty(Signature::graph(), 0), 4).is_empty());
    }

    #[test]
    fn single_vertex_graphs_agree() {
        let a = image(&FinStructure::empty(Signature::graph(), 1), 4);
        let g = FactSet::from_facts(Signature::graph(), [crate::logic::AtomicFact::neg("E", [5, 5])]).unwrap();
        let b = apply_operator(&graph_to_lo(), &g, Budget(4)).unwrap();
        assert_eq!(a.universe().len(), b.universe().len());
        assert!(!a.is_empty());
    }

    #[test]
    fn edge_changes_the_fragment() {
        let v = image(&FinStructure::empty(Signature::graph(), 1), 4);
        let e = FinStructure::from_tables(Signature::graph(), 2, vec![[vec![0, 1], vec![1, 0]].into()]).unwrap();
        let w = image(&e, 4);
        let has_edge_type = w.universe().iter().any(|&c| {
            let s = decode_sequence(c).unwrap();
            s.tuple.len() == 2 && s.tuple[0] != s.tuple[1]
        });
        assert!(has_edge_type);
        assert!(w.universe().len() > v.universe().len());
    }

    #[test]
    fn codes_round_trip_and_order_is_strict() {
        let e = FinStructure::from_tables(Signature::graph(), 2, vec![[vec![0, 1], vec![1, 0]].into()]).unwrap();
        let img = image(&e, 3);
        for code in img.universe() {
            assert_eq!(decode_sequence(code).unwrap().encode().unwrap(), code);
        }
        for args in img.positives(0) {
            let (s, t) = (decode_sequence(args[0]).unwrap(), decode_sequence(args[1]).unwrap());
            assert_eq!(s.lex_cmp(&t), Ordering::Less);
        }
    }
}
