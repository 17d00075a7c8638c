//! Level tables for the back-and-forth relations.
//!
//! A tuple with repeated entries is equivalent to another one exactly when the
//! two have the same equality pattern and their repetition-free reductions are
//! equivalent, so the tables only range over injective tuples. Extensions are
//! likewise reduced to the list of genuinely new elements they add; an
//! extension `c` of arbitrary length (up to the cap) adds at most
//! `cap - |a|` new elements.
//!
//! Level `α+1` classes are keyed by the level-`α` class together with, for
//! every count `k` of new elements, the set of level-`α` classes reachable by
//! an injective extension with `k` new elements. Classes are interned jointly
//! over both structures so ids are comparable across them.

use std::collections::HashMap;

use super::{BFKey, BackForthError, Side};
use crate::logic::{all_tuples, Elem, FinStructure};

/// Equality pattern (first-occurrence indices) and the repetition-free reduction.
pub(crate) fn reduce(t: &[Elem]) -> (Vec<usize>, Vec<Elem>) {
    let mut distinct: Vec<Elem> = Vec::new();
    let pattern = t
        .iter()
        .map(|x| match distinct.iter().position(|y| y == x) {
            Some(i) => i,
            None => {
                distinct.push(*x);
                distinct.len() - 1
            }
        })
        .collect();
    (pattern, distinct)
}

/// Memoized level tables for one pair of structures (or one structure with itself).
pub struct BackForth<'a> {
    sides: Vec<&'a FinStructure>,
    cap: usize,
    tuples: Vec<(usize, Vec<Elem>)>,
    index: HashMap<(usize, Vec<Elem>), usize>,
    /// `ext[t][k-1]`: ids of injective extensions of `t` by exactly `k` new elements
    ext: Vec<Vec<Vec<usize>>>,
    levels: Vec<Vec<usize>>,
    stable: Option<usize>,
}

impl<'a> BackForth<'a> {
    /// Tables for comparing tuples of `a` with tuples of `b`.
    pub fn new(a: &'a FinStructure, b: &'a FinStructure) -> Result<Self, BackForthError> {
        if a.signature() != b.signature() {
            return Err(BackForthError::SignatureMismatch);
        }
        Ok(Self::build(vec![a, b]))
    }

    /// Tables for tuples within one structure.
    pub fn single(a: &'a FinStructure) -> Self {
        Self::build(vec![a])
    }

    fn build(sides: Vec<&'a FinStructure>) -> Self {
        let cap = sides.iter().map(|s| s.size()).max().unwrap_or(0);
        let mut tuples = Vec::new();
        let mut index = HashMap::new();
        for (s, st) in sides.iter().enumerate() {
            let mut frontier: Vec<Vec<Elem>> = vec![Vec::new()];
            while let Some(t) = frontier.pop() {
                index.insert((s, t.clone()), tuples.len());
                tuples.push((s, t.clone()));
                for x in (0..st.size()).rev() {
                    if !t.contains(&x) {
                        let mut u = t.clone();
                        u.push(x);
                        frontier.push(u);
                    }
                }
            }
        }
        let ext = tuples
            .iter()
            .map(|(s, t)| {
                let n = sides[*s].size();
                let mut by_k: Vec<Vec<usize>> = vec![Vec::new(); cap - t.len()];
                let mut stack: Vec<Vec<Elem>> = vec![t.clone()];
                while let Some(u) = stack.pop() {
                    if u.len() > t.len() {
                        by_k[u.len() - t.len() - 1].push(index[&(*s, u.clone())]);
                    }
                    for x in 0..n {
                        if !u.contains(&x) {
                            let mut v = u.clone();
                            v.push(x);
                            stack.push(v);
                        }
                    }
                }
                by_k
            })
            .collect();
        let mut bf = BackForth { sides, cap, tuples, index, ext, levels: Vec::new(), stable: None };
        let level0 = bf.qf_classes();
        bf.levels.push(level0);
        bf
    }

    /// Level 0: quantifier-free type of an injective tuple.
    fn qf_classes(&self) -> Vec<usize> {
        let mut interner: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut args = Vec::new();
        self.tuples
            .iter()
            .map(|(s, t)| {
                let st = self.sides[*s];
                let sig = st.signature();
                let mut key = vec![t.len() as u8];
                for r in 0..sig.len() {
                    for pos in all_tuples(t.len(), sig.arity(r)) {
                        args.clear();
                        args.extend(pos.iter().map(|&p| t[p]));
                        key.push(st.holds(r, &args) as u8);
                    }
                }
                let n = interner.len();
                *interner.entry(key).or_insert(n)
            })
            .collect()
    }

    fn refine(&self, prev: &[usize]) -> Vec<usize> {
        let mut interner: HashMap<Vec<usize>, usize> = HashMap::new();
        (0..self.tuples.len())
            .map(|t| {
                let mut key = vec![prev[t]];
                for group in &self.ext[t] {
                    let mut cls: Vec<usize> = group.iter().map(|&u| prev[u]).collect();
                    cls.sort_unstable();
                    cls.dedup();
                    key.push(usize::MAX);
                    key.extend(cls);
                }
                let n = interner.len();
                *interner.entry(key).or_insert(n)
            })
            .collect()
    }

    fn class_count(level: &[usize]) -> usize {
        level.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Class ids at `level`, computing intermediate levels as needed. Past the
    /// stabilization point the stable table is returned.
    pub fn level(&mut self, level: usize) -> &[usize] {
        while self.levels.len() <= level && self.stable.is_none() {
            let prev = self.levels.last().unwrap();
            let next = self.refine(prev);
            if Self::class_count(&next) == Self::class_count(prev) {
                self.stable = Some(self.levels.len() - 1);
            } else {
                self.levels.push(next);
            }
        }
        let i = level.min(self.levels.len() - 1);
        &self.levels[i]
    }

    /// Least level from which the relations no longer change.
    pub fn stabilization_level(&mut self) -> usize {
        while self.stable.is_none() {
            let n = self.levels.len();
            self.level(n);
        }
        self.stable.unwrap()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Injective tuples of one side, in the internal order.
    pub(crate) fn injective_tuples(&self, side: usize) -> impl Iterator<Item = (usize, &[Elem])> {
        self.tuples
            .iter()
            .enumerate()
            .filter(move |(_, (s, _))| *s == side)
            .map(|(i, (_, t))| (i, t.as_slice()))
    }

    pub(crate) fn id_of(&self, side: usize, t: &[Elem]) -> usize {
        self.index[&(side, t.to_vec())]
    }

    fn side_index(&self, side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => self.sides.len() - 1,
        }
    }

    /// Evaluates `left ≡^level right`.
    pub fn equiv(&mut self, key: &BFKey) -> Result<bool, BackForthError> {
        if key.left.1.len() != key.right.1.len() {
            return Err(BackForthError::LengthMismatch(key.left.1.len(), key.right.1.len()));
        }
        let l = self.side_index(key.left.0);
        let r = self.side_index(key.right.0);
        for (s, t) in [(l, &key.left.1), (r, &key.right.1)] {
            if let Some(&x) = t.iter().find(|&&x| x >= self.sides[s].size()) {
                return Err(BackForthError::OutOfRange(x));
            }
        }
        let (pl, tl) = reduce(&key.left.1);
        let (pr, tr) = reduce(&key.right.1);
        if pl != pr {
            return Ok(false);
        }
        let il = self.id_of(l, &tl);
        let ir = self.id_of(r, &tr);
        let table = self.level(key.level);
        Ok(table[il] == table[ir])
    }
}

/// `a ≡^alpha b` for tuples of `sa` and `sb` respectively.
pub fn equiv_alpha(
    sa: &FinStructure,
    a: &[Elem],
    sb: &FinStructure,
    b: &[Elem],
    alpha: usize,
) -> Result<bool, BackForthError> {
    let mut bf = BackForth::new(sa, sb)?;
    bf.equiv(&BFKey::new((Side::Left, a.to_vec()), (Side::Right, b.to_vec()), alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{enumerate_structures, Signature};

    /// Literal evaluation of the inductive definition on tuples with repetitions,
    /// extension tuples of every length up to `max(|A|, |B|)`.
    fn oracle(sa: &FinStructure, a: &[Elem], sb: &FinStructure, b: &[Elem], alpha: usize) -> bool {
        if alpha == 0 {
            return qf_equal(sa, a, sb, b);
        }
        let cap = sa.size().max(sb.size());
        (0..alpha).all(|beta| {
            (0..=cap).all(|k| {
                let forth = all_tuples(sa.size(), k).all(|c| {
                    all_tuples(sb.size(), k).any(|d| {
                        oracle(sa, &[a, &c[..]].concat(), sb, &[b, &d[..]].concat(), beta)
                    })
                });
                let back = all_tuples(sb.size(), k).all(|d| {
                    all_tuples(sa.size(), k).any(|c| {
                        oracle(sa, &[a, &c[..]].concat(), sb, &[b, &d[..]].concat(), beta)
                    })
                });
                forth && back
            })
        })
    }

    fn qf_equal(sa: &FinStructure, a: &[Elem], sb: &FinStructure, b: &[Elem]) -> bool {
        let n = a.len();
        for i in 0..n {
            for j in 0..n {
                if (a[i] == a[j]) != (b[i] == b[j]) {
                    return false;
                }
            }
        }
        let sig = sa.signature();
        (0..sig.len()).all(|r| {
            all_tuples(n, sig.arity(r)).all(|pos| {
                let ta: Vec<_> = pos.iter().map(|&p| a[p]).collect();
                let tb: Vec<_> = pos.iter().map(|&p| b[p]).collect();
                sa.holds(r, &ta) == sb.holds(r, &tb)
            })
        })
    }

    #[test]
    fn chain_examples() {
        let c = FinStructure::chain(3);
        assert!(equiv_alpha(&c, &[0], &c, &[1], 0).unwrap());
        assert!(!equiv_alpha(&c, &[0], &c, &[1], 1).unwrap());
        for alpha in 0..4 {
            assert!(equiv_alpha(&c, &[2, 0], &c, &[2, 0], alpha).unwrap());
        }
    }

    #[test]
    fn error_paths() {
        let c = FinStructure::chain(2);
        assert!(matches!(equiv_alpha(&c, &[0], &c, &[0, 1], 0), Err(BackForthError::LengthMismatch(1, 2))));
        let g = FinStructure::empty(Signature::graph(), 2);
        assert_eq!(equiv_alpha(&c, &[0], &g, &[0], 0), Err(BackForthError::SignatureMismatch));
        assert_eq!(equiv_alpha(&c, &[4], &c, &[0], 0), Err(BackForthError::OutOfRange(4)));
    }

    #[test]
    fn different_sizes_separate_at_level_one() {
        let a = FinStructure::antichain(2);
        let b = FinStructure::antichain(3);
        assert!(equiv_alpha(&a, &[], &b, &[], 0).unwrap());
        assert!(!equiv_alpha(&a, &[], &b, &[], 1).unwrap());
    }

    #[test]
    fn agrees_with_definition_oracle_on_small_graphs() {
        let sig = Signature::graph();
        let mut structures: Vec<FinStructure> = enumerate_structures(&sig, 1).collect();
        structures.extend(enumerate_structures(&sig, 2));
        let mut checked = 0;
        for sa in &structures {
            for sb in &structures {
                let mut bf = BackForth::new(sa, sb).unwrap();
                for len in 0..=1 {
                    for a in all_tuples(sa.size(), len) {
                        for b in all_tuples(sb.size(), len) {
                            for alpha in 0..=2 {
                                let key = BFKey::new((Side::Left, a.clone()), (Side::Right, b.clone()), alpha);
                                assert_eq!(
                                    bf.equiv(&key).unwrap(),
                                    oracle(sa, &a, sb, &b, alpha),
                                    "{sa:?} {a:?} / {sb:?} {b:?} at {alpha}"
                                );
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn oracle_agrees_on_a_three_chain() {
        let c = FinStructure::chain(3);
        let mut bf = BackForth::single(&c);
        for a in all_tuples(3, 1) {
            for b in all_tuples(3, 1) {
                for alpha in 0..=1 {
                    let key = BFKey::new((Side::Left, a.clone()), (Side::Left, b.clone()), alpha);
                    assert_eq!(bf.equiv(&key).unwrap(), oracle(&c, &a, &c, &b, alpha));
                }
            }
        }
    }

    #[test]
    fn stabilization_within_bound() {
        for a in enumerate_structures(&Signature::graph(), 3) {
            let mut bf = BackForth::single(&a);
            let n = a.size();
            assert!(bf.stabilization_level() <= n * (n + 1));
        }
    }
}
