use std::collections::{BTreeMap, HashMap};

use super::equiv::{reduce, BackForth};
use super::iso::{automorphisms, orbit_representative};
use super::BackForthError;
use crate::logic::{all_tuples, Elem, FinStructure, Formula, Term};

/// Scott ranks of all tuples of length at most `|A|`, and of the structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScottReport {
    pub tuple_ranks: BTreeMap<Vec<Elem>, usize>,
    pub structure_rank: usize,
}

impl ScottReport {
    /// `structure_rank` is one more than the largest recorded tuple rank.
    pub fn is_consistent(&self) -> bool {
        let max = self.tuple_ranks.values().copied().max();
        match max {
            Some(m) => self.structure_rank == m + 1,
            None => false,
        }
    }
}

/// Ranks of the injective tuples of `a`, indexed like `BackForth::injective_tuples`.
struct RankTable<'a> {
    bf: BackForth<'a>,
    ranks: HashMap<Vec<Elem>, usize>,
}

impl<'a> RankTable<'a> {
    fn new(a: &'a FinStructure) -> Self {
        let autos = automorphisms(a);
        let mut bf = BackForth::single(a);
        let stable = bf.stabilization_level();
        let tuples: Vec<(usize, Vec<Elem>)> =
            bf.injective_tuples(0).map(|(i, t)| (i, t.to_vec())).collect();
        let orbit: Vec<Vec<Elem>> = tuples.iter().map(|(_, t)| orbit_representative(&autos, t)).collect();
        let mut ranks = HashMap::new();
        for beta in 0..=stable {
            let table = bf.level(beta).to_vec();
            // a class pins the orbit when all its members share one orbit
            let mut class_orbit: HashMap<usize, Option<&Vec<Elem>>> = HashMap::new();
            for ((i, _), o) in tuples.iter().zip(&orbit) {
                class_orbit
                    .entry(table[*i])
                    .and_modify(|seen| {
                        if seen.is_some_and(|s| s != o) {
                            *seen = None;
                        }
                    })
                    .or_insert(Some(o));
            }
            for (i, t) in &tuples {
                if !ranks.contains_key(t) && class_orbit[&table[*i]].is_some() {
                    ranks.insert(t.clone(), beta);
                }
            }
        }
        assert_eq!(ranks.len(), tuples.len(), "stabilized relation must pin every orbit");
        RankTable { bf, ranks }
    }

    fn rank(&self, t: &[Elem]) -> usize {
        self.ranks[&reduce(t).1]
    }
}

/// Least `β` such that `≡^β`-equivalence to `t` implies being automorphic to `t`.
pub fn tuple_rank(a: &FinStructure, t: &[Elem]) -> Result<usize, BackForthError> {
    if let Some(&x) = t.iter().find(|&&x| x >= a.size()) {
        return Err(BackForthError::OutOfRange(x));
    }
    Ok(RankTable::new(a).rank(t))
}

pub fn scott_rank(a: &FinStructure) -> ScottReport {
    let table = RankTable::new(a);
    let mut tuple_ranks = BTreeMap::new();
    for len in 0..=a.size() {
        for t in all_tuples(a.size(), len) {
            let r = table.rank(&t);
            tuple_ranks.insert(t, r);
        }
    }
    let structure_rank = tuple_ranks.values().copied().max().unwrap_or(0) + 1;
    ScottReport { tuple_ranks, structure_rank }
}

/// Checks that the stabilized back-and-forth relation coincides with
/// automorphic equivalence on all tuples of length at most `|A|`.
pub fn check_nadel_finite(a: &FinStructure) -> bool {
    let autos = automorphisms(a);
    let mut table = RankTable::new(a);
    let stable = table.bf.stabilization_level();
    let classes = table.bf.level(stable).to_vec();
    let bf = &table.bf;
    let mut forward: HashMap<(Vec<usize>, usize), Vec<Elem>> = HashMap::new();
    let mut backward: HashMap<Vec<Elem>, (Vec<usize>, usize)> = HashMap::new();
    for len in 0..=a.size() {
        for t in all_tuples(a.size(), len) {
            let (pattern, red) = reduce(&t);
            let bf_key = (pattern, classes[bf.id_of(0, &red)]);
            let orbit = orbit_representative(&autos, &t);
            if forward.entry(bf_key.clone()).or_insert_with(|| orbit.clone()) != &orbit {
                return false;
            }
            if backward.entry(orbit).or_insert(bf_key.clone()) != &bf_key {
                return false;
            }
        }
    }
    true
}

fn var(i: usize) -> Term {
    Term::var(format!("x{i}"))
}

/// A sentence true in a finite structure exactly when it is isomorphic to `a`.
///
/// Shape: `∃x0 (D0 ∧ ∃x1 (x1≠x0 ∧ D1 ∧ … ∀y (y=x0 ∨ … ∨ y=x{n-1})))`, where
/// `Di` collects the diagram literals whose largest variable is `xi`. Placing
/// each literal under its last quantifier keeps evaluation close to a
/// backtracking search.
pub fn scott_sentence(a: &FinStructure) -> Formula {
    let n = a.size();
    let sig = a.signature();
    let mut literals: Vec<Vec<Formula>> = vec![Vec::new(); n];
    for r in 0..sig.len() {
        let name = &sig.relations()[r].name;
        for t in all_tuples(n, sig.arity(r)) {
            let last = *t.iter().max().unwrap();
            let atom = Formula::atom(name, t.iter().map(|&i| var(i)));
            literals[last].push(if a.holds(r, &t) { atom } else { Formula::not(atom) });
        }
    }
    let y = Term::var("y");
    let exhaust = Formula::forall("y", Formula::Or((0..n).map(|i| Formula::Eq(y.clone(), var(i))).collect()));
    let mut body = exhaust;
    for i in (0..n).rev() {
        let mut conj: Vec<Formula> =
            (0..i).map(|j| Formula::not(Formula::Eq(var(i), var(j)))).collect();
        conj.append(&mut literals[i]);
        conj.push(body);
        body = Formula::exists(format!("x{i}"), Formula::And(conj));
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backforth::{automorphic, equiv_alpha, iso};
    use crate::logic::{enumerate_structures, satisfies, Signature};

    /// Definition-level oracle: the least β such that every equal-length tuple
    /// that is ≡^β to `t` is automorphic to it.
    fn rank_oracle(a: &FinStructure, t: &[Elem]) -> usize {
        (0..)
            .find(|&beta| {
                all_tuples(a.size(), t.len()).all(|u| {
                    !equiv_alpha(a, t, a, &u, beta).unwrap() || automorphic(a, t, &u).unwrap()
                })
            })
            .unwrap()
    }

    #[test]
    fn one_point_structure() {
        let a = FinStructure::empty(Signature::empty(), 1);
        assert_eq!(tuple_rank(&a, &[0]).unwrap(), 0);
        let r = scott_rank(&a);
        assert_eq!(r.structure_rank, 1);
        assert!(r.tuple_ranks.values().all(|&v| v == 0));
    }

    #[test]
    fn antichain_has_rank_one() {
        let r = scott_rank(&FinStructure::antichain(2));
        assert!(r.tuple_ranks.values().all(|&v| v == 0));
        assert_eq!(r.structure_rank, 1);
        assert!(r.is_consistent());
    }

    #[test]
    fn chain_ranks_match_oracle() {
        for n in 1..=4 {
            let c = FinStructure::chain(n);
            let report = scott_rank(&c);
            assert!(report.is_consistent());
            assert!(report.structure_rank <= n + 1);
            for len in 0..=n.min(2) {
                for t in all_tuples(n, len) {
                    assert_eq!(report.tuple_ranks[&t], rank_oracle(&c, &t), "chain {n}, tuple {t:?}");
                }
            }
        }
        // the least element of a 3-chain is pinned at level 1
        assert_eq!(tuple_rank(&FinStructure::chain(3), &[0]).unwrap(), 1);
    }

    #[test]
    fn unique_qf_type_has_rank_zero() {
        // element 0 is the only one with a loop
        let a = FinStructure::from_tables(Signature::graph(), 3, vec![[vec![0, 0]].into()]).unwrap();
        assert_eq!(tuple_rank(&a, &[0]).unwrap(), 0);
    }

    #[test]
    fn ranks_match_oracle_on_graphs() {
        for a in enumerate_structures(&Signature::graph(), 3).step_by(13) {
            let report = scott_rank(&a);
            assert!(report.is_consistent());
            for t in all_tuples(3, 1) {
                assert_eq!(report.tuple_ranks[&t], rank_oracle(&a, &t));
            }
        }
    }

    #[test]
    fn nadel_small_cases() {
        for n in 0..=3 {
            assert!(check_nadel_finite(&FinStructure::empty(Signature::empty(), n)));
        }
        assert!(check_nadel_finite(&FinStructure::chain(4)));
    }

    #[test]
    fn scott_sentence_examples() {
        let env = HashMap::new();
        let two = FinStructure::empty(Signature::empty(), 2);
        let phi = scott_sentence(&two);
        for n in 0..4 {
            let b = FinStructure::empty(Signature::empty(), n);
            assert_eq!(satisfies(&b, &phi, &env).unwrap(), n == 2);
        }
        let c2 = scott_sentence(&FinStructure::chain(2));
        assert!(!satisfies(&FinStructure::antichain(2), &c2, &env).unwrap());
        assert!(satisfies(&FinStructure::chain(2).relabel(&[1, 0]), &c2, &env).unwrap());
        let c3 = FinStructure::from_tables(
            Signature::graph(),
            3,
            vec![[vec![0, 1], vec![0, 2], vec![1, 2]].into()],
        )
        .unwrap();
        let phi = scott_sentence(&c3);
        assert!(enumerate_structures(&Signature::graph(), 2).all(|b| !satisfies(&b, &phi, &env).unwrap()));
    }

    #[test]
    fn scott_sentence_sound_on_three_element_graphs() {
        let env = HashMap::new();
        let all: Vec<_> = enumerate_structures(&Signature::graph(), 3).collect();
        for a in all.iter().step_by(37) {
            let phi = scott_sentence(a);
            assert!(phi.free_vars().is_empty());
            for b in &all {
                assert_eq!(satisfies(b, &phi, &env).unwrap(), iso(a, b).unwrap().is_some());
            }
        }
    }
}
