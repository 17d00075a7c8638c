//! Trees to graphs. A node at depth `d` becomes a hub vertex with a pendant
//! cycle of length `d + 3`; hubs of parent and child are adjacent.
//!
//! Input trees are presented over `{Root/1, C/2}` so that depth is decided by
//! the facts seen so far. At budget `b` the nodes of depth below `b` attached
//! to the root are drawn. All non-edges among drawn vertices are emitted.

use std::collections::{BTreeMap, BTreeSet};

use super::{encode_naturals, Budget, EnumOperator, FactSet, OperatorError};
use crate::logic::{Name, Signature};
use crate::trees::tree_signature;

#[derive(Debug, Clone, Copy, Default)]
pub struct TreeToGraph;

pub fn tree_to_graph() -> TreeToGraph {
    TreeToGraph
}

fn hub(v: Name) -> Result<Name, OperatorError> {
    encode_naturals(&[0, v])
}

fn cycle_vertex(v: Name, i: u128) -> Result<Name, OperatorError> {
    encode_naturals(&[1, v, i])
}

/// Depths of the nodes attached to the root, after checking the presented
/// facts describe a forest with at most one root.
fn depths(input: &FactSet) -> Result<BTreeMap<Name, u128>, OperatorError> {
    let bad = |msg: String| Err(OperatorError::NotATree(msg));
    let roots: Vec<Name> = input.positives(0).map(|a| a[0]).collect();
    if roots.len() > 1 {
        return bad(format!("several roots: {roots:?}"));
    }
    let mut parent: BTreeMap<Name, Name> = BTreeMap::new();
    let mut children: BTreeMap<Name, Vec<Name>> = BTreeMap::new();
    for args in input.positives(1) {
        let (p, c) = (args[0], args[1]);
        if roots.contains(&c) {
            return bad(format!("root {c} has parent {p}"));
        }
        if let Some(q) = parent.insert(c, p) {
            return bad(format!("{c} has parents {q} and {p}"));
        }
        children.entry(p).or_default().push(c);
    }
    for &start in parent.keys() {
        let mut seen = BTreeSet::new();
        let mut at = start;
        while let Some(&p) = parent.get(&at) {
            if !seen.insert(at) {
                return bad(format!("cycle through {start}"));
            }
            at = p;
        }
    }
    let mut depth = BTreeMap::new();
    let mut stack: Vec<(Name, u128)> = roots.iter().map(|&r| (r, 0)).collect();
    while let Some((v, d)) = stack.pop() {
        depth.insert(v, d);
        for &c in children.get(&v).into_iter().flatten() {
            stack.push((c, d + 1));
        }
    }
    Ok(depth)
}

impl EnumOperator for TreeToGraph {
    fn name(&self) -> &'static str {
        "tree-graph"
    }

    fn input_signature(&self) -> Signature {
        tree_signature()
    }

    fn output_signature(&self) -> Signature {
        Signature::graph()
    }

    fn transform(&self, input: &FactSet, budget: Budget) -> Result<FactSet, OperatorError> {
        let depth = depths(input)?;
        let drawn: BTreeMap<Name, u128> =
            depth.into_iter().filter(|&(_, d)| d < budget.level() as u128).collect();
        let mut vertices = Vec::new();
        let mut edges = BTreeSet::new();
        for (&v, &d) in &drawn {
            let h = hub(v)?;
            vertices.push(h);
            let len = d + 3;
            let ring = (0..len).map(|i| cycle_vertex(v, i)).collect::<Result<Vec<_>, _>>()?;
            edges.insert((h, ring[0]));
            for i in 0..ring.len() {
                edges.insert((ring[i], ring[(i + 1) % ring.len()]));
            }
            vertices.extend(ring);
        }
        for args in input.positives(1) {
            if drawn.contains_key(&args[0]) && drawn.contains_key(&args[1]) {
                edges.insert((hub(args[0])?, hub(args[1])?));
            }
        }
        let mut out = FactSet::new(Signature::graph());
        for &a in &vertices {
            for &b in &vertices {
                let e = edges.contains(&(a, b)) || edges.contains(&(b, a));
                out.insert_at(0, vec![a, b], e)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backforth::iso;
    use crate::logic::normalize_sparse;
    use crate::operators::apply_operator;
    use crate::trees::FinTree;

    fn image(t: &FinTree, b: u32) -> FactSet {
        let (st, _) = t.to_structure();
        apply_operator(&tree_to_graph(), &FactSet::from_structure(&st), Budget(b)).unwrap()
    }

    fn as_structure(f: &FactSet) -> crate::logic::FinStructure {
        normalize_sparse(&Signature::graph(), &f.universe(), &f.facts().filter(|x| x.positive).collect::<Vec<_>>())
            .unwrap()
            .0
    }

    fn tree(lits: &[&str]) -> FinTree {
        FinTree::new(lits.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn gadget_sizes() {
        let single = image(&FinTree::single(), 3);
        assert_eq!(single.universe().len(), 4);
        let two = as_structure(&image(&tree(&[".", "0"]), 3));
        assert_eq!(two.size(), 4 + 5);
        // 3 + 4 cycle edges, 2 pendant edges, 1 hub edge, both directions
        assert_eq!(two.table(0).len(), 2 * 10);
        assert!(image(&FinTree::single(), 0).is_empty());
    }

    #[test]
    fn path_and_cherry_differ() {
        let path = as_structure(&image(&tree(&[".", "0", "0/0"]), 5));
        let cherry = as_structure(&image(&tree(&[".", "0", "1"]), 5));
        assert!(iso(&path, &cherry).unwrap().is_none());
        let cherry2 = as_structure(&image(&tree(&[".", "1", "0"]), 5));
        assert!(iso(&cherry, &cherry2).unwrap().is_some());
    }

    #[test]
    fn bad_trees_rejected() {
        let sig = tree_signature();
        let two_parents = FactSet::from_facts(
            sig.clone(),
            [crate::logic::AtomicFact::pos("C", [0, 2]), crate::logic::AtomicFact::pos("C", [1, 2])],
        )
        .unwrap();
        assert!(matches!(tree_to_graph().transform(&two_parents, Budget(2)), Err(OperatorError::NotATree(_))));
        let cycle = FactSet::from_facts(
            sig,
            [crate::logic::AtomicFact::pos("C", [0, 1]), crate::logic::AtomicFact::pos("C", [1, 0])],
        )
        .unwrap();
        assert!(matches!(tree_to_graph().transform(&cycle, Budget(2)), Err(OperatorError::NotATree(_))));
    }
}
