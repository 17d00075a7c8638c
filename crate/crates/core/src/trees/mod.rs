//! Finite subtrees of ω^{<ω}: tree rank, Kleene–Brouwer linearization,
//! rank profiles, and finite surrogates for rank-homogeneity and thinness.
//!
//! "Infinitely many" in the homogeneity condition becomes "at least `k`"; every
//! report carrying such a verdict records the `k` it was computed with.

mod ordinal;
mod profile;

pub use ordinal::{Ordinal, OrdinalError};
pub use profile::{
    build_rank_homogeneous, is_thin_profile, iso_by_profile, rank_profile, Level,
    LevelRankProfile, Multiplicity, ProfileComparison, RankEntry,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::logic::{Elem, FinStructure, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node {0} is not in the tree")]
    NodeAbsent(Node),
    #[error("node set is not closed under prefixes (missing parent of {0})")]
    NotPrefixClosed(Node),
    #[error("tree is empty")]
    Empty,
    #[error("witness count k must be at least 1")]
    ZeroWitness,
    #[error("tree is not rank-homogeneous at k = {0}")]
    NotHomogeneous(u64),
    #[error("malformed profile: {0}")]
    MalformedProfile(String),
    #[error("unrealizable profile: {0}")]
    Unrealizable(String),
    #[error("bad node literal `{0}`")]
    BadLiteral(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A node of ω^{<ω}: the finite sequence of child coordinates from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Node(pub Vec<u32>);

impl Node {
    pub fn root() -> Self {
        Node(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn parent(&self) -> Option<Node> {
        let (_, init) = self.0.split_last()?;
        Some(Node(init.to_vec()))
    }

    pub fn child(&self, c: u32) -> Node {
        let mut v = self.0.clone();
        v.push(c);
        Node(v)
    }

    /// Proper extension: `self` lies strictly below `other`.
    pub fn extends(&self, other: &Node) -> bool {
        self.0.len() > other.0.len() && self.0.starts_with(&other.0)
    }
}

impl fmt::Display for Node {
    /// Slash-separated coordinates; the root is `.`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, ".");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join("/"))
    }
}

impl std::str::FromStr for Node {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "." {
            return Ok(Node::root());
        }
        s.split('/')
            .map(|p| p.parse::<u32>().map_err(|_| TreeError::BadLiteral(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Node)
    }
}

/// Kleene–Brouwer order: `s < t` iff `s` properly extends `t`, or they first
/// differ at a position where `s` is smaller.
pub fn kb_less(s: &Node, t: &Node) -> bool {
    if s.extends(t) {
        return true;
    }
    match s.0.iter().zip(&t.0).find(|(a, b)| a != b) {
        Some((a, b)) => a < b,
        None => false,
    }
}

/// A finite prefix-closed set of nodes.
#[derive(Debug, Default)]
pub struct FinTree {
    nodes: BTreeSet<Node>,
    ranks: OnceLock<BTreeMap<Node, usize>>,
}

impl Clone for FinTree {
    fn clone(&self) -> Self {
        FinTree { nodes: self.nodes.clone(), ranks: OnceLock::new() }
    }
}

impl PartialEq for FinTree {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for FinTree {}

impl FinTree {
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> Result<Self, TreeError> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        for n in &nodes {
            if let Some(p) = n.parent() {
                if !nodes.contains(&p) {
                    return Err(TreeError::NotPrefixClosed(n.clone()));
                }
            }
        }
        Ok(FinTree { nodes, ranks: OnceLock::new() })
    }

    /// The prefix closure of the given nodes.
    pub fn closure(nodes: impl IntoIterator<Item = Node>) -> Self {
        let mut all = BTreeSet::new();
        for n in nodes {
            for k in 0..=n.0.len() {
                all.insert(Node(n.0[..k].to_vec()));
            }
        }
        FinTree { nodes: all, ranks: OnceLock::new() }
    }

    pub fn single() -> Self {
        FinTree::new([Node::root()]).unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in canonical (lexicographic) order, root first.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn contains(&self, n: &Node) -> bool {
        self.nodes.contains(n)
    }

    pub fn children(&self, n: &Node) -> Vec<Node> {
        let lo = n.child(0);
        self.nodes
            .range(lo..)
            .take_while(|m| m.0.starts_with(&n.0))
            .filter(|m| m.0.len() == n.0.len() + 1)
            .cloned()
            .collect()
    }

    pub fn depth(&self) -> Option<usize> {
        self.nodes.iter().map(Node::depth).max()
    }

    /// `T_n`, the nodes at depth `n`.
    pub fn level(&self, n: usize) -> Vec<&Node> {
        self.nodes.iter().filter(|m| m.depth() == n).collect()
    }

    fn rank_table(&self) -> &BTreeMap<Node, usize> {
        self.ranks.get_or_init(|| {
            let mut ranks: BTreeMap<Node, usize> = BTreeMap::new();
            // deeper nodes first, so children are ranked before parents
            let mut by_depth: Vec<&Node> = self.nodes.iter().collect();
            by_depth.sort_by_key(|n| std::cmp::Reverse(n.depth()));
            for n in by_depth {
                let r = self.children(n).iter().map(|c| ranks[c] + 1).max().unwrap_or(0);
                ranks.insert(n.clone(), r);
            }
            ranks
        })
    }

    /// Rank of a node: 0 at leaves, otherwise the least natural above all child ranks.
    pub fn rank_of(&self, n: &Node) -> Result<usize, TreeError> {
        self.rank_table().get(n).copied().ok_or_else(|| TreeError::NodeAbsent(n.clone()))
    }

    /// `rk(T)`, the rank of the root.
    pub fn rank(&self) -> Result<usize, TreeError> {
        self.rank_of(&Node::root()).map_err(|_| TreeError::Empty)
    }

    /// Presentation over `{Root/1, C/2}` with elements numbered in canonical node order.
    pub fn to_structure(&self) -> (FinStructure, Vec<Node>) {
        let names: Vec<Node> = self.nodes.iter().cloned().collect();
        let index: BTreeMap<&Node, Elem> = names.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut root = BTreeSet::new();
        let mut child = BTreeSet::new();
        for (i, n) in names.iter().enumerate() {
            match n.parent() {
                None => {
                    root.insert(vec![i]);
                }
                Some(p) => {
                    child.insert(vec![index[&p], i]);
                }
            }
        }
        let st = FinStructure::from_tables(tree_signature(), names.len(), vec![root, child]).unwrap();
        (st, names)
    }

    /// AHU-style canonical string; equal iff the rooted trees are isomorphic.
    pub fn canonical_form(&self) -> String {
        fn go(t: &FinTree, n: &Node) -> String {
            let mut parts: Vec<String> = t.children(n).iter().map(|c| go(t, c)).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
        if self.is_empty() {
            String::new()
        } else {
            go(self, &Node::root())
        }
    }
}

impl fmt::Display for FinTree {
    /// One node literal per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            writeln!(f, "{n}")?;
        }
        Ok(())
    }
}

/// `{Root/1, C/2}`: a marked root and the parent-to-child relation.
pub fn tree_signature() -> Signature {
    Signature::new([("Root", 1), ("C", 2)]).unwrap()
}

/// Rank of `node` in `t`.
pub fn tree_rank(t: &FinTree, node: &Node) -> Result<usize, TreeError> {
    t.rank_of(node)
}

/// Kleene–Brouwer linearization as a structure over `{</2}`. Element `i` is the
/// `i`-th node in canonical order; `names` maps elements back to nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbOrder {
    pub order: FinStructure,
    pub names: Vec<Node>,
}

impl KbOrder {
    /// Nodes listed from least to greatest.
    pub fn listing(&self) -> Vec<&Node> {
        let mut elems: Vec<Elem> = (0..self.names.len()).collect();
        // number of predecessors determines the position in a linear order
        elems.sort_by_key(|&e| (0..self.names.len()).filter(|&d| self.order.holds(0, &[d, e])).count());
        elems.into_iter().map(|e| &self.names[e]).collect()
    }
}

pub fn kb_order(t: &FinTree) -> Result<KbOrder, TreeError> {
    if t.is_empty() {
        return Err(TreeError::Empty);
    }
    let names: Vec<Node> = t.nodes().cloned().collect();
    let mut table = BTreeSet::new();
    for (i, s) in names.iter().enumerate() {
        for (j, u) in names.iter().enumerate() {
            if kb_less(s, u) {
                table.insert(vec![i, j]);
            }
        }
    }
    let order = FinStructure::from_tables(Signature::order(), names.len(), vec![table]).unwrap();
    Ok(KbOrder { order, names })
}

/// Outcome of the homogeneity check at witness count `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub k: u64,
    pub holds: bool,
    /// A node lacking `k` successors of some rank, with that rank.
    pub violation: Option<(Node, usize)>,
}

pub fn homogeneity_report(t: &FinTree, k: u64) -> Result<HomogeneityReport, TreeError> {
    if k == 0 {
        return Err(TreeError::ZeroWitness);
    }
    let depth = t.depth().unwrap_or(0);
    for n in 0..depth {
        let next: BTreeSet<usize> = t.level(n + 1).into_iter().map(|b| t.rank_of(b).unwrap()).collect();
        for a in t.level(n) {
            let ra = t.rank_of(a)?;
            let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
            for c in t.children(a) {
                *counts.entry(t.rank_of(&c)?).or_default() += 1;
            }
            for &alpha in next.iter().filter(|&&al| al < ra) {
                if counts.get(&alpha).copied().unwrap_or(0) < k {
                    return Ok(HomogeneityReport { k, holds: false, violation: Some((a.clone(), alpha)) });
                }
            }
        }
    }
    Ok(HomogeneityReport { k, holds: true, violation: None })
}

/// Finite rank-homogeneity: "infinitely many successors" read as "at least `k`".
pub fn is_rank_homogeneous(t: &FinTree, k: u64) -> Result<bool, TreeError> {
    homogeneity_report(t, k).map(|r| r.holds)
}

/// Every plane tree with at most `max_nodes` nodes (children numbered
/// consecutively from 0), in a fixed order.
pub fn plane_trees(max_nodes: usize) -> Vec<FinTree> {
    // shapes as child-count sequences in preorder
    fn shapes(n: usize) -> Vec<Vec<usize>> {
        // a forest of `k` trees with `n` nodes total, in preorder
        fn forests(n: usize, k: usize, memo: &mut BTreeMap<(usize, usize), Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
            if let Some(v) = memo.get(&(n, k)) {
                return v.clone();
            }
            let out = if k == 0 {
                if n == 0 { vec![Vec::new()] } else { Vec::new() }
            } else if n < k {
                Vec::new()
            } else {
                let mut out = Vec::new();
                // first tree: root with c children using m nodes in total
                for m in 1..=n - (k - 1) {
                    for c in 0..m {
                        for first in forests(m - 1, c, memo) {
                            for rest in forests(n - m, k - 1, memo) {
                                let mut s = vec![c];
                                s.extend(&first);
                                s.extend(rest);
                                out.push(s);
                            }
                        }
                    }
                }
                out
            };
            memo.insert((n, k), out.clone());
            out
        }
        forests(n, 1, &mut BTreeMap::new())
    }
    fn build(seq: &[usize]) -> FinTree {
        let mut nodes = Vec::new();
        let mut pos = 0;
        fn go(seq: &[usize], pos: &mut usize, at: Node, nodes: &mut Vec<Node>) {
            let c = seq[*pos];
            *pos += 1;
            nodes.push(at.clone());
            for i in 0..c {
                go(seq, pos, at.child(i as u32), nodes);
            }
        }
        go(seq, &mut pos, Node::root(), &mut nodes);
        FinTree::new(nodes).unwrap()
    }
    (1..=max_nodes).flat_map(shapes).map(|s| build(&s)).collect()
}

/// One representative per isomorphism type of rooted tree with at most `max_nodes` nodes.
pub fn rooted_tree_types(max_nodes: usize) -> Vec<FinTree> {
    let mut seen = BTreeSet::new();
    plane_trees(max_nodes).into_iter().filter(|t| seen.insert(t.canonical_form())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(lits: &[&str]) -> FinTree {
        FinTree::new(lits.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn rank_examples() {
        let t = tree(&[".", "0"]);
        assert_eq!(tree_rank(&t, &"0".parse().unwrap()).unwrap(), 0);
        assert_eq!(t.rank().unwrap(), 1);
        let t = tree(&[".", "0", "1", "1/0"]);
        assert_eq!(t.rank().unwrap(), 2);
        assert!(matches!(tree_rank(&t, &"5".parse().unwrap()), Err(TreeError::NodeAbsent(_))));
    }

    #[test]
    fn prefix_closure_enforced() {
        assert!(matches!(FinTree::new(["0/1".parse().unwrap()]), Err(TreeError::NotPrefixClosed(_))));
        assert_eq!(FinTree::closure(["0/1".parse().unwrap()]).len(), 3);
        assert!(FinTree::new(Vec::new()).unwrap().is_empty());
    }

    #[test]
    fn node_literals() {
        assert_eq!("0/1/0".parse::<Node>().unwrap(), Node(vec![0, 1, 0]));
        assert_eq!(".".parse::<Node>().unwrap(), Node::root());
        assert_eq!(Node(vec![3, 4]).to_string(), "3/4");
        assert!("0//1".parse::<Node>().is_err());
    }

    #[test]
    fn kb_examples() {
        let kb = kb_order(&FinTree::single()).unwrap();
        assert_eq!(kb.order.size(), 1);
        let t = tree(&[".", "0", "1"]);
        let kb = kb_order(&t).unwrap();
        let listing: Vec<String> = kb.listing().iter().map(|n| n.to_string()).collect();
        assert_eq!(listing, vec!["0", "1", "."]);
        assert_eq!(kb_order(&FinTree::default()), Err(TreeError::Empty));
    }

    #[test]
    fn homogeneity_examples() {
        assert!(is_rank_homogeneous(&FinTree::single(), 3).unwrap());
        // root -> children of ranks 0,0,1; the rank-1 child has one leaf, k = 2
        let t = tree(&[".", "0", "1", "2", "2/0"]);
        let r = homogeneity_report(&t, 2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.k, 2);
        // perfect binary tree of depth 2
        let t = FinTree::closure(["0/0", "0/1", "1/0", "1/1"].iter().map(|s| s.parse().unwrap()));
        assert!(is_rank_homogeneous(&t, 2).unwrap());
        assert!(!is_rank_homogeneous(&t, 3).unwrap());
        assert_eq!(is_rank_homogeneous(&t, 0), Err(TreeError::ZeroWitness));
    }

    #[test]
    fn generator_counts() {
        // Catalan numbers C_{n-1}
        let counts: Vec<usize> = (1..=6).map(|n| plane_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9, 23, 65]);
        // rooted unlabeled trees: 1, 1, 2, 4, 9, 20
        assert_eq!(rooted_tree_types(6).len(), 1 + 1 + 2 + 4 + 9 + 20);
    }

    #[test]
    fn structure_presentation() {
        let (st, names) = tree(&[".", "0", "1"]).to_structure();
        assert_eq!(names[0], Node::root());
        assert!(st.holds(0, &[0]));
        assert_eq!(st.table(1).len(), 2);
    }
}
