//! Level rank profiles, the thinness surrogate, profile-based isomorphism and
//! realization of profiles by rank-homogeneous trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{is_rank_homogeneous, FinTree, Node, Ordinal, TreeError};

/// How often a rank occurs at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Exact(u64),
    /// At least this many; the finite stand-in for "infinitely many".
    AtLeast(u64),
}

impl Multiplicity {
    fn truncate(self, k: u64) -> Multiplicity {
        match self {
            Multiplicity::Exact(n) if n >= k => Multiplicity::AtLeast(k),
            Multiplicity::AtLeast(n) if n >= k => Multiplicity::AtLeast(k),
            m => m,
        }
    }

    /// The stated count, whether exact or a lower bound.
    pub fn count(self) -> u64 {
        match self {
            Multiplicity::Exact(n) | Multiplicity::AtLeast(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEntry {
    pub rank: Ordinal,
    pub multiplicity: Multiplicity,
}

/// The ranks present at one depth. `blocks` are symbolic entries `<λ`
/// standing for every ordinal below the limit `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Level {
    pub entries: Vec<RankEntry>,
    pub blocks: Vec<Ordinal>,
}

impl Level {
    pub fn rank_set(&self) -> BTreeSet<&Ordinal> {
        self.entries.iter().map(|e| &e.rank).collect()
    }

    /// Order type of the rank set: the largest block `λ` absorbs every point
    /// below it, and each distinct point at or above `λ` adds one.
    pub fn order_type(&self) -> Ordinal {
        let top = self.blocks.iter().max().cloned().unwrap_or_default();
        let above = self.rank_set().into_iter().filter(|r| **r >= top).count();
        top.add(&Ordinal::nat(above as u64)).expect("point count fits")
    }

    fn truncated(&self, k: u64) -> BTreeMap<Ordinal, Multiplicity> {
        let mut m: BTreeMap<Ordinal, u64> = BTreeMap::new();
        let mut open = BTreeSet::new();
        for e in &self.entries {
            *m.entry(e.rank.clone()).or_default() += e.multiplicity.count();
            if matches!(e.multiplicity, Multiplicity::AtLeast(_)) {
                open.insert(e.rank.clone());
            }
        }
        m.into_iter()
            .map(|(r, n)| {
                let mult = if open.contains(&r) { Multiplicity::AtLeast(n) } else { Multiplicity::Exact(n) };
                (r, mult.truncate(k))
            })
            .collect()
    }
}

/// Per-depth rank multisets, level 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelRankProfile {
    pub levels: Vec<Level>,
}

impl LevelRankProfile {
    fn validate(&self) -> Result<(), TreeError> {
        for (n, level) in self.levels.iter().enumerate() {
            if level.entries.iter().any(|e| e.multiplicity.count() == 0) {
                return Err(TreeError::MalformedProfile(format!("zero multiplicity at level {n}")));
            }
            if let Some(b) = level.blocks.iter().find(|b| !b.is_limit()) {
                return Err(TreeError::MalformedProfile(format!("block bound {b} at level {n} is not a limit")));
            }
        }
        Ok(())
    }
}

pub fn rank_profile(t: &FinTree) -> LevelRankProfile {
    let mut levels: Vec<BTreeMap<usize, u64>> = Vec::new();
    for n in t.nodes() {
        if levels.len() <= n.depth() {
            levels.resize(n.depth() + 1, BTreeMap::new());
        }
        *levels[n.depth()].entry(t.rank_of(n).unwrap()).or_default() += 1;
    }
    let levels = levels
        .into_iter()
        .map(|m| Level {
            entries: m
                .into_iter()
                .map(|(r, c)| RankEntry { rank: Ordinal::nat(r as u64), multiplicity: Multiplicity::Exact(c) })
                .collect(),
            blocks: Vec::new(),
        })
        .collect();
    LevelRankProfile { levels }
}

/// Each level's order type is at most `ω·n`; level 0 is allowed a single rank.
pub fn is_thin_profile(p: &LevelRankProfile) -> Result<bool, TreeError> {
    p.validate()?;
    Ok(p.levels.iter().enumerate().all(|(n, level)| {
        let bound = if n == 0 { Ordinal::nat(1) } else { Ordinal::omega_times(n as u64) };
        level.order_type() <= bound
    }))
}

/// Result of comparing two profiles with multiplicities truncated at `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileComparison {
    pub k: u64,
    pub matches: bool,
}

/// Compares levelwise rank multisets truncated at `k`. Both trees must be
/// rank-homogeneous at `k`.
pub fn iso_by_profile(t: &FinTree, u: &FinTree, k: u64) -> Result<ProfileComparison, TreeError> {
    for tree in [t, u] {
        if !is_rank_homogeneous(tree, k)? {
            return Err(TreeError::NotHomogeneous(k));
        }
    }
    let (pt, pu) = (rank_profile(t), rank_profile(u));
    let matches = pt.levels.len() == pu.levels.len()
        && pt.levels.iter().zip(&pu.levels).all(|(a, b)| a.truncated(k) == b.truncated(k));
    Ok(ProfileComparison { k, matches })
}

/// Builds a tree of the given depth realizing the rank sets of `p` on levels
/// `0..=depth`: each node of rank `r` at level `n` receives `k` children of
/// every rank below `r` present at level `n+1`.
pub fn build_rank_homogeneous(p: &LevelRankProfile, k: u64, depth: usize) -> Result<FinTree, TreeError> {
    if k == 0 {
        return Err(TreeError::ZeroWitness);
    }
    p.validate()?;
    let unreal = |msg: String| Err(TreeError::Unrealizable(msg));
    if p.levels.len() <= depth {
        return unreal(format!("profile has {} levels, depth {depth} needs {}", p.levels.len(), depth + 1));
    }
    let mut sets: Vec<BTreeSet<u64>> = Vec::new();
    for (n, level) in p.levels[..=depth].iter().enumerate() {
        if !level.blocks.is_empty() {
            return unreal(format!("level {n} has a symbolic block"));
        }
        let mut set = BTreeSet::new();
        for r in level.rank_set() {
            match r.as_nat() {
                Some(v) => set.insert(v),
                None => return unreal(format!("rank {r} at level {n} is infinite")),
            };
        }
        sets.push(set);
    }
    if sets[0].len() != 1 {
        return unreal("level 0 must hold exactly one rank".into());
    }
    for n in 0..=depth {
        let below = sets.get(n + 1);
        for &r in &sets[n] {
            // rank r needs a child of rank r-1 and nothing at or above r
            let ok = r == 0 || below.is_some_and(|s| s.contains(&(r - 1)));
            if !ok {
                return unreal(format!("rank {r} at level {n} has no child of rank {}", r.saturating_sub(1)));
            }
        }
        if let Some(next) = below {
            let top = *sets[n].iter().max().unwrap_or(&0);
            if let Some(bad) = next.iter().find(|&&s| s >= top) {
                return unreal(format!("rank {bad} at level {} is not below any rank at level {n}", n + 1));
            }
            if next.is_empty() && n < depth {
                return unreal(format!("level {} is empty", n + 1));
            }
        }
    }
    let mut nodes = vec![Node::root()];
    let mut frontier = vec![(Node::root(), *sets[0].first().unwrap())];
    for n in 0..depth {
        let mut next = Vec::new();
        for (node, r) in frontier {
            let mut c = 0u32;
            for &s in sets[n + 1].range(..r) {
                for _ in 0..k {
                    let child = node.child(c);
                    c += 1;
                    nodes.push(child.clone());
                    next.push((child, s));
                }
            }
        }
        frontier = next;
    }
    let tree = FinTree::new(nodes)?;
    debug_assert!(is_rank_homogeneous(&tree, k)?);
    Ok(tree)
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(n) => write!(f, "x{n}"),
            Multiplicity::AtLeast(n) => write!(f, "x>={n}"),
        }
    }
}

impl fmt::Display for LevelRankProfile {
    /// One line per level: `n: entry, entry, …` with entries `ORD xN`,
    /// `ORD x>=N` or `<ORD`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, level) in self.levels.iter().enumerate() {
            let mut parts: Vec<String> =
                level.entries.iter().map(|e| format!("{} {}", e.rank, e.multiplicity)).collect();
            parts.extend(level.blocks.iter().map(|b| format!("<{b}")));
            writeln!(f, "{n}: {}", parts.join(", "))?;
        }
        Ok(())
    }
}

impl FromStr for LevelRankProfile {
    type Err = TreeError;

    /// Parses the `Display` format. A bare `ORD` means multiplicity one; `#`
    /// starts a comment; levels must appear in order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut levels = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| TreeError::MalformedProfile(format!("line {}: {msg}", lineno + 1));
            let (idx, rest) = line.split_once(':').ok_or_else(|| bad("expected `level: entries`"))?;
            let idx: usize = idx.trim().parse().map_err(|_| bad("bad level index"))?;
            if idx != levels.len() {
                return Err(bad("levels must be numbered 0, 1, 2, … in order"));
            }
            let mut level = Level::default();
            for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
                if let Some(b) = item.strip_prefix('<') {
                    level.blocks.push(b.trim().parse()?);
                    continue;
                }
                let (ord, mult) = match item.rsplit_once('x') {
                    Some((o, m)) if !o.trim().is_empty() && !m.contains('^') && !m.contains('*') => {
                        let m = m.trim();
                        let mult = match m.strip_prefix(">=") {
                            Some(n) => Multiplicity::AtLeast(n.trim().parse().map_err(|_| bad("bad multiplicity"))?),
                            None => Multiplicity::Exact(m.parse().map_err(|_| bad("bad multiplicity"))?),
                        };
                        (o, mult)
                    }
                    _ => (item, Multiplicity::Exact(1)),
                };
                level.entries.push(RankEntry { rank: ord.trim().parse()?, multiplicity: mult });
            }
            levels.push(level);
        }
        let p = LevelRankProfile { levels };
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backforth::iso;
    use crate::trees::rooted_tree_types;

    fn tree(lits: &[&str]) -> FinTree {
        FinTree::new(lits.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn profile_examples() {
        let p = rank_profile(&FinTree::single());
        assert_eq!(p.to_string(), "0: 0 x1\n");
        let p = rank_profile(&tree(&[".", "0", "1"]));
        assert_eq!(p.to_string(), "0: 1 x1\n1: 0 x2\n");
        assert_eq!(p.to_string().parse::<LevelRankProfile>().unwrap(), p);
        assert!(rank_profile(&FinTree::default()).levels.is_empty());
    }

    #[test]
    fn parse_forms() {
        let p: LevelRankProfile = "0: w^2 + 1\n1: w*3 x>=2, 4 x3, <w*2 # note\n".parse().unwrap();
        assert_eq!(p.levels[1].entries[0].multiplicity, Multiplicity::AtLeast(2));
        assert_eq!(p.levels[1].blocks, vec![Ordinal::omega_times(2)]);
        assert!("1: 0".parse::<LevelRankProfile>().is_err());
        assert!("0: <5".parse::<LevelRankProfile>().is_err());
        assert!("0: 3 x0".parse::<LevelRankProfile>().is_err());
    }

    #[test]
    fn thinness() {
        for t in rooted_tree_types(7) {
            assert!(is_thin_profile(&rank_profile(&t)).unwrap());
        }
        assert!(is_thin_profile(&LevelRankProfile::default()).unwrap());
        let p: LevelRankProfile = "0: w*3\n1: <w*2\n".parse().unwrap();
        assert!(!is_thin_profile(&p).unwrap());
        let p: LevelRankProfile = "0: w*3\n1: <w\n2: <w, w*2 + 5\n".parse().unwrap();
        assert!(is_thin_profile(&p).unwrap());
        assert_eq!(p.levels[2].order_type(), "w + 1".parse().unwrap());
        let over: LevelRankProfile = "0: w*3\n1: <w, w*2\n".parse().unwrap();
        assert!(!is_thin_profile(&over).unwrap());
        assert!(!is_thin_profile(&"0: 1, 2\n".parse().unwrap()).unwrap());
    }

    #[test]
    fn build_examples() {
        let chain: LevelRankProfile = "0: 3\n1: 2\n2: 1\n3: 0\n".parse().unwrap();
        let path = build_rank_homogeneous(&chain, 1, 3).unwrap();
        assert_eq!(path.len(), 4);
        assert_eq!(path.depth(), Some(3));

        let p: LevelRankProfile = "0: 2\n1: 0, 1\n2: 0\n".parse().unwrap();
        let t = build_rank_homogeneous(&p, 2, 2).unwrap();
        assert!(is_rank_homogeneous(&t, 2).unwrap());
        let got = rank_profile(&t);
        for (a, b) in got.levels.iter().zip(&p.levels) {
            assert_eq!(a.rank_set(), b.rank_set());
        }
        assert_eq!(t.len(), 1 + 4 + 4);

        let bad: LevelRankProfile = "0: 1\n1: 1\n".parse().unwrap();
        assert!(matches!(build_rank_homogeneous(&bad, 1, 1), Err(TreeError::Unrealizable(_))));
        let gap: LevelRankProfile = "0: 2\n1: 0\n".parse().unwrap();
        assert!(matches!(build_rank_homogeneous(&gap, 1, 1), Err(TreeError::Unrealizable(_))));
    }

    fn brute_iso(t: &FinTree, u: &FinTree) -> bool {
        iso(&t.to_structure().0, &u.to_structure().0).unwrap().is_some()
    }

    fn qualifies(t: &FinTree, k: u64) -> bool {
        rank_profile(t).levels.iter().all(|l| l.entries.iter().all(|e| e.multiplicity.count() <= k))
    }

    #[test]
    fn iso_by_profile_matches_oracle() {
        let trees = rooted_tree_types(8);
        for k in 1..=3u64 {
            let homog: Vec<&FinTree> = trees.iter().filter(|t| is_rank_homogeneous(t, k).unwrap()).collect();
            for t in &homog {
                for u in &homog {
                    let cmp = iso_by_profile(t, u, k).unwrap();
                    assert_eq!(cmp.k, k);
                    if brute_iso(t, u) {
                        assert!(cmp.matches);
                    } else if qualifies(t, k) && qualifies(u, k) {
                        assert!(!cmp.matches, "{t}vs\n{u}");
                    }
                }
            }
        }
        let t = tree(&[".", "0", "1", "2", "2/0"]);
        assert_eq!(iso_by_profile(&t, &t, 2), Err(TreeError::NotHomogeneous(2)));
    }
}
