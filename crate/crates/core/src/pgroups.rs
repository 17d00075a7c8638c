//! Finite Abelian p-groups and their Ulm sequences.
//!
//! A group is given either as a partition (the exponents of its cyclic
//! summands) or as an explicit element set. The Ulm sequence is computed from
//! both, independently, so that Ulm's classification can be checked rather
//! than assumed.

use std::fmt;

use thiserror::Error;

/// Default limit on explicit groups: `|G| ≤ p^8`.
pub const DEFAULT_MAX_LOG: u32 = 8;

/// Size limit below which `iso_groups` confirms with a generator search.
const GENERATOR_SEARCH_MAX_LOG: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PGroupError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parts must be positive")]
    ZeroPart,
    #[error("group of order {p}^{log} exceeds the limit {p}^{max}")]
    TooLarge { p: u64, log: u32, max: u32 },
    #[error("groups over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `⊕ Z_{p^λ}` over the parts, kept in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    p: u64,
    parts: Vec<u32>,
}

impl Partition {
    /// Parts may be given in any order; they are sorted.
    pub fn new(p: u64, mut parts: Vec<u32>) -> Result<Self, PGroupError> {
        if !is_prime(p) {
            return Err(PGroupError::NotPrime(p));
        }
        if parts.contains(&0) {
            return Err(PGroupError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { p, parts })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `log_p |G|`
    pub fn log_order(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn explicit(&self) -> ExplicitPGroup {
        ExplicitPGroup { p: self.p, exponents: self.parts.clone() }
    }

    /// All partitions over `p` with `Σλ ≤ max_log`, the trivial group included.
    pub fn all_up_to(p: u64, max_log: u32) -> Result<Vec<Partition>, PGroupError> {
        fn go(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(cur.clone());
            for part in (1..=cap.min(rest)).rev() {
                cur.push(part);
                go(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(max_log, max_log, &mut Vec::new(), &mut out);
        out.into_iter().map(|parts| Partition::new(p, parts)).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "p={} parts={}", self.p, parts.join(","))
    }
}

/// Elements are tuples `(a_1, …, a_r)` with `a_i` mod `p^{λ_i}`, packed into a
/// mixed-radix index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPGroup {
    p: u64,
    exponents: Vec<u32>,
}

impl ExplicitPGroup {
    /// Summands in the given order, which need not be sorted.
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self, PGroupError> {
        if !is_prime(p) {
            return Err(PGroupError::NotPrime(p));
        }
        if exponents.contains(&0) {
            return Err(PGroupError::ZeroPart);
        }
        Ok(ExplicitPGroup { p, exponents })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn check_size(&self, max_log: u32) -> Result<usize, PGroupError> {
        let log = self.log_order();
        if log > max_log {
            return Err(PGroupError::TooLarge { p: self.p, log, max: max_log });
        }
        Ok(self.p.pow(log) as usize)
    }

    fn moduli(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| self.p.pow(e)).collect()
    }

    fn decode(&self, mut x: usize) -> Vec<u64> {
        self.moduli()
            .iter()
            .map(|&m| {
                let d = x as u64 % m;
                x /= m as usize;
                d
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> usize {
        let mut x = 0usize;
        for (&c, &m) in coords.iter().zip(&self.moduli()).rev() {
            x = x * m as usize + c as usize;
        }
        x
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let sum: Vec<u64> = a.iter().zip(&b).zip(&self.moduli()).map(|((u, v), m)| (u + v) % m).collect();
        self.encode(&sum)
    }

    pub fn scale(&self, n: u64, x: usize) -> usize {
        let a = self.decode(x);
        let out: Vec<u64> = a.iter().zip(&self.moduli()).map(|(u, m)| (u * (n % m)) % m).collect();
        self.encode(&out)
    }

    /// `log_p` of the order of `x`.
    pub fn order_log(&self, x: usize) -> u32 {
        let mut y = x;
        let mut k = 0;
        while y != 0 {
            y = self.scale(self.p, y);
            k += 1;
        }
        k
    }

    /// Number of elements of each order `p^k`, indexed by `k`.
    pub fn order_statistics(&self) -> Result<Vec<u64>, PGroupError> {
        let n = self.check_size(DEFAULT_MAX_LOG)?;
        let mut stats = vec![0u64; self.exponents.iter().max().map_or(1, |&m| m as usize + 1)];
        for x in 0..n {
            stats[self.order_log(x) as usize] += 1;
        }
        Ok(stats)
    }
}

/// `u_k` for `k = 0 .. length-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UlmSequence {
    pub u: Vec<u64>,
}

impl UlmSequence {
    pub fn length(&self) -> usize {
        self.u.len()
    }

    /// `Σ u_k·(k+1)`, which equals `log_p |G|`.
    pub fn weight(&self) -> u64 {
        self.u.iter().enumerate().map(|(k, &u)| u * (k as u64 + 1)).sum()
    }
}

impl fmt::Display for UlmSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.u.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `u_k` counts the parts equal to `k+1`.
pub fn ulm_from_partition(g: &Partition) -> UlmSequence {
    let mut u = vec![0u64; group_length(g) as usize];
    for &part in &g.parts {
        u[part as usize - 1] += 1;
    }
    UlmSequence { u }
}

/// The largest part; zero for the trivial group.
pub fn group_length(g: &Partition) -> u32 {
    g.parts.first().copied().unwrap_or(0)
}

/// Walks `G_0 = G`, `G_{k+1} = p·G_k` on explicit elements, with `P_k` the
/// elements of `G_k` of order at most `p`.
pub fn ulm_bruteforce(g: &ExplicitPGroup) -> Result<UlmSequence, PGroupError> {
    ulm_bruteforce_bounded(g, DEFAULT_MAX_LOG)
}

pub fn ulm_bruteforce_bounded(g: &ExplicitPGroup, max_log: u32) -> Result<UlmSequence, PGroupError> {
    let n = g.check_size(max_log)?;
    let mut layer: Vec<bool> = vec![true; n];
    let mut socle_sizes: Vec<usize> = Vec::new();
    loop {
        let socle = (0..n).filter(|&x| layer[x] && g.scale(g.p, x) == 0).count();
        socle_sizes.push(socle);
        let size = layer.iter().filter(|&&b| b).count();
        if size == 1 {
            break;
        }
        let mut next = vec![false; n];
        for x in (0..n).filter(|&x| layer[x]) {
            next[g.scale(g.p, x)] = true;
        }
        let next_size = next.iter().filter(|&&b| b).count();
        assert!(next_size < size, "the chain must strictly decrease in a finite group");
        layer = next;
    }
    let log = |s: usize| (s as f64).log(g.p as f64).round() as u64;
    let u = socle_sizes.windows(2).map(|w| log(w[0]) - log(w[1])).collect();
    Ok(UlmSequence { u })
}

/// Decides isomorphism from element data alone: order statistics, confirmed
/// on small groups by searching for images of the standard generators.
pub fn iso_groups(g: &ExplicitPGroup, h: &ExplicitPGroup) -> Result<bool, PGroupError> {
    if g.p != h.p {
        return Err(PGroupError::PrimeMismatch(g.p, h.p));
    }
    if g.log_order() != h.log_order() {
        return Ok(false);
    }
    let same_stats = g.order_statistics()? == h.order_statistics()?;
    if !same_stats || g.log_order() > GENERATOR_SEARCH_MAX_LOG {
        return Ok(same_stats);
    }
    let found = generator_search(g, h);
    debug_assert!(found, "equal order statistics force isomorphism");
    Ok(found)
}

/// Looks for images `h_i` of the standard generators `e_i` of `g` with
/// `ord(h_i) | ord(e_i)` and the generated subgroup growing by `ord(e_i)` each step.
fn generator_search(g: &ExplicitPGroup, h: &ExplicitPGroup) -> bool {
    let n = h.p.pow(h.log_order()) as usize;
    let orders: Vec<u32> = (0..n).map(|x| h.order_log(x)).collect();
    fn go(g: &ExplicitPGroup, h: &ExplicitPGroup, orders: &[u32], i: usize, span: Vec<usize>) -> bool {
        let Some(&e) = g.exponents.get(i) else {
            return true;
        };
        let step = h.p.pow(e) as usize;
        for (y, &o) in orders.iter().enumerate() {
            if o != e {
                continue;
            }
            // span + <y> must have size |span|·p^e, i.e. <y> meets span trivially
            let mut grown = Vec::with_capacity(span.len() * step);
            let mut multiple = 0;
            for _ in 0..step {
                for &s in &span {
                    grown.push(h.add(s, multiple));
                }
                multiple = h.add(multiple, y);
            }
            grown.sort_unstable();
            grown.dedup();
            if grown.len() == span.len() * step && go(g, h, orders, i + 1, grown) {
                return true;
            }
        }
        false
    }
    go(g, h, &orders, 0, vec![0])
}

/// For every pair of partitions over `p` with `Σλ ≤ max_log`, checks
/// `iso_groups` against equality of Ulm sequences.
pub fn ulm_theorem_check(p: u64, max_log: u32) -> Result<bool, PGroupError> {
    if max_log > DEFAULT_MAX_LOG {
        return Err(PGroupError::TooLarge { p, log: max_log, max: DEFAULT_MAX_LOG });
    }
    let parts = Partition::all_up_to(p, max_log)?;
    let groups: Vec<(ExplicitPGroup, UlmSequence)> =
        parts.iter().map(|g| (g.explicit(), ulm_from_partition(g))).collect();
    for (g, ug) in &groups {
        for (h, uh) in &groups {
            if iso_groups(g, h)? != (ug == uh) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: u64, parts: &[u32]) -> Partition {
        Partition::new(p, parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(ulm_from_partition(&part(5, &[1])).u, vec![1]);
        assert_eq!(ulm_from_partition(&part(2, &[2, 1])).u, vec![1, 1]);
        assert_eq!(ulm_from_partition(&part(3, &[3, 3, 1])).u, vec![1, 0, 2]);
        assert_eq!(group_length(&part(3, &[1, 3, 3])), 3);
        assert_eq!(part(2, &[1, 2]).to_string(), "p=2 parts=2,1");
        assert_eq!(Partition::new(4, vec![1]), Err(PGroupError::NotPrime(4)));
        assert_eq!(Partition::new(2, vec![0]), Err(PGroupError::ZeroPart));
    }

    #[test]
    fn bruteforce_examples() {
        let z2 = ExplicitPGroup::new(2, vec![1]).unwrap();
        assert_eq!(ulm_bruteforce(&z2).unwrap().u, vec![1]);
        let g = ExplicitPGroup::new(2, vec![2, 1]).unwrap();
        assert_eq!(ulm_bruteforce(&g).unwrap().u, vec![1, 1]);
        let z27 = ExplicitPGroup::new(3, vec![3]).unwrap();
        assert_eq!(ulm_bruteforce(&z27).unwrap().u, vec![0, 0, 1]);
        let trivial = ExplicitPGroup::new(2, vec![]).unwrap();
        assert!(ulm_bruteforce(&trivial).unwrap().u.is_empty());
        let big = ExplicitPGroup::new(2, vec![5, 4]).unwrap();
        assert!(matches!(ulm_bruteforce(&big), Err(PGroupError::TooLarge { .. })));
    }

    #[test]
    fn partition_count() {
        // p(0) + … + p(6)
        assert_eq!(Partition::all_up_to(2, 6).unwrap().len(), 1 + 1 + 2 + 3 + 5 + 7 + 11);
    }

    #[test]
    fn two_paths_agree() {
        for p in [2, 3] {
            for g in Partition::all_up_to(p, 6).unwrap() {
                let fast = ulm_from_partition(&g);
                let slow = ulm_bruteforce(&g.explicit()).unwrap();
                assert_eq!(fast, slow, "{g}");
                assert_eq!(fast.weight(), g.log_order() as u64);
                assert_eq!(fast.length(), group_length(&g) as usize);
            }
        }
    }

    #[test]
    fn reordered_summands() {
        let a = ExplicitPGroup::new(2, vec![2, 1]).unwrap();
        let b = ExplicitPGroup::new(2, vec![1, 2]).unwrap();
        assert!(iso_groups(&a, &b).unwrap());
        assert_eq!(ulm_bruteforce(&a).unwrap(), ulm_bruteforce(&b).unwrap());
        let z4 = ExplicitPGroup::new(2, vec![2]).unwrap();
        let v4 = ExplicitPGroup::new(2, vec![1, 1]).unwrap();
        assert!(!iso_groups(&z4, &v4).unwrap());
        let z3 = ExplicitPGroup::new(3, vec![1]).unwrap();
        assert_eq!(iso_groups(&z4, &z3), Err(PGroupError::PrimeMismatch(2, 3)));
    }

    #[test]
    fn iso_matches_partition_equality() {
        let all = Partition::all_up_to(2, 6).unwrap();
        for g in &all {
            for h in &all {
                assert_eq!(iso_groups(&g.explicit(), &h.explicit()).unwrap(), g == h, "{g} vs {h}");
            }
        }
    }

    #[test]
    fn theorem_small_cases() {
        assert!(ulm_theorem_check(2, 1).unwrap());
        assert!(ulm_theorem_check(2, 4).unwrap());
        assert!(ulm_theorem_check(3, 4).unwrap());
        assert!(ulm_theorem_check(2, 9).is_err());
    }
}
