use std::collections::{BTreeMap, HashMap};

use super::{BackForthError, IsoWitness};
use crate::logic::{all_tuples, Elem, FinStructure};

/// Colour refinement run jointly on both structures so colour ids are comparable.
/// Elements with different colours can never correspond under an isomorphism.
fn joint_colours(a: &FinStructure, b: &FinStructure) -> (Vec<usize>, Vec<usize>) {
    let sides = [a, b];
    // initial colour: for every relation, the diagonal value and per-position degrees
    let mut colours: [Vec<usize>; 2] = [vec![0; a.size()], vec![0; b.size()]];
    let mut interner: HashMap<Vec<usize>, usize> = HashMap::new();
    for (s, st) in sides.iter().enumerate() {
        let sig = st.signature();
        let mut keys: Vec<Vec<usize>> = (0..st.size())
            .map(|x| {
                (0..sig.len())
                    .map(|r| st.holds(r, &vec![x; sig.arity(r)]) as usize)
                    .collect()
            })
            .collect();
        for r in 0..sig.len() {
            let ar = sig.arity(r);
            let mut deg = vec![vec![0usize; ar]; st.size()];
            for t in st.table(r) {
                for (p, &x) in t.iter().enumerate() {
                    deg[x][p] += 1;
                }
            }
            for x in 0..st.size() {
                keys[x].extend(deg[x].iter().copied());
            }
        }
        for (x, k) in keys.into_iter().enumerate() {
            let n = interner.len();
            colours[s][x] = *interner.entry(k).or_insert(n);
        }
    }
    loop {
        let before = interner.len();
        let mut next_interner: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next: [Vec<usize>; 2] = [vec![0; a.size()], vec![0; b.size()]];
        for (s, st) in sides.iter().enumerate() {
            let col = &colours[s];
            let mut sigs: Vec<Vec<usize>> = (0..st.size()).map(|x| vec![col[x]]).collect();
            let mut nbrs: Vec<Vec<Vec<usize>>> = vec![Vec::new(); st.size()];
            for r in 0..st.signature().len() {
                for t in st.table(r) {
                    for (p, &x) in t.iter().enumerate() {
                        let mut k = vec![r, p];
                        k.extend(t.iter().map(|&y| col[y]));
                        nbrs[x].push(k);
                    }
                }
            }
            for (x, mut ns) in nbrs.into_iter().enumerate() {
                ns.sort();
                for n in ns {
                    sigs[x].push(usize::MAX);
                    sigs[x].extend(n);
                }
            }
            for (x, k) in sigs.into_iter().enumerate() {
                let n = next_interner.len();
                next[s][x] = *next_interner.entry(k).or_insert(n);
            }
        }
        colours = next;
        interner = next_interner;
        if interner.len() == before {
            break;
        }
    }
    let [ca, cb] = colours;
    (ca, cb)
}

struct Matcher<'a> {
    a: &'a FinStructure,
    b: &'a FinStructure,
    ca: Vec<usize>,
    cb: Vec<usize>,
    map: Vec<Option<Elem>>,
    used: Vec<bool>,
    order: Vec<Elem>,
}

impl<'a> Matcher<'a> {
    fn new(a: &'a FinStructure, b: &'a FinStructure) -> Self {
        let (ca, cb) = joint_colours(a, b);
        Matcher {
            a,
            b,
            ca,
            cb,
            map: vec![None; a.size()],
            used: vec![false; b.size()],
            order: Vec::new(),
        }
    }

    /// Checks every atomic sentence over the already-mapped elements that mentions `x`.
    fn consistent(&self, x: Elem) -> bool {
        let sig = self.a.signature();
        let prev = &self.order;
        let mut ta = Vec::new();
        let mut tb = Vec::new();
        for r in 0..sig.len() {
            let ar = sig.arity(r);
            // positions holding `x` form a nonempty mask; the rest range over earlier elements
            for mask in 1u32..(1 << ar) {
                let free = ar - mask.count_ones() as usize;
                for rest in all_tuples(prev.len(), free) {
                    ta.clear();
                    let mut it = rest.iter();
                    for p in 0..ar {
                        if mask >> p & 1 == 1 {
                            ta.push(x);
                        } else {
                            ta.push(prev[*it.next().unwrap()]);
                        }
                    }
                    tb.clear();
                    tb.extend(ta.iter().map(|&y| self.map[y].unwrap()));
                    if self.a.holds(r, &ta) != self.b.holds(r, &tb) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, x: Elem, y: Elem) -> bool {
        if self.ca[x] != self.cb[y] || self.used[y] {
            return false;
        }
        self.map[x] = Some(y);
        if !self.consistent(x) {
            self.map[x] = None;
            return false;
        }
        self.used[y] = true;
        self.order.push(x);
        true
    }

    fn unassign(&mut self, x: Elem) {
        let y = self.map[x].take().unwrap();
        self.used[y] = false;
        self.order.pop();
    }

    /// Extends the current partial map; calls `visit` on every complete bijection
    /// in lexicographic order until it returns false.
    fn search(&mut self, next: Elem, visit: &mut dyn FnMut(&[Elem]) -> bool) -> bool {
        if next == self.a.size() {
            let full: Vec<Elem> = self.map.iter().map(|m| m.unwrap()).collect();
            return visit(&full);
        }
        if self.map[next].is_some() {
            return self.search(next + 1, visit);
        }
        for y in 0..self.b.size() {
            if self.assign(next, y) {
                let go_on = self.search(next + 1, visit);
                self.unassign(next);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn compatible(a: &FinStructure, b: &FinStructure) -> Result<bool, BackForthError> {
    if a.signature() != b.signature() {
        return Err(BackForthError::SignatureMismatch);
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    Ok((0..a.signature().len()).all(|r| a.table(r).len() == b.table(r).len()))
}

/// Lexicographically least isomorphism from `a` onto `b`, if one exists.
pub fn iso(a: &FinStructure, b: &FinStructure) -> Result<Option<IsoWitness>, BackForthError> {
    if !compatible(a, b)? {
        return Ok(None);
    }
    let mut m = Matcher::new(a, b);
    let mut found = None;
    m.search(0, &mut |f| {
        found = Some(f.to_vec());
        false
    });
    Ok(found.map(|bijection| IsoWitness { bijection }))
}

/// All automorphisms of `a`, in lexicographic order.
pub fn automorphisms(a: &FinStructure) -> Vec<Vec<Elem>> {
    let mut m = Matcher::new(a, a);
    let mut out = Vec::new();
    m.search(0, &mut |f| {
        out.push(f.to_vec());
        true
    });
    out
}

fn check_tuple(a: &FinStructure, t: &[Elem]) -> Result<(), BackForthError> {
    match t.iter().find(|&&x| x >= a.size()) {
        Some(&x) => Err(BackForthError::OutOfRange(x)),
        None => Ok(()),
    }
}

/// Whether some automorphism of `a` sends `x` to `y` pointwise.
pub fn automorphic(a: &FinStructure, x: &[Elem], y: &[Elem]) -> Result<bool, BackForthError> {
    if x.len() != y.len() {
        return Err(BackForthError::LengthMismatch(x.len(), y.len()));
    }
    check_tuple(a, x)?;
    check_tuple(a, y)?;
    let mut m = Matcher::new(a, a);
    let mut pinned: BTreeMap<Elem, Elem> = BTreeMap::new();
    for (&u, &v) in x.iter().zip(y) {
        if let Some(&w) = pinned.get(&u) {
            if w != v {
                return Ok(false);
            }
            continue;
        }
        pinned.insert(u, v);
        if !m.assign(u, v) {
            return Ok(false);
        }
    }
    let mut found = false;
    m.search(0, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// Orbits of `k`-tuples under the automorphism group. Each class is sorted and
/// classes are listed by their least member.
pub fn orbits(a: &FinStructure, k: usize) -> Vec<Vec<Vec<Elem>>> {
    let autos = automorphisms(a);
    let mut classes: BTreeMap<Vec<Elem>, Vec<Vec<Elem>>> = BTreeMap::new();
    for t in all_tuples(a.size(), k) {
        let rep = orbit_representative(&autos, &t);
        classes.entry(rep).or_default().push(t);
    }
    classes.into_values().collect()
}

/// Least image of `t` under a list of automorphisms (which must contain the identity).
pub(crate) fn orbit_representative(autos: &[Vec<Elem>], t: &[Elem]) -> Vec<Elem> {
    autos
        .iter()
        .map(|f| t.iter().map(|&x| f[x]).collect::<Vec<_>>())
        .min()
        .unwrap_or_else(|| t.to_vec())
}
