//! Graphs to fields: a graph on `V` with edges `E` maps to
//! `K_G = Q(x_v : v ∈ V)(r_ij : ij ∈ E)` with `r_ij² = x_i + x_j`.
//!
//! Elements are kept as a map from square-free products of roots to reduced
//! rational functions. The complexity of an element sums, over its root
//! products `m` with coefficient `f`, the cost of `f` plus `2·|m|`; a
//! polynomial term with coefficient `p/q` and degree `d` costs
//! `|p| + q − 1 + 2d`, and a denominator other than 1 adds its own cost.
//! So `1` costs 1 while `x_v` and `r_ij` cost 3.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::{Monomial, Poly, RatFn, Var};
use super::{encode_naturals, zigzag, Budget, EnumOperator, FactSet, OperatorError};
use crate::logic::{Elem, FinStructure, LogicError, Name, Signature};

/// An unordered edge, stored with the smaller endpoint first.
pub type Edge = (Var, Var);

fn edge(i: Var, j: Var) -> Edge {
    (i.min(j), i.max(j))
}

/// `x_i + x_j`, the square of the root attached to an edge.
fn radicand(e: Edge) -> Poly {
    Poly::var(e.0).add(&Poly::var(e.1))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    terms: BTreeMap<BTreeSet<Edge>, RatFn>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement::default()
    }

    pub fn one() -> Self {
        FieldElement::from_ratfn(RatFn::one())
    }

    pub fn from_ratfn(f: RatFn) -> Self {
        FieldElement::from_terms([(BTreeSet::new(), f)])
    }

    pub fn rational(n: i64, d: i64) -> Self {
        let c = BigRational::new(BigInt::from(n), BigInt::from(d));
        FieldElement::from_ratfn(RatFn::poly(Poly::constant(c)))
    }

    pub fn var(v: Var) -> Self {
        FieldElement::from_ratfn(RatFn::poly(Poly::var(v)))
    }

    /// `r_ij`, whose square is `x_i + x_j`.
    pub fn root(i: Var, j: Var) -> Self {
        FieldElement::from_terms([(BTreeSet::from([edge(i, j)]), RatFn::one())])
    }

    fn from_terms(terms: impl IntoIterator<Item = (BTreeSet<Edge>, RatFn)>) -> Self {
        let mut out = FieldElement::zero();
        for (m, f) in terms {
            out.add_term(m, f);
        }
        out
    }

    fn add_term(&mut self, m: BTreeSet<Edge>, f: RatFn) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(g) => g.add(&f),
            None => f,
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, f) in &other.terms {
            out.add_term(m.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        FieldElement { terms: self.terms.iter().map(|(m, f)| (m.clone(), f.neg())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = FieldElement::zero();
        for (ma, fa) in &self.terms {
            for (mb, fb) in &other.terms {
                let mut f = fa.mul(fb);
                for &e in ma.intersection(mb) {
                    f = f.mul(&RatFn::poly(radicand(e)));
                }
                out.add_term(ma.symmetric_difference(mb).copied().collect(), f);
            }
        }
        out
    }

    /// Flips the sign of the root on `e`.
    fn conjugate(&self, e: Edge) -> Self {
        FieldElement {
            terms: self
                .terms
                .iter()
                .map(|(m, f)| (m.clone(), if m.contains(&e) { f.neg() } else { f.clone() }))
                .collect(),
        }
    }

    /// Multiplies by conjugates until no roots remain, then inverts in `Q(x)`.
    pub fn inv(&self) -> Option<Self> {
        let Some(&e) = self.terms.keys().flatten().next() else {
            let f = self.terms.get(&BTreeSet::new())?;
            return Some(FieldElement::from_ratfn(f.inv()?));
        };
        let c = self.conjugate(e);
        let reduced = self.mul(&c);
        debug_assert!(reduced.terms.keys().all(|m| !m.contains(&e)));
        Some(c.mul(&reduced.inv()?))
    }

    pub fn complexity(&self) -> u64 {
        self.terms.iter().map(|(m, f)| f.cost() + 2 * m.len() as u64).sum()
    }

    /// Injective name for the element.
    pub fn encode(&self) -> Result<Name, OperatorError> {
        fn big(x: &BigInt) -> Result<u128, OperatorError> {
            x.to_u128().ok_or(OperatorError::EncodingOverflow)
        }
        fn poly(p: &Poly, out: &mut Vec<u128>) -> Result<(), OperatorError> {
            out.push(p.len() as u128);
            for (m, c) in p.terms() {
                let n = c.numer().to_i128().ok_or(OperatorError::EncodingOverflow)?;
                out.extend([zigzag(n), big(c.denom())?, m.powers().len() as u128]);
                for &(v, e) in m.powers() {
                    out.extend([v, e as u128]);
                }
            }
            Ok(())
        }
        let mut seq = vec![self.terms.len() as u128];
        for (m, f) in &self.terms {
            seq.push(m.len() as u128);
            for &(i, j) in m {
                seq.extend([i, j]);
            }
            poly(f.num(), &mut seq)?;
            if f.den().is_one() {
                seq.push(0);
            } else {
                poly(f.den(), &mut seq)?;
            }
        }
        encode_naturals(&seq)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let roots: Vec<String> = m.iter().map(|(i, j)| format!("r{i}_{j}")).collect();
            if roots.is_empty() {
                write!(f, "{c}")?;
            } else if c.den().is_one() && c.num().is_one() {
                write!(f, "{}", roots.join("*"))?;
            } else {
                write!(f, "({c})*{}", roots.join("*"))?;
            }
        }
        Ok(())
    }
}

pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, OperatorError> {
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Inv => a.inv().ok_or(OperatorError::DivisionByZero),
    }
}

/// Nonzero rationals `p/q` with `|p| + q − 1 ≤ budget`.
fn coefficients(budget: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for q in 1..=budget as i64 {
        for p in 1..=(budget as i64 + 1 - q) {
            if p.gcd(&q) == 1 {
                for s in [p, -p] {
                    out.push(BigRational::new(s.into(), q.into()));
                }
            }
        }
    }
    out
}

/// Monomials over `vars` of degree exactly `d`.
fn monomials(vars: &[Var], d: u32) -> Vec<Monomial> {
    if d == 0 {
        return vec![Monomial::one()];
    }
    let Some((&v, rest)) = vars.split_first() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for e in 0..=d {
        for m in monomials(rest, d - e) {
            out.push(m.mul(&Monomial::power(v, e)));
        }
    }
    out
}

/// Nonzero polynomials over `vars` with cost at most `budget`.
fn polys(vars: &[Var], budget: u64) -> Vec<Poly> {
    let mut monos = Vec::new();
    for d in 0..=((budget.saturating_sub(1)) / 2) as u32 {
        monos.extend(monomials(vars, d));
    }
    let coefs = coefficients(budget);
    let mut out = Vec::new();
    fn go(
        monos: &[Monomial],
        coefs: &[BigRational],
        left: u64,
        cur: Poly,
        out: &mut Vec<Poly>,
    ) {
        let Some((m, rest)) = monos.split_first() else {
            if !cur.is_zero() {
                out.push(cur);
            }
            return;
        };
        go(rest, coefs, left, cur.clone(), out);
        for c in coefs {
            let t = Poly::term(m.clone(), c.clone());
            let cost = t.cost();
            if cost <= left {
                go(rest, coefs, left - cost, cur.add(&t), out);
            }
        }
    }
    go(&monos, &coefs, budget, Poly::zero(), &mut out);
    out
}

/// Reduced rational functions over `vars` with cost at most `budget`.
fn ratfns(vars: &[Var], budget: u64) -> Vec<RatFn> {
    let nums = polys(vars, budget);
    let dens: Vec<Poly> = nums.iter().filter(|p| p.as_constant().is_none() && p.monic() == **p).cloned().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in &nums {
        let room = budget - n.cost();
        let candidates = std::iter::once(RatFn::poly(n.clone()))
            .chain(dens.iter().filter(|d| d.cost() <= room).filter_map(|d| RatFn::new(n.clone(), d.clone())));
        for f in candidates {
            if f.cost() <= budget && seen.insert(f.clone()) {
                out.push(f);
            }
        }
    }
    out
}

/// Every element of `K_G` with complexity at most `budget`, zero first.
pub fn field_elements(vertices: &[Var], edges: &[Edge], budget: u32) -> Vec<FieldElement> {
    let budget = budget as u64;
    let mut fns_by_room: BTreeMap<u64, Vec<RatFn>> = BTreeMap::new();
    let mut atoms: Vec<(BTreeSet<Edge>, RatFn, u64)> = Vec::new();
    // root products of size k cost 2k on top of a coefficient of cost at least 1
    for k in 0..=edges.len() {
        if 2 * k as u64 + 1 > budget {
            break;
        }
        let room = budget - 2 * k as u64;
        let fns = fns_by_room.entry(room).or_insert_with(|| ratfns(vertices, room)).clone();
        for mask in subsets(edges, k) {
            for f in &fns {
                let cost = f.cost() + 2 * k as u64;
                atoms.push((mask.clone(), f.clone(), cost));
            }
        }
    }
    let mut out = Vec::new();
    fn go(
        atoms: &[(BTreeSet<Edge>, RatFn, u64)],
        left: u64,
        used: &mut Vec<BTreeSet<Edge>>,
        cur: FieldElement,
        out: &mut Vec<FieldElement>,
    ) {
        out.push(cur.clone());
        for (i, (m, f, cost)) in atoms.iter().enumerate() {
            if *cost <= left && !used.contains(m) {
                used.push(m.clone());
                let mut next = cur.clone();
                next.add_term(m.clone(), f.clone());
                go(&atoms[i + 1..], left - cost, used, next, out);
                used.pop();
            }
        }
    }
    go(&atoms, budget, &mut Vec::new(), FieldElement::zero(), &mut out);
    out
}

fn subsets(edges: &[Edge], k: usize) -> Vec<BTreeSet<Edge>> {
    if k == 0 {
        return vec![BTreeSet::new()];
    }
    let Some((&e, rest)) = edges.split_first() else {
        return Vec::new();
    };
    let mut out: Vec<BTreeSet<Edge>> = subsets(rest, k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(e);
            s
        })
        .collect();
    out.extend(subsets(rest, k));
    out
}

/// Decides by exhaustive search whether some element of complexity at most
/// `budget` squares to `x_i + x_j`.
pub fn field_has_edge_root(g: &FinStructure, i: Elem, j: Elem, budget: Budget) -> Result<bool, OperatorError> {
    field_edge_root(g, i, j, budget).map(|r| r.is_some())
}

/// The first element of complexity at most `budget` squaring to `x_i + x_j`.
pub fn field_edge_root(
    g: &FinStructure,
    i: Elem,
    j: Elem,
    budget: Budget,
) -> Result<Option<FieldElement>, OperatorError> {
    if i == j {
        return Err(OperatorError::SameVertex);
    }
    if let Some(&v) = [i, j].iter().find(|&&v| v >= g.size()) {
        return Err(LogicError::NotASubset { elem: v, size: g.size() }.into());
    }
    let vertices: Vec<Var> = (0..g.size() as Var).collect();
    let edges: BTreeSet<Edge> =
        g.table(0).iter().filter(|t| t[0] != t[1]).map(|t| edge(t[0] as Var, t[1] as Var)).collect();
    let edges: Vec<Edge> = edges.into_iter().collect();
    let target = FieldElement::from_ratfn(RatFn::poly(radicand(edge(i as Var, j as Var))));
    Ok(field_elements(&vertices, &edges, budget.level()).into_iter().find(|e| e.mul(e) == target))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GraphToField;

pub fn graph_to_field() -> GraphToField {
    GraphToField
}

fn field_signature() -> Signature {
    Signature::new([("Plus", 3), ("Times", 3)]).unwrap()
}

/// Vertices and undirected edges of a presented graph fragment.
pub(crate) fn read_graph(input: &FactSet) -> Result<(Vec<Var>, Vec<Edge>), OperatorError> {
    let mut edges = BTreeSet::new();
    for args in input.positives(0) {
        let (a, b) = (args[0], args[1]);
        if a == b {
            return Err(OperatorError::NotAGraph(format!("loop at {a}")));
        }
        if input.holds(0, &[b, a]) == Some(false) {
            return Err(OperatorError::NotAGraph(format!("E {a} {b} without E {b} {a}")));
        }
        edges.insert(edge(a, b));
    }
    Ok((input.universe().into_iter().collect(), edges.into_iter().collect()))
}

impl EnumOperator for GraphToField {
    fn name(&self) -> &'static str {
        "graph-field"
    }

    fn input_signature(&self) -> Signature {
        Signature::graph()
    }

    fn output_signature(&self) -> Signature {
        field_signature()
    }

    fn transform(&self, input: &FactSet, budget: Budget) -> Result<FactSet, OperatorError> {
        let (vertices, edges) = read_graph(input)?;
        let elems = field_elements(&vertices, &edges, budget.level());
        let codes = elems.iter().map(FieldElement::encode).collect::<Result<Vec<_>, _>>()?;
        let index: HashMap<&FieldElement, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut out = FactSet::new(field_signature());
        for (i, u) in elems.iter().enumerate() {
            for (j, v) in elems.iter().enumerate() {
                for (rel, w) in [(0, u.add(v)), (1, u.mul(v))] {
                    if let Some(&k) = index.get(&w) {
                        out.insert_at(rel, vec![codes[i], codes[j], codes[k]], true)?;
                    }
                }
            }
        }
        let small: Vec<usize> =
            (0..elems.len()).filter(|&i| elems[i].complexity() <= budget.half() as u64).collect();
        for &i in &small {
            for &j in &small {
                let (sum, prod) = (elems[i].add(&elems[j]), elems[i].mul(&elems[j]));
                for &k in &small {
                    if elems[k] != sum {
                        out.insert_at(0, vec![codes[i], codes[j], codes[k]], false)?;
                    }
                    if elems[k] != prod {
                        out.insert_at(1, vec![codes[i], codes[j], codes[k]], false)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::apply_operator;

    fn x(v: Var) -> FieldElement {
        FieldElement::var(v)
    }

    #[test]
    fn arithmetic_examples() {
        let a = x(0).add(&FieldElement::root(0, 1));
        assert_eq!(field_arith(&a, &FieldElement::zero(), ArithOp::Add).unwrap(), a);
        let r = FieldElement::root(1, 0);
        assert_eq!(field_arith(&r, &r, ArithOp::Mul).unwrap(), x(0).add(&x(1)));
        let inv = field_arith(&x(0), &x(0), ArithOp::Inv).unwrap();
        assert_eq!(inv.mul(&x(0)), FieldElement::one());
        assert_eq!(field_arith(&FieldElement::zero(), &x(0), ArithOp::Inv), Err(OperatorError::DivisionByZero));
    }

    #[test]
    fn inverse_through_two_roots() {
        let a = FieldElement::one().add(&FieldElement::root(0, 1)).add(&FieldElement::root(1, 2).mul(&x(2)));
        assert_eq!(a.mul(&a.inv().unwrap()), FieldElement::one());
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(FieldElement::one().complexity(), 1);
        assert_eq!(x(3).complexity(), 3);
        assert_eq!(FieldElement::root(0, 1).complexity(), 3);
        assert_eq!(FieldElement::rational(1, 2).complexity(), 2);
        assert_eq!(x(0).inv().unwrap().complexity(), 4);
    }

    #[test]
    fn enumeration_is_closed_under_normal_forms() {
        let elems = field_elements(&[0, 1], &[(0, 1)], 3);
        let set: HashSet<&FieldElement> = elems.iter().collect();
        assert_eq!(set.len(), elems.len(), "no duplicates");
        assert!(elems.iter().all(|e| e.complexity() <= 3));
        assert!(set.contains(&FieldElement::root(0, 1)));
        assert!(set.contains(&x(1).neg()));
        let four = field_elements(&[0, 1], &[(0, 1)], 4);
        assert!(four.contains(&x(0).inv().unwrap()));
        assert!(elems.iter().all(|e| four.contains(e)));
    }

    #[test]
    fn edge_roots() {
        let single = FinStructure::from_tables(Signature::graph(), 2, vec![[vec![0, 1], vec![1, 0]].into()]).unwrap();
        assert!(field_has_edge_root(&single, 0, 1, Budget(3)).unwrap());
        assert!(!field_has_edge_root(&single, 0, 1, Budget(2)).unwrap());
        let empty = FinStructure::empty(Signature::graph(), 2);
        assert!(!field_has_edge_root(&empty, 0, 1, Budget(3)).unwrap());
        assert_eq!(field_has_edge_root(&empty, 1, 1, Budget(3)), Err(OperatorError::SameVertex));
    }

    #[test]
    fn single_edge_image_has_square_root() {
        let single = FinStructure::from_tables(Signature::graph(), 2, vec![[vec![0, 1], vec![1, 0]].into()]).unwrap();
        let img = apply_operator(&graph_to_field(), &FactSet::from_structure(&single), Budget(3)).unwrap();
        let t = FieldElement::root(0, 1).encode().unwrap();
        let s = x(0).add(&x(1)).encode().unwrap();
        assert_eq!(img.holds(1, &[t, t, s]), None, "x0+x1 has complexity 6, outside budget 3");
        let img = apply_operator(&graph_to_field(), &FactSet::from_structure(&single), Budget(6)).unwrap();
        assert_eq!(img.holds(1, &[t, t, s]), Some(true));
    }

    #[test]
    fn empty_graph_gives_rationals() {
        let img = apply_operator(&graph_to_field(), &FactSet::new(Signature::graph()), Budget(2)).unwrap();
        // 0, ±1, ±2, ±1/2
        assert_eq!(img.universe().len(), 7);
        let one = FieldElement::one().encode().unwrap();
        let two = FieldElement::rational(2, 1).encode().unwrap();
        assert_eq!(img.holds(0, &[one, one, two]), Some(true));
    }
}
