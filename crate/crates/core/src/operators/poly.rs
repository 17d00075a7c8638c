//! Sparse multivariate polynomials and rational functions over the rationals,
//! with variables named by naturals. Rational functions are kept reduced with
//! a monic denominator, so equal functions have equal representations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::logic::Name;

pub type Var = Name;

/// A power product, as `(variable, exponent)` pairs with increasing variables
/// and positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial::power(v, 1)
    }

    /// `v^e`; the unit monomial when `e` is zero.
    pub fn power(v: Var, e: u32) -> Self {
        Monomial(if e == 0 { Vec::new() } else { vec![(v, e)] })
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m: BTreeMap<Var, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *m.entry(v).or_default() += e;
        }
        Monomial(m.into_iter().collect())
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m: BTreeMap<Var, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            let slot = m.get_mut(&v)?;
            *slot = slot.checked_sub(e)?;
            if *slot == 0 {
                m.remove(&v);
            }
        }
        Some(Monomial(m.into_iter().collect()))
    }

    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    /// Lexicographic term order with larger variables more significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut a, mut b) = (self.0.iter().rev().peekable(), other.0.iter().rev().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va != vb {
                        return va.cmp(&vb);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn one() -> Self {
        Poly::int(1)
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            let mut row = BTreeMap::new();
            for (mb, cb) in &other.terms {
                row.insert(ma.mul(mb), ca * cb);
            }
            out = out.add(&Poly { terms: row });
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Leading term in the lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Scaled so that the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }

    fn max_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(|m| m.0.last().map(|&(v, _)| v)).max()
    }

    fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficient of `v^d`, as a polynomial free of `v`.
    fn coeff_in(&self, v: Var, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == d)
                .map(|(m, c)| (m.without(v), c.clone()))
                .collect(),
        }
    }

    fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&lm)?;
            let t = Poly::term(m, rc / &lc);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `g` as polynomials in `v`.
    fn prem(&self, g: &Poly, v: Var) -> Poly {
        let dg = g.degree_in(v);
        let lg = g.coeff_in(v, dg);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let shift = if dr > dg { Monomial(vec![(v, dr - dg)]) } else { Monomial::one() };
            r = r.mul(&lg).sub(&g.mul(&lr).mul_monomial(&shift));
        }
        r
    }

    /// Content in `v` (gcd of the coefficients) and the primitive part.
    fn content_primitive(&self, v: Var) -> (Poly, Poly) {
        let mut content = Poly::zero();
        for d in 0..=self.degree_in(v) {
            let c = self.coeff_in(v, d);
            if !c.is_zero() {
                content = gcd(&content, &c);
            }
        }
        let prim = self.div_exact(&content).expect("content divides");
        (content, prim)
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let v = match (a.max_var(), b.max_var()) {
        (None, None) => return Poly::one(),
        (x, y) => x.max(y).unwrap(),
    };
    let (ca, pa) = a.content_primitive(v);
    let (cb, pb) = b.content_primitive(v);
    let content = gcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    while !g.is_zero() {
        let r = f.prem(&g, v);
        f = g;
        g = if r.is_zero() { r } else { r.content_primitive(v).1 };
    }
    let prim = f.content_primitive(v).1;
    content.mul(&prim).monic()
}

fn coef_cost(c: &BigRational) -> u64 {
    let n: u64 = c.numer().abs().try_into().unwrap_or(u64::MAX);
    let d: u64 = c.denom().try_into().unwrap_or(u64::MAX);
    n.saturating_add(d) - 1
}

impl Poly {
    /// `Σ (|num| + den − 1 + 2·degree)` over the terms.
    pub fn cost(&self) -> u64 {
        self.terms.iter().map(|(m, c)| coef_cost(c) + 2 * m.degree() as u64).sum()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|&(v, e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
                .collect();
            match (a.is_one(), vars.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (false, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `num / den` in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Option<RatFn> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFn::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let lc = den.leading().unwrap().1.recip();
        Some(RatFn { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn zero() -> RatFn {
        RatFn::poly(Poly::zero())
    }

    pub fn one() -> RatFn {
        RatFn::poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.den == other.den {
            return RatFn::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFn::new(num, self.den.mul(&other.den)).unwrap()
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.den.is_one() && other.den.is_one() {
            return RatFn::poly(self.num.mul(&other.num));
        }
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn inv(&self) -> Option<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone()).filter(|_| !self.is_zero())
    }

    /// Numerator cost, plus the denominator cost when it is not 1.
    pub fn cost(&self) -> u64 {
        self.num.cost() + if self.den.is_one() { 0 } else { self.den.cost() }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(v: Var) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn gcd_examples() {
        // (x0 + x1)(x0 - 1) and (x0 + x1)(x1 + 2)
        let common = x(0).add(&x(1));
        let a = common.mul(&x(0).sub(&Poly::one()));
        let b = common.mul(&x(1).add(&Poly::int(2)));
        assert_eq!(gcd(&a, &b), common.monic());
        assert_eq!(gcd(&x(0), &x(1)), Poly::one());
        assert_eq!(gcd(&Poly::int(6), &Poly::int(4)), Poly::one());
        let sq = x(0).mul(&x(0)).sub(&Poly::one());
        assert_eq!(gcd(&sq, &x(0).add(&Poly::one())), x(0).add(&Poly::one()));
    }

    #[test]
    fn ratfn_normal_form() {
        // (x0^2 - 1)/(2x0 + 2) = (x0 - 1)/2
        let n = x(0).mul(&x(0)).sub(&Poly::one());
        let d = x(0).scale(&BigRational::from_integer(2.into())).add(&Poly::int(2));
        let r = RatFn::new(n, d).unwrap();
        assert!(r.den().is_one());
        assert_eq!(r.num().to_string(), "1/2*x0 - 1/2");
        assert!(RatFn::new(Poly::one(), Poly::zero()).is_none());
        let inv = RatFn::poly(x(3)).inv().unwrap();
        assert_eq!(inv.mul(&RatFn::poly(x(3))), RatFn::one());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 0..4).prop_map(|ts| {
            ts.into_iter().fold(Poly::zero(), |acc, (c, e0, e1)| {
                let mut m = Vec::new();
                if e0 > 0 {
                    m.push((0, e0));
                }
                if e1 > 0 {
                    m.push((1, e1));
                }
                acc.add(&Poly::term(Monomial(m), BigRational::from_integer(c.into())))
            })
        })
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let (ac, bc) = (a.mul(&c), b.mul(&c));
            let g = gcd(&ac, &bc);
            if !g.is_zero() {
                prop_assert!(ac.div_exact(&g).is_some());
                prop_assert!(bc.div_exact(&g).is_some());
                if !c.is_zero() {
                    prop_assert!(g.div_exact(&c).is_some());
                }
            }
        }

        #[test]
        fn ratfn_field_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assume!(!b.is_zero());
            let r = RatFn::new(a.clone(), b.clone()).unwrap();
            let s = RatFn::poly(c);
            prop_assert_eq!(r.add(&s).add(&s.neg()), r.clone());
            if !r.is_zero() {
                prop_assert_eq!(r.mul(&r.inv().unwrap()), RatFn::one());
            }
            // equal functions get equal forms
            let scaled = RatFn::new(a.mul(&b), b.mul(&b)).unwrap();
            prop_assert_eq!(scaled, r);
        }
    }
}
