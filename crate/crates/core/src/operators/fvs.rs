//! Linear orders to rational vector spaces: an order on `S` maps to the span
//! of basis vectors indexed by `S`, presented as an additive group.
//!
//! Image elements are integer vectors `c` with support in `S`. The complexity
//! of `c` is `Σ |c_k|·(k+1)` over element names `k`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{decode_naturals, encode_naturals, unzigzag, zigzag, Budget, EnumOperator, FactSet, OperatorError};
use crate::logic::{Name, Signature};

pub type Vector = BTreeMap<Name, i128>;

#[derive(Debug, Clone, Copy, Default)]
pub struct FloToFvs;

pub fn flo_to_fvs() -> FloToFvs {
    FloToFvs
}

fn plus_signature() -> Signature {
    Signature::new([("Plus", 3)]).unwrap()
}

fn complexity(v: &Vector) -> u128 {
    v.iter().map(|(&k, &c)| c.unsigned_abs().saturating_mul(k.saturating_add(1))).fold(0, u128::saturating_add)
}

fn encode_vector(v: &Vector) -> Result<Name, OperatorError> {
    let flat: Vec<u128> = v.iter().flat_map(|(&k, &c)| [k, zigzag(c)]).collect();
    encode_naturals(&flat)
}

/// Inverse of the element naming used by [`flo_to_fvs`].
pub fn decode_vector(code: Name) -> Option<Vector> {
    let flat = decode_naturals(code)?;
    if flat.len() % 2 != 0 {
        return None;
    }
    let v: Vector = flat.chunks(2).map(|p| (p[0], unzigzag(p[1]))).collect();
    let canonical = v.len() * 2 == flat.len()
        && v.values().all(|&c| c != 0)
        && flat.chunks(2).zip(flat.chunks(2).skip(1)).all(|(a, b)| a[0] < b[0]);
    canonical.then_some(v)
}

/// All vectors over `support` with complexity at most `budget`.
fn vectors(support: &[Name], budget: u32) -> Vec<Vector> {
    fn go(support: &[Name], left: u128, cur: &mut Vector, out: &mut Vec<Vector>) {
        let Some((&k, rest)) = support.split_first() else {
            out.push(cur.clone());
            return;
        };
        go(rest, left, cur, out);
        let w = k.saturating_add(1);
        let max = (left / w) as i128;
        for c in (1..=max).flat_map(|c| [c, -c]) {
            cur.insert(k, c);
            go(rest, left - c.unsigned_abs() * w, cur, out);
            cur.remove(&k);
        }
    }
    let mut out = Vec::new();
    go(support, budget as u128, &mut Vector::new(), &mut out);
    out
}

fn add(u: &Vector, v: &Vector) -> Vector {
    let mut w = u.clone();
    for (&k, &c) in v {
        let e = w.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            w.remove(&k);
        }
    }
    w
}

fn check_linear_order(f: &FactSet) -> Result<(), OperatorError> {
    let bad = |msg: String| Err(OperatorError::NotALinearOrder(msg));
    let less = |x: Name, y: Name| f.holds(0, &[x, y]);
    let universe: Vec<Name> = f.universe().into_iter().collect();
    for &x in &universe {
        if less(x, x) == Some(true) {
            return bad(format!("{x} < {x}"));
        }
        for &y in universe.iter().filter(|&&y| y != x) {
            match (less(x, y), less(y, x)) {
                (Some(true), Some(true)) => return bad(format!("{x} < {y} and {y} < {x}")),
                (Some(false), Some(false)) => return bad(format!("{x} and {y} incomparable")),
                _ => {}
            }
            for &z in &universe {
                if less(x, y) == Some(true) && less(y, z) == Some(true) && less(x, z) == Some(false) {
                    return bad(format!("{x} < {y} < {z} but not {x} < {z}"));
                }
            }
        }
    }
    Ok(())
}

impl EnumOperator for FloToFvs {
    fn name(&self) -> &'static str {
        "flo-fvs"
    }

    fn input_signature(&self) -> Signature {
        Signature::order()
    }

    fn output_signature(&self) -> Signature {
        plus_signature()
    }

    fn transform(&self, input: &FactSet, budget: Budget) -> Result<FactSet, OperatorError> {
        check_linear_order(input)?;
        let support: Vec<Name> = input.universe().into_iter().collect();
        let elems = vectors(&support, budget.level());
        let codes = elems.iter().map(encode_vector).collect::<Result<Vec<_>, _>>()?;
        let index: BTreeMap<&Vector, usize> = elems.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut out = FactSet::new(plus_signature());
        for (i, u) in elems.iter().enumerate() {
            for (j, v) in elems.iter().enumerate() {
                if let Some(&k) = index.get(&add(u, v)) {
                    out.insert_at(0, vec![codes[i], codes[j], codes[k]], true)?;
                }
            }
        }
        let small: Vec<usize> = (0..elems.len()).filter(|&i| complexity(&elems[i]) <= budget.half() as u128).collect();
        for &i in &small {
            for &j in &small {
                let sum = add(&elems[i], &elems[j]);
                for &k in &small {
                    if elems[k] != sum {
                        out.insert_at(0, vec![codes[i], codes[j], codes[k]], false)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Size of a largest independent set among the decoded elements of complexity
/// at most `budget` mentioned in the fragment.
pub fn fvs_dimension(fragment: &FactSet, budget: Budget) -> Result<usize, OperatorError> {
    if fragment.signature() != &plus_signature() {
        return Err(OperatorError::MalformedFragment("expected signature {Plus/3}".into()));
    }
    let mut rows: Vec<Vector> = Vec::new();
    for code in fragment.universe() {
        let v = decode_vector(code)
            .ok_or_else(|| OperatorError::MalformedFragment(format!("{code} is not a vector code")))?;
        if complexity(&v) <= budget.level() as u128 {
            rows.push(v);
        }
    }
    Ok(rank(&rows))
}

/// Rank over the rationals by Gaussian elimination.
fn rank(rows: &[Vector]) -> usize {
    let cols: Vec<Name> = rows.iter().flat_map(|r| r.keys().copied()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| cols.iter().map(|k| BigRational::from_integer(r.get(k).copied().unwrap_or(0).into())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for c in col..cols.len() {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    debug_assert!(m.iter().skip(rank).all(|r| r.iter().all(|x| x.abs().is_zero())));
    rank
}
