//! Ordinals below ω^ω in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("exponents must be strictly decreasing and coefficients positive")]
    NotNormal,
    #[error("ordinal arithmetic overflowed the representation")]
    Overflow,
    #[error("cannot parse ordinal `{0}`")]
    Parse(String),
}

/// `ω^e1·c1 + … + ω^ek·ck` with `e1 > … > ek` and every `ci > 0`; zero is the empty sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal { terms: vec![(1, 1)] }
    }

    /// `ω·n`
    pub fn omega_times(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(1, n)] }
        }
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        let decreasing = terms.windows(2).all(|w| w[0].0 > w[1].0);
        if !decreasing || terms.iter().any(|&(_, c)| c == 0) {
            return Err(OrdinalError::NotNormal);
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    /// Nonzero with no finite tail.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e > 0)
    }

    pub fn add(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(&(lead, lead_coef)) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().take_while(|&(e, _)| e > lead).collect();
        let carried = self.terms.iter().find(|&&(e, _)| e == lead).map_or(0, |&(_, c)| c);
        let merged = carried.checked_add(lead_coef).ok_or(OrdinalError::Overflow)?;
        terms.push((lead, merged));
        terms.extend(other.terms.iter().skip(1).copied());
        Ok(Ordinal { terms })
    }

    pub fn mul(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(&(lead, lead_coef)) = self.terms.first() else {
            return Ok(Ordinal::zero());
        };
        let mut acc = Ordinal::zero();
        for &(e, c) in &other.terms {
            let piece = if e > 0 {
                let exp = lead.checked_add(e).ok_or(OrdinalError::Overflow)?;
                Ordinal { terms: vec![(exp, c)] }
            } else {
                // self · c: the leading coefficient scales, the tail survives once
                let mut terms = vec![(lead, lead_coef.checked_mul(c).ok_or(OrdinalError::Overflow)?)];
                terms.extend(self.terms.iter().skip(1).copied());
                Ordinal { terms }
            };
            acc = acc.add(&piece)?;
        }
        Ok(acc)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    /// Accepts sums of `n`, `w`, `w*c`, `w^e`, `w^e*c`; terms in any order are
    /// added left to right as ordinals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrdinalError::Parse(s.to_string());
        let mut acc = Ordinal::zero();
        for term in s.split('+').map(str::trim) {
            if term.is_empty() {
                return Err(bad());
            }
            let piece = if let Some(rest) = term.strip_prefix('w') {
                let (exp, coef) = match rest.split_once('*') {
                    Some((e, c)) => (e, c.trim().parse::<u64>().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                let exp = match exp.trim() {
                    "" => 1,
                    e => e.strip_prefix('^').ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?,
                };
                if coef == 0 {
                    Ordinal::zero()
                } else {
                    Ordinal { terms: vec![(exp, coef)] }
                }
            } else {
                Ordinal::nat(term.parse::<u64>().map_err(|_| bad())?)
            };
            acc = acc.add(&piece)?;
        }
        Ok(acc)
    }
}
