//! Ordinals below `ω^(ω+1)` in Cantor normal form.
//!
//! Addition is always the natural (Hessenberg) sum: coefficients of equal
//! exponents are added. The matching partial difference subtracts
//! coefficient-wise and is undefined when some coefficient would go negative.
//!
//! [`Cnf`] is generic over the coefficient type; [`crate::Ordinal`] fixes it to
//! arbitrary-precision naturals.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{CheckedSub, One, Unsigned, Zero};

use crate::error::ParseError;

/// Exponent of a CNF term: a natural number or `ω` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpRank {
    Finite(u64),
    Omega,
}

impl ExpRank {
    pub fn succ(self) -> Option<ExpRank> {
        match self {
            ExpRank::Finite(k) => Some(ExpRank::Finite(k + 1)),
            ExpRank::Omega => None,
        }
    }
}

impl fmt::Display for ExpRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpRank::Finite(k) => write!(f, "{k}"),
            ExpRank::Omega => write!(f, "w"),
        }
    }
}

impl FromStr for ExpRank {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "w" || s == "ω" {
            return Ok(ExpRank::Omega);
        }
        s.parse::<u64>().map(ExpRank::Finite).map_err(|_| ParseError::new(format!("bad exponent `{s}`"), 0))
    }
}

/// Natural-number coefficient type usable inside [`Cnf`].
pub trait Coefficient:
    Clone + Ord + Hash + fmt::Debug + fmt::Display + Zero + One + Unsigned + CheckedSub + FromStr
{
    fn from_u64(v: u64) -> Self;
    /// Saturating conversion, used only for diagnostics and schedule scans.
    fn to_u64_saturating(&self) -> u64;
}

impl Coefficient for u64 {
    fn from_u64(v: u64) -> Self {
        v
    }
    fn to_u64_saturating(&self) -> u64 {
        *self
    }
}

impl Coefficient for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn to_u64_saturating(&self) -> u64 {
        u64::try_from(self).unwrap_or(u64::MAX)
    }
}

/// An ordinal `ω^e1·c1 ⊕ … ⊕ ω^ek·ck` with `e1 > … > ek` and every `ci ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf<C> {
    terms: Vec<(ExpRank, C)>,
}

impl<C: Coefficient> Default for Cnf<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Cnf<C> {
    pub fn zero() -> Self {
        Cnf { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_natural(n: u64) -> Self {
        Self::omega_pow_scaled(ExpRank::Finite(0), C::from_u64(n))
    }

    /// The single-term ordinal `ω^exp · mu` (zero when `mu = 0`).
    pub fn omega_pow_scaled(exp: ExpRank, mu: C) -> Self {
        if mu.is_zero() {
            Self::zero()
        } else {
            Cnf { terms: vec![(exp, mu)] }
        }
    }

    pub fn omega_pow(exp: ExpRank) -> Self {
        Self::omega_pow_scaled(exp, C::one())
    }

    /// Builds an ordinal from arbitrary `(exponent, coefficient)` pairs,
    /// combining repeated exponents by addition and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (ExpRank, C)>>(terms: I) -> Self {
        let mut acc: std::collections::BTreeMap<ExpRank, C> = Default::default();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let slot = acc.entry(e).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        Cnf { terms: acc.into_iter().rev().collect() }
    }

    /// Terms in strictly decreasing exponent order.
    pub fn terms(&self) -> &[(ExpRank, C)] {
        &self.terms
    }

    pub fn leading_exp(&self) -> Option<ExpRank> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn coeff_at(&self, exp: ExpRank) -> C {
        self.terms.iter().find(|(e, _)| *e == exp).map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == ExpRank::Finite(0))
    }

    /// Hessenberg sum.
    pub fn nat_sum(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                Ordering::Greater => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((*ea, ca.clone() + cb.clone()));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Cnf { terms: out }
    }

    /// Coefficient-wise difference `self ⊖ other`; `None` when some
    /// coefficient of `other` exceeds the matching one of `self`.
    pub fn nat_diff(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        let mut j = 0;
        for (e, c) in &self.terms {
            let mut c = c.clone();
            if j < other.terms.len() && other.terms[j].0 > *e {
                return None;
            }
            if j < other.terms.len() && other.terms[j].0 == *e {
                c = c.checked_sub(&other.terms[j].1)?;
                j += 1;
            }
            if !c.is_zero() {
                out.push((*e, c));
            }
        }
        if j < other.terms.len() {
            return None;
        }
        Some(Cnf { terms: out })
    }

    /// True when `self ≤ ω^exp · mu`.
    pub fn le_omega_pow_scaled(&self, exp: ExpRank, mu: &C) -> bool {
        match self.terms.first() {
            None => true,
            Some((e, _)) if *e > exp => false,
            Some((e, c)) if *e == exp => c < mu || (c == mu && self.terms.len() == 1),
            Some(_) => !mu.is_zero(),
        }
    }

    /// Converts the coefficient type, e.g. from `u64` to `BigUint`.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Cnf<D> {
        Cnf { terms: self.terms.iter().map(|(e, c)| (*e, f(c))).collect() }
    }
}

impl<C: Coefficient> PartialOrd for Cnf<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Coefficient> Ord for Cnf<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl<C: Coefficient> Add for Cnf<C> {
    type Output = Cnf<C>;
    fn add(self, rhs: Self) -> Self::Output {
        self.nat_sum(&rhs)
    }
}

impl<'a, C: Coefficient> Add<&'a Cnf<C>> for &'a Cnf<C> {
    type Output = Cnf<C>;
    fn add(self, rhs: &'a Cnf<C>) -> Self::Output {
        self.nat_sum(rhs)
    }
}

impl<C: Coefficient> fmt::Display for Cnf<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                ExpRank::Finite(0) => write!(f, "{c}")?,
                ExpRank::Finite(1) => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> FromStr for Cnf<C> {
    type Err = ParseError;

    /// Accepts `w^e*c + … + c0`; `*c` may be omitted for coefficient 1 and
    /// terms may come in any order (they are combined by natural sum).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(ParseError::new("empty ordinal", 0));
        }
        let mut terms = Vec::new();
        let mut offset = 0;
        for raw in trimmed.split('+') {
            let col = offset + (raw.len() - raw.trim_start().len());
            offset += raw.len() + 1;
            let term = raw.trim();
            if term.is_empty() {
                return Err(ParseError::new("empty term", col));
            }
            terms.push(parse_term::<C>(term).map_err(|msg| ParseError::new(msg, col))?);
        }
        Ok(Cnf::from_terms(terms))
    }
}

fn parse_term<C: Coefficient>(term: &str) -> Result<(ExpRank, C), String> {
    let parse_coeff = |t: &str| t.trim().parse::<C>().map_err(|_| format!("bad coefficient `{}`", t.trim()));
    let Some(rest) = term.strip_prefix('w').or_else(|| term.strip_prefix('ω')) else {
        return Ok((ExpRank::Finite(0), parse_coeff(term)?));
    };
    let (exp_part, coeff_part) = match rest.split_once('*') {
        Some((e, c)) => (e.trim(), Some(c)),
        None => (rest.trim(), None),
    };
    let exp = if exp_part.is_empty() {
        ExpRank::Finite(1)
    } else if let Some(e) = exp_part.strip_prefix('^') {
        e.parse::<ExpRank>().map_err(|e| e.message)?
    } else {
        return Err(format!("unexpected `{exp_part}` after w"));
    };
    let coeff = match coeff_part {
        Some(c) => parse_coeff(c)?,
        None => C::one(),
    };
    Ok((exp, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Ord = Cnf<BigUint>;

    fn o(s: &str) -> Ord {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(o("w").cmp(&o("5")), Ordering::Greater);
        assert_eq!(Ord::zero().cmp(&Ord::zero()), Ordering::Equal);
        assert_eq!(o("w^2*3 + w").cmp(&o("w^2*3")), Ordering::Greater);
        assert!(o("w^w") > o("w^100*1000"));
    }

    #[test]
    fn natural_sum_examples() {
        assert_eq!(o("w*2 + 3").nat_sum(&o("w + 4")), o("w*3 + 7"));
        assert_eq!(o("w^2 + 1").nat_sum(&Ord::zero()), o("w^2 + 1"));
        let s = o("w^w").nat_sum(&o("w^2"));
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.to_string(), "w^w*1 + w^2*1");
    }

    #[test]
    fn natural_difference_examples() {
        assert_eq!(o("w*5 + 2").nat_diff(&o("w*2")), Some(o("w*3 + 2")));
        let x = o("w^3*2 + 7");
        assert_eq!(x.nat_diff(&x), Some(Ord::zero()));
        assert_eq!(o("w").nat_diff(&o("1")), None);
        assert_eq!(o("5").nat_diff(&o("w")), None);
    }

    #[test]
    fn constructors_and_read_off() {
        assert_eq!(Ord::omega_pow_scaled(ExpRank::Finite(2), 3u32.into()), o("w^2*3"));
        assert_eq!(Ord::omega_pow_scaled(ExpRank::Finite(0), 7u32.into()), o("7"));
        assert_eq!(Ord::omega_pow_scaled(ExpRank::Omega, 1u32.into()), o("w^w"));
        assert!(Ord::omega_pow_scaled(ExpRank::Omega, 0u32.into()).is_zero());
        assert_eq!(o("w^2*3 + 5").coeff_at(ExpRank::Finite(2)), 3u32.into());
        assert_eq!(Ord::zero().coeff_at(ExpRank::Omega), 0u32.into());
        assert_eq!(o("w + 4").coeff_at(ExpRank::Finite(0)), 4u32.into());
    }

    #[test]
    fn rendering() {
        assert_eq!(o("w^2*3 + w*1 + 4").to_string(), "w^2*3 + w*1 + 4");
        assert_eq!(o("w^w*2").to_string(), "w^w*2");
        assert_eq!(Ord::zero().to_string(), "0");
        assert_eq!(o("4 + w").to_string(), "w*1 + 4");
    }

    #[test]
    fn parse_errors_carry_column() {
        let err = "w*2 + w^x".parse::<Ord>().unwrap_err();
        assert_eq!(err.column, 6);
        assert!("".parse::<Ord>().is_err());
        assert!("w + + 1".parse::<Ord>().is_err());
    }

    #[test]
    fn u64_coefficients() {
        let a: Cnf<u64> = "w*2 + 1".parse().unwrap();
        let b = a.map_coeffs(|c| BigUint::from(*c));
        assert_eq!(b, o("w*2 + 1"));
    }
}
