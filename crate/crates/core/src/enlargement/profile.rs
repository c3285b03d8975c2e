use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::filter::{IndexPredicate, SignCond};
use crate::ordinal::ExpRank;
use crate::poly::RatPoly;
use crate::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub value: Ordinal,
    /// Same value at the next larger window.
    pub certified: bool,
}

/// An ordinal-valued function of `n` given exponent by exponent: the
/// coefficient of `ω^e` is `coeffs[e](n)` for all `n ≥ start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymOrd {
    pub start: u64,
    pub coeffs: BTreeMap<ExpRank, RatPoly>,
}

impl SymOrd {
    pub fn coeff(&self, e: ExpRank) -> RatPoly {
        self.coeffs.get(&e).cloned().unwrap_or_else(RatPoly::zero)
    }

    pub fn exponents(&self) -> BTreeSet<ExpRank> {
        self.coeffs.iter().filter(|(_, p)| !p.is_zero()).map(|(e, _)| *e).collect()
    }

    /// Evaluation at `n`; `None` if some coefficient is not a natural number.
    pub fn eval(&self, n: u64) -> Option<Ordinal> {
        let mut terms = Vec::new();
        for (e, p) in &self.coeffs {
            let v = p.eval_u64(n);
            if !v.is_integer() || v.is_negative() {
                return None;
            }
            let c = v.to_integer().to_biguint()?;
            terms.push((*e, c));
        }
        Some(Ordinal::from_terms(terms))
    }

    pub fn nat_sum(&self, other: &SymOrd) -> SymOrd {
        let mut coeffs = self.coeffs.clone();
        for (e, p) in &other.coeffs {
            let sum = &coeffs.get(e).cloned().unwrap_or_else(RatPoly::zero) + p;
            coeffs.insert(*e, sum);
        }
        SymOrd { start: self.start.max(other.start), coeffs }
    }

    /// Exponent-wise difference polynomials `self - other`, highest first.
    pub fn differences(&self, other: &SymOrd) -> Vec<(ExpRank, RatPoly)> {
        let exps: BTreeSet<ExpRank> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        exps.into_iter().rev().map(|e| (e, &self.coeff(e) - &other.coeff(e))).collect()
    }

    /// `{n : self(n) ≤ other(n)}` compared lexicographically from the top.
    pub fn le_predicate(&self, other: &SymOrd) -> IndexPredicate {
        let diffs = self.differences(other);
        let mut alternatives = Vec::new();
        for i in 0..=diffs.len() {
            let mut conj: Vec<IndexPredicate> =
                diffs[..i].iter().map(|(_, p)| IndexPredicate::Sign(p.clone(), SignCond::Zero)).collect();
            if let Some((_, p)) = diffs.get(i) {
                conj.push(IndexPredicate::Sign(p.clone(), SignCond::Negative));
            }
            alternatives.push(IndexPredicate::and(conj));
        }
        IndexPredicate::or(alternatives)
    }
}

impl fmt::Display for SymOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(e, p)| match e {
                ExpRank::Finite(0) => format!("({p})"),
                ExpRank::Finite(1) => format!("w*({p})"),
                e => format!("w^{e}*({p})"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, " for n >= {}", self.start)
    }
}

/// Sampled hyperdistance `D(n) = d(x_n, y_n)` with an optional exact fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    /// Indexed by `n`; `None` where a wnode of the pair does not exist.
    pub samples: Vec<Option<Sample>>,
    pub fit: Option<SymOrd>,
}

impl DistanceProfile {
    pub fn certified(&self) -> bool {
        self.samples.iter().flatten().all(|s| s.certified)
    }

    pub fn value(&self, n: u64) -> Option<&Ordinal> {
        self.samples.get(n as usize)?.as_ref().map(|s| &s.value)
    }

    /// Last index of the sample window.
    pub fn end(&self) -> u64 {
        self.samples.len().saturating_sub(1) as u64
    }
}

/// Cross-check points held back from every interpolation.
pub const SPARE_POINTS: usize = 2;
const MAX_DEGREE: usize = 6;

/// Lowest-start exact per-exponent polynomial fit of a sample run.
pub fn fit_samples(samples: &[Option<Sample>]) -> Option<SymOrd> {
    let first = samples.iter().rposition(|s| s.is_none()).map_or(0, |i| i + 1);
    let values: Vec<&Ordinal> = samples[first..].iter().map(|s| &s.as_ref().unwrap().value).collect();
    let exps: BTreeSet<ExpRank> = values.iter().flat_map(|v| v.terms().iter().map(|(e, _)| *e)).collect();
    let len = values.len();
    for offset in 0..len.saturating_sub(SPARE_POINTS) {
        let start = (first + offset) as u64;
        let mut coeffs = BTreeMap::new();
        let ok = exps.iter().all(|&e| {
            let col: Vec<BigRational> =
                values[offset..].iter().map(|v| BigRational::from_integer(BigInt::from(v.coeff_at(e)))).collect();
            match RatPoly::fit_exact(start, &col, MAX_DEGREE, SPARE_POINTS) {
                Some(p) => {
                    if !p.is_zero() {
                        coeffs.insert(e, p);
                    }
                    true
                }
                None => false,
            }
        });
        if ok {
            return Some(SymOrd { start, coeffs });
        }
    }
    None
}

pub(crate) fn is_constant(p: &RatPoly) -> bool {
    p.degree().unwrap_or(0) == 0
}

pub(crate) fn constant_value(p: &RatPoly) -> BigRational {
    p.coeffs().first().cloned().unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::super::filter::decide;
    use super::*;

    fn s(text: &str) -> Option<Sample> {
        Some(Sample { value: text.parse().unwrap(), certified: true })
    }

    #[test]
    fn fits_affine_omega_coefficient() {
        let samples: Vec<_> = (0..8).map(|n| s(&format!("w*{n} + 2"))).collect();
        let fit = fit_samples(&samples).unwrap();
        assert_eq!(fit.start, 0);
        assert_eq!(fit.eval(20).unwrap(), "w*20 + 2".parse().unwrap());
        assert_eq!(fit.to_string(), "w*(n) + (2) for n >= 0");
    }

    #[test]
    fn fit_skips_irregular_prefix_and_missing_samples() {
        let mut samples = vec![None, s("7"), s("w")];
        samples.extend((3..10).map(|n| s(&format!("w^2*{}", n * n))));
        let fit = fit_samples(&samples).unwrap();
        assert_eq!(fit.start, 3);
        assert_eq!(fit.coeff(ExpRank::Finite(2)).degree(), Some(2));
        assert!(fit_samples(&[s("1"), s("w"), s("1"), s("w")]).is_none());
    }

    #[test]
    fn lexicographic_comparison() {
        let a = fit_samples(&(0..6).map(|n| s(&format!("w*{n}"))).collect::<Vec<_>>()).unwrap();
        let b = fit_samples(&(0..6).map(|n| s(&format!("w*{n} + 1"))).collect::<Vec<_>>()).unwrap();
        assert!(decide(&a.le_predicate(&b), 10).is_in());
        assert!(decide(&b.le_predicate(&a), 10).is_out());
        assert!(decide(&a.le_predicate(&a), 10).is_in());
        assert_eq!(a.nat_sum(&b).eval(3).unwrap(), "w*6 + 1".parse().unwrap());
    }
}
