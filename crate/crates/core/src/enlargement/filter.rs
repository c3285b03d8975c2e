//! Three-valued stand-in for membership in a free ultrafilter.
//!
//! An index set is answered only when it is certified cofinite (every free
//! ultrafilter contains it) or finite (none does). Everything else is
//! reported as inconclusive.

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::RatPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    InFilter,
    OutFilter,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::InFilter => "InFilter",
            Verdict::OutFilter => "OutFilter",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// From here on the predicate follows `pattern`.
    pub start: u64,
    /// Last index cross-checked by direct evaluation.
    pub end: u64,
    pub pattern: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterDecision {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub note: Option<String>,
}

impl FilterDecision {
    pub fn inconclusive(note: impl Into<String>) -> Self {
        FilterDecision { verdict: Verdict::Inconclusive, certificate: None, note: Some(note.into()) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::InFilter
    }

    pub fn is_out(&self) -> bool {
        self.verdict == Verdict::OutFilter
    }
}

impl fmt::Display for FilterDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        if let Some(c) = &self.certificate {
            write!(f, " [n in {}..={}: {}]", c.start, c.end, c.pattern)?;
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

/// Sign conditions on `p(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignCond {
    Positive,
    Negative,
    Zero,
    NonNegative,
}

impl SignCond {
    fn holds(self, v: &BigRational) -> bool {
        match self {
            SignCond::Positive => v.is_positive(),
            SignCond::Negative => v.is_negative(),
            SignCond::Zero => v.is_zero(),
            SignCond::NonNegative => !v.is_negative(),
        }
    }
}

/// A predicate on the index `n` with decidable eventual behaviour, except
/// for [`IndexPredicate::Sampled`].
#[derive(Debug, Clone, PartialEq)]
pub enum IndexPredicate {
    Const(bool),
    AtLeast(u64),
    /// `n mod modulus ∈ residues`.
    Residue {
        modulus: u64,
        residues: Vec<u64>,
    },
    Sign(RatPoly, SignCond),
    Not(Box<IndexPredicate>),
    And(Vec<IndexPredicate>),
    Or(Vec<IndexPredicate>),
    /// Explicit values for `n < values.len()`, then `rest`.
    Prefix(Vec<bool>, Box<IndexPredicate>),
    /// Known values only; carries no eventual information.
    Sampled(Vec<bool>),
}

/// `from` onwards, the predicate at `n` is `pattern[n % pattern.len()]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventualPattern {
    pub from: u64,
    pub pattern: Vec<bool>,
}

impl EventualPattern {
    fn constant(from: u64, v: bool) -> Self {
        EventualPattern { from, pattern: vec![v] }
    }

    fn at(&self, i: u64) -> bool {
        self.pattern[(i % self.pattern.len() as u64) as usize]
    }

    fn combine(parts: Vec<EventualPattern>, f: impl Fn(&[bool]) -> bool) -> Self {
        let from = parts.iter().map(|p| p.from).max().unwrap_or(0);
        let period = parts.iter().fold(1u64, |acc, p| acc.lcm(&(p.pattern.len() as u64)));
        let pattern = (0..period).map(|i| f(&parts.iter().map(|p| p.at(i)).collect::<Vec<_>>())).collect();
        EventualPattern { from, pattern }.simplified()
    }

    fn simplified(mut self) -> Self {
        if self.pattern.iter().all(|&b| b == self.pattern[0]) {
            self.pattern.truncate(1);
        }
        self
    }

    fn describe(&self) -> String {
        match self.pattern.as_slice() {
            [true] => "always true".into(),
            [false] => "always false".into(),
            p => {
                let bits: String = p.iter().map(|&b| if b { '1' } else { '0' }).collect();
                format!("period {} pattern {bits}", p.len())
            }
        }
    }
}

impl IndexPredicate {
    pub fn and(parts: Vec<IndexPredicate>) -> Self {
        IndexPredicate::And(parts)
    }

    pub fn or(parts: Vec<IndexPredicate>) -> Self {
        IndexPredicate::Or(parts)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: IndexPredicate) -> Self {
        IndexPredicate::Not(Box::new(p))
    }

    pub fn eval(&self, n: u64) -> bool {
        match self {
            IndexPredicate::Const(b) => *b,
            IndexPredicate::AtLeast(k) => n >= *k,
            IndexPredicate::Residue { modulus, residues } => residues.contains(&(n % modulus)),
            IndexPredicate::Sign(p, c) => c.holds(&p.eval_u64(n)),
            IndexPredicate::Not(p) => !p.eval(n),
            IndexPredicate::And(ps) => ps.iter().all(|p| p.eval(n)),
            IndexPredicate::Or(ps) => ps.iter().any(|p| p.eval(n)),
            IndexPredicate::Prefix(vals, rest) => vals.get(n as usize).copied().unwrap_or_else(|| rest.eval(n)),
            IndexPredicate::Sampled(vals) => vals.get(n as usize).copied().unwrap_or(false),
        }
    }

    /// Eventual periodic behaviour, when it can be established symbolically.
    pub fn eventual(&self) -> Option<EventualPattern> {
        Some(match self {
            IndexPredicate::Const(b) => EventualPattern::constant(0, *b),
            IndexPredicate::AtLeast(k) => EventualPattern::constant(*k, true),
            IndexPredicate::Residue { modulus, residues } => {
                if *modulus == 0 {
                    return None;
                }
                EventualPattern { from: 0, pattern: (0..*modulus).map(|r| residues.contains(&r)).collect() }
                    .simplified()
            }
            IndexPredicate::Sign(p, c) => {
                let sign = match p.eventual_sign() {
                    std::cmp::Ordering::Greater => BigRational::from_integer(1.into()),
                    std::cmp::Ordering::Less => BigRational::from_integer((-1).into()),
                    std::cmp::Ordering::Equal => BigRational::zero(),
                };
                EventualPattern::constant(p.sign_stable_from(), c.holds(&sign))
            }
            IndexPredicate::Not(p) => {
                let e = p.eventual()?;
                EventualPattern { from: e.from, pattern: e.pattern.iter().map(|b| !b).collect() }
            }
            IndexPredicate::And(ps) => {
                let parts = ps.iter().map(|p| p.eventual()).collect::<Option<Vec<_>>>()?;
                EventualPattern::combine(parts, |v| v.iter().all(|&b| b))
            }
            IndexPredicate::Or(ps) => {
                let parts = ps.iter().map(|p| p.eventual()).collect::<Option<Vec<_>>>()?;
                EventualPattern::combine(parts, |v| v.iter().any(|&b| b))
            }
            IndexPredicate::Prefix(vals, rest) => {
                let e = rest.eventual()?;
                EventualPattern { from: e.from.max(vals.len() as u64), pattern: e.pattern }
            }
            IndexPredicate::Sampled(_) => return None,
        })
    }
}

/// Decides whether `{n : pred(n)}` belongs to every free ultrafilter
/// (`InFilter`), to none (`OutFilter`), or neither can be certified.
/// Every index in `[start, window]` is cross-checked against the pattern.
pub fn decide(pred: &IndexPredicate, window: u64) -> FilterDecision {
    let Some(mut pattern) = pred.eventual() else {
        return FilterDecision::inconclusive("no eventual pattern for a sampled predicate");
    };
    // root bounds are loose; move the start back while direct evaluation agrees
    while pattern.from > 0 && pred.eval(pattern.from - 1) == pattern.at(pattern.from - 1) {
        pattern.from -= 1;
    }
    let end = window.max(pattern.from);
    if let Some(bad) = (pattern.from..=end).find(|&n| pred.eval(n) != pattern.at(n)) {
        return FilterDecision::inconclusive(format!("pattern disagrees with direct evaluation at n = {bad}"));
    }
    let verdict = match pattern.pattern.as_slice() {
        [true] => Verdict::InFilter,
        [false] => Verdict::OutFilter,
        _ => Verdict::Inconclusive,
    };
    FilterDecision {
        verdict,
        certificate: Some(Certificate { start: pattern.from, end, pattern: pattern.describe() }),
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn basic_decisions() {
        assert_eq!(decide(&IndexPredicate::Const(true), 10).verdict, Verdict::InFilter);
        assert_eq!(decide(&IndexPredicate::Const(false), 10).verdict, Verdict::OutFilter);
        let even = IndexPredicate::Residue { modulus: 2, residues: vec![0] };
        assert_eq!(decide(&even, 10).verdict, Verdict::Inconclusive);
        let late = decide(&IndexPredicate::AtLeast(5), 10);
        assert_eq!(late.verdict, Verdict::InFilter);
        assert_eq!(late.certificate.unwrap().start, 5);
        assert_eq!(decide(&IndexPredicate::Sampled(vec![true; 20]), 10).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn polynomial_signs() {
        // n^2 - 10n + 9 = (n-1)(n-9) > 0 eventually
        let p = RatPoly::new(vec![r(9), r(-10), r(1)]);
        let d = decide(&IndexPredicate::Sign(p.clone(), SignCond::Positive), 20);
        assert_eq!(d.verdict, Verdict::InFilter);
        assert!(d.certificate.unwrap().start >= 10);
        let z = decide(&IndexPredicate::Sign(p, SignCond::Zero), 20);
        assert_eq!(z.verdict, Verdict::OutFilter);
        let zero = decide(&IndexPredicate::Sign(RatPoly::zero(), SignCond::Zero), 5);
        assert_eq!(zero.verdict, Verdict::InFilter);
    }

    #[test]
    fn combinations() {
        let even = IndexPredicate::Residue { modulus: 2, residues: vec![0] };
        let odd = IndexPredicate::Residue { modulus: 2, residues: vec![1] };
        let either = IndexPredicate::or(vec![even.clone(), odd.clone()]);
        assert_eq!(decide(&either, 8).verdict, Verdict::InFilter);
        let both = IndexPredicate::and(vec![even.clone(), odd]);
        assert_eq!(decide(&both, 8).verdict, Verdict::OutFilter);
        let m6 = IndexPredicate::Residue { modulus: 3, residues: vec![0, 1, 2] };
        assert_eq!(decide(&IndexPredicate::and(vec![even.clone(), m6]), 8).verdict, Verdict::Inconclusive);
        let pre = IndexPredicate::Prefix(vec![false; 4], Box::new(IndexPredicate::Const(true)));
        let d = decide(&pre, 8);
        assert_eq!((d.verdict, d.certificate.unwrap().start), (Verdict::InFilter, 4));
        assert_eq!(decide(&IndexPredicate::not(IndexPredicate::AtLeast(3)), 8).verdict, Verdict::OutFilter);
    }
}
