//! Dense univariate polynomials over a generic ring scalar.
//!
//! Index maps use `Poly<i64>`; fitted distance profiles use
//! `Poly<BigRational>` so that Newton interpolation stays exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs[i]` multiplies `n^i`; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Mul<Output = T>,
{
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `n`.
    pub fn var() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> T {
        self.coeffs.first().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(T::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `p(q(n))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Poly<U>
    where
        U: Clone + Zero + One + PartialEq + Add<Output = U> + Mul<Output = U>,
    {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<'a, T> Add<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Mul<Output = T>,
{
    type Output = Poly<T>;
    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &Vec<T>, i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Poly::new((0..len).map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i)).collect())
    }
}

impl<'a, T> Sub<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    type Output = Poly<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        self + &rhs.map(|c| -c.clone())
    }
}

impl<'a, T> Mul<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Mul<Output = T>,
{
    type Output = Poly<T>;
    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: fmt::Display + Zero + PartialEq + One> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "n")?,
                1 => write!(f, "{c}n")?,
                _ if c.is_one() => write!(f, "n^{i}")?,
                _ => write!(f, "{c}n^{i}")?,
            }
        }
        Ok(())
    }
}

/// Polynomials with exact rational coefficients.
pub type RatPoly = Poly<BigRational>;

impl RatPoly {
    pub fn eval_u64(&self, n: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Sign of `p(n)` for all sufficiently large `n`.
    pub fn eventual_sign(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    /// A point from which the sign of `p(n)` equals [`Self::eventual_sign`]
    /// for every `n`. Uses the Cauchy root bound `1 + max |a_i / a_d|`.
    pub fn sign_stable_from(&self) -> u64 {
        let Some(lead) = self.leading() else {
            return 0;
        };
        let mut bound = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = (c / lead).abs();
            if r > bound {
                bound = r;
            }
        }
        let b = (bound + BigRational::one()).ceil().to_integer();
        u64::try_from(&b).unwrap_or(u64::MAX).saturating_add(1)
    }

    /// `p(n + 1) - p(n)`.
    pub fn forward_difference(&self) -> RatPoly {
        let shifted = self.compose(&Poly::new(vec![BigRational::one(), BigRational::one()]));
        &shifted - self
    }

    /// Exact Newton interpolation through `(start + i, values[i])`.
    /// Returns the unique polynomial of degree `< values.len()`.
    pub fn interpolate(start: u64, values: &[BigRational]) -> RatPoly {
        // forward-difference table at `start`
        let mut diffs = Vec::with_capacity(values.len());
        let mut row: Vec<BigRational> = values.to_vec();
        while !row.is_empty() {
            diffs.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        // Σ Δ^k · C(n - start, k)
        let shift = Poly::new(vec![-BigRational::from_integer(BigInt::from(start)), BigRational::one()]);
        let mut basis = Poly::constant(BigRational::one());
        let mut acc = Poly::zero();
        for (k, d) in diffs.iter().enumerate() {
            if !d.is_zero() {
                acc = &acc + &(&basis * &Poly::constant(d.clone()));
            }
            let kk = BigRational::from_integer(BigInt::from(k as u64));
            let next = &shift - &Poly::constant(kk.clone());
            let scale = Poly::constant(BigRational::one() / (kk + BigRational::one()));
            basis = &(&basis * &next) * &scale;
        }
        acc
    }

    /// Lowest-degree polynomial that reproduces every value in `values`
    /// (taken at `start, start+1, …`) while leaving at least `spare` values
    /// unused by the interpolation itself, so they act as a cross-check.
    pub fn fit_exact(start: u64, values: &[BigRational], max_degree: usize, spare: usize) -> Option<RatPoly> {
        let top = max_degree.min(values.len().checked_sub(spare + 1)?);
        (0..=top).find_map(|d| {
            let p = Self::interpolate(start, &values[..=d]);
            values.iter().enumerate().all(|(i, v)| &p.eval_u64(start + i as u64) == v).then_some(p)
        })
    }

    /// Whether the polynomial takes integer values on all integers.
    pub fn is_integer_valued(&self) -> bool {
        let d = self.degree().unwrap_or(0);
        (0..=d as u64).all(|n| self.eval_u64(n).is_integer())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn integer_arithmetic() {
        let n = Poly::<i64>::var();
        let p = &(&n * &n) + &Poly::constant(1);
        assert_eq!(p.eval(&3), 10);
        assert_eq!(p.compose(&(&n + &Poly::constant(1))).eval(&2), 10);
        assert_eq!(n.pow(3).eval(&2), 8);
        assert_eq!(p.to_string(), "n^2 + 1");
    }

    #[test]
    fn interpolation_is_exact() {
        let vals: Vec<_> = (0..6).map(|n| r(n * (n + 3) / 2)).collect();
        let p = RatPoly::fit_exact(0, &vals, 4, 2).unwrap();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_u64(10), r(65));
        assert!(p.is_integer_valued());
        let shifted: Vec<_> = (4..12).map(|n| r(3 * n - 7)).collect();
        let q = RatPoly::fit_exact(4, &shifted, 4, 2).unwrap();
        assert_eq!(q.eval_u64(20), r(53));
    }

    #[test]
    fn fit_rejects_irregular_data() {
        let vals: Vec<_> = [0, 1, 0, 1, 0, 1, 0].iter().map(|&v| r(v)).collect();
        assert!(RatPoly::fit_exact(0, &vals, 3, 2).is_none());
    }

    #[test]
    fn eventual_sign_bound() {
        // (n - 7)(n - 2) is positive from 8 onwards
        let p = RatPoly::new(vec![r(14), r(-9), r(1)]);
        assert_eq!(p.eventual_sign(), Ordering::Greater);
        let from = p.sign_stable_from();
        assert!(from >= 8);
        assert!((from..from + 50).all(|n| p.eval_u64(n) > r(0)));
        assert_eq!(RatPoly::zero().sign_stable_from(), 0);
        assert_eq!(p.forward_difference(), RatPoly::new(vec![r(-8), r(2)]));
    }
}
