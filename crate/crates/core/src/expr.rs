//! Integer-polynomial index expressions such as `i+1`, `2n+1` or `n^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

/// Shape of an expression that is either a constant or `param + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitAffine {
    Const(i64),
    Shift(String, i64),
}

impl Expr {
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<i64>) -> Option<i64> {
        Some(match self {
            Expr::Int(v) => *v,
            Expr::Var(name) => env(name)?,
            Expr::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?)?,
            Expr::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?)?,
            Expr::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?)?,
            Expr::Pow(a, e) => a.eval(env)?.checked_pow(*e)?,
            Expr::Neg(a) => a.eval(env)?.checked_neg()?,
        })
    }

    pub fn eval_with(&self, vars: &BTreeMap<String, i64>) -> Option<i64> {
        self.eval(&|name| vars.get(name).copied())
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Pow(a, _) | Expr::Neg(a) => a.collect_vars(out),
        }
    }

    /// Expands into a polynomial in `var`; fails if any other variable occurs.
    pub fn to_poly(&self, var: &str) -> Option<Poly<i64>> {
        Some(match self {
            Expr::Int(v) => Poly::constant(*v),
            Expr::Var(v) if v == var => Poly::var(),
            Expr::Var(_) => return None,
            Expr::Add(a, b) => &a.to_poly(var)? + &b.to_poly(var)?,
            Expr::Sub(a, b) => &a.to_poly(var)? - &b.to_poly(var)?,
            Expr::Mul(a, b) => &a.to_poly(var)? * &b.to_poly(var)?,
            Expr::Pow(a, e) => a.to_poly(var)?.pow(*e),
            Expr::Neg(a) => &Poly::zero() - &a.to_poly(var)?,
        })
    }

    /// Substitutes a polynomial in `n` for every variable.
    pub fn eval_poly(&self, env: &BTreeMap<String, Poly<i64>>) -> Option<Poly<i64>> {
        Some(match self {
            Expr::Int(v) => Poly::constant(*v),
            Expr::Var(name) => env.get(name)?.clone(),
            Expr::Add(a, b) => &a.eval_poly(env)? + &b.eval_poly(env)?,
            Expr::Sub(a, b) => &a.eval_poly(env)? - &b.eval_poly(env)?,
            Expr::Mul(a, b) => &a.eval_poly(env)? * &b.eval_poly(env)?,
            Expr::Pow(a, e) => a.eval_poly(env)?.pow(*e),
            Expr::Neg(a) => &Poly::zero() - &a.eval_poly(env)?,
        })
    }

    /// Recognizes `c` and `v + c` (in any arrangement that expands to it).
    pub fn unit_affine(&self) -> Option<UnitAffine> {
        let vars = self.vars();
        match vars.as_slice() {
            [] => self.eval(&|_| None).map(UnitAffine::Const),
            [v] => {
                let p = self.to_poly(v)?;
                (p.degree() == Some(1) && p.coeffs()[1] == 1).then(|| UnitAffine::Shift(v.clone(), p.constant_term()))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "{a}+{b}"),
            Expr::Sub(a, b) => match **b {
                Expr::Add(..) | Expr::Sub(..) => write!(f, "{a}-({b})"),
                _ => write!(f, "{a}-{b}"),
            },
            Expr::Mul(a, b) => {
                let wrap = |e: &Expr| matches!(e, Expr::Add(..) | Expr::Sub(..));
                match (wrap(a), wrap(b)) {
                    (false, false) => write!(f, "{a}*{b}"),
                    (true, false) => write!(f, "({a})*{b}"),
                    (false, true) => write!(f, "{a}*({b})"),
                    (true, true) => write!(f, "({a})*({b})"),
                }
            }
            Expr::Pow(a, e) => match **a {
                Expr::Int(_) | Expr::Var(_) => write!(f, "{a}^{e}"),
                _ => write!(f, "({a})^{e}"),
            },
            Expr::Neg(a) => write!(f, "-{a}"),
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(ParseError::new("trailing input in expression", p.pos));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                // implicit product: `2n`, `3(n+1)`
                Some(c) if c.is_ascii_alphabetic() || c == b'(' => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|t| t.parse::<u32>().ok())
                .ok_or_else(|| ParseError::new("expected exponent", start))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::new("expected `)`", self.pos));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let s = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let t = std::str::from_utf8(&self.src[s..self.pos]).unwrap();
                t.parse::<i64>().map(Expr::Int).map_err(|_| ParseError::new("integer out of range", s))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let s = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Expr::Var(String::from_utf8_lossy(&self.src[s..self.pos]).into_owned()))
            }
            _ => Err(ParseError::new("expected number, variable or `(`", start.max(self.pos))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn parses_index_forms() {
        let env = |v: &str| (v == "n").then_some(5);
        assert_eq!(e("2n+1").eval(&env), Some(11));
        assert_eq!(e("n^2").eval(&env), Some(25));
        assert_eq!(e("3*(n-1)").eval(&env), Some(12));
        assert_eq!(e("-n + 7").eval(&env), Some(2));
        assert_eq!(e("k").eval(&env), None);
    }

    #[test]
    fn polynomial_expansion() {
        let p = e("(n+1)^2 - 1").to_poly("n").unwrap();
        assert_eq!(p.coeffs(), &[0, 2, 1]);
        assert!(e("i+j").to_poly("i").is_none());
    }

    #[test]
    fn polynomial_substitution() {
        let env: BTreeMap<String, Poly<i64>> = [("i".to_string(), e("2n").to_poly("n").unwrap())].into_iter().collect();
        assert_eq!(e("i+1").eval_poly(&env).unwrap().coeffs(), &[1, 2]);
        assert!(e("j").eval_poly(&env).is_none());
    }

    #[test]
    fn unit_affine_shapes() {
        assert_eq!(e("i+1").unit_affine(), Some(UnitAffine::Shift("i".into(), 1)));
        assert_eq!(e("4").unit_affine(), Some(UnitAffine::Const(4)));
        assert_eq!(e("2i").unit_affine(), None);
        assert_eq!(e("i+j").unit_affine(), None);
    }

    #[test]
    fn display_round_trips() {
        for s in ["2*n+1", "n^2", "3*(n-1)", "i-(j+1)", "(n+1)^3"] {
            let x = e(s);
            assert_eq!(e(&x.to_string()), x, "{s}");
        }
    }

    #[test]
    fn errors_report_columns() {
        assert_eq!("2n+".parse::<Expr>().unwrap_err().column, 3);
        assert_eq!("n)".parse::<Expr>().unwrap_err().column, 1);
    }
}
