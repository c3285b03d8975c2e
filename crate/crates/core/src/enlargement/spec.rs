use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::filter::{IndexPredicate, SignCond};
use super::schedule::Schedule;
use crate::error::{Error, ParseError, Result};
use crate::expr::{Expr, UnitAffine};
use crate::poly::{Poly, RatPoly};
use crate::rank::Rank;
use crate::wgraph::{Domain, WGraph, WNodeRef};

/// Closed-form map `n ↦ indices of x_n`.
#[derive(Debug, Clone)]
pub enum IndexMap {
    Const(Vec<i64>),
    Poly(Vec<Poly<i64>>),
    /// `prefix[n]` for `n < prefix.len()`, then `tail`.
    Eventually {
        prefix: Vec<Vec<i64>>,
        tail: Box<IndexMap>,
    },
    /// `x_n = base_{σ(n)}` for a schedule built by the ladder construction.
    Scheduled(Arc<Schedule>),
}

impl PartialEq for IndexMap {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (IndexMap::Const(a), IndexMap::Const(b)) => a == b,
            (IndexMap::Poly(a), IndexMap::Poly(b)) => a == b,
            (IndexMap::Eventually { prefix: p, tail: t }, IndexMap::Eventually { prefix: q, tail: u }) => {
                p == q && t == u
            }
            (IndexMap::Scheduled(a), IndexMap::Scheduled(b)) => a.same_as(b),
            _ => false,
        }
    }
}

/// A hypernode given by a sequence of wnodes of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct HypernodeSpec {
    pub graph: String,
    pub family: String,
    pub rank: Rank,
    pub map: IndexMap,
}

/// Polynomial index maps that take effect from `skip` onwards.
pub(crate) struct SymIndices {
    pub skip: usize,
    pub polys: Vec<Poly<i64>>,
}

impl HypernodeSpec {
    pub fn constant(g: &WGraph, node: &WNodeRef) -> Self {
        HypernodeSpec {
            graph: g.name().to_string(),
            family: node.family.clone(),
            rank: node.rank,
            map: IndexMap::Const(node.indices.clone()),
        }
    }

    pub fn polynomial(g: &WGraph, family: &str, polys: Vec<Poly<i64>>) -> Result<Self> {
        let rank = g.family_rank(family).ok_or_else(|| Error::UnknownFamily(family.to_string()))?;
        if g.family_arity(family) != Some(polys.len()) {
            return Err(Error::Presentation(format!("family `{family}` takes a different number of indices")));
        }
        let map = if polys.iter().all(|p| p.degree().unwrap_or(0) == 0) {
            IndexMap::Const(polys.iter().map(|p| p.constant_term()).collect())
        } else {
            IndexMap::Poly(polys)
        };
        Ok(HypernodeSpec { graph: g.name().to_string(), family: family.to_string(), rank, map })
    }

    /// Parses `const(F[i,...])`, `diag(F[p(n),...])`, `F[p(n),...]` or
    /// `family=G node=F[...]`.
    pub fn parse(g: &WGraph, text: &str) -> Result<Self> {
        let mut body = text.trim();
        let mut offset = text.len() - text.trim_start().len();
        if let Some(rest) = body.strip_prefix("family=") {
            let (name, node) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| ParseError::new("expected `node=` after the family", offset + body.len()))?;
            if name != g.name() {
                return Err(Error::Presentation(format!("spec is for `{name}`, not `{}`", g.name())));
            }
            let node = node.trim_start();
            let at = text.len() - node.len();
            body = node.strip_prefix("node=").ok_or_else(|| ParseError::new("expected `node=`", at))?;
            offset = at + 5;
        }
        let mut constant = false;
        for wrapper in ["const(", "diag("] {
            if let Some(inner) = body.strip_prefix(wrapper) {
                let inner = inner
                    .strip_suffix(')')
                    .ok_or_else(|| ParseError::new("missing closing `)`", offset + body.len()))?;
                constant = wrapper == "const(";
                offset += wrapper.len();
                body = inner;
                break;
            }
        }
        let (family, exprs) = match body.find('[') {
            None => (body.trim(), Vec::new()),
            Some(open) => {
                let close = body
                    .rfind(']')
                    .filter(|&c| c == body.len() - 1)
                    .ok_or_else(|| ParseError::new("expected `]` at the end", offset + body.len()))?;
                let mut exprs = Vec::new();
                let mut start = open + 1;
                for part in body[open + 1..close].split(',') {
                    let e: Expr =
                        part.parse().map_err(|e: ParseError| ParseError::new(e.message, offset + start + e.column))?;
                    exprs.push(e);
                    start += part.len() + 1;
                }
                (body[..open].trim(), exprs)
            }
        };
        let mut polys = Vec::new();
        for e in &exprs {
            let p = e
                .to_poly("n")
                .ok_or_else(|| ParseError::new(format!("index `{e}` must be a polynomial in n"), offset))?;
            if constant && p.degree().unwrap_or(0) > 0 {
                return Err(ParseError::new("const(...) takes constant indices", offset).into());
            }
            polys.push(p);
        }
        Self::polynomial(g, family, polys)
    }

    pub fn is_scheduled(&self) -> bool {
        match &self.map {
            IndexMap::Scheduled(_) => true,
            IndexMap::Eventually { tail, .. } => matches!(**tail, IndexMap::Scheduled(_)),
            _ => false,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.map, IndexMap::Const(_))
    }

    /// Indices at `n` for maps that need no distance information.
    pub fn indices_at(&self, n: u64) -> Option<Vec<i64>> {
        eval_map(&self.map, n)
    }

    pub(crate) fn sym_indices(&self) -> Option<SymIndices> {
        sym_of(&self.map)
    }

    pub fn schedule(&self) -> Option<&Arc<Schedule>> {
        match &self.map {
            IndexMap::Scheduled(s) => Some(s),
            IndexMap::Eventually { tail, .. } => match &**tail {
                IndexMap::Scheduled(s) => Some(s),
                _ => None,
            },
            _ => None,
        }
    }
}

fn eval_map(map: &IndexMap, n: u64) -> Option<Vec<i64>> {
    match map {
        IndexMap::Const(v) => Some(v.clone()),
        IndexMap::Poly(ps) => {
            let n = i64::try_from(n).ok()?;
            ps.iter()
                .map(|p| p.coeffs().iter().rev().try_fold(0i64, |acc, c| acc.checked_mul(n)?.checked_add(*c)))
                .collect()
        }
        IndexMap::Eventually { prefix, tail } => match prefix.get(n as usize) {
            Some(v) => Some(v.clone()),
            None => eval_map(tail, n),
        },
        IndexMap::Scheduled(_) => None,
    }
}

fn sym_of(map: &IndexMap) -> Option<SymIndices> {
    match map {
        IndexMap::Const(v) => Some(SymIndices { skip: 0, polys: v.iter().map(|&c| Poly::constant(c)).collect() }),
        IndexMap::Poly(ps) => Some(SymIndices { skip: 0, polys: ps.clone() }),
        IndexMap::Eventually { prefix, tail } => {
            let t = sym_of(tail)?;
            Some(SymIndices { skip: t.skip.max(prefix.len()), polys: t.polys })
        }
        IndexMap::Scheduled(_) => None,
    }
}

pub(crate) fn rat(p: &Poly<i64>) -> RatPoly {
    p.map(|c| BigRational::from_integer((*c).into()))
}

/// Wraps a symbolic predicate valid from `skip` with sampled values before it.
pub(crate) fn with_prefix(skip: usize, direct: impl Fn(u64) -> bool, pred: IndexPredicate) -> IndexPredicate {
    if skip == 0 {
        return pred;
    }
    IndexPredicate::Prefix((0..skip as u64).map(direct).collect(), Box::new(pred))
}

/// `{n : x_n = y_n}` in symbolic form, when both maps are closed-form.
pub(crate) fn equality_predicate(a: &HypernodeSpec, b: &HypernodeSpec) -> Option<IndexPredicate> {
    if a == b {
        return Some(IndexPredicate::Const(true));
    }
    if a.graph != b.graph || a.family != b.family {
        return Some(IndexPredicate::Const(false));
    }
    let (sa, sb) = (a.sym_indices()?, b.sym_indices()?);
    let parts =
        sa.polys.iter().zip(&sb.polys).map(|(p, q)| IndexPredicate::Sign(rat(&(p - q)), SignCond::Zero)).collect();
    let direct = |n: u64| a.indices_at(n) == b.indices_at(n);
    Some(with_prefix(sa.skip.max(sb.skip), direct, IndexPredicate::and(parts)))
}

const MAX_NESTING: usize = 16;

/// Existence of `family[polys(n)]` in the infinite wgraph, symbolically.
pub(crate) fn exists_predicate(g: &WGraph, fid: usize, polys: &[Poly<i64>]) -> Option<IndexPredicate> {
    exists_rec(g, fid, polys, 0)
}

fn domain_pred(domain: Domain, polys: &[Poly<i64>]) -> Vec<IndexPredicate> {
    match domain {
        Domain::Nat => polys.iter().map(|p| IndexPredicate::Sign(rat(p), SignCond::NonNegative)).collect(),
        Domain::Int => Vec::new(),
    }
}

fn exists_rec(g: &WGraph, fid: usize, polys: &[Poly<i64>], depth: usize) -> Option<IndexPredicate> {
    if depth > MAX_NESTING {
        return None;
    }
    let fam = &g.node_families[fid];
    let env: BTreeMap<String, Poly<i64>> = fam.params.iter().cloned().zip(polys.iter().cloned()).collect();
    let mut parts = domain_pred(fam.domain, polys);
    for e in &fam.embraces {
        match e {
            crate::wgraph::Embrace::Node(t) => {
                let sub: Vec<Poly<i64>> = t.at.iter().map(|x| x.eval_poly(&env)).collect::<Option<_>>()?;
                parts.push(exists_rec(g, t.family, &sub, depth + 1)?);
            }
            crate::wgraph::Embrace::Tip { tip, at } => {
                let sub: Vec<Poly<i64>> = at.iter().map(|x| x.eval_poly(&env)).collect::<Option<_>>()?;
                let tf = &g.tip_families[*tip];
                parts.extend(domain_pred(tf.domain, &sub));
                let tenv: BTreeMap<String, Poly<i64>> = tf.params.iter().cloned().zip(sub).collect();
                let anchor: Vec<Poly<i64>> = tf.anchor.at.iter().map(|x| x.eval_poly(&tenv)).collect::<Option<_>>()?;
                parts.push(exists_rec(g, tf.anchor.family, &anchor, depth + 1)?);
            }
        }
    }
    Some(IndexPredicate::and(parts))
}

/// `{n : x_n exists}` for a closed-form spec.
pub(crate) fn spec_exists_predicate(g: &WGraph, spec: &HypernodeSpec) -> Option<IndexPredicate> {
    let s = spec.sym_indices()?;
    let fid = g.family_id(&spec.family)?;
    let direct =
        |n: u64| spec.indices_at(n).is_some_and(|idx| g.node_ref(&spec.family, idx).is_ok_and(|r| g.exists(&r)));
    Some(with_prefix(s.skip, direct, exists_predicate(g, fid, &s.polys)?))
}

/// `{n : x_n is not embraced}` for a closed-form spec.
pub(crate) fn maximal_predicate(g: &WGraph, spec: &HypernodeSpec) -> Option<IndexPredicate> {
    let s = spec.sym_indices()?;
    let target = g.family_id(&spec.family)?;
    let mut embraced = Vec::new();
    for (fid, fam) in g.node_families.iter().enumerate() {
        for e in &fam.embraces {
            let crate::wgraph::Embrace::Node(t) = e else { continue };
            if t.family != target {
                continue;
            }
            let mut bound: BTreeMap<&str, Poly<i64>> = BTreeMap::new();
            let mut conds = Vec::new();
            for (x, p) in t.at.iter().zip(&s.polys) {
                match x.unit_affine()? {
                    UnitAffine::Const(c) => {
                        conds.push(IndexPredicate::Sign(rat(&(p - &Poly::constant(c))), SignCond::Zero))
                    }
                    UnitAffine::Shift(name, c) => {
                        let v = p - &Poly::constant(c);
                        let name = fam.params.iter().find(|q| **q == name)?.as_str();
                        match bound.get(name) {
                            Some(prev) => conds.push(IndexPredicate::Sign(rat(&(prev - &v)), SignCond::Zero)),
                            None => {
                                bound.insert(name, v);
                            }
                        }
                    }
                }
            }
            let binding: Vec<Poly<i64>> =
                fam.params.iter().map(|q| bound.get(q.as_str()).cloned()).collect::<Option<_>>()?;
            conds.push(exists_predicate(g, fid, &binding)?);
            embraced.push(IndexPredicate::and(conds));
        }
    }
    let direct = |n: u64| {
        spec.indices_at(n)
            .and_then(|idx| g.node_ref(&spec.family, idx).ok())
            .is_some_and(|r| g.maximal_node(&r).unwrap_or(false))
    };
    Some(with_prefix(s.skip, direct, IndexPredicate::not(IndexPredicate::or(embraced))))
}

pub(crate) fn fmt_index_poly(p: &Poly<i64>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let coef = if mag == 1 && i > 0 { String::new() } else { mag.to_string() };
        match i {
            0 => out.push_str(&mag.to_string()),
            1 => out.push_str(&format!("{coef}n")),
            _ => out.push_str(&format!("{coef}n^{i}")),
        }
    }
    out
}

fn fmt_node(family: &str, idx: &[String]) -> String {
    if idx.is_empty() {
        family.to_string()
    } else {
        format!("{family}[{}]", idx.join(","))
    }
}

impl fmt::Display for HypernodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_map(f, &self.family, &self.map)
    }
}

fn fmt_map(f: &mut fmt::Formatter<'_>, family: &str, map: &IndexMap) -> fmt::Result {
    match map {
        IndexMap::Const(v) => {
            let idx: Vec<String> = v.iter().map(|i| i.to_string()).collect();
            write!(f, "const({})", fmt_node(family, &idx))
        }
        IndexMap::Poly(ps) => {
            let idx: Vec<String> = ps.iter().map(fmt_index_poly).collect();
            write!(f, "{}", fmt_node(family, &idx))
        }
        IndexMap::Eventually { prefix, tail } => {
            write!(f, "eventually(")?;
            fmt_map(f, family, tail)?;
            write!(f, ", from={})", prefix.len())
        }
        IndexMap::Scheduled(s) => write!(f, "{s}"),
    }
}

#[cfg(test)]
mod tests {
    use super::super::filter::{decide, Verdict};
    use super::*;
    use crate::wgraph::catalog;

    fn spec(g: &WGraph, s: &str) -> HypernodeSpec {
        HypernodeSpec::parse(g, s).unwrap()
    }

    #[test]
    fn grammar() {
        let g = catalog::by_name("ladder1").unwrap();
        assert_eq!(spec(&g, "b1[2n+1]").to_string(), "b1[2n + 1]");
        assert_eq!(spec(&g, "const(b1[0])").to_string(), "const(b1[0])");
        assert_eq!(spec(&g, "diag(b1[n])").to_string(), "b1[n]");
        assert_eq!(spec(&g, "r[n^2 - 3n, 0]").to_string(), "r[n^2 - 3n,0]");
        assert_eq!(spec(&g, "family=ladder1 node=b1[n]").to_string(), "b1[n]");
        assert_eq!(spec(&g, "b1[4]"), spec(&g, "const(b1[4])"));
        assert!(HypernodeSpec::parse(&g, "family=hub1 node=h").is_err());
        assert!(HypernodeSpec::parse(&g, "const(b1[n])").is_err());
        assert!(HypernodeSpec::parse(&g, "q[n]").is_err());
        assert!(HypernodeSpec::parse(&g, "b1[n,n]").is_err());
        match HypernodeSpec::parse(&g, "b1[2n+]") {
            Err(Error::Parse(e)) => assert_eq!(e.column, 6),
            other => panic!("{other:?}"),
        }
        let h = catalog::by_name("hub1").unwrap();
        assert_eq!(spec(&h, "h").to_string(), "const(h)");
    }

    #[test]
    fn evaluation() {
        let g = catalog::by_name("ladder1").unwrap();
        assert_eq!(spec(&g, "r[n^2, n+1]").indices_at(3), Some(vec![9, 4]));
        let ev = HypernodeSpec {
            map: IndexMap::Eventually { prefix: vec![vec![7]], tail: Box::new(spec(&g, "b1[n]").map) },
            ..spec(&g, "b1[n]")
        };
        assert_eq!(ev.indices_at(0), Some(vec![7]));
        assert_eq!(ev.indices_at(5), Some(vec![5]));
    }

    #[test]
    fn symbolic_equality() {
        let g = catalog::by_name("ladder1").unwrap();
        let eq = |a: &str, b: &str| decide(&equality_predicate(&spec(&g, a), &spec(&g, b)).unwrap(), 12).verdict;
        assert_eq!(eq("b1[n]", "b1[n]"), Verdict::InFilter);
        assert_eq!(eq("b1[n+0]", "b1[n]"), Verdict::InFilter);
        assert_eq!(eq("const(b1[0])", "const(b1[1])"), Verdict::OutFilter);
        assert_eq!(eq("b1[n]", "b1[2n]"), Verdict::OutFilter);
        assert_eq!(eq("b1[n]", "r[n,0]"), Verdict::OutFilter);
    }

    #[test]
    fn symbolic_existence_and_maximality() {
        let g = catalog::by_name("ladder1").unwrap();
        let ex = |s: &str| decide(&spec_exists_predicate(&g, &spec(&g, s)).unwrap(), 12);
        assert_eq!(ex("b1[n-3]").verdict, Verdict::InFilter);
        assert_eq!(ex("b1[n-3]").certificate.unwrap().start, 3);
        assert_eq!(ex("b1[3-n]").verdict, Verdict::OutFilter);
        let mx = |s: &str| decide(&maximal_predicate(&g, &spec(&g, s)).unwrap(), 12).verdict;
        assert_eq!(mx("b1[n]"), Verdict::InFilter);
        assert_eq!(mx("r[n+1,0]"), Verdict::OutFilter);
        assert_eq!(mx("r[n,1]"), Verdict::InFilter);
        assert_eq!(mx("const(b1[2])"), Verdict::InFilter);
        // r[n, 0] is embraced exactly when n >= 1
        assert_eq!(mx("r[n,0]"), Verdict::OutFilter);
    }
}
