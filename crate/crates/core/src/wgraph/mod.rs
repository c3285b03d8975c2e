//! Finitely presented transfinite wgraphs.
//!
//! A [`Presentation`] is the declarative (JSON) form: parametric families of
//! wnodes, branches and tips whose indices are integer-polynomial
//! expressions. [`WGraph`] is the validated, compiled form; [`WGraph::expand`]
//! materializes a finite [`Slice`] for a window bound.

mod analysis;
pub mod catalog;
mod slice;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::expr::{Expr, UnitAffine};
use crate::rank::Rank;

pub(crate) use analysis::Dsu;
pub use analysis::{Finiteness, Section, SectionLabels};
pub use slice::{Slice, TipInstance};

/// Range of every index of a family inside a window `W`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `0 ..= W`
    #[default]
    Nat,
    /// `-W ..= W`
    Int,
}

impl Domain {
    fn contains(self, v: i64) -> bool {
        self == Domain::Int || v >= 0
    }

    fn range(self, window: u64) -> std::ops::RangeInclusive<i64> {
        let w = window as i64;
        match self {
            Domain::Nat => 0..=w,
            Domain::Int => -w..=w,
        }
    }
}

/// `["family", ["expr", ...]]` in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTemplate(pub String, #[serde(default)] pub Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmbraceRule {
    Tip { tip: String, at: Vec<String> },
    Node { node: String, at: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeFamily {
    pub id: String,
    pub rank: Rank,
    #[serde(default)]
    pub indices: Vec<String>,
    #[serde(default)]
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embraces: Vec<EmbraceRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFamily {
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub domain: Domain,
    pub ends: [NodeTemplate; 2],
}

/// A family of tips. `anchor` is the first wnode of the representative
/// one-ended walk; `trace` (in the extra variable `t`) lists the wnodes the
/// walk visits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TipFamily {
    pub id: String,
    pub rank: Rank,
    #[serde(default)]
    pub indices: Vec<String>,
    #[serde(default)]
    pub domain: Domain,
    pub anchor: NodeTemplate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<NodeTemplate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Count(u64),
    Unbounded(Unbounded),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unbounded {
    Unbounded,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    /// Per rank `ρ`: bound on the boundary `ρ`-wnodes incident to any
    /// `(ρ-1)`-section, or `"unbounded"`.
    #[serde(rename = "sectionBoundaryBound", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub section_boundary_bound: BTreeMap<String, BoundarySpec>,
    /// Ranks at which the graph has infinitely many boundary wnodes.
    #[serde(rename = "infiniteBoundary", default, skip_serializing_if = "Vec::is_empty")]
    pub infinite_boundary: Vec<Rank>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub finite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub nu: Rank,
    #[serde(default)]
    pub nodes: Vec<NodeFamily>,
    #[serde(default)]
    pub branches: Vec<BranchFamily>,
    #[serde(default)]
    pub tips: Vec<TipFamily>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }
}

/// A concrete wnode: family, rank and index vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WNodeRef {
    pub rank: Rank,
    pub family: String,
    pub indices: Vec<i64>,
}

impl fmt::Display for WNodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.family)?;
        for (i, v) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Parses `family[i0,i1,...]` (or a bare `family` for index-free families)
/// into a family id and integer indices.
pub fn parse_node_text(text: &str) -> Result<(String, Vec<i64>), ParseError> {
    let t = text.trim();
    let Some(open) = t.find('[') else {
        if t.is_empty() || !t.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(ParseError::new(format!("bad node `{t}`"), 0));
        }
        return Ok((t.to_string(), Vec::new()));
    };
    if !t.ends_with(']') {
        return Err(ParseError::new("expected `]`", t.len()));
    }
    let family = t[..open].trim().to_string();
    if family.is_empty() {
        return Err(ParseError::new("missing family name", 0));
    }
    let inner = &t[open + 1..t.len() - 1];
    let mut indices = Vec::new();
    let mut col = open + 1;
    if !inner.trim().is_empty() {
        for part in inner.split(',') {
            let v =
                part.trim().parse::<i64>().map_err(|_| ParseError::new(format!("bad index `{}`", part.trim()), col))?;
            indices.push(v);
            col += part.len() + 1;
        }
    }
    Ok((family, indices))
}

#[derive(Debug, Clone)]
pub(crate) struct Template {
    pub family: usize,
    pub at: Vec<Expr>,
}

#[derive(Debug, Clone)]
pub(crate) enum Embrace {
    Tip { tip: usize, at: Vec<Expr> },
    Node(Template),
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledNodeFamily {
    pub id: String,
    pub rank: Rank,
    pub params: Vec<String>,
    pub domain: Domain,
    pub embraces: Vec<Embrace>,
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledBranchFamily {
    pub params: Vec<String>,
    pub domain: Domain,
    pub ends: [Template; 2],
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledTipFamily {
    pub id: String,
    pub rank: Rank,
    pub params: Vec<String>,
    pub domain: Domain,
    pub anchor: Template,
    pub trace: Option<Template>,
}

/// A validated presentation; immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct WGraph {
    presentation: Presentation,
    pub(crate) node_families: Vec<CompiledNodeFamily>,
    pub(crate) branch_families: Vec<CompiledBranchFamily>,
    pub(crate) tip_families: Vec<CompiledTipFamily>,
    family_index: HashMap<String, usize>,
}

impl WGraph {
    pub fn new(presentation: Presentation) -> Result<Self> {
        compile(presentation)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(Presentation::from_json(text)?)
    }

    pub fn name(&self) -> &str {
        &self.presentation.name
    }

    pub fn nu(&self) -> Rank {
        self.presentation.nu
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn metadata(&self) -> &Metadata {
        &self.presentation.metadata
    }

    pub fn family_rank(&self, family: &str) -> Option<Rank> {
        self.family_index.get(family).map(|&i| self.node_families[i].rank)
    }

    pub fn family_arity(&self, family: &str) -> Option<usize> {
        self.family_index.get(family).map(|&i| self.node_families[i].params.len())
    }

    pub(crate) fn family_id(&self, family: &str) -> Option<usize> {
        self.family_index.get(family).copied()
    }

    /// Resolves `family[i,...]` text against the presentation.
    pub fn node(&self, text: &str) -> Result<WNodeRef> {
        let (family, indices) = parse_node_text(text)?;
        self.node_ref(&family, indices)
    }

    pub fn node_ref(&self, family: &str, indices: Vec<i64>) -> Result<WNodeRef> {
        let fid = self.family_id(family).ok_or_else(|| Error::UnknownFamily(family.to_string()))?;
        let fam = &self.node_families[fid];
        if fam.params.len() != indices.len() {
            return Err(Error::Presentation(format!(
                "family `{family}` takes {} indices, got {}",
                fam.params.len(),
                indices.len()
            )));
        }
        Ok(WNodeRef { rank: fam.rank, family: family.to_string(), indices })
    }

    /// Whether the wnode exists in the (infinite) wgraph.
    pub fn exists(&self, node: &WNodeRef) -> bool {
        let Some(fid) = self.family_id(&node.family) else {
            return false;
        };
        self.exists_in(fid, &node.indices, None)
    }

    /// Existence, optionally restricted to a window bound on every index
    /// reached through embraced wnodes and tip anchors.
    pub(crate) fn exists_in(&self, fid: usize, indices: &[i64], window: Option<u64>) -> bool {
        let fam = &self.node_families[fid];
        if fam.params.len() != indices.len() || !in_domain(fam.domain, indices, window) {
            return false;
        }
        let env = bind(&fam.params, indices);
        fam.embraces.iter().all(|e| match e {
            Embrace::Node(t) => self.instantiate(t, &env).is_some_and(|idx| self.exists_in(t.family, &idx, window)),
            Embrace::Tip { tip, at } => eval_all(at, &env).is_some_and(|idx| self.tip_exists_in(*tip, &idx, window)),
        })
    }

    pub(crate) fn tip_exists_in(&self, tid: usize, indices: &[i64], window: Option<u64>) -> bool {
        let tip = &self.tip_families[tid];
        if tip.params.len() != indices.len() || !in_domain(tip.domain, indices, window) {
            return false;
        }
        let env = bind(&tip.params, indices);
        self.instantiate(&tip.anchor, &env).is_some_and(|idx| self.exists_in(tip.anchor.family, &idx, window))
    }

    pub(crate) fn instantiate(&self, t: &Template, env: &BTreeMap<String, i64>) -> Option<Vec<i64>> {
        eval_all(&t.at, env)
    }

    pub(crate) fn make_ref(&self, fid: usize, indices: Vec<i64>) -> WNodeRef {
        let fam = &self.node_families[fid];
        WNodeRef { rank: fam.rank, family: fam.id.clone(), indices }
    }

    /// True when every family is index-free, so the wgraph is finite.
    pub fn is_finite_presentation(&self) -> bool {
        self.presentation.metadata.finite
            || (self.node_families.iter().all(|f| f.params.is_empty())
                && self.branch_families.iter().all(|b| b.params.is_empty())
                && self.tip_families.iter().all(|t| t.params.is_empty()))
    }

    pub fn expand(&self, window: u64) -> Result<Slice> {
        slice::expand(self, window)
    }
}

pub(crate) fn bind(params: &[String], values: &[i64]) -> BTreeMap<String, i64> {
    params.iter().cloned().zip(values.iter().copied()).collect()
}

pub(crate) fn eval_all(exprs: &[Expr], env: &BTreeMap<String, i64>) -> Option<Vec<i64>> {
    exprs.iter().map(|e| e.eval_with(env)).collect()
}

fn in_domain(domain: Domain, indices: &[i64], window: Option<u64>) -> bool {
    indices.iter().all(|&v| match window {
        Some(w) => domain.range(w).contains(&v),
        None => domain.contains(v),
    })
}

fn compile(p: Presentation) -> Result<WGraph> {
    let err = |m: String| Error::Presentation(m);
    let mut family_index = HashMap::new();
    for (i, f) in p.nodes.iter().enumerate() {
        if family_index.insert(f.id.clone(), i).is_some() {
            return Err(err(format!("duplicate node family `{}`", f.id)));
        }
        if f.rank > p.nu {
            return Err(err(format!("family `{}` has rank {} above nu = {}", f.id, f.rank, p.nu)));
        }
    }
    let mut tip_index = HashMap::new();
    for (i, t) in p.tips.iter().enumerate() {
        if tip_index.insert(t.id.clone(), i).is_some() {
            return Err(err(format!("duplicate tip family `{}`", t.id)));
        }
    }
    let parse_exprs = |exprs: &[String], allowed: &[String], ctx: &str| -> Result<Vec<Expr>> {
        exprs
            .iter()
            .map(|s| {
                let e: Expr = s.parse().map_err(|e: ParseError| err(format!("{ctx}: expression `{s}`: {e}")))?;
                if let Some(v) = e.vars().into_iter().find(|v| !allowed.contains(v)) {
                    return Err(err(format!("{ctx}: unbound variable `{v}` in `{s}`")));
                }
                Ok(e)
            })
            .collect()
    };
    let template = |t: &NodeTemplate, allowed: &[String], ctx: &str| -> Result<Template> {
        let family = *family_index.get(&t.0).ok_or_else(|| err(format!("{ctx}: dangling node family `{}`", t.0)))?;
        if p.nodes[family].indices.len() != t.1.len() {
            return Err(err(format!("{ctx}: family `{}` takes {} indices", t.0, p.nodes[family].indices.len())));
        }
        Ok(Template { family, at: parse_exprs(&t.1, allowed, ctx)? })
    };

    let mut tip_families = Vec::new();
    for t in &p.tips {
        let ctx = format!("tip `{}`", t.id);
        if t.rank == Rank::Omega {
            return Err(err(format!("{ctx}: tips of rank w are not supported")));
        }
        let anchor = template(&t.anchor, &t.indices, &ctx)?;
        if !p.nodes[anchor.family].rank.within(t.rank) && p.nodes[anchor.family].rank != t.rank {
            return Err(err(format!("{ctx}: anchor rank exceeds tip rank")));
        }
        let mut with_t = t.indices.clone();
        with_t.push("t".to_string());
        let trace = t.trace.as_ref().map(|tr| template(tr, &with_t, &ctx)).transpose()?;
        tip_families.push(CompiledTipFamily {
            id: t.id.clone(),
            rank: t.rank,
            params: t.indices.clone(),
            domain: t.domain,
            anchor,
            trace,
        });
    }

    let mut node_families = Vec::new();
    for f in &p.nodes {
        let ctx = format!("node family `{}`", f.id);
        let mut embraces = Vec::new();
        for e in &f.embraces {
            match e {
                EmbraceRule::Tip { tip, at } => {
                    let tid = *tip_index.get(tip).ok_or_else(|| err(format!("{ctx}: dangling tip family `{tip}`")))?;
                    if p.tips[tid].rank >= f.rank {
                        return Err(err(format!("{ctx}: embraced tip `{tip}` must have rank below {}", f.rank)));
                    }
                    if p.tips[tid].indices.len() != at.len() {
                        return Err(err(format!("{ctx}: tip `{tip}` takes {} indices", p.tips[tid].indices.len())));
                    }
                    embraces.push(Embrace::Tip { tip: tid, at: parse_exprs(at, &f.indices, &ctx)? });
                }
                EmbraceRule::Node { node, at } => {
                    let t = template(&NodeTemplate(node.clone(), at.clone()), &f.indices, &ctx)?;
                    if p.nodes[t.family].rank >= f.rank {
                        return Err(err(format!("{ctx}: embraced node `{node}` must have rank below {}", f.rank)));
                    }
                    if t.at.iter().any(|e| e.unit_affine().is_none()) {
                        return Err(err(format!("{ctx}: embraced-node indices must be `param + c` or constants")));
                    }
                    embraces.push(Embrace::Node(t));
                }
            }
        }
        node_families.push(CompiledNodeFamily {
            id: f.id.clone(),
            rank: f.rank,
            params: f.indices.clone(),
            domain: f.domain,
            embraces,
        });
    }

    let mut branch_families = Vec::new();
    for (i, b) in p.branches.iter().enumerate() {
        let ctx = format!("branch family #{i}");
        let a = template(&b.ends[0], &b.params, &ctx)?;
        let c = template(&b.ends[1], &b.params, &ctx)?;
        for t in [&a, &c] {
            if p.nodes[t.family].rank != Rank::Finite(0) {
                return Err(err(format!("{ctx}: branches join 0-nodes only")));
            }
        }
        branch_families.push(CompiledBranchFamily { params: b.params.clone(), domain: b.domain, ends: [a, c] });
    }

    if !p.nodes.iter().any(|f| f.rank == Rank::Finite(0)) {
        return Err(err("a wgraph needs at least one family of 0-nodes".into()));
    }
    let required: Vec<Rank> = match p.nu {
        Rank::Finite(k) => (0..=k).map(Rank::Finite).collect(),
        Rank::ArrowOmega => vec![Rank::Finite(0)],
        Rank::Omega => vec![Rank::Finite(0), Rank::Omega],
    };
    if let Some(r) = required.iter().find(|r| !p.nodes.iter().any(|f| f.rank == **r)) {
        return Err(err(format!("no node family of rank {r}")));
    }

    Ok(WGraph { presentation: p, node_families, branch_families, tip_families, family_index })
}

impl FromStr for WGraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_json(s)
    }
}

/// Solves `template(params) == indices` for embrace templates whose index
/// expressions are constants or `param + c`. Returns the parameter binding.
pub(crate) fn solve_unit_affine(params: &[String], at: &[Expr], indices: &[i64]) -> Option<Vec<i64>> {
    let mut bound: BTreeMap<&str, i64> = BTreeMap::new();
    for (e, &v) in at.iter().zip(indices) {
        match e.unit_affine()? {
            UnitAffine::Const(c) if c == v => {}
            UnitAffine::Const(_) => return None,
            UnitAffine::Shift(name, c) => {
                let val = v - c;
                let name = params.iter().find(|p| **p == name)?.as_str();
                if *bound.entry(name).or_insert(val) != val {
                    return None;
                }
            }
        }
    }
    Some(params.iter().map(|p| bound.get(p.as_str()).copied().unwrap_or(0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_text() {
        assert_eq!(parse_node_text("b1[2, -3]").unwrap(), ("b1".into(), vec![2, -3]));
        assert_eq!(parse_node_text("h").unwrap(), ("h".into(), vec![]));
        assert_eq!(parse_node_text("h[]").unwrap(), ("h".into(), vec![]));
        assert_eq!(parse_node_text("r[1,x]").unwrap_err().column, 4);
    }

    #[test]
    fn dangling_family_is_rejected() {
        let js = r#"{"name":"bad","nu":0,
            "nodes":[{"id":"r","rank":0,"indices":["j"]}],
            "branches":[{"params":["j"],"ends":[["r",["j"]],["q",["j+1"]]]}]}"#;
        let e = WGraph::from_json(js).unwrap_err().to_string();
        assert!(e.contains("dangling node family `q`"), "{e}");
    }

    #[test]
    fn embraced_tip_rank_must_drop() {
        let js = r#"{"name":"bad","nu":1,
            "nodes":[{"id":"r","rank":0,"indices":["j"]},
                     {"id":"x","rank":1,"embraces":[{"tip":"t","at":[]}]}],
            "tips":[{"id":"t","rank":1,"anchor":["r",["0"]]}]}"#;
        assert!(WGraph::from_json(js).is_err());
    }

    #[test]
    fn json_round_trip_of_catalog() {
        for name in ["ray0", "ladder1", "ladder2", "hub1", "hub2"] {
            let g = catalog::by_name(name).unwrap();
            let text = g.presentation().to_json();
            let back = WGraph::from_json(&text).unwrap();
            assert_eq!(back.presentation(), g.presentation());
        }
    }

    #[test]
    fn unit_affine_solving() {
        let params = vec!["i".to_string()];
        let at: Vec<Expr> = vec!["i+1".parse().unwrap(), "0".parse().unwrap()];
        assert_eq!(solve_unit_affine(&params, &at, &[3, 0]), Some(vec![2]));
        assert_eq!(solve_unit_affine(&params, &at, &[3, 1]), None);
    }
}
