//! Hypernodes of the enlargement and their hyperdistances.
//!
//! A hypernode is given by a closed-form index map `n ↦ x_n`. Questions of
//! the form "is `{n : P(n)}` in the ultrafilter" are answered through
//! [`filter::decide`], which only commits when the index set is certified
//! finite or cofinite. Distance profiles `D(n) = d(x_n, y_n)` are sampled on
//! growing windows and fitted exactly, exponent by exponent.

pub mod filter;
mod profile;
mod schedule;
mod spec;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use filter::{decide, Certificate, EventualPattern, FilterDecision, IndexPredicate, SignCond, Verdict};
pub(crate) use profile::{constant_value, is_constant};
pub use profile::{fit_samples, DistanceProfile, Sample, SymOrd, SPARE_POINTS};
pub use schedule::{Chain, Schedule, StageKind};
pub(crate) use spec::with_prefix;
pub use spec::{HypernodeSpec, IndexMap};

use crate::error::{Error, Result};
use crate::ordinal::ExpRank;
use crate::rank::Rank;
use crate::wdistance::Metric;
use crate::wgraph::{WGraph, WNodeRef};
use crate::Ordinal;

type ProfileKey = (String, String, u64, Option<Rank>);

/// Evaluation context for hypernodes over one wgraph.
#[derive(Debug)]
pub struct Enlargement<'g> {
    metric: Metric<'g>,
    /// Extra window room beyond the largest index of a sampled pair.
    slack: u64,
    profiles: Mutex<HashMap<ProfileKey, Arc<DistanceProfile>>>,
}

impl<'g> Enlargement<'g> {
    pub fn new(graph: &'g WGraph) -> Self {
        Self::with_metric(Metric::new(graph))
    }

    pub fn with_metric(metric: Metric<'g>) -> Self {
        Enlargement { metric, slack: 2, profiles: Mutex::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &'g WGraph {
        self.metric.graph()
    }

    pub fn metric(&self) -> &Metric<'g> {
        &self.metric
    }

    pub fn parse(&self, text: &str) -> Result<HypernodeSpec> {
        HypernodeSpec::parse(self.graph(), text)
    }

    fn check_graph(&self, spec: &HypernodeSpec) -> Result<()> {
        if spec.graph != self.graph().name() {
            return Err(Error::Presentation(format!(
                "{spec} belongs to `{}`, not `{}`",
                spec.graph,
                self.graph().name()
            )));
        }
        Ok(())
    }

    pub fn indices_at(&self, spec: &HypernodeSpec, n: u64) -> Result<Vec<i64>> {
        self.check_graph(spec)?;
        match &spec.map {
            IndexMap::Scheduled(s) => self.scheduled_indices(s, n),
            IndexMap::Eventually { prefix, tail } => match (prefix.get(n as usize), &**tail) {
                (Some(v), _) => Ok(v.clone()),
                (None, IndexMap::Scheduled(s)) => self.scheduled_indices(s, n),
                (None, _) => spec.indices_at(n).ok_or_else(|| overflow(spec, n)),
            },
            _ => spec.indices_at(n).ok_or_else(|| overflow(spec, n)),
        }
    }

    /// `x_n`, or `None` when it does not exist in the wgraph.
    pub fn node_at(&self, spec: &HypernodeSpec, n: u64) -> Result<Option<WNodeRef>> {
        let idx = self.indices_at(spec, n)?;
        let node = self.graph().node_ref(&spec.family, idx)?;
        Ok(self.graph().exists(&node).then_some(node))
    }

    fn window_for(&self, nodes: &[&WNodeRef]) -> u64 {
        let top = nodes.iter().flat_map(|n| n.indices.iter()).map(|i| i.unsigned_abs()).max().unwrap_or(0);
        top + self.slack
    }

    /// `d(a, b)` at a window fitting both wnodes, certified one window up.
    pub fn point_dist(&self, a: &WNodeRef, b: &WNodeRef, scope: Option<Rank>) -> Result<Sample> {
        let w = self.window_for(&[a, b]);
        let value = self.metric.dist_at(a, b, w, scope)?;
        let next = self.metric.dist_at(a, b, w + 1, scope)?;
        Ok(Sample { certified: value == next, value })
    }

    /// Hyperdistance profile over `n = 0..=window`.
    pub fn hyperdist(&self, x: &HypernodeSpec, y: &HypernodeSpec, window: u64) -> Result<Arc<DistanceProfile>> {
        self.profile(x, y, window, None)
    }

    fn key(x: &HypernodeSpec, y: &HypernodeSpec, window: u64, scope: Option<Rank>) -> ProfileKey {
        let (a, b) = (x.to_string(), y.to_string());
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        (a, b, window, scope)
    }

    /// Like [`Self::hyperdist`], with distances restricted to wnodes of rank
    /// within `scope`.
    pub fn profile(
        &self,
        x: &HypernodeSpec,
        y: &HypernodeSpec,
        window: u64,
        scope: Option<Rank>,
    ) -> Result<Arc<DistanceProfile>> {
        let key = Self::key(x, y, window, scope);
        if let Some(p) = self.profiles.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let mut samples = Vec::with_capacity(window as usize + 1);
        for n in 0..=window {
            let pair = (self.node_at(x, n)?, self.node_at(y, n)?);
            samples.push(match pair {
                (Some(a), Some(b)) => Some(self.point_dist(&a, &b, scope)?),
                _ => None,
            });
        }
        Ok(self.store(key, x, y, samples))
    }

    fn store(
        &self,
        key: ProfileKey,
        x: &HypernodeSpec,
        y: &HypernodeSpec,
        samples: Vec<Option<Sample>>,
    ) -> Arc<DistanceProfile> {
        let closed = !x.is_scheduled() && !y.is_scheduled();
        let fit = if closed { fit_samples(&samples) } else { None };
        let p = Arc::new(DistanceProfile { samples, fit });
        self.profiles.lock().unwrap().insert(key, p.clone());
        p
    }

    /// Profiles of every spec against the constant `x`, sharing one
    /// single-source search per index.
    pub fn profiles_from(
        &self,
        x: &HypernodeSpec,
        specs: &[HypernodeSpec],
        window: u64,
        scope: Option<Rank>,
    ) -> Result<Vec<Arc<DistanceProfile>>> {
        if !x.is_constant() {
            return specs.iter().map(|s| self.profile(x, s, window, scope)).collect();
        }
        let pending: Vec<usize> = {
            let cache = self.profiles.lock().unwrap();
            (0..specs.len()).filter(|&i| !cache.contains_key(&Self::key(x, &specs[i], window, scope))).collect()
        };
        if !pending.is_empty() {
            let Some(xn) = self.node_at(x, 0)? else {
                return Err(Error::UnknownNode(x.to_string()));
            };
            let mut columns: Vec<Vec<Option<Sample>>> = vec![Vec::new(); pending.len()];
            for n in 0..=window {
                let nodes: Vec<Option<WNodeRef>> =
                    pending.iter().map(|&i| self.node_at(&specs[i], n)).collect::<Result<_>>()?;
                let mut all: Vec<&WNodeRef> = nodes.iter().flatten().collect();
                all.push(&xn);
                let w = self.window_for(&all);
                let here = self.metric.single_source(&xn, w, scope)?;
                let next = self.metric.single_source(&xn, w + 1, scope)?;
                for (col, node) in columns.iter_mut().zip(&nodes) {
                    col.push(match node {
                        None => None,
                        Some(y) => {
                            let value = here
                                .get(y)
                                .cloned()
                                .ok_or_else(|| Error::Unreachable(xn.to_string(), y.to_string()))?;
                            Some(Sample { certified: next.get(y) == Some(&value), value })
                        }
                    });
                }
            }
            for (&i, col) in pending.iter().zip(columns) {
                self.store(Self::key(x, &specs[i], window, scope), x, &specs[i], col);
            }
        }
        specs.iter().map(|s| self.profile(x, s, window, scope)).collect()
    }

    /// Whether `{n : x_n = y_n}` is in the ultrafilter.
    pub fn hypernode_equal(&self, x: &HypernodeSpec, y: &HypernodeSpec, window: u64) -> Result<FilterDecision> {
        self.check_graph(x)?;
        self.check_graph(y)?;
        if let Some(p) = spec::equality_predicate(x, y) {
            return Ok(decide(&p, window));
        }
        if let (Some(a), Some(b)) = (x.schedule(), y.schedule()) {
            if a.chain.same_as(&b.chain) {
                let same = a.position() == b.position();
                return Ok(decide(&IndexPredicate::Const(same), window));
            }
        }
        let sampled = (0..=window)
            .map(|n| Ok(self.indices_at(x, n)? == self.indices_at(y, n)?))
            .collect::<Result<Vec<bool>>>()?;
        Ok(decide(&IndexPredicate::Sampled(sampled), window))
    }

    /// Whether `{n : x_n exists}` is in the ultrafilter.
    pub fn exists_hyper(&self, x: &HypernodeSpec, window: u64) -> Result<FilterDecision> {
        self.check_graph(x)?;
        match spec::spec_exists_predicate(self.graph(), x) {
            Some(p) => Ok(decide(&p, window)),
            None => {
                let s = (0..=window).map(|n| Ok(self.node_at(x, n)?.is_some())).collect::<Result<Vec<_>>>()?;
                Ok(decide(&IndexPredicate::Sampled(s), window))
            }
        }
    }

    /// Whether `{n : x_n is maximal}` is in the ultrafilter.
    pub fn maximal_hyper(&self, x: &HypernodeSpec, window: u64) -> Result<FilterDecision> {
        self.check_graph(x)?;
        if let Some(p) = spec::maximal_predicate(self.graph(), x) {
            return Ok(decide(&p, window));
        }
        let mut s = Vec::new();
        for n in 0..=window {
            s.push(match self.node_at(x, n)? {
                Some(node) => self.graph().maximal_node(&node)?,
                None => false,
            });
        }
        Ok(decide(&IndexPredicate::Sampled(s), window))
    }

    /// Checks `D_xz(n) ≤ D_xy(n) ⊕ D_yz(n)` on every sample and decides the
    /// predicate symbolically when all three profiles are fitted. A failing
    /// sample is a model violation.
    pub fn triangle_hyper(
        &self,
        x: &HypernodeSpec,
        y: &HypernodeSpec,
        z: &HypernodeSpec,
        window: u64,
    ) -> Result<FilterDecision> {
        let xz = self.hyperdist(x, z, window)?;
        let xy = self.hyperdist(x, y, window)?;
        let yz = self.hyperdist(y, z, window)?;
        let mut sampled = Vec::new();
        for n in 0..=window {
            let ok = match (xz.value(n), xy.value(n), yz.value(n)) {
                (Some(a), Some(b), Some(c)) => {
                    if *a > b.nat_sum(c) {
                        return Err(Error::ModelViolation(format!(
                            "triangle inequality fails at n = {n} for {x}, {y}, {z}: {a} > {b} + {c}"
                        )));
                    }
                    true
                }
                _ => false,
            };
            sampled.push(ok);
        }
        match (&xz.fit, &xy.fit, &yz.fit) {
            (Some(a), Some(b), Some(c)) => {
                let rhs = b.nat_sum(c);
                let start = a.start.max(rhs.start) as usize;
                let pred = spec::with_prefix(start, |n| sampled.get(n as usize) == Some(&true), a.le_predicate(&rhs));
                Ok(decide(&pred, window))
            }
            _ => Ok(decide(&IndexPredicate::Sampled(sampled), window)),
        }
    }

    /// Whether two 0-hypernodes are pointwise joined by a branch, i.e. their
    /// profile is eventually the constant 1.
    pub fn hyperbranch(&self, x: &HypernodeSpec, y: &HypernodeSpec, window: u64) -> Result<FilterDecision> {
        if x.rank != Rank::Finite(0) || y.rank != Rank::Finite(0) {
            return Err(Error::Rank("hyperbranches join 0-hypernodes".into()));
        }
        let p = self.hyperdist(x, y, window)?;
        let Some(fit) = &p.fit else {
            return Ok(FilterDecision::inconclusive("profile has no exact fit"));
        };
        let one = SymOrd {
            start: fit.start,
            coeffs: [(
                ExpRank::Finite(0),
                crate::poly::Poly::constant(num_rational::BigRational::from_integer(1.into())),
            )]
            .into_iter()
            .collect(),
        };
        let pred = IndexPredicate::and(vec![fit.le_predicate(&one), one.le_predicate(fit)]);
        let direct = |n: u64| p.value(n) == Some(&Ordinal::from_natural(1));
        Ok(decide(&spec::with_prefix(fit.start as usize, direct, pred), window))
    }
}

fn overflow(spec: &HypernodeSpec, n: u64) -> Error {
    Error::Presentation(format!("indices of {spec} overflow at n = {n}"))
}

#[cfg(test)]
mod tests;
