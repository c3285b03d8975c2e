//! Ordinal walk lengths and shortest-walk distances.
//!
//! Distances are computed on a window slice by least-first search. Branches
//! weigh 1, a tip traversal of rank `α` weighs `ω^(α+1)` and passing between
//! a wnode and a wnode it embraces weighs 0. Because the natural sum is
//! strictly monotone, Dijkstra's algorithm is exact for these weights.

mod search;
mod walk;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

pub use search::SearchGraph;
pub use walk::{walk_length, Segment, WalkSpec};

use crate::error::{Error, Result};
use crate::rank::Rank;
use crate::wgraph::{Section, Slice, WGraph, WNodeRef};
use crate::Ordinal;

/// How a tip traversal is laid out in the search graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum LengthModel {
    /// A traversal lands on the tip's anchor; a finite run along the tip
    /// from there adds its branches by natural sum.
    #[default]
    NaturalSumInclusive,
    /// A traversal lands on any wnode of the tip's walk for the flat price
    /// `ω^(α+1)`.
    TipOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: Ordinal,
    pub window: u64,
    /// Set when windows `window` and `window + 1` give the same value.
    pub certified: bool,
}

/// A slice together with its search graph for one scope.
#[derive(Debug)]
pub struct Prepared {
    pub slice: Slice,
    pub search: SearchGraph,
}

/// Single-source distances over one prepared slice.
#[derive(Debug, Clone)]
pub struct DistanceMap {
    pub prepared: Arc<Prepared>,
    pub source: usize,
    pub dist: Vec<Option<Ordinal>>,
    pred: Vec<Option<(usize, usize)>>,
}

impl DistanceMap {
    pub fn get(&self, node: &WNodeRef) -> Option<&Ordinal> {
        let id = self.prepared.slice.id_of(node)?;
        self.dist[self.prepared.search.promote(id)].as_ref()
    }

    /// Least walk to `target`, ties broken towards smaller predecessors.
    pub fn walk_to(&self, target: usize) -> Option<WalkSpec> {
        self.dist[target].as_ref()?;
        let mut ids = vec![target];
        let mut segs = Vec::new();
        let mut cur = target;
        while let Some((p, e)) = self.pred[cur] {
            segs.push(self.prepared.search.edge(p, e).segment.clone());
            ids.push(p);
            cur = p;
        }
        ids.reverse();
        segs.reverse();
        let slice = &self.prepared.slice;
        Some(WalkSpec { nodes: ids.iter().map(|&i| slice.node(i).clone()).collect(), segments: segs })
    }
}

type SliceKey = (u64, Option<Rank>);

/// Distance queries against one wgraph with cached slices.
#[derive(Debug)]
pub struct Metric<'g> {
    graph: &'g WGraph,
    model: LengthModel,
    cache: Mutex<HashMap<SliceKey, Arc<Prepared>>>,
}

impl<'g> Metric<'g> {
    pub fn new(graph: &'g WGraph) -> Self {
        Self::with_model(graph, LengthModel::default())
    }

    pub fn with_model(graph: &'g WGraph, model: LengthModel) -> Self {
        Metric { graph, model, cache: Mutex::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &'g WGraph {
        self.graph
    }

    pub fn model(&self) -> LengthModel {
        self.model
    }

    /// The slice at `window` with its search graph restricted to wnodes of
    /// rank within `scope` (all wnodes when `None`).
    pub fn prepared(&self, window: u64, scope: Option<Rank>) -> Result<Arc<Prepared>> {
        if let Some(rho) = scope {
            if rho > self.graph.nu() {
                return Err(Error::rank_above(rho, self.graph.nu()));
            }
        }
        if let Some(p) = self.cache.lock().unwrap().get(&(window, scope)) {
            return Ok(p.clone());
        }
        let slice = self.graph.expand(window)?;
        let search = SearchGraph::build(&slice, self.model, scope);
        let p = Arc::new(Prepared { slice, search });
        self.cache.lock().unwrap().insert((window, scope), p.clone());
        Ok(p)
    }

    pub fn single_source(&self, x: &WNodeRef, window: u64, scope: Option<Rank>) -> Result<DistanceMap> {
        let prepared = self.prepared(window, scope)?;
        let id = prepared.slice.require(x)?;
        if !prepared.search.in_scope(id) {
            return Err(Error::Rank(format!("{x} lies outside scope {}", scope.unwrap())));
        }
        let source = prepared.search.promote(id);
        let (dist, pred) = prepared.search.dijkstra(source);
        Ok(DistanceMap { prepared, source, dist, pred })
    }

    /// Distance within a single window.
    pub fn dist_at(&self, x: &WNodeRef, y: &WNodeRef, window: u64, scope: Option<Rank>) -> Result<Ordinal> {
        let map = self.single_source(x, window, scope)?;
        let yid = map.prepared.slice.require(y)?;
        if !map.prepared.search.in_scope(yid) {
            return Err(Error::Rank(format!("{y} lies outside scope {}", scope.unwrap())));
        }
        map.get(y).cloned().ok_or_else(|| Error::Unreachable(x.to_string(), y.to_string()))
    }

    pub fn wdist(&self, x: &WNodeRef, y: &WNodeRef, window: u64) -> Result<DistanceResult> {
        self.wdist_scoped(x, y, window, None)
    }

    /// Distance at `window`, certified against `window + 1`.
    pub fn wdist_scoped(&self, x: &WNodeRef, y: &WNodeRef, window: u64, scope: Option<Rank>) -> Result<DistanceResult> {
        let value = self.dist_at(x, y, window, scope)?;
        let next = self.dist_at(x, y, window + 1, scope)?;
        Ok(DistanceResult { certified: next == value, value, window })
    }

    /// A least walk from `x` to `y` (after promotion to maximal wnodes).
    pub fn shortest_walk(&self, x: &WNodeRef, y: &WNodeRef, window: u64, scope: Option<Rank>) -> Result<WalkSpec> {
        let map = self.single_source(x, window, scope)?;
        let slice = &map.prepared.slice;
        let target = map.prepared.search.promote(slice.require(y)?);
        map.walk_to(target).ok_or_else(|| Error::Unreachable(x.to_string(), y.to_string()))
    }

    /// Walk from `x` through section `s` to `y`: into `s` by a tip or
    /// embrace of `x`, a least walk inside `s`, out by a tip or embrace of `y`.
    pub fn reach_walk(&self, x: &WNodeRef, y: &WNodeRef, s: &Section) -> Result<WalkSpec> {
        for n in [x, y] {
            if !self.graph.incident(n, s)? {
                return Err(Error::Incidence(format!("{n} is not incident to the section of {}", s.representative())));
            }
        }
        if x == y {
            return Ok(WalkSpec::trivial(x.clone()));
        }
        let inner = self.prepared(s.window, Some(s.rank))?;
        let full = self.graph.expand(s.window)?;
        let entries = |n: &WNodeRef| -> Result<Vec<(WNodeRef, Segment)>> {
            let id = full.require(n)?;
            let mut out = Vec::new();
            for &t in full.embraced_tips(id) {
                let tip = &full.tips()[t];
                let seg = Segment::Tip { family: tip.family.clone(), indices: tip.indices.clone(), rank: tip.rank };
                let targets: Vec<usize> = match self.model {
                    LengthModel::NaturalSumInclusive => vec![tip.anchor],
                    LengthModel::TipOnly => tip.trace.clone(),
                };
                for u in targets {
                    out.push((full.node(u).clone(), seg.clone()));
                }
            }
            for &u in full.embraced_nodes(id) {
                out.push((full.node(u).clone(), Segment::Embrace));
            }
            out.retain(|(u, _)| s.contains(u));
            Ok(out)
        };
        let (from_x, from_y) = (entries(x)?, entries(y)?);
        let mut best: Option<(Ordinal, WalkSpec)> = None;
        for (u, su) in &from_x {
            let map = self.single_source(u, s.window, Some(s.rank))?;
            for (v, sv) in &from_y {
                let vid = inner.slice.require(v)?;
                let Some(mid) = map.walk_to(vid) else { continue };
                let mut w = WalkSpec { nodes: vec![x.clone(), u.clone()], segments: vec![su.clone()] };
                w.extend(mid);
                w.extend(WalkSpec { nodes: vec![v.clone(), y.clone()], segments: vec![sv.clone()] });
                let len = walk_length(&w);
                if best.as_ref().is_none_or(|(b, _)| len < *b) {
                    best = Some((len, w));
                }
            }
        }
        best.map(|(_, w)| w).ok_or_else(|| Error::Unreachable(x.to_string(), y.to_string()))
    }

    /// `wadjacent(x, y)` or `d(x, y) ≥ ω^ρ`, for two `ρ`-wnodes.
    pub fn boundary_crossing_bound(&self, x: &WNodeRef, y: &WNodeRef, window: u64) -> Result<bool> {
        let rho = x.rank;
        if y.rank != rho {
            return Err(Error::Rank(format!("{x} and {y} have different ranks")));
        }
        if self.graph.wadjacent(x, y, rho, window)? {
            return Ok(true);
        }
        let exp = rho.exp().ok_or_else(|| Error::Rank(format!("no bound ω^{rho}")))?;
        let d = self.dist_at(x, y, window, None)?;
        Ok(d >= Ordinal::omega_pow(exp))
    }

    /// Greedy one-ended `ρ`-walk from `x0` through `ρ`-wnodes, each step to an
    /// unvisited `ρ`-adjacent wnode farthest from `x0`, with the subsequence
    /// `m_k` of first visits at distance `≥ ω^ρ·k`.
    pub fn unbounded_walk(&self, rho: Rank, x0: &WNodeRef, k: usize, window: u64) -> Result<UnboundedWalk> {
        let g = self.graph;
        if x0.rank != rho {
            return Err(Error::Rank(format!("{x0} is not a {rho}-wnode")));
        }
        let exp = rho.exp().ok_or_else(|| Error::Rank(format!("no bound ω^{rho}")))?;
        if !g.is_locally_finite(rho, window)?.is_certified() {
            return Err(Error::Inconclusive(format!("local finiteness at rank {rho} is not certified")));
        }
        if !g.metadata().infinite_boundary.contains(&rho) {
            return Err(Error::Inconclusive(format!(
                "the presentation does not declare infinitely many boundary {rho}-wnodes"
            )));
        }
        let here = self.single_source(x0, window, Some(rho))?;
        let next = self.single_source(x0, window + 1, Some(rho))?;
        let slice = &here.prepared.slice;
        let labels = slice.section_labels(rho.pred().expect("ranks with exponents have a predecessor"));
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut incident: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        for x in (0..slice.len()).filter(|&x| slice.node(x).rank == rho) {
            let secs = slice.incident_sections(x, &labels);
            for &s in &secs {
                members.entry(s).or_default().push(x);
            }
            incident.insert(x, secs);
        }

        let start = slice.require(x0)?;
        let mut visited = vec![start];
        let mut walk = WalkSpec::trivial(x0.clone());
        let mut subsequence = Vec::new();
        let mut distances = vec![Ordinal::zero()];
        let sections = slice.sections_at(labels.rank);
        while subsequence.len() < k {
            let cur = *visited.last().unwrap();
            let mut best: Option<(Ordinal, usize, usize)> = None;
            for &s in &incident[&cur] {
                for &y in &members[&s] {
                    if visited.contains(&y) {
                        continue;
                    }
                    let Some(d) = here.dist[y].clone() else { continue };
                    let better = match &best {
                        None => true,
                        Some((bd, by, _)) => d > *bd || (d == *bd && y < *by),
                    };
                    if better {
                        best = Some((d, y, s));
                    }
                }
            }
            let Some((d, y, s)) = best else {
                return Err(Error::Inconclusive(format!(
                    "walk stalled after {} steps at window {window}; found {} of {k} subsequence terms",
                    visited.len() - 1,
                    subsequence.len()
                )));
            };
            let yref = slice.node(y);
            if next.get(yref) != Some(&d) {
                return Err(Error::Inconclusive(format!("distance to {yref} is not stable at window {window}")));
            }
            walk.extend(self.reach_walk(slice.node(cur), yref, &sections[s])?);
            visited.push(y);
            distances.push(d.clone());
            while subsequence.len() < k && d >= Ordinal::omega_pow_scaled(exp, (subsequence.len() as u64 + 1).into()) {
                subsequence.push(visited.len() - 1);
            }
        }
        Ok(UnboundedWalk {
            nodes: visited.iter().map(|&i| slice.node(i).clone()).collect(),
            walk,
            subsequence,
            distances,
        })
    }
}

/// Result of [`Metric::unbounded_walk`].
#[derive(Debug, Clone)]
pub struct UnboundedWalk {
    /// `x_0, x_1, …` in visiting order.
    pub nodes: Vec<WNodeRef>,
    pub walk: WalkSpec,
    /// `m_1 < … < m_K`, positions in `nodes`.
    pub subsequence: Vec<usize>,
    /// `d(x_0, x_i)` for every visited wnode, restricted to rank `ρ`.
    pub distances: Vec<Ordinal>,
}

/// One-shot distance with the default length model.
pub fn wdist(g: &WGraph, x: &WNodeRef, y: &WNodeRef, window: u64) -> Result<DistanceResult> {
    Metric::new(g).wdist(x, y, window)
}

#[cfg(test)]
mod tests;
