//! Reindexing schedules produced by the ladder construction.
//!
//! A chain starts from a base hypernode `v` whose distance `D(m) = d(v_m, x)`
//! to a fixed wnode `x` has a strictly increasing `ω^ρ` coefficient. Each
//! stage reindexes the previous one:
//!
//! * stair stage: thresholds `t_0 = n_0`, `t_j` the least `n` with
//!   `D(n) ⊖ D(t_{j-1}) > ω^ρ·j`; on `[t_{j-1}, t_j)` the stage takes index
//!   `t_{j-2}` (with `t_{-1} = t_0`). The gap to the previous stage there
//!   exceeds `ω^ρ·(j-1)`, so the new hypernode is strictly closer.
//! * leap stage: `a(n)` is the least `m ≥ max(a(n-1), n)` with
//!   `D(m) ⊖ D(n) ≥ ω^ρ·n`, so the new hypernode is strictly further.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::{Enlargement, HypernodeSpec, IndexMap};
use crate::error::{Error, Result};
use crate::ordinal::ExpRank;
use crate::rank::Rank;
use crate::wgraph::WNodeRef;
use crate::Ordinal;

/// Bound on the forward search for a single threshold or leap target.
const MAX_SEARCH: u64 = 4096;

/// Base indices filled per distance search.
const BATCH: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageKind {
    Stair,
    Leap,
}

/// Shared data of one ladder: base, anchor and cached base distances.
#[derive(Debug)]
pub struct Chain {
    pub base: HypernodeSpec,
    pub anchor: WNodeRef,
    pub rho: Rank,
    pub exp: ExpRank,
    /// Index from which the base profile is monotone.
    pub n0: u64,
    base_dist: Mutex<BTreeMap<u64, Ordinal>>,
}

impl Chain {
    pub fn new(base: HypernodeSpec, anchor: WNodeRef, rho: Rank, n0: u64) -> Result<Arc<Chain>> {
        let exp = match rho {
            Rank::ArrowOmega => return Err(Error::Rank("closeness is not defined at rank ->w".into())),
            r => r.exp().expect("finite or omega"),
        };
        if base.is_scheduled() {
            return Err(Error::Construction("the base of a ladder must be closed-form".into()));
        }
        Ok(Arc::new(Chain { base, anchor, rho, exp, n0, base_dist: Mutex::new(BTreeMap::new()) }))
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Chain>) -> bool {
        Arc::ptr_eq(self, other)
    }

    /// `ω^ρ·k`.
    pub fn step(&self, k: u64) -> Ordinal {
        Ordinal::omega_pow_scaled(self.exp, k.into())
    }
}

/// The `depth`-th stage of one kind; `prev` is the stage below (or the base).
#[derive(Debug)]
pub struct Schedule {
    pub chain: Arc<Chain>,
    pub kind: StageKind,
    pub depth: usize,
    prev: Option<Arc<Schedule>>,
    /// Stair: thresholds `t_0, t_1, …`. Leap: values `a(0), a(1), …`.
    memo: Mutex<Vec<u64>>,
}

impl Schedule {
    /// Next stage on top of `prev` (or on the base when `None`).
    pub fn stage(chain: &Arc<Chain>, kind: StageKind, prev: Option<Arc<Schedule>>) -> Result<Arc<Schedule>> {
        if let Some(p) = &prev {
            if p.kind != kind || !p.chain.same_as(chain) {
                return Err(Error::Construction("stages must extend a stage of the same kind and chain".into()));
            }
        }
        let depth = prev.as_ref().map_or(1, |p| p.depth + 1);
        Ok(Arc::new(Schedule { chain: chain.clone(), kind, depth, prev, memo: Mutex::new(Vec::new()) }))
    }

    pub fn prev(&self) -> Option<&Arc<Schedule>> {
        self.prev.as_ref()
    }

    pub fn same_as(&self, other: &Schedule) -> bool {
        self.chain.same_as(&other.chain) && self.kind == other.kind && self.depth == other.depth
    }

    /// Position in the ladder: stairs negative, leaps positive, base 0.
    pub fn position(&self) -> i64 {
        match self.kind {
            StageKind::Stair => -(self.depth as i64),
            StageKind::Leap => self.depth as i64,
        }
    }

    pub fn spec(self: &Arc<Self>) -> HypernodeSpec {
        HypernodeSpec { map: IndexMap::Scheduled(self.clone()), ..self.chain.base.clone() }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StageKind::Stair => "stair",
            StageKind::Leap => "leap",
        };
        write!(f, "{kind}^{}({} @ {}, rho={})", self.depth, self.chain.base, self.chain.anchor, self.chain.rho)
    }
}

impl Enlargement<'_> {
    /// `d(v_m, x)` for the chain base, certified one window up. A miss fills
    /// the next [`BATCH`] indices from one pair of searches.
    pub fn chain_dist(&self, chain: &Chain, m: u64) -> Result<Ordinal> {
        if let Some(d) = chain.base_dist.lock().unwrap().get(&m) {
            return Ok(d.clone());
        }
        let mut nodes = Vec::with_capacity(BATCH as usize);
        for i in m..m + BATCH {
            match self.node_at(&chain.base, i)? {
                Some(node) => nodes.push((i, node)),
                None if i == m => {
                    return Err(Error::Construction(format!("{} has no wnode at n = {m}", chain.base)));
                }
                None => break,
            }
        }
        let mut refs: Vec<&WNodeRef> = nodes.iter().map(|(_, n)| n).collect();
        refs.push(&chain.anchor);
        let w = self.window_for(&refs);
        let here = self.metric().single_source(&chain.anchor, w, None)?;
        let next = self.metric().single_source(&chain.anchor, w + 1, None)?;
        let mut cache = chain.base_dist.lock().unwrap();
        for (i, node) in &nodes {
            match (here.get(node), next.get(node)) {
                (Some(a), Some(b)) if a == b => {
                    cache.insert(*i, a.clone());
                }
                _ if *i == m => {
                    return Err(Error::Construction(format!("d({node}, {}) is not window-stable", chain.anchor)));
                }
                _ => {}
            }
        }
        Ok(cache[&m].clone())
    }

    /// Base index reached by `sched` at `n`.
    pub fn sigma(&self, sched: &Schedule, n: u64) -> Result<u64> {
        let t = self.tau(sched, n)?;
        match &sched.prev {
            None => Ok(t),
            Some(p) => self.sigma(p, t),
        }
    }

    /// Distance profile of the stage below `sched` at `m`.
    fn below_dist(&self, sched: &Schedule, m: u64) -> Result<Ordinal> {
        let i = match &sched.prev {
            None => m,
            Some(p) => self.sigma(p, m)?,
        };
        self.chain_dist(&sched.chain, i)
    }

    fn exceeds(&self, sched: &Schedule, m: u64, from: u64, k: u64, strict: bool) -> Result<bool> {
        let (a, b) = (self.below_dist(sched, m)?, self.below_dist(sched, from)?);
        Ok(match a.nat_diff(&b) {
            None => false,
            Some(d) => {
                let step = sched.chain.step(k);
                if strict {
                    d > step
                } else {
                    d >= step
                }
            }
        })
    }

    fn thresholds_up_to(&self, sched: &Schedule, count: usize, cover: Option<u64>) -> Result<Vec<u64>> {
        let mut t = sched.memo.lock().unwrap().clone();
        if t.is_empty() {
            t.push(sched.chain.n0);
        }
        while t.len() < count || cover.is_some_and(|n| *t.last().unwrap() <= n) {
            let j = t.len() as u64;
            let prev = *t.last().unwrap();
            let mut m = prev + 1;
            while !self.exceeds(sched, m, prev, j, true)? {
                m += 1;
                if m - prev > MAX_SEARCH {
                    return Err(Error::Construction(format!(
                        "{sched}: threshold {j} not found within {MAX_SEARCH} steps"
                    )));
                }
            }
            t.push(m);
        }
        *sched.memo.lock().unwrap() = t.clone();
        Ok(t)
    }

    fn leap_values(&self, sched: &Schedule, upto: u64) -> Result<Vec<u64>> {
        let mut a = sched.memo.lock().unwrap().clone();
        while a.len() as u64 <= upto {
            let n = a.len() as u64;
            let v = if n < sched.chain.n0 {
                n
            } else {
                let mut m = a.last().copied().unwrap_or(0).max(n);
                let lo = m;
                while !self.exceeds(sched, m, n, n, false)? {
                    m += 1;
                    if m - lo > MAX_SEARCH {
                        return Err(Error::Construction(format!("{sched}: no leap target for n = {n}")));
                    }
                }
                m
            };
            a.push(v);
        }
        *sched.memo.lock().unwrap() = a.clone();
        Ok(a)
    }

    /// Index into the stage below chosen by `sched` at `n`.
    pub fn tau(&self, sched: &Schedule, n: u64) -> Result<u64> {
        match sched.kind {
            StageKind::Leap => Ok(self.leap_values(sched, n)?[n as usize]),
            StageKind::Stair => {
                if n < sched.chain.n0 {
                    return Ok(n);
                }
                let t = self.thresholds_up_to(sched, 1, Some(n))?;
                // t[j-1] <= n < t[j]
                let j = t.iter().position(|&x| x > n).expect("thresholds cover n");
                Ok(if j >= 2 { t[j - 2] } else { t[0] })
            }
        }
    }

    /// From this index on, the stage below `sched` exceeds `sched` (stair) or
    /// `sched` exceeds the stage below (leap) by at least `ω^ρ·m0`.
    pub fn link_threshold(&self, sched: &Schedule, m0: u64) -> Result<u64> {
        match sched.kind {
            StageKind::Leap => Ok(sched.chain.n0.max(m0)),
            StageKind::Stair => Ok(self.thresholds_up_to(sched, m0 as usize + 1, None)?[m0 as usize]),
        }
    }

    pub(crate) fn scheduled_indices(&self, sched: &Schedule, n: u64) -> Result<Vec<i64>> {
        let i = self.sigma(sched, n)?;
        self.indices_at(&sched.chain.base, i)
    }
}
