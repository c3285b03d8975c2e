//! Nodal galaxies of the enlargement: limited distance, partitions,
//! principal membership, closeness and the ladder of galaxies.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::enlargement::{
    constant_value, decide, is_constant, with_prefix, Chain, DistanceProfile, Enlargement, FilterDecision,
    HypernodeSpec, IndexPredicate, SignCond, SymOrd,
};
use crate::error::{Error, Result};
use crate::ordinal::ExpRank;
use crate::poly::RatPoly;
use crate::rank::Rank;
use crate::wgraph::{Dsu, WGraph, WNodeRef};
use crate::Ordinal;

mod closer;
mod construct;
mod embedding;

pub use closer::{Closeness, ClosenessVerdict, OrderReport};
pub use construct::Witness;
pub use embedding::EmbeddingReport;

/// One galaxy, named by a representative.
#[derive(Debug, Clone, PartialEq)]
pub struct GalaxyId {
    pub rank: Rank,
    pub representative: HypernodeSpec,
    pub principal: bool,
}

impl fmt::Display for GalaxyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G^{}({})", self.rank, self.representative)?;
        if self.principal {
            write!(f, " [principal]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalaxyPartition {
    pub rank: Rank,
    pub blocks: Vec<(GalaxyId, Vec<HypernodeSpec>)>,
    /// Index pairs into the input whose verdict was inconclusive.
    pub inconclusive: Vec<(usize, usize)>,
    /// Block number of every input spec.
    pub block_of: Vec<usize>,
}

impl GalaxyPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|(_, m)| m.len()).collect()
    }

    /// Inputs that appear in some inconclusive pair.
    pub fn flagged(&self) -> BTreeSet<usize> {
        self.inconclusive.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub alpha: GalaxyPartition,
    pub rho: GalaxyPartition,
    pub holds: bool,
    /// Inputs left out because one of the partitions flagged them.
    pub skipped: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationReport {
    pub rho_blocks: usize,
    pub sigma_blocks: Option<usize>,
    /// `σ` above the graph rank: nothing to check.
    pub vacuous: bool,
    pub holds: bool,
}

/// Galaxy-level queries over one wgraph.
#[derive(Debug)]
pub struct Galaxies<'g> {
    enl: Enlargement<'g>,
}

impl<'g> Galaxies<'g> {
    pub fn new(graph: &'g WGraph) -> Self {
        Galaxies { enl: Enlargement::new(graph) }
    }

    pub fn with_enlargement(enl: Enlargement<'g>) -> Self {
        Galaxies { enl }
    }

    pub fn enlargement(&self) -> &Enlargement<'g> {
        &self.enl
    }

    pub fn graph(&self) -> &'g WGraph {
        self.enl.graph()
    }

    pub fn parse(&self, text: &str) -> Result<HypernodeSpec> {
        self.enl.parse(text)
    }

    fn check_rank(&self, rho: Rank) -> Result<()> {
        if rho > self.graph().nu() {
            return Err(Error::rank_above(rho, self.graph().nu()));
        }
        Ok(())
    }

    /// Smallest maximal wnode of the window-1 slice.
    pub fn canonical_standard(&self) -> Result<HypernodeSpec> {
        let slice = self.graph().expand(1)?;
        let mut nodes: Vec<&WNodeRef> = slice.nodes().iter().collect();
        nodes.sort();
        for n in nodes {
            if self.graph().maximal_node(n)? {
                return Ok(HypernodeSpec::constant(self.graph(), n));
            }
        }
        Err(Error::Presentation("the graph has no maximal wnode".into()))
    }

    /// Standard hypernode used for principal membership of `x`.
    pub fn standard_for(&self, x: &HypernodeSpec) -> Result<HypernodeSpec> {
        match x.schedule() {
            Some(s) => Ok(HypernodeSpec::constant(self.graph(), &s.chain.anchor)),
            None => self.canonical_standard(),
        }
    }

    /// Whether `x` and `y` are `ρ`-limitedly distant.
    pub fn limitedly_distant(
        &self,
        x: &HypernodeSpec,
        y: &HypernodeSpec,
        rho: Rank,
        window: u64,
    ) -> Result<FilterDecision> {
        self.limitedly_distant_in(x, y, rho, window, None)
    }

    /// As [`Self::limitedly_distant`] with distances measured inside rank `scope`.
    pub fn limitedly_distant_in(
        &self,
        x: &HypernodeSpec,
        y: &HypernodeSpec,
        rho: Rank,
        window: u64,
        scope: Option<Rank>,
    ) -> Result<FilterDecision> {
        self.check_rank(rho)?;
        if self.enl.hypernode_equal(x, y, window)?.is_in() {
            return Ok(decide(&IndexPredicate::Const(true), window).with_note("equal hypernodes"));
        }
        let chain = x.schedule().or(y.schedule()).map(|s| s.chain.clone());
        if let Some(chain) = chain {
            if scope.is_some() {
                return Ok(FilterDecision::inconclusive("scoped distances of ladder members are not tracked"));
            }
            return self.chain_limited(&chain, x, y, rho, window);
        }
        let p = self.enl.profile(x, y, window, scope)?;
        Ok(bounded_decision(&p, rho, window))
    }

    /// Position of `spec` in the ladder over `chain`, the base being 0.
    pub fn position_in(&self, chain: &Arc<Chain>, spec: &HypernodeSpec) -> Option<i64> {
        match spec.schedule() {
            Some(s) if s.chain.same_as(chain) => Some(s.position()),
            Some(_) => None,
            None => (*spec == chain.base).then_some(0),
        }
    }

    /// Whether `d(base_n, anchor)` stays below `ω^(ρ+1)`.
    fn chain_base_below(&self, chain: &Chain, window: u64) -> Result<bool> {
        let anchor = HypernodeSpec::constant(self.graph(), &chain.anchor);
        let p = self.enl.hyperdist(&chain.base, &anchor, window)?;
        Ok(p.fit.as_ref().is_some_and(|f| f.exponents().iter().all(|e| *e <= chain.exp)))
    }

    fn chain_limited(
        &self,
        chain: &Arc<Chain>,
        x: &HypernodeSpec,
        y: &HypernodeSpec,
        rho: Rank,
        window: u64,
    ) -> Result<FilterDecision> {
        let always = |v: bool, note: &str| decide(&IndexPredicate::Const(v), window).with_note(note);
        match (self.position_in(chain, x), self.position_in(chain, y)) {
            (Some(a), Some(b)) => {
                if a == b {
                    Ok(always(true, "same ladder position"))
                } else if rho <= chain.rho {
                    Ok(always(false, "ladder positions drift apart by unbounded multiples of w^rho"))
                } else if self.chain_base_below(chain, window)? {
                    Ok(always(true, "ladder members stay below w^(rho+1) from the anchor"))
                } else {
                    Ok(FilterDecision::inconclusive("ladder base reaches above w^(rho+1)"))
                }
            }
            (Some(_), None) | (None, Some(_)) => {
                let other = if self.position_in(chain, x).is_some() { y } else { x };
                if !other.is_constant() {
                    return Ok(FilterDecision::inconclusive(
                        "no profile between a ladder member and a moving hypernode",
                    ));
                }
                let Some(c) = self.enl.node_at(other, 0)? else {
                    return Err(Error::UnknownNode(other.to_string()));
                };
                let k = self.enl.point_dist(&chain.anchor, &c, None)?;
                if !k.certified {
                    return Ok(FilterDecision::inconclusive("anchor distance is not window-stable"));
                }
                if rho <= chain.rho {
                    if fits_under(&k.value, chain.rho) {
                        Ok(always(false, "distance to the anchor has an unbounded w^rho coefficient"))
                    } else {
                        Ok(FilterDecision::inconclusive("standard hypernode lies above w^(rho+1) from the anchor"))
                    }
                } else if fits_under(&k.value, rho) && self.chain_base_below(chain, window)? {
                    Ok(always(true, "ladder member and standard hypernode stay below the rank bound"))
                } else {
                    Ok(FilterDecision::inconclusive("standard hypernode lies beyond the rank bound"))
                }
            }
            (None, None) => Ok(FilterDecision::inconclusive("hypernodes from different ladders")),
        }
    }

    /// Union-find over pairwise verdicts; inconclusive pairs stay apart.
    pub fn classify(&self, specs: &[HypernodeSpec], rho: Rank, window: u64) -> Result<GalaxyPartition> {
        self.check_rank(rho)?;
        let mut dsu = Dsu::new(specs.len());
        let mut inconclusive = Vec::new();
        for i in 0..specs.len() {
            for j in i + 1..specs.len() {
                if dsu.find(i) == dsu.find(j) {
                    continue;
                }
                let d = self.limitedly_distant(&specs[i], &specs[j], rho, window)?;
                if d.is_in() {
                    dsu.union(i, j);
                } else if !d.is_out() {
                    inconclusive.push((i, j));
                }
            }
        }
        // a pair skipped after a merge may still be flagged from before
        inconclusive.retain(|&(i, j)| dsu.find(i) != dsu.find(j));
        let mut roots: Vec<usize> = Vec::new();
        let mut block_of = Vec::with_capacity(specs.len());
        let mut members: Vec<Vec<HypernodeSpec>> = Vec::new();
        for (i, s) in specs.iter().enumerate() {
            let r = dsu.find(i);
            let b = match roots.iter().position(|&x| x == r) {
                Some(b) => b,
                None => {
                    roots.push(r);
                    members.push(Vec::new());
                    roots.len() - 1
                }
            };
            members[b].push(s.clone());
            block_of.push(b);
        }
        let mut blocks = Vec::with_capacity(members.len());
        for m in members {
            let representative = m[0].clone();
            let principal = self.principal_membership(&representative, rho, window)?.is_in();
            blocks.push((GalaxyId { rank: rho, representative, principal }, m));
        }
        Ok(GalaxyPartition { rank: rho, blocks, inconclusive, block_of })
    }

    /// Whether `x` lies in the principal `ν`-galaxy.
    pub fn principal_membership(&self, x: &HypernodeSpec, nu: Rank, window: u64) -> Result<FilterDecision> {
        let s = self.standard_for(x)?;
        self.limitedly_distant(x, &s, nu, window)
    }

    /// Checks that every `α`-block sits inside one `ρ`-block.
    pub fn refinement(&self, specs: &[HypernodeSpec], alpha: Rank, rho: Rank, window: u64) -> Result<RefinementReport> {
        if alpha > rho {
            return Err(Error::Rank(format!("refinement needs alpha <= rho, got {alpha} > {rho}")));
        }
        let a = self.classify(specs, alpha, window)?;
        let r = self.classify(specs, rho, window)?;
        let skip: BTreeSet<usize> = a.flagged().union(&r.flagged()).copied().collect();
        let mut target: Vec<Option<usize>> = vec![None; a.len()];
        let mut holds = true;
        for i in (0..specs.len()).filter(|i| !skip.contains(i)) {
            let slot = &mut target[a.block_of[i]];
            match slot {
                None => *slot = Some(r.block_of[i]),
                Some(b) if *b != r.block_of[i] => holds = false,
                _ => {}
            }
        }
        Ok(RefinementReport { alpha: a, rho: r, holds, skipped: skip.into_iter().collect() })
    }

    /// One `ρ`-galaxy over the probes forces one `σ`-galaxy.
    pub fn single_propagation(
        &self,
        probes: &[HypernodeSpec],
        rho: Rank,
        sigma: Rank,
        window: u64,
    ) -> Result<PropagationReport> {
        if sigma <= rho {
            return Err(Error::Rank(format!("propagation needs rho < sigma, got {rho} >= {sigma}")));
        }
        let a = self.classify(probes, rho, window)?;
        if a.len() > 1 || !a.inconclusive.is_empty() {
            return Err(Error::Inconclusive(format!("probes form {} {rho}-galaxies, not one", a.len())));
        }
        if sigma > self.graph().nu() {
            return Ok(PropagationReport { rho_blocks: a.len(), sigma_blocks: None, vacuous: true, holds: true });
        }
        let b = self.classify(probes, sigma, window)?;
        let holds = b.len() <= 1 && b.inconclusive.is_empty();
        Ok(PropagationReport { rho_blocks: a.len(), sigma_blocks: Some(b.len()), vacuous: false, holds })
    }
}

/// Whether `v ≤ ω^ρ·μ` for some natural `μ`, i.e. no exponent above `ρ`.
pub(crate) fn fits_under(v: &Ordinal, rho: Rank) -> bool {
    match rho {
        Rank::ArrowOmega => v.coeff_at(ExpRank::Omega).is_zero(),
        r => v.leading_exp().is_none_or(|e| e <= r.exp().expect("not arrow")),
    }
}

fn rat_nat(v: &BigUint) -> BigRational {
    BigRational::from_integer(v.clone().into())
}

/// `{n : D(n) ≤ ω^ρ·μ}` for a fitted profile; `⃗ω` ignores `μ`.
pub(crate) fn bound_predicate(fit: &SymOrd, rho: Rank, mu: &BigUint) -> IndexPredicate {
    let zero = |p: RatPoly| IndexPredicate::Sign(p, SignCond::Zero);
    let Some(e) = rho.exp() else {
        return zero(fit.coeff(ExpRank::Omega));
    };
    let mut parts: Vec<IndexPredicate> =
        fit.coeffs.iter().filter(|(x, _)| **x > e).map(|(_, p)| zero(p.clone())).collect();
    let slack = &RatPoly::constant(rat_nat(mu)) - &fit.coeff(e);
    let mut tight = vec![zero(slack.clone())];
    tight.extend(fit.coeffs.iter().filter(|(x, _)| **x < e).map(|(_, p)| zero(p.clone())));
    parts.push(IndexPredicate::or(vec![IndexPredicate::Sign(slack, SignCond::Positive), IndexPredicate::and(tight)]));
    IndexPredicate::and(parts)
}

fn sample_within(v: &Ordinal, rho: Rank, mu: &BigUint) -> bool {
    match rho.exp() {
        None => v.coeff_at(ExpRank::Omega).is_zero(),
        Some(e) => v.le_omega_pow_scaled(e, mu),
    }
}

/// Limited-distance verdict for a sampled profile.
pub fn bounded_decision(p: &DistanceProfile, rho: Rank, window: u64) -> FilterDecision {
    if !p.certified() {
        return FilterDecision::inconclusive("profile is not window-stable");
    }
    let Some(fit) = &p.fit else {
        return FilterDecision::inconclusive("profile has no exact polynomial fit");
    };
    if fit.coeffs.values().any(|c| c.eventual_sign().is_lt()) {
        return FilterDecision::inconclusive("fitted coefficient turns negative");
    }
    let decide_with = |mu: &BigUint, note: String| {
        let direct = |n: u64| p.value(n).is_some_and(|v| sample_within(v, rho, mu));
        decide(&with_prefix(fit.start as usize, direct, bound_predicate(fit, rho, mu)), window).with_note(note)
    };
    let Some(e) = rho.exp() else {
        let c = fit.coeff(ExpRank::Omega);
        let note = if c.is_zero() { "below w^w".to_string() } else { format!("w^w coefficient {c}") };
        return decide_with(&BigUint::zero(), note);
    };
    let higher: Vec<ExpRank> = fit.exponents().into_iter().filter(|x| *x > e).collect();
    let c = fit.coeff(e);
    if higher.is_empty() && is_constant(&c) {
        let v = constant_value(&c);
        if !v.is_integer() || v.is_negative() {
            return FilterDecision::inconclusive("fitted coefficient is not a natural number");
        }
        let lower = fit.exponents().iter().any(|x| *x < e);
        let mu = v.to_integer().to_biguint().expect("nonnegative") + BigUint::from(u8::from(lower));
        let note = format!("mu = {mu}");
        return decide_with(&mu, note);
    }
    // unbounded: any fixed bound fails eventually, so one above every sample
    // serves as the certificate
    let top = p.samples.iter().flatten().map(|s| s.value.coeff_at(e)).max().unwrap_or_default();
    let note = match higher.last() {
        Some(h) => format!("coefficient of w^{h} is {} and does not vanish", fit.coeff(*h)),
        None => format!("coefficient of w^{e} is {c}, unbounded"),
    };
    let d = decide_with(&(top + 1u8), note);
    if d.is_in() {
        // cannot happen for an unbounded fit; keep the verdict honest anyway
        return FilterDecision::inconclusive("unbounded fit decided inside a fixed bound");
    }
    d
}

#[cfg(test)]
mod tests;
