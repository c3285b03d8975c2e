use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::closer::DEFAULT_M_MAX;
use super::Galaxies;
use crate::enlargement::{Chain, FilterDecision, HypernodeSpec, Schedule, StageKind};
use crate::error::{Error, Result};
use crate::poly::{Poly, RatPoly};
use crate::rank::Rank;
use crate::wdistance::UnboundedWalk;

/// A hypernode outside the principal galaxy, read off an unbounded walk.
#[derive(Debug, Clone)]
pub struct Witness {
    pub spec: HypernodeSpec,
    pub walk: UnboundedWalk,
    pub membership: FilterDecision,
}

/// Subsequence length used for witnesses.
const WITNESS_STEPS: usize = 4;

impl Galaxies<'_> {
    /// Galaxies `Γ^(-K) … Γ^(K)` around the galaxy of `v`, each closer to the
    /// principal galaxy than the next.
    pub fn ladder(
        &self,
        x: &HypernodeSpec,
        v: &HypernodeSpec,
        rho: Rank,
        k: usize,
        window: u64,
    ) -> Result<Vec<HypernodeSpec>> {
        self.check_rank(rho)?;
        let Some(exp) = rho.exp() else {
            return Err(Error::Rank("the ladder is not defined at rank ->w".into()));
        };
        if !x.is_constant() {
            return Err(Error::Presentation(format!("the ladder is anchored at a standard hypernode, not {x}")));
        }
        if v.is_scheduled() {
            return Err(Error::Construction(format!("{v} is not closed-form")));
        }
        if k == 0 {
            return Ok(vec![v.clone()]);
        }
        let out = self.limitedly_distant(v, x, rho, window)?;
        if !out.is_out() {
            return Err(Error::Construction(format!("{v} is not certified outside the principal galaxy: {out}")));
        }
        let p = self.enl.hyperdist(v, x, window)?;
        let fit = match (&p.fit, p.certified()) {
            (Some(f), true) => f,
            _ => return Err(Error::Construction(format!("d({v}, {x}) has no certified polynomial fit"))),
        };
        if fit.exponents().iter().any(|e| *e > exp) {
            return Err(Error::Construction(format!("d({v}, {x}) = {fit} reaches above w^{rho}")));
        }
        let c = fit.coeff(exp);
        if c.degree().unwrap_or(0) == 0 || !c.eventual_sign().is_gt() {
            return Err(Error::Construction(format!("w^{rho} coefficient {c} of d({v}, {x}) is not unbounded")));
        }
        let mut n0 = fit.start.max(c.sign_stable_from());
        for p in fit.coeffs.values() {
            let d = p.forward_difference();
            if d.eventual_sign().is_lt() {
                return Err(Error::Construction(format!("coefficient {p} of d({v}, {x}) is not monotone")));
            }
            n0 = n0.max(d.sign_stable_from());
        }
        for n in n0..window {
            let (a, b) = (p.value(n), p.value(n + 1));
            if !matches!((a, b), (Some(a), Some(b)) if b.nat_diff(a).is_some()) {
                return Err(Error::Construction(format!("d({v}, {x}) decreases between n = {n} and {}", n + 1)));
            }
        }
        let Some(anchor) = self.enl.node_at(x, 0)? else {
            return Err(Error::UnknownNode(x.to_string()));
        };
        let chain = Chain::new(v.clone(), anchor, rho, n0)?;
        let mut stairs = Vec::with_capacity(k);
        let mut leaps = Vec::with_capacity(k);
        let (mut s, mut l) = (None, None);
        for _ in 0..k {
            let ns = Schedule::stage(&chain, StageKind::Stair, s.take())?;
            let nl = Schedule::stage(&chain, StageKind::Leap, l.take())?;
            stairs.push(ns.spec());
            leaps.push(nl.spec());
            s = Some(ns);
            l = Some(nl);
        }
        let mut specs: Vec<HypernodeSpec> = stairs.into_iter().rev().collect();
        specs.push(v.clone());
        specs.extend(leaps);
        for pair in specs.windows(2) {
            let c = self.closer(&pair[0], &pair[1], rho, x, DEFAULT_M_MAX, window)?;
            if !c.is_closer() {
                return Err(Error::Construction(format!("{} is not closer than {}: {}", pair[0], pair[1], c.reason)));
            }
        }
        Ok(specs)
    }

    /// Diagonal hypernode through the subsequence of an unbounded walk; it
    /// lies outside the principal galaxy.
    pub fn non_principal_witness(&self, rho: Rank, window: u64) -> Result<Witness> {
        self.check_rank(rho)?;
        let g = self.graph();
        let boundary = g.boundary_nodes(rho, window)?;
        let Some(x0) = boundary.first() else {
            return Err(Error::Construction(format!("no boundary {rho}-wnodes in the window")));
        };
        let walk = self.enl.metric().unbounded_walk(rho, x0, WITNESS_STEPS, window).map_err(|e| match e {
            Error::Inconclusive(m) => Error::Construction(format!("hypotheses not certified: {m}")),
            e => e,
        })?;
        let mut points = vec![x0.clone()];
        points.extend(walk.subsequence.iter().map(|&i| walk.nodes[i].clone()));
        if points.iter().any(|p| p.family != x0.family) {
            return Err(Error::Construction("walk subsequence changes family".into()));
        }
        let mut polys = Vec::with_capacity(x0.indices.len());
        for pos in 0..x0.indices.len() {
            let col: Vec<BigRational> =
                points.iter().map(|p| BigRational::from_integer(BigInt::from(p.indices[pos]))).collect();
            let p = RatPoly::fit_exact(0, &col, 2, 2)
                .and_then(|p| integer_poly(&p))
                .ok_or_else(|| Error::Construction(format!("index {pos} of the subsequence has no polynomial form")))?;
            polys.push(p);
        }
        let spec = HypernodeSpec::polynomial(g, &x0.family, polys)?;
        let membership = self.principal_membership(&spec, rho, window)?;
        Ok(Witness { spec, walk, membership })
    }
}

fn integer_poly(p: &RatPoly) -> Option<Poly<i64>> {
    if p.is_zero() {
        return Some(Poly::zero());
    }
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
        .collect::<Option<Vec<i64>>>()?;
    Some(Poly::new(coeffs))
}
