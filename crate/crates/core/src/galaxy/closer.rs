use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use super::Galaxies;
use crate::enlargement::{
    constant_value, decide, is_constant, with_prefix, Chain, FilterDecision, HypernodeSpec, IndexMap, IndexPredicate,
    Schedule, SignCond,
};
use crate::error::{Error, Result};
use crate::ordinal::ExpRank;
use crate::poly::RatPoly;
use crate::rank::Rank;
use crate::Ordinal;

/// Verdict, certificates per `m`, and the reason given.
type Judgement = (Closeness, Vec<(u64, FilterDecision)>, String);

/// Default number of explicit `m0` certificates per closeness query.
pub const DEFAULT_M_MAX: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Closeness {
    Closer,
    NotCloser,
    Inconclusive,
}

impl fmt::Display for Closeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closeness::Closer => "closer",
            Closeness::NotCloser => "not-closer",
            Closeness::Inconclusive => "inconclusive",
        })
    }
}

/// Whether the galaxy of `y` is closer to the principal one than that of `z`,
/// measured from the standard `x`.
#[derive(Debug, Clone)]
pub struct ClosenessVerdict {
    pub verdict: Closeness,
    pub x: HypernodeSpec,
    pub y: HypernodeSpec,
    pub z: HypernodeSpec,
    /// `{n : d(z_n, x) ⊖ d(y_n, x) ≥ ω^ρ·m0}` for each tested `m0`.
    pub certificates: Vec<(u64, FilterDecision)>,
    /// Why the inequality holds for every `m0`, or why it fails.
    pub reason: String,
}

impl ClosenessVerdict {
    pub fn is_closer(&self) -> bool {
        self.verdict == Closeness::Closer
    }
}

/// Closeness relation over a list of hypernodes.
#[derive(Debug, Clone)]
pub struct OrderReport {
    pub specs: Vec<HypernodeSpec>,
    /// `relation[i][j]`: galaxy `i` closer than galaxy `j`.
    pub relation: Vec<Vec<Closeness>>,
    /// Covering pairs of the strict order.
    pub hasse: Vec<(usize, usize)>,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    /// Triples skipped because some verdict was inconclusive.
    pub triples_skipped: usize,
}

impl OrderReport {
    pub fn inconclusive_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.specs.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.relation[i][j] == Closeness::Inconclusive)
            .collect()
    }
}

fn gap_reached(dz: &Ordinal, dy: &Ordinal, exp: ExpRank, m0: u64) -> bool {
    dz.nat_diff(dy).is_some_and(|d| d >= Ordinal::omega_pow_scaled(exp, m0.into()))
}

impl Galaxies<'_> {
    /// Closeness of the galaxy of `y` over that of `z` at rank `ρ`.
    pub fn closer(
        &self,
        y: &HypernodeSpec,
        z: &HypernodeSpec,
        rho: Rank,
        x: &HypernodeSpec,
        m_max: u64,
        window: u64,
    ) -> Result<ClosenessVerdict> {
        self.check_rank(rho)?;
        let Some(exp) = rho.exp() else {
            return Err(Error::Rank("closeness is not defined at rank ->w".into()));
        };
        if !x.is_constant() {
            return Err(Error::Presentation(format!("closeness is measured from a standard hypernode, not {x}")));
        }
        let verdict = |v: Closeness, certificates, reason: String| ClosenessVerdict {
            verdict: v,
            x: x.clone(),
            y: y.clone(),
            z: z.clone(),
            certificates,
            reason,
        };
        let chain = y.schedule().or(z.schedule()).map(|s| s.chain.clone());
        let Some(chain) = chain else {
            let (v, certs, reason) = self.closer_fitted(y, z, exp, x, m_max, window)?;
            if v != Closeness::Inconclusive {
                self.spot_check(y, z, exp, x, m_max, window, v)?;
            }
            return Ok(verdict(v, certs, reason));
        };
        if *x != HypernodeSpec::constant(self.graph(), &chain.anchor) {
            return Ok(verdict(
                Closeness::Inconclusive,
                Vec::new(),
                "ladder closeness is tracked from the ladder anchor only".into(),
            ));
        }
        if rho != chain.rho {
            return Ok(verdict(Closeness::Inconclusive, Vec::new(), format!("ladder was built at rank {}", chain.rho)));
        }
        let (Some(pa), Some(pb)) = (self.position_in(&chain, y), self.position_in(&chain, z)) else {
            return Ok(verdict(Closeness::Inconclusive, Vec::new(), "one hypernode is outside the ladder".into()));
        };
        let (v, certs, reason) = self.closer_on_ladder(&chain, y, z, pa, pb, m_max, window)?;
        Ok(verdict(v, certs, reason))
    }

    /// Symbolic route over fitted profiles `D_y`, `D_z`.
    fn closer_fitted(
        &self,
        y: &HypernodeSpec,
        z: &HypernodeSpec,
        exp: ExpRank,
        x: &HypernodeSpec,
        m_max: u64,
        window: u64,
    ) -> Result<Judgement> {
        let ps = self.enl.profiles_from(x, &[y.clone(), z.clone()], window, None)?;
        let (py, pz) = (&ps[0], &ps[1]);
        if !py.certified() || !pz.certified() {
            return Ok((Closeness::Inconclusive, Vec::new(), "profiles are not window-stable".into()));
        }
        let (Some(fy), Some(fz)) = (&py.fit, &pz.fit) else {
            return Ok((Closeness::Inconclusive, Vec::new(), "profile has no exact polynomial fit".into()));
        };
        let start = fy.start.max(fz.start) as usize;
        let diffs = fz.differences(fy);
        let pred = |m0: u64| gap_predicate(&diffs, exp, m0);
        let certify = |m0: u64| {
            let direct = |n: u64| match (pz.value(n), py.value(n)) {
                (Some(dz), Some(dy)) => gap_reached(dz, dy, exp, m0),
                _ => false,
            };
            decide(&with_prefix(start, direct, pred(m0)), window)
        };
        let mut certs: Vec<(u64, FilterDecision)> = (1..=m_max.max(1)).map(|m0| (m0, certify(m0))).collect();
        let defined = diffs.iter().all(|(_, d)| !d.eventual_sign().is_lt());
        let above = diffs.iter().find(|(e, d)| *e > exp && d.eventual_sign().is_gt());
        let at = diff_at(&diffs, exp);
        let unbounded = !is_constant(&at) && at.eventual_sign().is_gt();
        if defined && (above.is_some() || unbounded) {
            let reason = match above {
                Some((e, d)) => format!("difference has w^{e} coefficient {d}, eventually positive"),
                None => format!("difference has w^{exp} coefficient {at}, unbounded"),
            };
            if certs.iter().all(|(_, c)| c.is_in()) {
                return Ok((Closeness::Closer, certs, reason));
            }
            return Ok((Closeness::Inconclusive, certs, format!("{reason}, yet a tested m0 failed")));
        }
        // the gap either stays bounded or the natural difference is
        // eventually undefined; one m0 past the bound witnesses the failure
        let witness = if defined && diffs.iter().all(|(e, d)| *e <= exp || d.is_zero()) && is_constant(&at) {
            let c = constant_value(&at);
            if c.is_negative() || !c.is_integer() {
                1
            } else {
                c.to_integer().try_into().unwrap_or(u64::MAX - 1) + 1
            }
        } else {
            1
        };
        let reason = if defined {
            format!("difference stays below w^{exp}*{witness}")
        } else {
            "natural difference is eventually undefined".to_string()
        };
        let d = if witness <= m_max { certs[witness as usize - 1].1.clone() } else { certify(witness) };
        if !d.is_out() {
            return Ok((Closeness::Inconclusive, certs, format!("{reason}, but m0 = {witness} was not refuted")));
        }
        if witness > m_max {
            certs.push((witness, d));
        }
        Ok((Closeness::NotCloser, certs, reason))
    }

    /// Re-runs the fitted route with representatives changed on a finite prefix.
    #[allow(clippy::too_many_arguments)]
    fn spot_check(
        &self,
        y: &HypernodeSpec,
        z: &HypernodeSpec,
        exp: ExpRank,
        x: &HypernodeSpec,
        m_max: u64,
        window: u64,
        expected: Closeness,
    ) -> Result<()> {
        let (Some(ay), Some(az)) = (prefix_variant(y), prefix_variant(z)) else {
            return Ok(());
        };
        let (v, _, _) = self.closer_fitted(&ay, &az, exp, x, m_max, window)?;
        if v != expected && v != Closeness::Inconclusive {
            return Err(Error::ModelViolation(format!(
                "closeness of {y} over {z} depends on the representative: {expected} vs {v}"
            )));
        }
        Ok(())
    }

    /// Telescoping route along one ladder.
    #[allow(clippy::too_many_arguments)]
    fn closer_on_ladder(
        &self,
        chain: &Arc<Chain>,
        y: &HypernodeSpec,
        z: &HypernodeSpec,
        pa: i64,
        pb: i64,
        m_max: u64,
        window: u64,
    ) -> Result<Judgement> {
        let stages = collect_stages(y, z);
        let dist = |spec: &HypernodeSpec, p: i64, n: u64| -> Result<Ordinal> {
            let i = match (p, spec.schedule()) {
                (0, _) => n,
                (_, Some(s)) => self.enl.sigma(s, n)?,
                (_, None) => unreachable!("nonzero positions are scheduled"),
            };
            self.enl.chain_dist(chain, i)
        };
        // from `threshold(m0)` on, the higher position exceeds the lower by ω^ρ·m0
        let threshold = |lo: i64, hi: i64, m0: u64| -> Result<u64> {
            let mut best = u64::MAX;
            for p in lo..hi {
                let stage = if p < 0 { stage_at(&stages, p)? } else { stage_at(&stages, p + 1)? };
                best = best.min(self.enl.link_threshold(stage, m0)?);
            }
            Ok(best.max(chain.n0))
        };
        if pa >= pb {
            let reason = if pa == pb {
                "same ladder position".to_string()
            } else {
                format!("position {pa} lies beyond position {pb}")
            };
            let start = if pa == pb { 0 } else { threshold(pb, pa, 1)? };
            let direct = |n: u64| -> bool {
                match (dist(z, pb, n), dist(y, pa, n)) {
                    (Ok(dz), Ok(dy)) => gap_reached(&dz, &dy, chain.exp, 1),
                    _ => false,
                }
            };
            for n in start..=window {
                if direct(n) {
                    return Err(Error::ModelViolation(format!(
                        "ladder positions {pa} and {pb} are ordered the wrong way at n = {n}"
                    )));
                }
            }
            let d = decide(&with_prefix(start as usize, direct, IndexPredicate::Const(false)), window);
            return Ok((Closeness::NotCloser, vec![(1, d)], reason));
        }
        let mut certs = Vec::new();
        for m0 in 1..=m_max.max(1) {
            let start = threshold(pa, pb, m0)?;
            let mut sampled = Vec::new();
            for n in 0..=window.max(start) {
                let ok = gap_reached(&dist(z, pb, n)?, &dist(y, pa, n)?, chain.exp, m0);
                if n >= start && !ok {
                    return Err(Error::ModelViolation(format!(
                        "ladder gap between positions {pa} and {pb} misses w^{}*{m0} at n = {n}",
                        chain.exp
                    )));
                }
                sampled.push(ok);
            }
            let d = decide(&with_prefix(start as usize, |n| sampled[n as usize], IndexPredicate::Const(true)), window);
            certs.push((m0, d));
        }
        let reason = format!(
            "ladder positions {pa} < {pb}: each link gap exceeds every w^{}*m0 from a finite threshold",
            chain.exp
        );
        Ok((Closeness::Closer, certs, reason))
    }

    /// Pairwise closeness with order-law checks; a transitivity or
    /// antisymmetry failure is a model violation.
    pub fn partial_order_check(&self, specs: &[HypernodeSpec], rho: Rank, window: u64) -> Result<OrderReport> {
        let n = specs.len();
        let mut relation = vec![vec![Closeness::NotCloser; n]; n];
        if n == 0 {
            return Ok(OrderReport {
                specs: Vec::new(),
                relation,
                hasse: Vec::new(),
                pairs_checked: 0,
                triples_checked: 0,
                triples_skipped: 0,
            });
        }
        let x = self.standard_for(specs.iter().find(|s| s.is_scheduled()).unwrap_or(&specs[0]))?;
        for i in 0..n {
            for j in 0..n {
                relation[i][j] = self.closer(&specs[i], &specs[j], rho, &x, DEFAULT_M_MAX, window)?.verdict;
            }
            if relation[i][i] == Closeness::Closer {
                return Err(Error::ModelViolation(format!("{} is closer than itself", specs[i])));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if relation[i][j] == Closeness::Closer && relation[j][i] == Closeness::Closer {
                    return Err(Error::ModelViolation(format!(
                        "{} and {} are each closer than the other",
                        specs[i], specs[j]
                    )));
                }
            }
        }
        let (mut checked, mut skipped) = (0, 0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if relation[i][j] != Closeness::Closer || relation[j][k] != Closeness::Closer {
                        continue;
                    }
                    match relation[i][k] {
                        Closeness::Closer => checked += 1,
                        Closeness::Inconclusive => skipped += 1,
                        Closeness::NotCloser => {
                            return Err(Error::ModelViolation(format!(
                                "closeness is not transitive on {}, {}, {}",
                                specs[i], specs[j], specs[k]
                            )))
                        }
                    }
                }
            }
        }
        let closer = |i: usize, j: usize| relation[i][j] == Closeness::Closer;
        let hasse = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| closer(i, j) && !(0..n).any(|k| k != i && k != j && closer(i, k) && closer(k, j)))
            .collect();
        Ok(OrderReport {
            specs: specs.to_vec(),
            relation,
            hasse,
            pairs_checked: n * n,
            triples_checked: checked,
            triples_skipped: skipped,
        })
    }
}

fn diff_at(diffs: &[(ExpRank, RatPoly)], e: ExpRank) -> RatPoly {
    diffs.iter().find(|(x, _)| *x == e).map(|(_, d)| d.clone()).unwrap_or_else(RatPoly::zero)
}

/// `{n : D_z(n) ⊖ D_y(n) ≥ ω^ρ·m0}` from exponent-wise differences.
fn gap_predicate(diffs: &[(ExpRank, RatPoly)], exp: ExpRank, m0: u64) -> IndexPredicate {
    let mut parts: Vec<IndexPredicate> =
        diffs.iter().map(|(_, d)| IndexPredicate::Sign(d.clone(), SignCond::NonNegative)).collect();
    let mut reach: Vec<IndexPredicate> = diffs
        .iter()
        .filter(|(e, _)| *e > exp)
        .map(|(_, d)| IndexPredicate::Sign(d.clone(), SignCond::Positive))
        .collect();
    let m = RatPoly::constant(num_rational::BigRational::from_integer(m0.into()));
    reach.push(IndexPredicate::Sign(&diff_at(diffs, exp) - &m, SignCond::NonNegative));
    parts.push(IndexPredicate::or(reach));
    IndexPredicate::and(parts)
}

/// Same hypernode, different representative: the first two terms are
/// replaced by later ones.
fn prefix_variant(s: &HypernodeSpec) -> Option<HypernodeSpec> {
    if s.is_constant() || s.is_scheduled() {
        return None;
    }
    let prefix = vec![s.indices_at(3)?, s.indices_at(2)?];
    Some(HypernodeSpec { map: IndexMap::Eventually { prefix, tail: Box::new(s.map.clone()) }, ..s.clone() })
}

fn collect_stages(y: &HypernodeSpec, z: &HypernodeSpec) -> Vec<Arc<Schedule>> {
    let mut out = Vec::new();
    for s in [y.schedule(), z.schedule()].into_iter().flatten() {
        let mut cur = Some(s.clone());
        while let Some(c) = cur {
            cur = c.prev().cloned();
            out.push(c);
        }
    }
    out
}

fn stage_at(stages: &[Arc<Schedule>], position: i64) -> Result<&Schedule> {
    stages
        .iter()
        .find(|s| s.position() == position)
        .map(|s| &**s)
        .ok_or_else(|| Error::Construction(format!("ladder stage at position {position} is unknown")))
}
