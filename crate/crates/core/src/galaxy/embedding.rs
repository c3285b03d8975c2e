use std::collections::HashMap;

use super::Galaxies;
use crate::enlargement::{FilterDecision, HypernodeSpec};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rank::Rank;
use crate::wgraph::{Section, SectionLabels, WNodeRef};

/// Result of checking that a lower section's hypernodes are principal in a
/// higher section.
#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    pub alpha: Rank,
    pub rho: Rank,
    /// Probes that stay inside the lower section, with their verdicts.
    pub results: Vec<(HypernodeSpec, FilterDecision)>,
    /// Probes that leave the lower section and were not checked.
    pub outside: Vec<HypernodeSpec>,
    pub holds: bool,
}

const SLACK: u64 = 2;

fn span(nodes: &[&WNodeRef]) -> u64 {
    nodes.iter().flat_map(|n| n.indices.iter()).map(|i| i.unsigned_abs()).max().unwrap_or(0) + SLACK
}

/// Section labels at increasing windows, built on demand.
struct LabelCache<'a, 'g> {
    gal: &'a Galaxies<'g>,
    rank: Rank,
    by_window: HashMap<u64, SectionLabels>,
}

impl LabelCache<'_, '_> {
    fn same_section(&mut self, a: &WNodeRef, b: &WNodeRef) -> Result<bool> {
        let w = span(&[a, b]);
        let prepared = self.gal.enl.metric().prepared(w, None)?;
        let slice = &prepared.slice;
        let labels = match self.by_window.entry(w) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(slice.section_labels(self.rank)),
        };
        let label = |n: &WNodeRef| slice.id_of(n).and_then(|i| labels.of_node[i]);
        Ok(matches!((label(a), label(b)), (Some(x), Some(y)) if x == y))
    }
}

impl<'g> Galaxies<'g> {
    /// Whether every `x_n`, `n ≤ window`, exists and lies in `s`.
    pub fn spec_within(&self, spec: &HypernodeSpec, s: &Section, window: u64) -> Result<bool> {
        let mut cache = LabelCache { gal: self, rank: s.rank, by_window: HashMap::new() };
        self.within(&mut cache, spec, s, window)
    }

    fn within(&self, cache: &mut LabelCache<'_, 'g>, spec: &HypernodeSpec, s: &Section, window: u64) -> Result<bool> {
        for n in 0..=window {
            let Some(x) = self.enl.node_at(spec, n)? else {
                return Ok(false);
            };
            if !s.contains(&x) && !cache.same_section(&x, s.representative())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Constant and diagonal probes inside `s`.
    pub fn section_probes(&self, s: &Section, window: u64, limit: usize) -> Result<Vec<HypernodeSpec>> {
        let g = self.graph();
        let mut out: Vec<HypernodeSpec> = Vec::new();
        let push = |spec: HypernodeSpec, out: &mut Vec<HypernodeSpec>| {
            if !out.contains(&spec) {
                out.push(spec);
            }
        };
        let maximal: Vec<&WNodeRef> = s.nodes.iter().filter(|n| g.maximal_node(n).unwrap_or(false)).take(2).collect();
        for n in &maximal {
            push(HypernodeSpec::constant(g, n), &mut out);
        }
        let mut cache = LabelCache { gal: self, rank: s.rank, by_window: HashMap::new() };
        let mut families: Vec<&WNodeRef> = Vec::new();
        for n in &s.nodes {
            if !families.iter().any(|f| f.family == n.family) {
                families.push(n);
            }
        }
        let moves = [Poly::var(), Poly::new(vec![1, 1]), Poly::new(vec![0, 2])];
        for m in &moves {
            for base in &families {
                for pos in 0..base.indices.len() {
                    let polys: Vec<Poly<i64>> = base
                        .indices
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| if i == pos { m.clone() } else { Poly::constant(c) })
                        .collect();
                    let spec = HypernodeSpec::polynomial(g, &base.family, polys)?;
                    if out.len() < limit && self.within(&mut cache, &spec, s, window)? {
                        push(spec, &mut out);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Hypernodes of an `α`-section are principal at rank `ρ` inside an
    /// enclosing `ρ`-section.
    pub fn section_embedding(
        &self,
        s_alpha: &Section,
        s_rho: &Section,
        probes: &[HypernodeSpec],
        window: u64,
    ) -> Result<EmbeddingReport> {
        let (alpha, rho) = (s_alpha.rank, s_rho.rank);
        if alpha >= rho {
            return Err(Error::Rank(format!("embedding needs alpha < rho, got {alpha} >= {rho}")));
        }
        let mut outer = LabelCache { gal: self, rank: rho, by_window: HashMap::new() };
        if !s_rho.contains(s_alpha.representative())
            && !outer.same_section(s_alpha.representative(), s_rho.representative())?
        {
            return Err(Error::Presentation(format!(
                "the {alpha}-section of {} is not inside the {rho}-section of {}",
                s_alpha.representative(),
                s_rho.representative()
            )));
        }
        let standard = HypernodeSpec::constant(self.graph(), s_rho.representative());
        let mut inner = LabelCache { gal: self, rank: alpha, by_window: HashMap::new() };
        let (mut results, mut outside) = (Vec::new(), Vec::new());
        for p in probes {
            if !self.within(&mut inner, p, s_alpha, window)? {
                outside.push(p.clone());
                continue;
            }
            let d = self.limitedly_distant_in(p, &standard, rho, window, Some(rho))?;
            results.push((p.clone(), d));
        }
        let holds = results.iter().all(|(_, d)| d.is_in());
        Ok(EmbeddingReport { alpha, rho, results, outside, holds })
    }
}
