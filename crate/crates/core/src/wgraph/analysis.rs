//! Sections, incidence, boundary wnodes and local finiteness.

use std::collections::BTreeSet;

use super::{BoundarySpec, Embrace, Slice, WGraph, WNodeRef};
use crate::error::{Error, Result};
use crate::rank::Rank;

/// A maximal `ρ`-wconnected piece of a window slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub rank: Rank,
    pub window: u64,
    /// Sorted; the first entry is the representative.
    pub nodes: Vec<WNodeRef>,
    pub branches: Vec<[WNodeRef; 2]>,
}

impl Section {
    pub fn representative(&self) -> &WNodeRef {
        &self.nodes[0]
    }

    pub fn contains(&self, node: &WNodeRef) -> bool {
        self.nodes.binary_search(node).is_ok()
    }
}

/// Outcome of a local-finiteness query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finiteness {
    /// Every section meets at most `max_incident` boundary wnodes. `certified`
    /// is set when the bound holds for the whole wgraph, not just the window.
    Finite {
        max_incident: usize,
        certified: bool,
    },
    /// Declared unbounded by the presentation.
    Infinite,
    Inconclusive(String),
}

impl Finiteness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Finiteness::Finite { certified: true, .. })
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller root so representatives are deterministic.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Section labelling of a slice at one rank.
#[derive(Debug, Clone)]
pub struct SectionLabels {
    pub rank: Rank,
    /// Section number of each slice node, if it lies in one.
    pub of_node: Vec<Option<usize>>,
    /// Section number of each slice branch.
    pub of_branch: Vec<usize>,
    pub count: usize,
}

impl Slice {
    /// Connected components under branches, tip traversals and embraces of
    /// wnodes whose rank is within `rho`. Components without a branch are
    /// dropped; numbering follows the smallest node of each component.
    pub fn section_labels(&self, rho: Rank) -> SectionLabels {
        let n = self.len();
        let mut dsu = Dsu::new(n);
        for &[a, b] in self.branches() {
            dsu.union(a, b);
        }
        for x in 0..n {
            if !self.node(x).rank.within(rho) {
                continue;
            }
            for &t in self.embraced_tips(x) {
                dsu.union(x, self.tips()[t].anchor);
            }
            for &y in self.embraced_nodes(x) {
                dsu.union(x, y);
            }
        }
        let mut has_branch = vec![false; n];
        for &[a, _] in self.branches() {
            let r = dsu.find(a);
            has_branch[r] = true;
        }
        let mut number = vec![None; n];
        let mut count = 0;
        let mut of_node = vec![None; n];
        for (x, slot) in of_node.iter_mut().enumerate() {
            if !self.node(x).rank.within(rho) {
                continue;
            }
            let r = dsu.find(x);
            if !has_branch[r] {
                continue;
            }
            let id = *number[r].get_or_insert_with(|| {
                count += 1;
                count - 1
            });
            *slot = Some(id);
        }
        let of_branch = self.branches().iter().map(|&[a, _]| of_node[a].expect("branch ends are 0-wnodes")).collect();
        SectionLabels { rank: rho, of_node, of_branch, count }
    }

    pub fn sections_at(&self, rho: Rank) -> Vec<Section> {
        let labels = self.section_labels(rho);
        let mut out: Vec<Section> = (0..labels.count)
            .map(|_| Section { rank: rho, window: self.window, nodes: Vec::new(), branches: Vec::new() })
            .collect();
        for (x, s) in labels.of_node.iter().enumerate() {
            if let Some(s) = s {
                out[*s].nodes.push(self.node(x).clone());
            }
        }
        for (i, &[a, b]) in self.branches().iter().enumerate() {
            out[labels.of_branch[i]].branches.push([self.node(a).clone(), self.node(b).clone()]);
        }
        out
    }

    /// Sections of `labels` that node `x` is incident to: those holding the
    /// anchor of a tip it embraces or a wnode it embraces. A 0-wnode is
    /// incident to the 0-section it lies in.
    pub fn incident_sections(&self, x: usize, labels: &SectionLabels) -> BTreeSet<usize> {
        if self.node(x).rank == Rank::Finite(0) {
            return labels.of_node[x].into_iter().collect();
        }
        let tips = self.embraced_tips(x).iter().map(|&t| self.tips()[t].anchor);
        tips.chain(self.embraced_nodes(x).iter().copied()).filter_map(|y| labels.of_node[y]).collect()
    }

    /// Rank-`rho` wnodes incident to two or more `(rho-1)`-sections.
    pub fn boundary_ids(&self, rho: Rank) -> Result<Vec<usize>> {
        let below = lower_rank(rho)?;
        let labels = self.section_labels(below);
        Ok((0..self.len())
            .filter(|&x| self.node(x).rank == rho && self.incident_sections(x, &labels).len() >= 2)
            .collect())
    }

    /// Largest number of boundary `rho`-wnodes incident to one section.
    fn max_boundary_per_section(&self, rho: Rank) -> Result<usize> {
        let labels = self.section_labels(lower_rank(rho)?);
        let mut per = vec![0usize; labels.count];
        for x in self.boundary_ids(rho)? {
            for s in self.incident_sections(x, &labels) {
                per[s] += 1;
            }
        }
        Ok(per.into_iter().max().unwrap_or(0))
    }
}

fn lower_rank(rho: Rank) -> Result<Rank> {
    rho.pred().ok_or_else(|| Error::Rank(format!("rank {rho} has no predecessor rank of sections")))
}

impl WGraph {
    fn check_rank(&self, rho: Rank) -> Result<()> {
        if rho > self.nu() {
            return Err(Error::rank_above(rho, self.nu()));
        }
        Ok(())
    }

    pub fn sections(&self, rho: Rank, window: u64) -> Result<Vec<Section>> {
        self.check_rank(rho)?;
        Ok(self.expand(window)?.sections_at(rho))
    }

    /// Whether `x` embraces a tip or wnode belonging to `s`, where `s` has
    /// the rank just below that of `x`.
    pub fn incident(&self, x: &WNodeRef, s: &Section) -> Result<bool> {
        let expected = if x.rank == Rank::Finite(0) { Some(Rank::Finite(0)) } else { x.rank.pred() };
        if expected != Some(s.rank) {
            return Err(Error::Incidence(format!("{x} has rank {} but the section has rank {}", x.rank, s.rank)));
        }
        let slice = self.expand(s.window)?;
        let id = slice.require(x)?;
        if x.rank == Rank::Finite(0) {
            return Ok(s.contains(x));
        }
        let tips = slice.embraced_tips(id).iter().map(|&t| slice.tips()[t].anchor);
        Ok(tips.chain(slice.embraced_nodes(id).iter().copied()).any(|y| s.contains(slice.node(y))))
    }

    pub fn boundary_nodes(&self, rho: Rank, window: u64) -> Result<Vec<WNodeRef>> {
        self.check_rank(rho)?;
        let slice = self.expand(window)?;
        Ok(slice.boundary_ids(rho)?.into_iter().map(|x| slice.node(x).clone()).collect())
    }

    /// Whether `x` and `y` are incident to a common `(rho-1)`-section.
    pub fn wadjacent(&self, x: &WNodeRef, y: &WNodeRef, rho: Rank, window: u64) -> Result<bool> {
        self.check_rank(rho)?;
        let slice = self.expand(window)?;
        let (a, b) = (slice.require(x)?, slice.require(y)?);
        if a == b {
            return Ok(true);
        }
        let labels = slice.section_labels(lower_rank(rho)?);
        let sa = slice.incident_sections(a, &labels);
        Ok(slice.incident_sections(b, &labels).iter().any(|s| sa.contains(s)))
    }

    /// Whether every `(rho-1)`-section meets finitely many boundary
    /// `rho`-wnodes. Presentation metadata certifies the answer; otherwise
    /// the per-section maximum must agree between `window` and `window+1`.
    pub fn is_locally_finite(&self, rho: Rank, window: u64) -> Result<Finiteness> {
        self.check_rank(rho)?;
        let here = self.expand(window)?.max_boundary_per_section(rho)?;
        match self.metadata().section_boundary_bound.get(&rho.to_string()) {
            Some(BoundarySpec::Unbounded(_)) => return Ok(Finiteness::Infinite),
            Some(BoundarySpec::Count(bound)) => {
                if here as u64 > *bound {
                    return Err(Error::Presentation(format!(
                        "a section meets {here} boundary {rho}-wnodes, above the declared bound {bound}"
                    )));
                }
                return Ok(Finiteness::Finite { max_incident: here, certified: true });
            }
            None => {}
        }
        if self.is_finite_presentation() {
            return Ok(Finiteness::Finite { max_incident: here, certified: true });
        }
        let next = self.expand(window + 1)?.max_boundary_per_section(rho)?;
        if next == here {
            Ok(Finiteness::Finite { max_incident: here, certified: false })
        } else {
            Ok(Finiteness::Inconclusive(format!(
                "per-section boundary count grows from {here} to {next} at the window edge"
            )))
        }
    }

    /// Whether no wnode of the (infinite) wgraph embraces `x`.
    pub fn maximal_node(&self, x: &WNodeRef) -> Result<bool> {
        if !self.exists(x) {
            return Err(Error::UnknownNode(x.to_string()));
        }
        let target = self.family_id(&x.family).expect("existing node has a family");
        for (fid, fam) in self.node_families.iter().enumerate() {
            for e in &fam.embraces {
                let Embrace::Node(t) = e else { continue };
                if t.family != target {
                    continue;
                }
                if let Some(binding) = super::solve_unit_affine(&fam.params, &t.at, &x.indices) {
                    if self.instantiate(t, &super::bind(&fam.params, &binding)).as_deref() == Some(&x.indices[..])
                        && self.exists_in(fid, &binding, None)
                    {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wgraph::catalog;

    fn g(name: &str) -> WGraph {
        catalog::by_name(name).unwrap()
    }

    #[test]
    fn section_counts() {
        assert_eq!(g("ray0").sections(Rank::Finite(0), 10).unwrap().len(), 1);
        assert_eq!(g("ladder1").sections(Rank::Finite(0), 5).unwrap().len(), 6);
        assert_eq!(g("ladder1").sections(Rank::Finite(1), 5).unwrap().len(), 1);
        assert!(g("ladder1").sections(Rank::Finite(2), 5).is_err());
    }

    #[test]
    fn sections_partition_branches() {
        for name in ["ladder1", "ladder2", "hub1", "hub2"] {
            let slice = g(name).expand(3).unwrap();
            for k in 0..=slice.nodes().iter().map(|n| n.rank).max().map_or(0, |r| match r {
                Rank::Finite(k) => k,
                _ => 0,
            }) {
                let secs = slice.sections_at(Rank::Finite(k));
                let total: usize = secs.iter().map(|s| s.branches.len()).sum();
                assert_eq!(total, slice.branches().len(), "{name} rank {k}");
            }
        }
    }

    #[test]
    fn incidence_on_ladder() {
        let l = g("ladder1");
        let secs = l.sections(Rank::Finite(0), 5).unwrap();
        let x0 = l.node("b1[0]").unwrap();
        assert!(l.incident(&x0, &secs[0]).unwrap());
        assert!(l.incident(&x0, &secs[1]).unwrap());
        assert!(!l.incident(&x0, &secs[2]).unwrap());
        let r = l.node("r[2,3]").unwrap();
        assert!(l.incident(&r, &secs[2]).unwrap());
        let top = l.sections(Rank::Finite(1), 5).unwrap();
        assert!(l.incident(&x0, &top[0]).is_err());
    }

    #[test]
    fn boundary_and_adjacency() {
        let l = g("ladder1");
        let b: Vec<String> = l.boundary_nodes(Rank::Finite(1), 5).unwrap().iter().map(|n| n.to_string()).collect();
        assert_eq!(b, ["b1[0]", "b1[1]", "b1[2]", "b1[3]", "b1[4]"]);
        let n = |s: &str| l.node(s).unwrap();
        let one = Rank::Finite(1);
        assert!(l.wadjacent(&n("b1[0]"), &n("b1[1]"), one, 5).unwrap());
        assert!(!l.wadjacent(&n("b1[0]"), &n("b1[2]"), one, 5).unwrap());
        assert!(l.wadjacent(&n("b1[3]"), &n("b1[3]"), one, 5).unwrap());
        assert!(g("hub2").boundary_nodes(Rank::Finite(2), 3).unwrap().is_empty());
        assert!(g("hub1").boundary_nodes(Rank::Finite(1), 4).unwrap().is_empty());
    }

    #[test]
    fn local_finiteness() {
        let f = g("ladder1").is_locally_finite(Rank::Finite(1), 5).unwrap();
        assert_eq!(f, Finiteness::Finite { max_incident: 2, certified: true });
        assert!(g("ladder2").is_locally_finite(Rank::Finite(2), 3).unwrap().is_certified());
        assert!(g("ladder2").is_locally_finite(Rank::Finite(1), 3).unwrap().is_certified());
        assert!(g("ray0").is_locally_finite(Rank::Finite(0), 3).is_err());
    }

    #[test]
    fn maximality() {
        let l = g("ladder1");
        assert!(l.maximal_node(&l.node("b1[0]").unwrap()).unwrap());
        assert!(!l.maximal_node(&l.node("r[1,0]").unwrap()).unwrap());
        assert!(l.maximal_node(&l.node("r[0,0]").unwrap()).unwrap());
        assert!(l.maximal_node(&l.node("r[1,1]").unwrap()).unwrap());
        let r = g("ray0");
        assert!(r.maximal_node(&r.node("r[4]").unwrap()).unwrap());
        assert!(l.maximal_node(&l.node("r[-1,0]").unwrap()).is_err());
    }

    #[test]
    fn dsu_keeps_smallest_root() {
        let mut d = Dsu::new(5);
        d.union(4, 2);
        d.union(2, 3);
        assert_eq!(d.find(3), 2);
        d.union(0, 3);
        assert_eq!(d.find(4), 0);
    }
}
