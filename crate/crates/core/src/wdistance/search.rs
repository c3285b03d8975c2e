use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{LengthModel, Segment};
use crate::rank::Rank;
use crate::wgraph::Slice;
use crate::Ordinal;

#[derive(Debug, Clone)]
pub struct Edge {
    pub to: usize,
    pub weight: Ordinal,
    pub segment: Segment,
}

/// Weighted adjacency over the wnodes of a slice.
#[derive(Debug, Clone)]
pub struct SearchGraph {
    adj: Vec<Vec<Edge>>,
    in_scope: Vec<bool>,
    /// Maximal embracer within scope, for promotion.
    top: Vec<usize>,
}

impl SearchGraph {
    pub fn build(slice: &Slice, model: LengthModel, scope: Option<Rank>) -> Self {
        let n = slice.len();
        let in_scope: Vec<bool> = (0..n).map(|x| scope.is_none_or(|s| slice.node(x).rank.within(s))).collect();
        let mut adj: Vec<Vec<Edge>> = vec![Vec::new(); n];
        let mut link = |a: usize, b: usize, weight: Ordinal, segment: Segment| {
            if in_scope[a] && in_scope[b] {
                adj[a].push(Edge { to: b, weight: weight.clone(), segment: segment.clone() });
                adj[b].push(Edge { to: a, weight, segment });
            }
        };
        for &[a, b] in slice.branches() {
            link(a, b, Ordinal::from_natural(1), Segment::Branch);
        }
        for x in 0..n {
            for &t in slice.embraced_tips(x) {
                let tip = &slice.tips()[t];
                let seg = Segment::Tip { family: tip.family.clone(), indices: tip.indices.clone(), rank: tip.rank };
                let w = tip.rank.tip_length();
                match model {
                    LengthModel::NaturalSumInclusive => link(x, tip.anchor, w, seg),
                    LengthModel::TipOnly => {
                        for &u in &tip.trace {
                            link(x, u, w.clone(), seg.clone());
                        }
                    }
                }
            }
            for &y in slice.embraced_nodes(x) {
                link(x, y, Ordinal::zero(), Segment::Embrace);
            }
        }
        for edges in &mut adj {
            edges.sort_by(|a, b| a.to.cmp(&b.to).then_with(|| a.weight.cmp(&b.weight)));
        }
        let top = (0..n)
            .map(|mut x| {
                while let Some(up) = slice.embracer_of(x).filter(|&u| in_scope[u]) {
                    x = up;
                }
                x
            })
            .collect();
        SearchGraph { adj, in_scope, top }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn in_scope(&self, x: usize) -> bool {
        self.in_scope[x]
    }

    /// The maximal wnode (within scope) embracing `x`, or `x` itself.
    pub fn promote(&self, x: usize) -> usize {
        self.top[x]
    }

    pub fn edges(&self, x: usize) -> &[Edge] {
        &self.adj[x]
    }

    pub(crate) fn edge(&self, x: usize, e: usize) -> &Edge {
        &self.adj[x][e]
    }

    /// Least distances from `source` with predecessor links `(node, edge)`.
    /// On equal distances the smaller predecessor wins.
    #[allow(clippy::type_complexity)]
    pub fn dijkstra(&self, source: usize) -> (Vec<Option<Ordinal>>, Vec<Option<(usize, usize)>>) {
        let n = self.len();
        let mut dist: Vec<Option<Ordinal>> = vec![None; n];
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(Ordinal::zero());
        heap.push(Reverse((Ordinal::zero(), source)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if done[x] {
                continue;
            }
            done[x] = true;
            for (ei, e) in self.adj[x].iter().enumerate() {
                if done[e.to] {
                    continue;
                }
                let nd = d.nat_sum(&e.weight);
                let better = match &dist[e.to] {
                    None => true,
                    Some(old) => nd < *old || (nd == *old && pred[e.to].is_some_and(|(p, _)| x < p)),
                };
                if better {
                    dist[e.to] = Some(nd.clone());
                    pred[e.to] = Some((x, ei));
                    heap.push(Reverse((nd, e.to)));
                }
            }
        }
        (dist, pred)
    }
}
