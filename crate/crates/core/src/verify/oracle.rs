//! Reference distances by walk enumeration, built straight from the slice
//! incidences rather than from the search graph.

use crate::rank::Rank;
use crate::wgraph::Slice;
use crate::Ordinal;

struct Steps {
    adj: Vec<Vec<(usize, Ordinal)>>,
}

impl Steps {
    fn new(slice: &Slice) -> Self {
        let mut adj = vec![Vec::new(); slice.len()];
        let mut join = |a: usize, b: usize, w: Ordinal| {
            adj[a].push((b, w.clone()));
            adj[b].push((a, w));
        };
        for &[a, b] in slice.branches() {
            join(a, b, Ordinal::from_natural(1));
        }
        for t in slice.tips() {
            if let Some(e) = t.embracer {
                let len = match t.rank {
                    Rank::Finite(k) => Ordinal::omega_pow(crate::ordinal::ExpRank::Finite(k as u64 + 1)),
                    _ => Ordinal::omega_pow(crate::ordinal::ExpRank::Omega),
                };
                join(e, t.anchor, len);
            }
        }
        for x in 0..slice.len() {
            if let Some(e) = slice.embracer_of(x) {
                join(e, x, Ordinal::zero());
            }
        }
        Steps { adj }
    }
}

/// Lengths of shortest walks from `source` to every wnode of the slice.
///
/// Every simple walk from `source` is extended edge by edge; an extension is
/// dropped only when it arrives no shorter than a walk already recorded for
/// the same wnode, which cannot hide a shorter walk because lengths only grow
/// along a walk.
pub fn enumerate_distances(slice: &Slice, source: usize) -> Vec<Option<Ordinal>> {
    let steps = Steps::new(slice);
    let mut best: Vec<Option<Ordinal>> = vec![None; slice.len()];
    let mut on_walk = vec![false; slice.len()];
    best[source] = Some(Ordinal::zero());
    extend(&steps, source, Ordinal::zero(), &mut best, &mut on_walk);
    best
}

fn extend(steps: &Steps, at: usize, len: Ordinal, best: &mut [Option<Ordinal>], on_walk: &mut [bool]) {
    on_walk[at] = true;
    for (to, w) in &steps.adj[at] {
        if on_walk[*to] {
            continue;
        }
        let next = len.nat_sum(w);
        if best[*to].as_ref().is_some_and(|b| *b <= next) {
            continue;
        }
        best[*to] = Some(next.clone());
        extend(steps, *to, next, best, on_walk);
    }
    on_walk[at] = false;
}
