use std::collections::HashMap;

use super::{bind, Embrace, WGraph, WNodeRef};
use crate::error::{Error, Result};
use crate::rank::Rank;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TipInstance {
    pub family: String,
    pub indices: Vec<i64>,
    pub rank: Rank,
    /// First wnode of the representative walk.
    pub anchor: usize,
    /// Wnodes of the representative walk that fall inside the window.
    pub trace: Vec<usize>,
    pub embracer: Option<usize>,
}

/// Everything of a wgraph whose indices lie within a window bound.
#[derive(Debug, Clone)]
pub struct Slice {
    pub window: u64,
    nodes: Vec<WNodeRef>,
    index: HashMap<WNodeRef, usize>,
    branches: Vec<[usize; 2]>,
    tips: Vec<TipInstance>,
    embracer_of: Vec<Option<usize>>,
    embraced_nodes: Vec<Vec<usize>>,
    embraced_tips: Vec<Vec<usize>>,
}

impl Slice {
    pub fn nodes(&self) -> &[WNodeRef] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &WNodeRef {
        &self.nodes[id]
    }

    pub fn id_of(&self, node: &WNodeRef) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn require(&self, node: &WNodeRef) -> Result<usize> {
        self.id_of(node).ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    pub fn contains(&self, node: &WNodeRef) -> bool {
        self.index.contains_key(node)
    }

    pub fn branches(&self) -> &[[usize; 2]] {
        &self.branches
    }

    pub fn tips(&self) -> &[TipInstance] {
        &self.tips
    }

    /// The wnode that embraces `id`, if any.
    pub fn embracer_of(&self, id: usize) -> Option<usize> {
        self.embracer_of[id]
    }

    pub fn embraced_nodes(&self, id: usize) -> &[usize] {
        &self.embraced_nodes[id]
    }

    pub fn embraced_tips(&self, id: usize) -> &[usize] {
        &self.embraced_tips[id]
    }

    /// Follows embracing wnodes upwards to the maximal one.
    pub fn maximal_of(&self, mut id: usize) -> usize {
        while let Some(up) = self.embracer_of[id] {
            id = up;
        }
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn for_each_tuple(arity: usize, range: std::ops::RangeInclusive<i64>, mut f: impl FnMut(&[i64])) {
    let mut cur = vec![*range.start(); arity];
    if range.is_empty() {
        return;
    }
    loop {
        f(&cur);
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < *range.end() {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = *range.start();
                }
                break;
            }
        }
    }
}

pub(super) fn expand(g: &WGraph, window: u64) -> Result<Slice> {
    if window == 0 {
        return Err(Error::Presentation("window must be at least 1".into()));
    }
    let mut nodes = Vec::new();
    for (fid, fam) in g.node_families.iter().enumerate() {
        for_each_tuple(fam.params.len(), fam.domain.range(window), |idx| {
            if g.exists_in(fid, idx, Some(window)) {
                nodes.push(g.make_ref(fid, idx.to_vec()));
            }
        });
    }
    nodes.sort();
    let index: HashMap<WNodeRef, usize> = nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();

    let mut tips = Vec::new();
    let mut tip_index: HashMap<(usize, Vec<i64>), usize> = HashMap::new();
    for (tid, tf) in g.tip_families.iter().enumerate() {
        for_each_tuple(tf.params.len(), tf.domain.range(window), |idx| {
            if !g.tip_exists_in(tid, idx, Some(window)) {
                return;
            }
            let env = bind(&tf.params, idx);
            let anchor_ref = g.make_ref(tf.anchor.family, g.instantiate(&tf.anchor, &env).unwrap());
            let anchor = index[&anchor_ref];
            let mut trace = Vec::new();
            if let Some(tr) = &tf.trace {
                let mut env_t = env.clone();
                for t in 0..=window as i64 {
                    env_t.insert("t".to_string(), t);
                    if let Some(at) = g.instantiate(tr, &env_t) {
                        if let Some(&id) = index.get(&g.make_ref(tr.family, at)) {
                            trace.push(id);
                        }
                    }
                }
            }
            if !trace.contains(&anchor) {
                trace.insert(0, anchor);
            }
            tip_index.insert((tid, idx.to_vec()), tips.len());
            tips.push(TipInstance {
                family: tf.id.clone(),
                indices: idx.to_vec(),
                rank: tf.rank,
                anchor,
                trace,
                embracer: None,
            });
        });
    }

    let mut embracer_of = vec![None; nodes.len()];
    let mut embraced_nodes = vec![Vec::new(); nodes.len()];
    let mut embraced_tips = vec![Vec::new(); nodes.len()];
    for (id, node) in nodes.iter().enumerate() {
        let fid = g.family_id(&node.family).unwrap();
        let fam = &g.node_families[fid];
        let env = bind(&fam.params, &node.indices);
        for e in &fam.embraces {
            match e {
                Embrace::Node(t) => {
                    let target = g.make_ref(t.family, g.instantiate(t, &env).unwrap());
                    let tid = index[&target];
                    if let Some(prev) = embracer_of[tid] {
                        return Err(Error::Presentation(format!(
                            "{target} is embraced by both {} and {node}",
                            nodes[prev]
                        )));
                    }
                    embracer_of[tid] = Some(id);
                    embraced_nodes[id].push(tid);
                }
                Embrace::Tip { tip, at } => {
                    let idx = super::eval_all(at, &env).unwrap();
                    let ti = tip_index[&(*tip, idx)];
                    if let Some(prev) = tips[ti].embracer {
                        return Err(Error::Presentation(format!(
                            "tip {}{:?} is embraced by both {} and {node}",
                            tips[ti].family, tips[ti].indices, nodes[prev]
                        )));
                    }
                    tips[ti].embracer = Some(id);
                    embraced_tips[id].push(ti);
                }
            }
        }
    }

    let mut branches = Vec::new();
    for bf in &g.branch_families {
        let mut failure = None;
        for_each_tuple(bf.params.len(), bf.domain.range(window), |idx| {
            let env = bind(&bf.params, idx);
            let ends: Option<Vec<usize>> = bf
                .ends
                .iter()
                .map(|t| g.instantiate(t, &env).and_then(|at| index.get(&g.make_ref(t.family, at)).copied()))
                .collect();
            if let Some(e) = ends {
                if e[0] == e[1] {
                    failure.get_or_insert_with(|| format!("branch joins {} to itself", nodes[e[0]]));
                } else {
                    branches.push([e[0].min(e[1]), e[0].max(e[1])]);
                }
            }
        });
        if let Some(f) = failure {
            return Err(Error::Presentation(f));
        }
    }
    branches.sort();

    Ok(Slice { window, nodes, index, branches, tips, embracer_of, embraced_nodes, embraced_tips })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wgraph::catalog;

    #[test]
    fn tuples_enumerate_in_order() {
        let mut seen = Vec::new();
        for_each_tuple(2, 0..=1, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_tuple(0, 0..=5, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn ray_expansion() {
        let g = catalog::by_name("ray0").unwrap();
        let s = g.expand(3).unwrap();
        let names: Vec<String> = s.nodes().iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["r[0]", "r[1]", "r[2]", "r[3]"]);
        assert_eq!(s.branches(), &[[0, 1], [1, 2], [2, 3]]);
    }

    #[test]
    fn ladder_expansion_counts() {
        let g = catalog::by_name("ladder1").unwrap();
        let s = g.expand(2).unwrap();
        let rungs = s.nodes().iter().filter(|n| n.family == "r" && n.indices[1] == 0).count();
        let boundary = s.nodes().iter().filter(|n| n.rank == Rank::Finite(1)).count();
        assert_eq!((rungs, boundary), (3, 2));
    }

    #[test]
    fn expansion_is_monotone() {
        for name in ["ray0", "ladder1", "ladder2", "hub1", "hub2"] {
            let g = catalog::by_name(name).unwrap();
            for w in 1..5 {
                let a = g.expand(w).unwrap();
                let b = g.expand(w + 1).unwrap();
                assert!(a.nodes().iter().all(|n| b.contains(n)), "{name} nodes at {w}");
                for br in a.branches() {
                    let mut pair = [b.id_of(a.node(br[0])).unwrap(), b.id_of(a.node(br[1])).unwrap()];
                    pair.sort();
                    assert!(b.branches().contains(&pair), "{name} branch at {w}");
                }
                assert!(a.tips().len() <= b.tips().len());
            }
        }
    }
}
