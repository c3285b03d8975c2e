//! Built-in wgraph families.
//!
//! * `ray0`: the one-ended 0-ray `r[0] - r[1] - …`.
//! * `ladder<k>`: a one-way infinite chain of copies of `ladder<k-1>`. The
//!   boundary k-wnode `b<k>[…, i]` embraces the (k-1)-tip of copy `i` and the
//!   start 0-node of copy `i+1`. `ladder0` is `ray0`.
//! * `hub<k>`: a hub 0-node `h` joined by a branch to the start of infinitely
//!   many copies of `ladder<k-1>`; the k-wnode `e[c]` embraces the (k-1)-tip
//!   of copy `c`, so every `e[c]` ends a two-ended k-path from `h`.

use std::collections::BTreeMap;

use super::{
    BoundarySpec, BranchFamily, Domain, EmbraceRule, Metadata, NodeFamily, NodeTemplate, Presentation, TipFamily,
    WGraph,
};
use crate::error::{Error, Result};
use crate::rank::Rank;

const MAX_DEPTH: u32 = 8;

pub fn names() -> Vec<&'static str> {
    vec!["ray0", "ladder1", "ladder2", "ladder3", "hub1", "hub2", "hub3"]
}

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "ray0" => "one-ended 0-ray",
        "ladder1" => "chain of 0-rays joined at boundary 1-wnodes",
        "ladder2" => "chain of ladder1 copies joined at boundary 2-wnodes",
        "ladder3" => "chain of ladder2 copies joined at boundary 3-wnodes",
        "hub1" => "hub 0-node with infinitely many two-ended 1-paths",
        "hub2" => "hub 0-node with infinitely many two-ended 2-paths",
        "hub3" => "hub 0-node with infinitely many two-ended 3-paths",
        _ => return None,
    })
}

/// Resolves `ray0`, `ladder<k>` or `hub<k>`.
pub fn by_name(name: &str) -> Result<WGraph> {
    let unknown = || Error::UnknownFamily(name.to_string());
    let depth = |rest: &str| rest.parse::<u32>().ok().filter(|k| *k <= MAX_DEPTH);
    let p = if name == "ray0" {
        ladder(0)
    } else if let Some(k) = name.strip_prefix("ladder").and_then(depth) {
        ladder(k)
    } else if let Some(k) = name.strip_prefix("hub").and_then(depth).filter(|k| *k >= 1) {
        hub(k)
    } else {
        return Err(unknown());
    };
    WGraph::new(p)
}

fn tmpl(family: &str, at: &[String]) -> NodeTemplate {
    NodeTemplate(family.to_string(), at.to_vec())
}

/// Families for copies of `ladder(depth)` indexed by `prefix`.
struct Parts {
    nodes: Vec<NodeFamily>,
    branches: Vec<BranchFamily>,
    tips: Vec<TipFamily>,
}

fn copy_indices(depth: u32) -> Vec<String> {
    (1..=depth).rev().map(|k| format!("k{k}")).collect()
}

fn ladder_parts(depth: u32, prefix: &[String]) -> Parts {
    let mut idx: Vec<String> = prefix.to_vec();
    idx.extend(copy_indices(depth));
    let mut ray = idx.clone();
    ray.push("j".into());
    let mut next = idx.clone();
    next.push("j+1".into());

    let mut nodes = vec![NodeFamily {
        id: "r".into(),
        rank: Rank::Finite(0),
        indices: ray.clone(),
        domain: Domain::Nat,
        embraces: vec![],
    }];
    let branches =
        vec![BranchFamily { params: ray.clone(), domain: Domain::Nat, ends: [tmpl("r", &ray), tmpl("r", &next)] }];
    let mut tips = Vec::new();
    for sigma in 1..=depth {
        // indices shared by b<sigma> and the (sigma-1)-tip it embraces
        let keep = prefix.len() + (depth - sigma + 1) as usize;
        let own: Vec<String> = idx[..keep].to_vec();
        let tip_id = format!("t{}", sigma - 1);
        tips.push(tip_family(&tip_id, sigma - 1, &own));
        let mut start_next = own.clone();
        let last = start_next.last_mut().unwrap();
        *last = format!("{last}+1");
        start_next.extend(std::iter::repeat_n("0".to_string(), sigma as usize));
        nodes.push(NodeFamily {
            id: format!("b{sigma}"),
            rank: Rank::Finite(sigma),
            indices: own.clone(),
            domain: Domain::Nat,
            embraces: vec![
                EmbraceRule::Tip { tip: tip_id, at: own.clone() },
                EmbraceRule::Node { node: "r".into(), at: start_next },
            ],
        });
    }
    Parts { nodes, branches, tips }
}

/// The `alpha`-tip of the copy of `ladder(alpha)` addressed by `own`.
fn tip_family(id: &str, alpha: u32, own: &[String]) -> TipFamily {
    let mut anchor = own.to_vec();
    anchor.extend(std::iter::repeat_n("0".to_string(), alpha as usize + 1));
    let mut trace = own.to_vec();
    let trace_family = if alpha == 0 {
        trace.push("t".into());
        "r".to_string()
    } else {
        trace.extend(std::iter::repeat_n("0".to_string(), 0));
        trace.push("t".into());
        format!("b{alpha}")
    };
    TipFamily {
        id: id.to_string(),
        rank: Rank::Finite(alpha),
        indices: own.to_vec(),
        domain: Domain::Nat,
        anchor: tmpl("r", &anchor),
        trace: Some(tmpl(&trace_family, &trace)),
    }
}

fn bounds(ranks: impl Iterator<Item = u32>, count: u64) -> BTreeMap<String, BoundarySpec> {
    ranks.map(|r| (r.to_string(), BoundarySpec::Count(count))).collect()
}

pub fn ladder(depth: u32) -> Presentation {
    let parts = ladder_parts(depth, &[]);
    let mut tips = parts.tips;
    // the ray's own 0-tip (unembraced) keeps ray0 a faithful one-ended ray
    if depth == 0 {
        tips.push(tip_family("t0", 0, &[]));
    }
    Presentation {
        name: if depth == 0 { "ray0".into() } else { format!("ladder{depth}") },
        nu: Rank::Finite(depth),
        nodes: parts.nodes,
        branches: parts.branches,
        tips,
        metadata: Metadata {
            section_boundary_bound: bounds(1..=depth, 2),
            infinite_boundary: (1..=depth).map(Rank::Finite).collect(),
            finite: false,
        },
    }
}

pub fn hub(depth: u32) -> Presentation {
    assert!(depth >= 1);
    let prefix = vec!["c".to_string()];
    let parts = ladder_parts(depth - 1, &prefix);
    let mut nodes = vec![NodeFamily {
        id: "h".into(),
        rank: Rank::Finite(0),
        indices: vec![],
        domain: Domain::Nat,
        embraces: vec![],
    }];
    nodes.extend(parts.nodes);
    let top_tip = format!("t{}", depth - 1);
    nodes.push(NodeFamily {
        id: "e".into(),
        rank: Rank::Finite(depth),
        indices: prefix.clone(),
        domain: Domain::Nat,
        embraces: vec![EmbraceRule::Tip { tip: top_tip.clone(), at: prefix.clone() }],
    });
    let mut tips = parts.tips;
    tips.push(tip_family(&top_tip, depth - 1, &prefix));
    let mut branches = parts.branches;
    let mut start = prefix.clone();
    start.extend(std::iter::repeat_n("0".to_string(), depth as usize));
    branches.push(BranchFamily {
        params: prefix.clone(),
        domain: Domain::Nat,
        ends: [tmpl("h", &[]), tmpl("r", &start)],
    });
    let mut bound = bounds(1..depth, 2);
    bound.insert(depth.to_string(), BoundarySpec::Count(0));
    Presentation {
        name: format!("hub{depth}"),
        nu: Rank::Finite(depth),
        nodes,
        branches,
        tips,
        metadata: Metadata {
            section_boundary_bound: bound,
            infinite_boundary: (1..depth).map(Rank::Finite).collect(),
            finite: false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_catalog_entries_compile() {
        for n in names() {
            let g = by_name(n).unwrap();
            assert_eq!(g.name(), n);
            assert!(describe(n).is_some());
        }
        assert_eq!(by_name("ladder0").unwrap().name(), "ray0");
        assert!(by_name("ladder99").is_err());
        assert!(by_name("hub0").is_err());
        assert!(by_name("tree").is_err());
    }

    #[test]
    fn ladder1_shape() {
        let p = ladder(1);
        let b1 = p.nodes.iter().find(|n| n.id == "b1").unwrap();
        assert_eq!(b1.indices, vec!["k1"]);
        assert_eq!(b1.embraces[1], EmbraceRule::Node { node: "r".into(), at: vec!["k1+1".into(), "0".into()] });
        assert_eq!(p.tips[0].anchor, NodeTemplate("r".into(), vec!["k1".into(), "0".into()]));
    }

    #[test]
    fn ladder2_shape() {
        let p = ladder(2);
        let b2 = p.nodes.iter().find(|n| n.id == "b2").unwrap();
        assert_eq!(
            b2.embraces[1],
            EmbraceRule::Node { node: "r".into(), at: vec!["k2+1".into(), "0".into(), "0".into()] }
        );
        let t1 = p.tips.iter().find(|t| t.id == "t1").unwrap();
        assert_eq!(t1.trace, Some(NodeTemplate("b1".into(), vec!["k2".into(), "t".into()])));
    }
}
