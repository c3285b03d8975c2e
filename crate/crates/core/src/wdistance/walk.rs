use std::fmt;

use crate::error::{Error, Result};
use crate::rank::Rank;
use crate::wgraph::{Slice, WNodeRef};
use crate::Ordinal;

/// One step of a walk between consecutive wnodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Branch,
    /// Traversal of a tip embraced by one end of the step.
    Tip {
        family: String,
        indices: Vec<i64>,
        rank: Rank,
    },
    /// Passage between a wnode and a wnode it embraces; has length 0.
    Embrace,
}

impl Segment {
    pub fn length(&self) -> Ordinal {
        match self {
            Segment::Branch => Ordinal::from_natural(1),
            Segment::Tip { rank, .. } => rank.tip_length(),
            Segment::Embrace => Ordinal::zero(),
        }
    }
}

/// Alternating wnodes and segments; `segments.len() + 1 == nodes.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkSpec {
    pub nodes: Vec<WNodeRef>,
    pub segments: Vec<Segment>,
}

impl WalkSpec {
    pub fn trivial(x: WNodeRef) -> Self {
        WalkSpec { nodes: vec![x], segments: Vec::new() }
    }

    pub fn start(&self) -> &WNodeRef {
        &self.nodes[0]
    }

    pub fn end(&self) -> &WNodeRef {
        self.nodes.last().expect("walks have at least one wnode")
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, other: WalkSpec) {
        assert_eq!(self.end(), other.start(), "walks must meet");
        self.nodes.extend(other.nodes.into_iter().skip(1));
        self.segments.extend(other.segments);
    }

    pub fn reversed(&self) -> WalkSpec {
        WalkSpec {
            nodes: self.nodes.iter().rev().cloned().collect(),
            segments: self.segments.iter().rev().cloned().collect(),
        }
    }

    /// Checks every step against the slice's branches, tips and embraces.
    pub fn validate(&self, slice: &Slice) -> Result<()> {
        if self.nodes.len() != self.segments.len() + 1 {
            return Err(Error::Incidence("walk has mismatched wnodes and segments".into()));
        }
        let ids: Vec<usize> = self.nodes.iter().map(|n| slice.require(n)).collect::<Result<_>>()?;
        for (i, seg) in self.segments.iter().enumerate() {
            let (a, b) = (ids[i], ids[i + 1]);
            let ok = match seg {
                Segment::Branch => slice.branches().binary_search(&[a.min(b), a.max(b)]).is_ok(),
                Segment::Embrace => slice.embraced_nodes(a).contains(&b) || slice.embraced_nodes(b).contains(&a),
                Segment::Tip { family, indices, .. } => {
                    let joins = |x: usize, y: usize| {
                        slice.embraced_tips(x).iter().any(|&t| {
                            let tip = &slice.tips()[t];
                            &tip.family == family && &tip.indices == indices && tip.trace.contains(&y)
                        })
                    };
                    joins(a, b) || joins(b, a)
                }
            };
            if !ok {
                return Err(Error::Incidence(format!(
                    "step {i} between {} and {} is not a valid {seg}",
                    self.nodes[i],
                    self.nodes[i + 1]
                )));
            }
        }
        Ok(())
    }
}

/// Natural sum of the segment lengths.
pub fn walk_length(w: &WalkSpec) -> Ordinal {
    w.segments.iter().fold(Ordinal::zero(), |acc, s| acc.nat_sum(&s.length()))
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Branch => write!(f, "branch"),
            Segment::Embrace => write!(f, "embrace"),
            Segment::Tip { family, indices, rank } => {
                write!(f, "tip {family}")?;
                if !indices.is_empty() {
                    let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                    write!(f, "[{}]", idx.join(","))?;
                }
                write!(f, " (rank {rank})")
            }
        }
    }
}

impl fmt::Display for WalkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.nodes[0])?;
        for (seg, node) in self.segments.iter().zip(&self.nodes[1..]) {
            match seg {
                Segment::Branch => write!(f, " - {node}")?,
                Segment::Embrace => write!(f, " ~ {node}")?,
                Segment::Tip { .. } => write!(f, " ={seg}= {node}")?,
            }
        }
        Ok(())
    }
}
