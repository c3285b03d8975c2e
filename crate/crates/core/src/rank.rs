//! Ranks of transfiniteness `0 < 1 < … < ⃗ω < ω`.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::ordinal::ExpRank;
use crate::Ordinal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u32),
    /// `⃗ω`: above every natural rank, below `ω`.
    ArrowOmega,
    Omega,
}

impl Rank {
    /// Predecessor rank; `None` stands for the branch rank `-1`.
    ///
    /// `⃗ω` has no predecessor and is reported as a rank error by callers.
    pub fn pred(self) -> Option<Rank> {
        match self {
            Rank::Finite(0) => None,
            Rank::Finite(k) => Some(Rank::Finite(k - 1)),
            Rank::ArrowOmega => None,
            Rank::Omega => Some(Rank::ArrowOmega),
        }
    }

    pub fn has_pred(self) -> bool {
        matches!(self, Rank::Finite(k) if k > 0) || self == Rank::Omega
    }

    /// Exponent used in bounds `ω^ρ·μ`; `⃗ω` has none.
    pub fn exp(self) -> Option<ExpRank> {
        match self {
            Rank::Finite(k) => Some(ExpRank::Finite(k as u64)),
            Rank::ArrowOmega => None,
            Rank::Omega => Some(ExpRank::Omega),
        }
    }

    /// Length contributed by traversing a tip of this rank: `ω^(α+1)` for
    /// natural `α`, `ω^ω` for `α = ⃗ω`.
    pub fn tip_length(self) -> Ordinal {
        match self {
            Rank::Finite(k) => Ordinal::omega_pow(ExpRank::Finite(k as u64 + 1)),
            Rank::ArrowOmega => Ordinal::omega_pow(ExpRank::Omega),
            Rank::Omega => panic!("tips of rank ω do not occur below rank ω+1"),
        }
    }

    /// Whether a node of this rank is allowed inside a section of rank `scope`.
    pub fn within(self, scope: Rank) -> bool {
        match scope {
            Rank::ArrowOmega => matches!(self, Rank::Finite(_)),
            _ => self <= scope,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(k) => write!(f, "{k}"),
            Rank::ArrowOmega => write!(f, "->w"),
            Rank::Omega => write!(f, "w"),
        }
    }
}

impl FromStr for Rank {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "w" | "ω" | "omega" => Ok(Rank::Omega),
            "->w" | "⃗ω" | "arrow-omega" => Ok(Rank::ArrowOmega),
            t => t.parse::<u32>().map(Rank::Finite).map_err(|_| ParseError::new(format!("bad rank `{t}`"), 0)),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(k) => serializer.serialize_u32(*k),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(k) => Ok(Rank::Finite(k)),
            Raw::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}
