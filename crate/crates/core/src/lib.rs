//! Ordinal-valued distances on transfinite wgraphs, and galaxy
//! classification of their nonstandard enlargements.
//!
//! The crate is layered bottom-up:
//!
//! * [`ordinal`]: Cantor-normal-form ordinals below `ω^(ω+1)` with natural sums.
//! * [`wgraph`]: finitely presented transfinite wgraphs, window slices,
//!   sections, boundary wnodes.
//! * [`wdistance`]: walk lengths and shortest-walk distances.
//! * [`enlargement`]: hypernodes as index maps `n ↦ x_n` and their distance
//!   profiles.
//! * [`galaxy`]: limited distance, galaxies, the closeness order and the
//!   ladder construction.

pub mod enlargement;
pub mod error;
pub mod expr;
pub mod galaxy;
pub mod ordinal;
pub mod poly;
pub mod rank;
pub mod verify;
pub mod wdistance;
pub mod wgraph;

use num_bigint::BigUint;

pub use error::{Error, ParseError, Result};
pub use poly::{Poly, RatPoly};
pub use rank::Rank;
pub use wgraph::{WGraph, WNodeRef};

/// Ordinals with arbitrary-precision coefficients.
pub type Ordinal = ordinal::Cnf<BigUint>;
