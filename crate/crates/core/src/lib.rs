//! Exact computation of anti-van der Waerden numbers.
//!
//! `aw(S, k)` is the least `r` such that every exact `r`-coloring of `S`
//! contains a rainbow `k`-term arithmetic progression. This crate computes it
//! for the interval `[n] = {1, .., n}` and the cyclic group `Z_n` by a pruned
//! backtracking search, evaluates the closed form for `aw(Z_n, 3)`, builds the
//! extremal colorings that certify lower bounds, and keeps a brute-force oracle
//! around to check all of the above on small instances.
//!
//! The number-theoretic parts ([`arith`], [`behrend`]) are generic over the
//! unsigned integer width; the aliases below fix the widths used elsewhere.

pub mod apcore;
pub mod arith;
pub mod behrend;
pub mod bounds;
pub mod closedform;
pub mod constructions;
pub mod error;
pub mod oracle;
pub mod report;
pub mod solver;
pub mod store;

pub use apcore::{Coloring, Kind, Progression, Structure};
pub use error::{Error, Result};
pub use solver::{SearchOptions, SearchOutcome, SearchResult};
pub use store::{AwRecord, Method, Store};

/// A color id. Colors are `1..=r`.
pub type Color = u16;

/// A position in a structure: `1..=n` for `[n]`, `0..n` for `Z_n`.
pub type Pos = usize;

/// Prime factorization of a 64-bit integer.
pub type Factorization64 = arith::Factorization<u64>;

/// Behrend set with 64-bit values.
pub type BehrendSet64 = behrend::BehrendSet<u64>;

/// Behrend parameters with 64-bit values.
pub type BehrendParams64 = behrend::BehrendParams<u64>;

/// Exact ratio used for the cyclic prefix divisor.
pub type Ratio64 = num_rational::Ratio<u64>;
