//! Discrete-Morse free resolutions of monomial ideals.
//!
//! The bridge matching on the Taylor complex of a monomial ideal produces a
//! (often much smaller) cellular free resolution. This crate builds those
//! matchings, computes the resulting Morse differential, certifies it
//! against an independent Tor oracle, compares it with the Taylor,
//! Lyubeznik and Scarf constructions, and specializes to edge ideals of
//! weighted oriented forests and cycles.
//!
//! Combinatorics (symbols, matchings, graphs) is scalar-free. Exact linear
//! algebra is generic over `num_traits::Num` scalars; the aliases below fix
//! the concrete types used for ranks.

pub mod betti;
pub mod bridges;
pub mod error;
pub mod graph;
pub mod ideal;
pub mod linalg;
pub mod matching;
pub mod morse;
pub mod oracle;
pub mod rivals;
pub mod search;
pub mod symbols;

pub use betti::{GradedBettiTable, RankVector};
pub use bridges::SymbolClass;
pub use error::{Error, Result};
pub use ideal::{GenOrder, Monomial, MonomialIdeal, RingContext};
pub use linalg::FieldSpec;
pub use matching::{MatchEdge, Matching};
pub use morse::MorseDifferential;
pub use symbols::{LcmTable, Symbol};

/// Exact rationals for characteristic-zero ranks.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers for fraction-free elimination.
pub type Integer = num_bigint::BigInt;
/// The default prime field.
pub type F32003 = linalg::Zp<32003>;
/// The field with two elements.
pub type F2 = linalg::Zp<2>;
