//! Orientably-regular maps whose orientation-preserving automorphism group is a
//! twisted linear fractional group `M(q^2)`.
//!
//! The crate has two independent halves. [`census`] evaluates closed-form counts
//! of orbits, maps and reflexible maps with exact integers. [`oracle`] enumerates
//! generating pairs of small groups, partitions them into conjugacy orbits and
//! recomputes the same numbers by brute force.

pub mod canonical;
pub mod census;
pub mod gfield;
pub mod oracle;
pub mod twisted_group;

pub use gfield::{Field, FieldElem, FieldError, FieldSpec};
