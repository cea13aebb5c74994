//! Brute-force oracle: explicit orbit enumeration in `M(q^2)` and its extension.
//!
//! Pairs are normalized so that `y` is a canonical class representative; the orbits
//! of pairs under the extended group then correspond to orbits of normal-form
//! quadruples under the stabilizer of `y`.

use thiserror::Error;

pub mod galois;
pub mod level;
pub mod orbits;
pub mod quads;
pub mod raw;
pub mod reflex;
pub mod run;
pub mod selfdual;

pub use run::{LevelMethod, OracleCensus, OracleOptions, OrbitRec};

use crate::canonical::CanonError;
use crate::twisted_group::GroupError;
use quads::PairQuad;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("image of {key:?} is not in normal form")]
    ImageLeftNormalForm { key: PairQuad },
    #[error("first visited quadruple {key:?} is not the minimum of its orbit")]
    NotMinimal { key: PairQuad },
    #[error("orbit of {key:?} has {size} elements, expected {expected}")]
    NotSemiregular {
        key: PairQuad,
        size: usize,
        expected: usize,
    },
    #[error("no admissible level for {key:?}")]
    NoLevel { key: PairQuad },
    #[error("Frobenius image of {key:?} is not a known orbit")]
    UnknownImage { key: PairQuad },
    #[error("Frobenius action on orbits is not a permutation")]
    NotAPermutation,
    #[error("generating orbit {key:?} lies in a bundle of size {size}, expected {f}")]
    BundleSize { key: PairQuad, size: usize, f: u32 },
    #[error("orbit flags differ inside the bundle of {key:?}")]
    BundleFlags { key: PairQuad },
    #[error("self-duality needs equal orders, got {k} and {l}")]
    OrderMismatch { k: u64, l: u64 },
    #[error("{0} was not computed")]
    NotComputed(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Canon(#[from] CanonError),
}
