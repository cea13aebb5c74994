//! Fusion of orbits under the field automorphism `z -> z^p`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::orbits::orbit_key;
use super::quads::PairQuad;
use super::OracleError;
use crate::canonical::{canonical_form, CanonClass};
use crate::twisted_group::{TwElem, TwistedGroup};

/// Orbit key of the image of `quad` under `z -> z^{p^j}` applied entrywise to `x` and `y`.
pub fn galois_image(
    g: &TwistedGroup,
    quad: &PairQuad,
    j: u32,
    stabs: &HashMap<CanonClass, Vec<TwElem>>,
) -> Result<PairQuad, OracleError> {
    let x = g.galois(&quad.x(g), j);
    let y = g.galois(&quad.y(g), j);
    let (class, w) = canonical_form(g, &y)?;
    let xc = g.conjugate(&x, &w);
    let moved = PairQuad::from_matrix(g, class, &xc.mat).ok_or(OracleError::ImageLeftNormalForm { key: *quad })?;
    orbit_key(g, &stabs[&class], &moved)
}

/// Cycles of the Frobenius permutation on orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fusion {
    /// Orbit indices of each bundle, bundles ordered by smallest member.
    pub bundles: Vec<Vec<usize>>,
    /// Bundle index of each orbit.
    pub bundle_of: Vec<usize>,
}

impl Fusion {
    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }
}

/// Groups orbits (given by sorted keys) into Frobenius bundles. Every orbit whose
/// level is `f` must lie in a bundle of exactly `f` orbits; orbits of lower level are
/// fused without a size requirement.
pub fn galois_fuse(
    g: &TwistedGroup,
    keys: &[PairQuad],
    levels: &[u32],
    stabs: &HashMap<CanonClass, Vec<TwElem>>,
) -> Result<Fusion, OracleError> {
    let index: HashMap<PairQuad, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let perm = keys
        .iter()
        .map(|k| {
            let img = galois_image(g, k, 1, stabs)?;
            index.get(&img).copied().ok_or(OracleError::UnknownImage { key: *k })
        })
        .collect::<Result<Vec<usize>, OracleError>>()?;

    let f = g.f() as usize;
    let mut bundle_of = vec![usize::MAX; keys.len()];
    let mut bundles = Vec::new();
    for start in 0..keys.len() {
        if bundle_of[start] != usize::MAX {
            continue;
        }
        let id = bundles.len();
        let mut cycle = Vec::new();
        let mut i = start;
        while bundle_of[i] == usize::MAX {
            bundle_of[i] = id;
            cycle.push(i);
            i = perm[i];
        }
        if i != start {
            return Err(OracleError::NotAPermutation);
        }
        if levels[start] == g.f() && cycle.len() != f {
            return Err(OracleError::BundleSize {
                key: keys[start],
                size: cycle.len(),
                f: g.f(),
            });
        }
        cycle.sort_unstable();
        bundles.push(cycle);
    }
    Ok(Fusion { bundles, bundle_of })
}
