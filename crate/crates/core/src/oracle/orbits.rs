//! Partition of a class block into orbits of the stabilizer of `y`.

use serde::{Deserialize, Serialize};

use super::quads::{enumerate_block, PairQuad};
use super::OracleError;
use crate::canonical::{stabilizer_elements, CanonClass};
use crate::twisted_group::{TwElem, TwistedGroup};

/// One orbit: its minimum quadruple and its size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub key: PairQuad,
    pub size: usize,
}

/// Images of `quad` under conjugation by each stabilizer element, in stabilizer order.
pub fn orbit_images(g: &TwistedGroup, stab: &[TwElem], quad: &PairQuad) -> Result<Vec<PairQuad>, OracleError> {
    let x = quad.x(g);
    stab.iter()
        .map(|s| {
            let img = g.conjugate(&x, s);
            PairQuad::from_matrix(g, quad.class, &img.mat).ok_or(OracleError::ImageLeftNormalForm { key: *quad })
        })
        .collect()
}

/// Minimum image of `quad` under the stabilizer.
pub fn orbit_key(g: &TwistedGroup, stab: &[TwElem], quad: &PairQuad) -> Result<PairQuad, OracleError> {
    Ok(orbit_images(g, stab, quad)?
        .into_iter()
        .min()
        .expect("stabilizer contains the identity"))
}

/// Orbits of the stabilizer of the class representative on the non-singular quadruples
/// of `class`, sorted by key. Every orbit must have exactly `|stabilizer|` elements.
pub fn orbit_partition(g: &TwistedGroup, class: CanonClass) -> Result<Vec<Orbit>, OracleError> {
    let stab = stabilizer_elements(g, class);
    partition_quads(g, class, &stab, enumerate_block(g, class))
}

/// As [`orbit_partition`] for an explicit stream of quadruples in increasing order.
pub fn partition_quads(
    g: &TwistedGroup,
    class: CanonClass,
    stab: &[TwElem],
    quads: impl Iterator<Item = PairQuad>,
) -> Result<Vec<Orbit>, OracleError> {
    let n = g.field().size();
    let mut seen = vec![false; n as usize * n as usize];
    let mut out = Vec::new();
    for quad in quads {
        debug_assert_eq!(quad.class, class);
        if seen[quad.dense_index(n)] {
            continue;
        }
        let mut images = orbit_images(g, stab, &quad)?;
        for img in &images {
            if img < &quad {
                return Err(OracleError::NotMinimal { key: quad });
            }
            seen[img.dense_index(n)] = true;
        }
        images.sort_unstable();
        images.dedup();
        if images.len() != stab.len() {
            return Err(OracleError::NotSemiregular {
                key: quad,
                size: images.len(),
                expected: stab.len(),
            });
        }
        out.push(Orbit {
            key: quad,
            size: images.len(),
        });
    }
    Ok(out)
}
