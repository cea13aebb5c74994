//! Reflexibility: some involution of the extended group inverts both `x` and `y`.
//!
//! Three independent searches are provided. The shape search tries the four
//! families of candidate involutions available for a canonical `y`; the coset search
//! enumerates every element conjugating `y^{-1}` to `y`; the exhaustive search tries
//! every involution of the extended group.

use serde::{Deserialize, Serialize};

use super::quads::PairQuad;
use crate::canonical::{canonical_form, CanonClass, Form};
use crate::gfield::FieldElem;
use crate::twisted_group::{Mat2, TwElem, TwistedGroup};

/// Candidate involution families, two per form of `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReflexShape {
    /// `[off(lambda eta, 1), 0]`, `eta` in `F_0^*` (diagonal `B`).
    S1,
    /// `[off(beta, 1), 1]`, `beta` in `F_0^*` (diagonal `B`).
    S2,
    /// `[off(lambda eta, 1), 0]`, `eta^{q+1} = 1` (off-diagonal `B`).
    S3,
    /// `[dia(1, delta), 1]`, `delta^{q+1} = 1` (off-diagonal `B`).
    S4,
}

/// Every candidate involution for pairs with `y` the representative of `class`.
pub fn shape_candidates(g: &TwistedGroup, class: CanonClass) -> Vec<(ReflexShape, TwElem)> {
    let f = g.field();
    let q = g.q();
    let l = class.lambda(g);
    let one = FieldElem::ONE;
    let mk = |m: Mat2, t: u8| TwElem {
        mat: m.normalized(f),
        twist: t,
    };
    match class.form {
        Form::Dia => {
            let f0 = f.nth_roots(one, q - 1);
            let s1 = f0
                .iter()
                .map(|&eta| (ReflexShape::S1, mk(Mat2::off(f.mul(l, eta), one), 0)));
            let s2 = f0.iter().map(|&beta| (ReflexShape::S2, mk(Mat2::off(beta, one), 1)));
            s1.chain(s2).collect()
        }
        Form::Off => {
            let norm1 = f.nth_roots(one, q + 1);
            let s3 = norm1
                .iter()
                .map(|&eta| (ReflexShape::S3, mk(Mat2::off(f.mul(l, eta), one), 0)));
            let s4 = norm1
                .iter()
                .map(|&delta| (ReflexShape::S4, mk(Mat2::dia(one, delta), 1)));
            s3.chain(s4).collect()
        }
    }
}

fn inverts_pair(g: &TwistedGroup, c: &TwElem, x: &TwElem, y: &TwElem) -> bool {
    g.is_identity(&g.mul(c, c)) && g.conjugate(x, c) == g.inv(x) && g.conjugate(y, c) == g.inv(y)
}

/// Shapes containing an involution that inverts both generators.
pub fn reflexible_shapes(g: &TwistedGroup, quad: &PairQuad, candidates: &[(ReflexShape, TwElem)]) -> Vec<ReflexShape> {
    let x = quad.x(g);
    let y = quad.y(g);
    let mut out: Vec<ReflexShape> = candidates
        .iter()
        .filter(|(_, c)| inverts_pair(g, c, &x, &y))
        .map(|(s, _)| *s)
        .collect();
    out.dedup();
    out
}

pub fn is_reflexible(g: &TwistedGroup, quad: &PairQuad, candidates: &[(ReflexShape, TwElem)]) -> bool {
    let x = quad.x(g);
    let y = quad.y(g);
    candidates.iter().any(|(_, c)| inverts_pair(g, c, &x, &y))
}

/// All `h` with `h^{-1} z h = y`, where `y` is the representative of `class` and
/// `stab` its stabilizer; `None` when `z` lies in another class.
pub fn conjugators_to_rep(g: &TwistedGroup, z: &TwElem, class: CanonClass, stab: &[TwElem]) -> Option<Vec<TwElem>> {
    let (c, w) = canonical_form(g, z).ok()?;
    (c == class).then(|| stab.iter().map(|s| g.mul(&w, s)).collect())
}

/// Reflexibility through the coset of elements conjugating `y^{-1}` to `y`.
pub fn is_reflexible_coset(g: &TwistedGroup, quad: &PairQuad, stab: &[TwElem]) -> bool {
    let x = quad.x(g);
    let y = quad.y(g);
    let Some(cands) = conjugators_to_rep(g, &g.inv(&y), quad.class, stab) else {
        return false;
    };
    cands.iter().any(|c| inverts_pair(g, c, &x, &y))
}

/// Every involution of the extended group.
pub fn involutions(g: &TwistedGroup) -> Vec<TwElem> {
    g.all_elements()
        .filter(|c| !g.is_identity(c) && g.is_identity(&g.mul(c, c)))
        .collect()
}

pub fn is_reflexible_exhaustive(g: &TwistedGroup, quad: &PairQuad, invols: &[TwElem]) -> bool {
    let x = quad.x(g);
    let y = quad.y(g);
    invols.iter().any(|c| inverts_pair(g, c, &x, &y))
}
