//! The level `e` of a non-singular pair: `<x, y>` is isomorphic to `M(p^{2e})`.
//!
//! The fast method reads traces of the index-2 subgroup generated by
//! `X = B B^sigma`, `Y = A B^sigma`, `Z = B A^sigma`, lifted to `SL(2, F)`: the level is the
//! smallest admissible `e` for which all of `tr X, tr Y, tr Z, tr XY, tr XZ, tr YZ, tr XYZ`
//! lie in `GF(p^{2e})`. The closure method builds the subgroup element by element.

use std::collections::HashSet;

use super::quads::PairQuad;
use super::OracleError;
use crate::census::twisted_divisors;
use crate::gfield::FieldElem;
use crate::twisted_group::{Mat2, TwElem, TwistedGroup};

/// `|M(p^{2e})| = p^{2e}(p^{4e} - 1)`.
pub fn level_group_order(p: u64, e: u32) -> u128 {
    let t = (p as u128).pow(2 * e);
    t * (t * t - 1)
}

fn sl_lift(g: &TwistedGroup, m: &Mat2) -> Mat2 {
    let f = g.field();
    let s = f.sqrt(m.det(f)).expect("determinant is a square");
    m.scale(f, f.inv(s))
}

/// Traces of the seven words in the `SL(2, F)` lifts, each defined up to sign.
pub fn word_traces(g: &TwistedGroup, quad: &PairQuad) -> [FieldElem; 7] {
    let f = g.field();
    let a = quad.matrix(g);
    let b = quad.class.matrix(g);
    let bs = g.sigma_mat(&b);
    let x = sl_lift(g, &b.mul(f, &bs));
    let y = sl_lift(g, &a.mul(f, &bs));
    let z = sl_lift(g, &b.mul(f, &g.sigma_mat(&a)));
    let xy = x.mul(f, &y);
    [
        x.trace(f),
        y.trace(f),
        z.trace(f),
        xy.trace(f),
        x.mul(f, &z).trace(f),
        y.mul(f, &z).trace(f),
        xy.mul(f, &z).trace(f),
    ]
}

/// Smallest admissible `e` with every word trace in `GF(p^{2e})`.
pub fn generated_level_fast(g: &TwistedGroup, quad: &PairQuad) -> Result<u32, OracleError> {
    let f = g.field();
    let traces = word_traces(g, quad);
    twisted_divisors(g.f())
        .into_iter()
        .find(|&e| traces.iter().all(|&t| f.in_subfield(t, 2 * e).expect("2e divides 2f")))
        .ok_or(OracleError::NoLevel { key: *quad })
}

/// Size of `<gens>`, or `None` once it exceeds `cap`.
pub fn closure_size(g: &TwistedGroup, gens: &[TwElem], cap: usize) -> Option<usize> {
    let mut seen: HashSet<TwElem> = HashSet::new();
    let id = g.identity();
    seen.insert(id);
    let mut frontier = vec![id];
    while let Some(h) = frontier.pop() {
        for s in gens {
            let next = g.mul(&h, s);
            if seen.insert(next) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(next);
            }
        }
    }
    Some(seen.len())
}

/// Level by explicit closure. The closure is cut off at the order of the largest
/// proper admissible level, so the full group is never materialized unless `f` is
/// the only admissible level.
pub fn generated_level_closure(g: &TwistedGroup, quad: &PairQuad) -> Result<u32, OracleError> {
    let p = g.p();
    let divs = twisted_divisors(g.f());
    let gens = [quad.x(g), quad.y(g)];
    let proper_cap = divs.iter().rev().nth(1).map(|&e| level_group_order(p, e) as usize);
    let cap = proper_cap.unwrap_or(level_group_order(p, g.f()) as usize);
    match closure_size(g, &gens, cap) {
        None => Ok(g.f()),
        Some(size) => divs
            .into_iter()
            .find(|&e| level_group_order(p, e) == size as u128)
            .ok_or(OracleError::NoLevel { key: *quad }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quads::enumerate_quads;

    #[test]
    fn group_orders() {
        assert_eq!(level_group_order(3, 1), 720);
        assert_eq!(level_group_order(5, 1), 15600);
    }

    #[test]
    fn every_pair_at_q3_and_q5_generates_by_closure() {
        for q in [3u64, 5] {
            let g = TwistedGroup::from_q(q).unwrap();
            let full = g.order_of_g() as usize;
            for quad in enumerate_quads(&g).step_by(if q == 3 { 1 } else { 97 }) {
                assert_eq!(closure_size(&g, &[quad.x(&g), quad.y(&g)], full), Some(full));
                assert_eq!(generated_level_closure(&g, &quad).unwrap(), 1);
                assert_eq!(generated_level_fast(&g, &quad).unwrap(), 1);
            }
        }
    }

    #[test]
    fn q9_levels_are_two() {
        let g = TwistedGroup::from_q(9).unwrap();
        for quad in enumerate_quads(&g).step_by(211) {
            assert_eq!(generated_level_fast(&g, &quad).unwrap(), 2);
        }
        for quad in enumerate_quads(&g).step_by(2011) {
            assert_eq!(generated_level_closure(&g, &quad).unwrap(), 2);
        }
    }
}
