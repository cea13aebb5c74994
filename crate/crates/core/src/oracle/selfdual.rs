//! Positive self-duality (`(x, y) -> (y, x)`) and negative self-duality
//! (`(x, y) -> (y^{-1}, x^{-1})`) by conjugation with an involution of the extended group.

use serde::{Deserialize, Serialize};

use super::quads::PairQuad;
use super::reflex::conjugators_to_rep;
use super::OracleError;
use crate::canonical::{canonical_form, canonical_order, Form};
use crate::twisted_group::{TwElem, TwistedGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDuality {
    pub positive: bool,
    pub negative: bool,
}

/// Orders of `x` and `y`.
pub fn pair_type(g: &TwistedGroup, quad: &PairQuad) -> (u64, u64) {
    let (cx, _) = canonical_form(g, &quad.x(g)).expect("x is twisted");
    (canonical_order(cx, g.q()), canonical_order(quad.class, g.q()))
}

fn check_order(g: &TwistedGroup, quad: &PairQuad) -> Result<(), OracleError> {
    let (k, l) = pair_type(g, quad);
    if k != l {
        return Err(OracleError::OrderMismatch { k, l });
    }
    Ok(())
}

fn swaps(g: &TwistedGroup, c: &TwElem, x: &TwElem, y: &TwElem, x_target: &TwElem, y_target: &TwElem) -> bool {
    g.is_identity(&g.mul(c, c)) && g.conjugate(x, c) == *x_target && g.conjugate(y, c) == *y_target
}

/// Self-duality by the coset method: every `h` sending `x` (resp. `x^{-1}`) to `y` is
/// `w s` with `w` a canonical-form witness and `s` in the stabilizer of `y`.
pub fn self_duality(g: &TwistedGroup, quad: &PairQuad, stab: &[TwElem]) -> Result<SelfDuality, OracleError> {
    check_order(g, quad)?;
    let x = quad.x(g);
    let y = quad.y(g);
    let xi = g.inv(&x);
    let yi = g.inv(&y);
    let positive =
        conjugators_to_rep(g, &x, quad.class, stab).is_some_and(|cs| cs.iter().any(|c| swaps(g, c, &x, &y, &y, &x)));
    let negative =
        conjugators_to_rep(g, &xi, quad.class, stab).is_some_and(|cs| cs.iter().any(|c| swaps(g, c, &x, &y, &yi, &xi)));
    Ok(SelfDuality { positive, negative })
}

/// Self-duality by trying every involution.
pub fn self_duality_exhaustive(
    g: &TwistedGroup,
    quad: &PairQuad,
    invols: &[TwElem],
) -> Result<SelfDuality, OracleError> {
    check_order(g, quad)?;
    let x = quad.x(g);
    let y = quad.y(g);
    let xi = g.inv(&x);
    let yi = g.inv(&y);
    Ok(SelfDuality {
        positive: invols.iter().any(|c| swaps(g, c, &x, &y, &y, &x)),
        negative: invols.iter().any(|c| swaps(g, c, &x, &y, &yi, &xi)),
    })
}

/// One row of the self-duality table: maps with `k = l`, positively self-dual,
/// negatively self-dual, and both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDualRow {
    pub q: u64,
    pub form: Form,
    pub k_eq_l: u64,
    pub pos_sd: u64,
    pub neg_sd: u64,
    pub both: u64,
}

impl SelfDualRow {
    pub fn cells(&self) -> [u64; 4] {
        [self.k_eq_l, self.pos_sd, self.neg_sd, self.both]
    }
}

/// Reference self-duality counts: `(q, diagonal row, off-diagonal row)`.
pub const SELF_DUAL_TABLE: [(u64, [u64; 4], [u64; 4]); 8] = [
    (3, [0, 0, 0, 0], [3, 3, 3, 3]),
    (5, [15, 15, 5, 5], [10, 10, 6, 6]),
    (7, [28, 28, 8, 8], [78, 42, 14, 14]),
    (9, [95, 45, 9, 9], [68, 36, 10, 10]),
    (11, [276, 132, 24, 24], [265, 165, 33, 33]),
    (13, [469, 273, 39, 39], [666, 234, 42, 42]),
    (17, [2556, 612, 68, 68], [1312, 544, 72, 72]),
    (19, [1960, 760, 80, 80], [2799, 855, 95, 95]),
];

/// Reference rows for `q`, if tabulated.
pub fn reference_rows(q: u64) -> Option<[SelfDualRow; 2]> {
    SELF_DUAL_TABLE.iter().find(|r| r.0 == q).map(|&(q, d, o)| {
        let row = |form, c: [u64; 4]| SelfDualRow {
            q,
            form,
            k_eq_l: c[0],
            pos_sd: c[1],
            neg_sd: c[2],
            both: c[3],
        };
        [row(Form::Dia, d), row(Form::Off, o)]
    })
}
