//! Non-singular quadruples: normal forms of pairs `([A,1],[B,1])` with `(xy)^2 = 1`.
//!
//! With `y = [B,1]` the class representative for `lambda = xi^i`:
//! - diagonal `B`: `A = [[-1, b], [c, lambda^sigma]]`, `u = bc + lambda^sigma`;
//! - off-diagonal `B`: `A = [[a, lambda^sigma], [-1, d]]`, `u = ad + lambda^sigma`.
//!
//! A quadruple is non-singular when `u` is a non-square, `A` is not triangular
//! (diagonal case) or off-diagonal (off-diagonal case), and `x`, `y` do not both
//! have order 4.

use serde::{Deserialize, Serialize};

use crate::canonical::{representative, CanonClass, Form};
use crate::gfield::FieldElem;
use crate::twisted_group::{Mat2, TwElem, TwistedGroup};

/// `(class, e1, e2, u)`: `(b, c)` for the diagonal form, `(a, d)` for the off-diagonal form.
///
/// The derived order (class, then `e1`, then `e2`) is the total order used for orbit keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairQuad {
    pub class: CanonClass,
    pub e1: FieldElem,
    pub e2: FieldElem,
    pub u: FieldElem,
}

fn lambda_sigma(g: &TwistedGroup, class: CanonClass) -> FieldElem {
    g.sigma(class.lambda(g))
}

impl PairQuad {
    /// The matrix `A` in normal form.
    pub fn matrix(&self, g: &TwistedGroup) -> Mat2 {
        let f = g.field();
        let ls = lambda_sigma(g, self.class);
        let m1 = f.neg(FieldElem::ONE);
        match self.class.form {
            Form::Dia => Mat2::new(m1, self.e1, self.e2, ls),
            Form::Off => Mat2::new(self.e1, ls, m1, self.e2),
        }
    }

    pub fn x(&self, g: &TwistedGroup) -> TwElem {
        TwElem {
            mat: self.matrix(g).normalized(g.field()),
            twist: 1,
        }
    }

    pub fn y(&self, g: &TwistedGroup) -> TwElem {
        representative(g, self.class)
    }

    /// Position of `(e1, e2)` in the class block.
    pub fn dense_index(&self, field_size: u32) -> usize {
        self.e1.index() as usize * field_size as usize + self.e2.index() as usize
    }

    /// Reads a quadruple of `class` off any scalar multiple of a normal-form matrix;
    /// `None` when the matrix has no such multiple.
    pub fn from_matrix(g: &TwistedGroup, class: CanonClass, m: &Mat2) -> Option<PairQuad> {
        let f = g.field();
        let ls = lambda_sigma(g, class);
        let m1 = f.neg(FieldElem::ONE);
        let (lead, expect_pos) = match class.form {
            Form::Dia => (m.a, 3),
            Form::Off => (m.c, 1),
        };
        if lead.is_zero() {
            return None;
        }
        let c = m.scale(f, f.div(m1, lead));
        let (e1, e2) = match class.form {
            Form::Dia => (c.b, c.c),
            Form::Off => (c.a, c.d),
        };
        if c.entries()[expect_pos] != ls {
            return None;
        }
        Some(PairQuad {
            class,
            e1,
            e2,
            u: f.add(f.mul(e1, e2), ls),
        })
    }
}

/// Builds the quadruple for `(class, e1, e2)` if it is non-singular.
pub fn nonsingular_quad(g: &TwistedGroup, class: CanonClass, e1: FieldElem, e2: FieldElem) -> Option<PairQuad> {
    let f = g.field();
    let ls = lambda_sigma(g, class);
    let u = f.add(f.mul(e1, e2), ls);
    if u.is_zero() || f.is_square(u).expect("non-zero") {
        return None;
    }
    let degenerate = match class.form {
        Form::Dia => e1.is_zero() || e2.is_zero(),
        Form::Off => e1.is_zero() && e2.is_zero(),
    };
    if degenerate {
        return None;
    }
    let quad = PairQuad { class, e1, e2, u };
    if class.is_exceptional(g.q()) && x_has_order_four(g, &quad) {
        return None;
    }
    Some(quad)
}

/// `[A,1]` has order 4 exactly when `tr(A A^sigma) = 0`.
pub fn x_has_order_four(g: &TwistedGroup, quad: &PairQuad) -> bool {
    let f = g.field();
    let a = quad.matrix(g);
    a.mul(f, &g.sigma_mat(&a)).trace(f).is_zero()
}

/// Non-singular quadruples of one class, in increasing key order.
pub fn enumerate_block(g: &TwistedGroup, class: CanonClass) -> impl Iterator<Item = PairQuad> + '_ {
    let f = g.field().clone();
    f.elements()
        .flat_map(move |e1| g.field().elements().map(move |e2| (e1, e2)))
        .filter_map(move |(e1, e2)| nonsingular_quad(g, class, e1, e2))
}

/// All non-singular quadruples, class by class.
pub fn enumerate_quads(g: &TwistedGroup) -> impl Iterator<Item = PairQuad> + '_ {
    crate::canonical::classes(g.q())
        .into_iter()
        .flat_map(move |c| enumerate_block(g, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::classes;

    #[test]
    fn every_quad_gives_an_order_two_product() {
        for q in [3u64, 5, 7] {
            let g = TwistedGroup::from_q(q).unwrap();
            for quad in enumerate_quads(&g) {
                let x = quad.x(&g);
                let y = quad.y(&g);
                assert!(g.in_g(&x));
                let xy = g.mul(&x, &y);
                assert!(!g.is_identity(&xy));
                assert!(g.is_identity(&g.mul(&xy, &xy)));
                assert_eq!(PairQuad::from_matrix(&g, quad.class, &x.mat), Some(quad));
            }
        }
    }

    #[test]
    fn no_enumerated_pair_has_both_orders_four() {
        for q in [3u64, 5, 7, 9] {
            let g = TwistedGroup::from_q(q).unwrap();
            for quad in enumerate_quads(&g) {
                let both = g.order(&quad.x(&g)) == 4 && g.order(&quad.y(&g)) == 4;
                assert!(!both, "q={q} {quad:?}");
            }
        }
    }

    #[test]
    fn block_sizes_at_q3() {
        let g = TwistedGroup::from_q(3).unwrap();
        let sizes: Vec<usize> = classes(3).into_iter().map(|c| enumerate_block(&g, c).count()).collect();
        // two orbits of size 8 for Dia(1), five orbits of size 8 for Off(1)
        assert_eq!(sizes, vec![16, 40]);
    }

    #[test]
    fn blocks_are_sorted() {
        let g = TwistedGroup::from_q(5).unwrap();
        for c in classes(5) {
            let v: Vec<_> = enumerate_block(&g, c).collect();
            assert!(v.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
