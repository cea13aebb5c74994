//! Canonical representatives `[dia(xi^i,1),1]` and `[off(xi^i,1),1]` of the
//! conjugacy classes of twisted elements, with explicit stabilizer lists.
//!
//! Classes are taken under conjugation by the full extended group. Every twisted
//! element of `M(q^2)` is conjugate to exactly one representative with `i` odd and
//! `1 <= i <= (q-1)/2` (diagonal form) or `1 <= i <= (q+1)/2` (off-diagonal form).

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfield::FieldElem;
use crate::twisted_group::{Mat2, TwElem, TwistedGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("element has twist 0; only twisted elements have canonical forms")]
    Untwisted,
    #[error("element is not in M(q^2)")]
    NotInG,
    #[error("class {0} is not valid for q = {1}")]
    InvalidClass(CanonClass, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Form {
    Dia,
    Off,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Dia => "Dia",
            Form::Off => "Off",
        })
    }
}

/// `Dia(i)` or `Off(i)`, standing for `[dia(xi^i,1),1]` or `[off(xi^i,1),1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonClass {
    pub form: Form,
    pub i: u64,
}

impl fmt::Display for CanonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.form, self.i)
    }
}

impl CanonClass {
    pub const fn dia(i: u64) -> CanonClass {
        CanonClass { form: Form::Dia, i }
    }

    pub const fn off(i: u64) -> CanonClass {
        CanonClass { form: Form::Off, i }
    }

    /// `q - 1` for the diagonal form, `q + 1` for the off-diagonal form.
    pub fn modulus(&self, q: u64) -> u64 {
        match self.form {
            Form::Dia => q - 1,
            Form::Off => q + 1,
        }
    }

    pub fn is_valid(&self, q: u64) -> bool {
        self.i % 2 == 1 && self.i >= 1 && 2 * self.i <= self.modulus(q)
    }

    /// Classes whose stabilizer is twice the generic size; these are the classes of
    /// elements of order 4.
    pub fn is_exceptional(&self, q: u64) -> bool {
        match self.form {
            Form::Dia => q % 4 == 3 && 2 * self.i == q - 1,
            Form::Off => q % 4 == 1 && 2 * self.i == q + 1,
        }
    }

    pub fn lambda(&self, g: &TwistedGroup) -> FieldElem {
        g.field().xi_pow(self.i as i64)
    }

    /// The matrix `B` of the representative `[B, 1]`.
    pub fn matrix(&self, g: &TwistedGroup) -> Mat2 {
        let l = self.lambda(g);
        match self.form {
            Form::Dia => Mat2::dia(l, FieldElem::ONE),
            Form::Off => Mat2::off(l, FieldElem::ONE),
        }
    }
}

/// All classes for `q`: diagonal ones first, each form by increasing `i`.
pub fn classes(q: u64) -> Vec<CanonClass> {
    let dia = (1..=(q - 1) / 2).step_by(2).map(CanonClass::dia);
    let off = (1..=q.div_ceil(2)).step_by(2).map(CanonClass::off);
    dia.chain(off).collect()
}

pub fn representative(g: &TwistedGroup, c: CanonClass) -> TwElem {
    TwElem {
        mat: c.matrix(g).normalized(g.field()),
        twist: 1,
    }
}

/// `2(q-1)/gcd(q-1,i)` or `2(q+1)/gcd(q+1,i)`.
pub fn canonical_order(c: CanonClass, q: u64) -> u64 {
    let m = c.modulus(q);
    2 * m / m.gcd(&c.i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabKind {
    P1,
    P2,
    P3,
    P4,
}

/// A stabilizer element described by its family and parameter (`eta` or `zeta`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StabElem {
    pub kind: StabKind,
    pub param: FieldElem,
}

impl StabElem {
    pub fn twist(&self) -> u8 {
        match self.kind {
            StabKind::P1 | StabKind::P3 => 0,
            StabKind::P2 | StabKind::P4 => 1,
        }
    }

    pub fn element(&self, g: &TwistedGroup, c: CanonClass) -> TwElem {
        let f = g.field();
        let l = c.lambda(g);
        let one = FieldElem::ONE;
        let m = match (c.form, self.kind) {
            (_, StabKind::P1) => Mat2::dia(self.param, one),
            (Form::Dia, StabKind::P2) => Mat2::dia(f.mul(self.param, l), one),
            (Form::Off, StabKind::P2) => Mat2::off(f.mul(self.param, l), one),
            (_, StabKind::P3) => Mat2::off(self.param, one),
            (Form::Dia, StabKind::P4) => Mat2::off(f.div(self.param, l), one),
            (Form::Off, StabKind::P4) => Mat2::dia(f.div(self.param, l), one),
        };
        TwElem {
            mat: m.normalized(f),
            twist: self.twist(),
        }
    }
}

/// Parametrized stabilizer of the representative of `c`.
///
/// Diagonal form: `eta` ranges over `F_0^*` and `zeta` over the `(q-1)`-th roots of
/// `lambda^{-2}`. Off-diagonal form: `eta` ranges over the `(q+1)`-th roots of 1 and
/// `zeta` over the `(q+1)`-th roots of `lambda^2`. P3 and P4 occur only for
/// exceptional classes.
pub fn stabilizer(g: &TwistedGroup, c: CanonClass) -> Vec<StabElem> {
    let f = g.field();
    let q = g.q();
    let l = c.lambda(g);
    let (etas, zetas) = match c.form {
        Form::Dia => (f.nth_roots(f.one(), q - 1), f.nth_roots(f.inv(f.mul(l, l)), q - 1)),
        Form::Off => (f.nth_roots(f.one(), q + 1), f.nth_roots(f.mul(l, l), q + 1)),
    };
    let mut out: Vec<StabElem> = Vec::new();
    for kind in [StabKind::P1, StabKind::P2] {
        out.extend(etas.iter().map(|&param| StabElem { kind, param }));
    }
    if c.is_exceptional(q) {
        for kind in [StabKind::P3, StabKind::P4] {
            out.extend(zetas.iter().map(|&param| StabElem { kind, param }));
        }
    }
    out
}

pub fn stabilizer_elements(g: &TwistedGroup, c: CanonClass) -> Vec<TwElem> {
    stabilizer(g, c).iter().map(|s| s.element(g, c)).collect()
}

/// Expected stabilizer size: `2(q-1)`, `2(q+1)`, doubled for exceptional classes.
pub fn stabilizer_size(c: CanonClass, q: u64) -> usize {
    let base = 2 * c.modulus(q) as usize;
    if c.is_exceptional(q) {
        2 * base
    } else {
        base
    }
}

/// Eigenvalues of `A A^sigma` for a twisted element `[A, 1]`, plus the matrix itself.
fn twisted_square_eigen(g: &TwistedGroup, a: &Mat2) -> (Mat2, FieldElem, FieldElem) {
    let f = g.field();
    let m = a.mul(f, &g.sigma_mat(a));
    let tr = m.trace(f);
    let det = m.det(f);
    let disc = f.sub(f.mul(tr, tr), f.mul(f.from_int(4), det));
    let s = f.sqrt(disc).expect("eigenvalues of A A^sigma lie in F");
    let half = f.inv(f.from_int(2));
    let l1 = f.mul(f.add(tr, s), half);
    let l2 = f.mul(f.sub(tr, s), half);
    (m, l1, l2)
}

fn eigenvector(g: &TwistedGroup, m: &Mat2, l: FieldElem, fallback: (FieldElem, FieldElem)) -> (FieldElem, FieldElem) {
    let f = g.field();
    if !m.b.is_zero() {
        (m.b, f.sub(l, m.a))
    } else if !m.c.is_zero() {
        (f.sub(l, m.d), m.c)
    } else {
        fallback
    }
}

/// Canonical class of a twisted element `x` together with a witness `w` such that
/// `w^{-1} x w` is the class representative.
pub fn canonical_form(g: &TwistedGroup, x: &TwElem) -> Result<(CanonClass, TwElem), CanonError> {
    if x.twist != 1 {
        return Err(CanonError::Untwisted);
    }
    if !g.in_g(x) {
        return Err(CanonError::NotInG);
    }
    let f = g.field();
    let q = g.q();
    let n = f.mult_order() as i64;
    let one = FieldElem::ONE;
    let zero = FieldElem::ZERO;

    let (m, l1, l2) = twisted_square_eigen(g, &x.mat);
    assert!(l1 != l2, "A A^sigma has a repeated eigenvalue");
    // M diagonal means the basis vectors are the eigenvectors, in the order of its entries
    let (v1, v2) = if m.is_diagonal() {
        if m.a == l1 {
            ((one, zero), (zero, one))
        } else {
            ((zero, one), (one, zero))
        }
    } else {
        (eigenvector(g, &m, l1, (one, zero)), eigenvector(g, &m, l2, (zero, one)))
    };
    let p = Mat2::new(v1.0, v2.0, v1.1, v2.1);
    let g1 = g
        .elem(p, 0)
        .expect("eigenvectors of distinct eigenvalues are independent");
    let b = g.conjugate(x, &g1).mat;

    let is_dia = g.sigma(l1) == l1;
    let (form, lambda) = if is_dia {
        debug_assert!(b.is_diagonal());
        (Form::Dia, f.div(b.a, b.d))
    } else {
        debug_assert!(g.sigma(l1) == l2 && b.is_off_diagonal());
        (Form::Off, f.div(b.b, b.c))
    };
    let k = f.log(lambda).expect("non-zero") as i64;
    debug_assert!(k % 2 == 1, "lambda is a non-square");

    let qi = q as i64;
    let (class, g2) = match form {
        Form::Dia => {
            let md = qi - 1;
            let r = k.rem_euclid(md);
            if 2 * r <= md {
                let i = r;
                let eta = f.xi_pow((i - k) / md);
                (
                    CanonClass::dia(i as u64),
                    TwElem {
                        mat: Mat2::dia(eta, one).normalized(f),
                        twist: 0,
                    },
                )
            } else {
                let i = md - r;
                let zeta = f.xi_pow(-(k + i) / md);
                (
                    CanonClass::dia(i as u64),
                    TwElem {
                        mat: Mat2::off(zeta, one).normalized(f),
                        twist: 0,
                    },
                )
            }
        }
        Form::Off => {
            let mo = qi + 1;
            let r = k.rem_euclid(mo);
            if 2 * r <= mo {
                let i = r;
                let eta = f.xi_pow((k - i) / mo);
                (
                    CanonClass::off(i as u64),
                    TwElem {
                        mat: Mat2::dia(eta, one).normalized(f),
                        twist: 0,
                    },
                )
            } else {
                let i = mo - r;
                let e = ((k as i128 * qi as i128 - i as i128) / mo as i128).rem_euclid(n as i128);
                let eta = f.xi_pow(e as i64);
                (
                    CanonClass::off(i as u64),
                    TwElem {
                        mat: Mat2::dia(eta, one).normalized(f),
                        twist: 1,
                    },
                )
            }
        }
    };
    let w = g.mul(&g1, &g2);
    debug_assert_eq!(g.conjugate(x, &w), representative(g, class));
    Ok((class, w))
}

/// Whether two twisted elements are conjugate in the extended group.
pub fn twisted_conjugate_test(g: &TwistedGroup, x: &TwElem, y: &TwElem) -> Result<bool, CanonError> {
    Ok(canonical_form(g, x)?.0 == canonical_form(g, y)?.0)
}

/// Classification of the eigenvalues of `A A^sigma` for a twisted `[A, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenShape {
    /// Both in `F_0`, product a non-square of `F_0`.
    FixedPair,
    /// Distinct and swapped by `sigma`.
    SwappedPair,
    /// Anything else; never occurs for elements of `M(q^2)`.
    Mixed,
}

pub fn eigen_shape(g: &TwistedGroup, x: &TwElem) -> EigenShape {
    let f = g.field();
    let (_, l1, l2) = twisted_square_eigen(g, &x.mat);
    if l1 == l2 {
        return EigenShape::Mixed;
    }
    let s1 = g.sigma(l1);
    let s2 = g.sigma(l2);
    if s1 == l1 && s2 == l2 {
        let prod = f.mul(l1, l2);
        // a non-square of F_0 has log not divisible by 2(q+1)
        let log = f.log(prod).expect("non-zero") as u64;
        if !log.is_multiple_of(2 * (g.q() + 1)) {
            return EigenShape::FixedPair;
        }
        EigenShape::Mixed
    } else if s1 == l2 && s2 == l1 {
        EigenShape::SwappedPair
    } else {
        EigenShape::Mixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{HashMap, HashSet};

    fn grp(q: u64) -> TwistedGroup {
        TwistedGroup::from_q(q).unwrap()
    }

    #[test]
    fn class_lists() {
        assert_eq!(classes(3), vec![CanonClass::dia(1), CanonClass::off(1)]);
        assert_eq!(
            classes(5),
            vec![CanonClass::dia(1), CanonClass::off(1), CanonClass::off(3)]
        );
        assert!(CanonClass::dia(1).is_exceptional(3));
        assert!(CanonClass::off(3).is_exceptional(5));
        assert!(!CanonClass::off(1).is_exceptional(5));
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            assert!(classes(q).iter().all(|c| c.is_valid(q)));
            assert!(!CanonClass::dia(2).is_valid(q));
        }
    }

    #[test]
    fn order_formula_examples() {
        assert_eq!(canonical_order(CanonClass::dia(1), 5), 8);
        assert_eq!(canonical_order(CanonClass::off(3), 5), 4);
        for q in [3u64, 7, 11, 19, 27] {
            assert_eq!(canonical_order(CanonClass::dia((q - 1) / 2), q), 4);
        }
        let g = grp(5);
        for c in classes(5) {
            assert_eq!(g.order_naive(&representative(&g, c)) as u64, canonical_order(c, 5));
        }
    }

    #[test]
    fn canonical_form_of_representative_is_trivial() {
        for q in [3u64, 5, 7, 9] {
            let g = grp(q);
            for c in classes(q) {
                let r = representative(&g, c);
                let (cc, w) = canonical_form(&g, &r).unwrap();
                assert_eq!(cc, c);
                assert_eq!(g.conjugate(&r, &w), r);
            }
        }
    }

    #[test]
    fn dia_xi_cubed_at_q3() {
        let g = grp(3);
        let f = g.field();
        let x = g.elem(Mat2::dia(f.xi_pow(3), f.one()), 1).unwrap();
        assert_eq!(canonical_form(&g, &x).unwrap().0, CanonClass::dia(1));
    }

    #[test]
    fn witness_property_random() {
        for q in [3u64, 5, 9] {
            let g = grp(q);
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..1000 {
                let x = g.random_twisted(&mut rng);
                let (c, w) = canonical_form(&g, &x).unwrap();
                assert!(c.is_valid(q));
                assert_eq!(g.conjugate(&x, &w), representative(&g, c));
                assert_ne!(eigen_shape(&g, &x), EigenShape::Mixed);
            }
        }
    }

    #[test]
    fn errors_for_untwisted() {
        let g = grp(5);
        assert_eq!(canonical_form(&g, &g.identity()), Err(CanonError::Untwisted));
        assert_eq!(canonical_form(&g, &g.sigma_elem()), Err(CanonError::NotInG));
    }

    #[test]
    fn conjugacy_test_examples() {
        let g = grp(5);
        let f = g.field();
        let xi = f.primitive_element();
        let d = g.elem(Mat2::dia(xi, f.one()), 1).unwrap();
        let o = g.elem(Mat2::off(xi, f.one()), 1).unwrap();
        assert_eq!(twisted_conjugate_test(&g, &d, &o), Ok(false));
        // 3 = -1 mod (q-1), so the product condition makes these conjugate
        let d3 = g.elem(Mat2::dia(f.xi_pow(3), f.one()), 1).unwrap();
        assert_eq!(twisted_conjugate_test(&g, &d, &d3), Ok(true));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = g.random_twisted(&mut rng);
            let h = g.random_element(&mut rng, true);
            assert_eq!(twisted_conjugate_test(&g, &x, &g.conjugate(&x, &h)), Ok(true));
        }
    }

    #[test]
    fn conjugacy_test_agrees_with_exhaustive_search() {
        // q = 5: exponents 1 and 3 are conjugate; q = 7: 1 and 3 are not
        for (q, expected) in [(5u64, true), (7, false)] {
            let g = grp(q);
            let f = g.field();
            let d1 = g.elem(Mat2::dia(f.xi_pow(1), f.one()), 1).unwrap();
            let d3 = g.elem(Mat2::dia(f.xi_pow(3), f.one()), 1).unwrap();
            let found = g.all_elements().any(|h| g.conjugate(&d1, &h) == d3);
            assert_eq!(found, expected, "q={q}");
            assert_eq!(twisted_conjugate_test(&g, &d1, &d3), Ok(expected));
        }
    }

    #[test]
    fn stabilizers_fix_and_have_expected_sizes() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let g = grp(q);
            for c in classes(q) {
                let r = representative(&g, c);
                let st = stabilizer_elements(&g, c);
                assert_eq!(st.len(), stabilizer_size(c, q), "{c} q={q}");
                assert_eq!(st.iter().collect::<HashSet<_>>().len(), st.len());
                for s in &st {
                    assert_eq!(g.conjugate(&r, s), r);
                }
            }
        }
    }

    #[test]
    fn stabilizer_sizes_match_exhaustive_scan() {
        for (q, expected) in [(3u64, vec![8usize, 8]), (5, vec![8, 12, 24])] {
            let g = grp(q);
            let sizes: Vec<usize> = classes(q)
                .into_iter()
                .map(|c| {
                    let r = representative(&g, c);
                    let scanned: HashSet<TwElem> = g.all_elements().filter(|h| g.conjugate(&r, h) == r).collect();
                    let listed: HashSet<TwElem> = stabilizer_elements(&g, c).into_iter().collect();
                    assert_eq!(scanned, listed, "{c} q={q}");
                    scanned.len()
                })
                .collect();
            assert_eq!(sizes, expected);
        }
    }

    #[test]
    fn classes_partition_twisted_elements() {
        for q in [3u64, 5] {
            let g = grp(q);
            let mut sizes: HashMap<CanonClass, usize> = HashMap::new();
            let mut total = 0usize;
            for x in g.all_g_elements().filter(|x| x.twist == 1) {
                *sizes.entry(canonical_form(&g, &x).unwrap().0).or_default() += 1;
                total += 1;
            }
            assert_eq!(total as u128, g.order_of_g() / 2);
            let ext = 2 * g.order_of_g();
            for c in classes(q) {
                assert_eq!(sizes[&c] as u128 * stabilizer_size(c, q) as u128, ext, "{c}");
            }
            assert_eq!(sizes.len(), classes(q).len());
        }
    }
}
