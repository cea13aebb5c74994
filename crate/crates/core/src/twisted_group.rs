//! Projective twisted elements `[A, i]` of `M(q^2)` and of its extension by the
//! field automorphism `sigma: x -> x^q`.
//!
//! Multiplication is `[A,i][B,j] = [A B^{sigma^i}, i+j]`. One [`TwElem`] type serves
//! the whole extension; membership in `M(q^2)` is the condition `i = iota(A)`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gfield::{odd_prime_power, prime_factors, Field, FieldElem, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0} is not a power of an odd prime")]
    NotPrimePower(u64),
    #[error("matrix is singular")]
    Singular,
    #[error("element is not in M(q^2): twist bit disagrees with the determinant class")]
    NotInG,
}

/// A 2x2 matrix with rows `(a, b)` and `(c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mat2 {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

impl Mat2 {
    pub const fn new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Mat2 {
        Mat2::new(FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE)
    }

    /// `dia(alpha, beta)`.
    pub const fn dia(alpha: FieldElem, beta: FieldElem) -> Mat2 {
        Mat2::new(alpha, FieldElem::ZERO, FieldElem::ZERO, beta)
    }

    /// `off(alpha, beta)`: `alpha` top right, `beta` bottom left.
    pub const fn off(alpha: FieldElem, beta: FieldElem) -> Mat2 {
        Mat2::new(FieldElem::ZERO, alpha, beta, FieldElem::ZERO)
    }

    pub fn entries(&self) -> [FieldElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn trace(&self, f: &Field) -> FieldElem {
        f.add(self.a, self.d)
    }

    pub fn mul(&self, f: &Field, o: &Mat2) -> Mat2 {
        Mat2 {
            a: f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            c: f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            d: f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        }
    }

    /// Adjugate; equals the inverse up to the scalar `det`.
    pub fn adj(&self, f: &Field) -> Mat2 {
        Mat2::new(self.d, f.neg(self.b), f.neg(self.c), self.a)
    }

    pub fn inv(&self, f: &Field) -> Mat2 {
        let s = f.inv(self.det(f));
        self.adj(f).scale(f, s)
    }

    pub fn scale(&self, f: &Field, s: FieldElem) -> Mat2 {
        self.map(|x| f.mul(s, x))
    }

    pub fn map(&self, mut g: impl FnMut(FieldElem) -> FieldElem) -> Mat2 {
        Mat2::new(g(self.a), g(self.b), g(self.c), g(self.d))
    }

    /// Scales so the first non-zero entry in row-major order is 1.
    pub fn normalized(&self, f: &Field) -> Mat2 {
        let lead = self
            .entries()
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("zero matrix has no projective class");
        if lead == FieldElem::ONE {
            *self
        } else {
            self.scale(f, f.inv(lead))
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_off_diagonal(&self) -> bool {
        self.a.is_zero() && self.d.is_zero()
    }
}

/// Projective twisted element `[A, i]`; `mat` is normalized, `twist` is 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwElem {
    pub mat: Mat2,
    pub twist: u8,
}

impl fmt::Display for TwElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.mat;
        write!(f, "[({} {}; {} {}),{}]", m.a, m.b, m.c, m.d, self.twist)
    }
}

/// `M(q^2)` together with its extension by `sigma`, over `F = GF(q^2)`, `q = p^f`.
#[derive(Clone, Debug)]
pub struct TwistedGroup {
    field: Field,
    p: u64,
    f: u32,
    q: u64,
}

impl TwistedGroup {
    pub fn new(p: u64, f: u32) -> Result<TwistedGroup, GroupError> {
        if f == 0 {
            return Err(FieldError::ZeroDegree.into());
        }
        let field = Field::new(p, 2 * f)?;
        Ok(TwistedGroup {
            field,
            p,
            f,
            q: p.pow(f),
        })
    }

    pub fn from_q(q: u64) -> Result<TwistedGroup, GroupError> {
        let (p, f) = odd_prime_power(q).ok_or(GroupError::NotPrimePower(q))?;
        Self::new(p, f)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `|M(q^2)| = q^2 (q^4 - 1)`; the extension has twice as many elements.
    pub fn order_of_g(&self) -> u128 {
        let q2 = (self.q as u128).pow(2);
        q2 * (q2 * q2 - 1)
    }

    #[inline]
    pub fn sigma(&self, x: FieldElem) -> FieldElem {
        self.field.pow(x, self.q)
    }

    pub fn sigma_mat(&self, m: &Mat2) -> Mat2 {
        m.map(|x| self.sigma(x))
    }

    pub fn identity(&self) -> TwElem {
        TwElem {
            mat: Mat2::identity(),
            twist: 0,
        }
    }

    /// The element `[I, 1]`, whose conjugation action is `sigma`.
    pub fn sigma_elem(&self) -> TwElem {
        TwElem {
            mat: Mat2::identity(),
            twist: 1,
        }
    }

    pub fn elem(&self, m: Mat2, twist: u8) -> Result<TwElem, GroupError> {
        if m.det(&self.field).is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(TwElem {
            mat: m.normalized(&self.field),
            twist: twist & 1,
        })
    }

    /// `[m, iota(m)]`, the element of `M(q^2)` with matrix `m`.
    pub fn g_elem(&self, m: Mat2) -> Result<TwElem, GroupError> {
        let t = self.iota(&m)?;
        self.elem(m, t)
    }

    /// 0 if `det m` is a square, 1 otherwise.
    pub fn iota(&self, m: &Mat2) -> Result<u8, GroupError> {
        match self.field.is_square(m.det(&self.field)) {
            Ok(true) => Ok(0),
            Ok(false) => Ok(1),
            Err(_) => Err(GroupError::Singular),
        }
    }

    pub fn in_g(&self, x: &TwElem) -> bool {
        self.iota(&x.mat) == Ok(x.twist)
    }

    pub fn in_g0(&self, x: &TwElem) -> Result<bool, GroupError> {
        if !self.in_g(x) {
            return Err(GroupError::NotInG);
        }
        Ok(x.twist == 0)
    }

    #[inline]
    pub fn mul(&self, x: &TwElem, y: &TwElem) -> TwElem {
        let f = &self.field;
        let rhs = if x.twist == 1 { self.sigma_mat(&y.mat) } else { y.mat };
        TwElem {
            mat: x.mat.mul(f, &rhs).normalized(f),
            twist: x.twist ^ y.twist,
        }
    }

    /// `[P,i]^{-1} = [(P^{sigma^i})^{-1}, i]`.
    pub fn inv(&self, x: &TwElem) -> TwElem {
        let f = &self.field;
        let m = if x.twist == 1 { self.sigma_mat(&x.mat) } else { x.mat };
        TwElem {
            mat: m.adj(f).normalized(f),
            twist: x.twist,
        }
    }

    pub fn pow(&self, x: &TwElem, mut e: u128) -> TwElem {
        let mut acc = self.identity();
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `g^{-1} x g`.
    pub fn conjugate(&self, x: &TwElem, g: &TwElem) -> TwElem {
        self.mul(&self.mul(&self.inv(g), x), g)
    }

    pub fn is_identity(&self, x: &TwElem) -> bool {
        x.twist == 0 && x.mat == Mat2::identity()
    }

    /// A multiple of every element order: `p (q^4 - 1)`.
    pub fn exponent_bound(&self) -> u128 {
        let q2 = (self.q as u128).pow(2);
        self.p as u128 * (q2 * q2 - 1)
    }

    /// Element order by descending through the prime factors of [`Self::exponent_bound`].
    pub fn order(&self, x: &TwElem) -> u128 {
        let mut n = self.exponent_bound();
        debug_assert!(self.is_identity(&self.pow(x, n)));
        for r in self.exponent_primes() {
            let r = r as u128;
            while n.is_multiple_of(r) && self.is_identity(&self.pow(x, n / r)) {
                n /= r;
            }
        }
        n
    }

    fn exponent_primes(&self) -> Vec<u64> {
        let q2 = self.q * self.q;
        let mut ps = prime_factors(q2 - 1);
        ps.extend(prime_factors(q2 + 1));
        ps.push(self.p);
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Order by repeated multiplication.
    pub fn order_naive(&self, x: &TwElem) -> u128 {
        let mut y = *x;
        let mut n = 1u128;
        while !self.is_identity(&y) {
            y = self.mul(&y, x);
            n += 1;
        }
        n
    }

    /// Entrywise `z -> z^{p^j}`; an automorphism of the extended group.
    pub fn galois(&self, x: &TwElem, j: u32) -> TwElem {
        let f = &self.field;
        TwElem {
            mat: x.mat.map(|z| f.frobenius(z, j)).normalized(f),
            twist: x.twist,
        }
    }

    /// Every normalized non-singular matrix, in increasing order.
    pub fn all_matrices(&self) -> impl Iterator<Item = Mat2> + '_ {
        let f = self.field.clone();
        let top_zero = {
            let f = f.clone();
            f.nonzero().flat_map(move |c| {
                f.elements()
                    .map(move |d| Mat2::new(FieldElem::ZERO, FieldElem::ONE, c, d))
            })
        };
        let top_one = {
            let f = f.clone();
            f.elements().flat_map(move |b| {
                let f = f.clone();
                f.elements().flat_map({
                    let f = f.clone();
                    move |c| {
                        let f2 = f.clone();
                        f.elements()
                            .map(move |d| Mat2::new(FieldElem::ONE, b, c, d))
                            .filter(move |m| !m.det(&f2).is_zero())
                    }
                })
            })
        };
        top_zero.chain(top_one)
    }

    /// Every element of the extended group, both twists for each matrix.
    pub fn all_elements(&self) -> impl Iterator<Item = TwElem> + '_ {
        self.all_matrices()
            .flat_map(|m| [0u8, 1].map(|t| TwElem { mat: m, twist: t }))
    }

    /// Every element of `M(q^2)`.
    pub fn all_g_elements(&self) -> impl Iterator<Item = TwElem> + '_ {
        self.all_matrices().map(|m| TwElem {
            twist: self.iota(&m).expect("non-singular"),
            mat: m,
        })
    }

    /// Uniform element of `M(q^2)`, or of the extension when `extended`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, extended: bool) -> TwElem {
        let n = self.field.size();
        loop {
            let m = Mat2::new(
                self.field.elem(rng.gen_range(0..n)),
                self.field.elem(rng.gen_range(0..n)),
                self.field.elem(rng.gen_range(0..n)),
                self.field.elem(rng.gen_range(0..n)),
            );
            if m.det(&self.field).is_zero() {
                continue;
            }
            let twist = if extended {
                rng.gen_range(0..2u8)
            } else {
                self.iota(&m).expect("non-singular")
            };
            return TwElem {
                mat: m.normalized(&self.field),
                twist,
            };
        }
    }

    /// Uniform element of `M(q^2)` with twist 1.
    pub fn random_twisted<R: Rng + ?Sized>(&self, rng: &mut R) -> TwElem {
        loop {
            let x = self.random_element(rng, false);
            if x.twist == 1 {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grp(q: u64) -> TwistedGroup {
        TwistedGroup::from_q(q).unwrap()
    }

    #[test]
    fn iota_examples() {
        let g = grp(5);
        let f = g.field();
        let xi = f.primitive_element();
        assert_eq!(g.iota(&Mat2::identity()), Ok(0));
        assert_eq!(g.iota(&Mat2::dia(xi, f.one())), Ok(1));
        assert_eq!(g.iota(&Mat2::dia(f.mul(xi, xi), f.one())), Ok(0));
        assert_eq!(g.iota(&Mat2::default()), Err(GroupError::Singular));
    }

    #[test]
    fn multiplication_examples() {
        let g = grp(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = g.random_element(&mut rng, true);
            assert_eq!(g.mul(&g.identity(), &x), x);
            assert_eq!(g.mul(&x, &g.identity()), x);
            let s = g.sigma_elem();
            let expected = TwElem {
                mat: g.sigma_mat(&x.mat).normalized(g.field()),
                twist: x.twist,
            };
            assert_eq!(g.mul(&g.mul(&s, &x), &s), expected);
            if x.twist == 1 {
                let sq = g.mul(&x, &x);
                let direct = x.mat.mul(g.field(), &g.sigma_mat(&x.mat)).normalized(g.field());
                assert_eq!(sq, TwElem { mat: direct, twist: 0 });
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let g = grp(7);
        let f = g.field();
        assert_eq!(g.inv(&g.identity()), g.identity());
        let lambda = f.xi_pow(3);
        let x = g.elem(Mat2::dia(lambda, f.one()), 1).unwrap();
        let lq = f.inv(g.sigma(lambda));
        assert_eq!(g.inv(&x), g.elem(Mat2::dia(lq, f.one()), 1).unwrap());
        assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        let beta = f.xi_pow(5);
        let inv0 = g.elem(Mat2::off(beta, f.one()), 0).unwrap();
        assert_eq!(g.inv(&inv0), inv0);
    }

    #[test]
    fn order_examples_q3() {
        let g = grp(3);
        let f = g.field();
        let xi = f.primitive_element();
        assert_eq!(g.order(&g.identity()), 1);
        let d = g.elem(Mat2::dia(xi, f.one()), 1).unwrap();
        let o = g.elem(Mat2::off(xi, f.one()), 1).unwrap();
        assert_eq!(g.order_naive(&d), 4);
        assert_eq!(g.order_naive(&o), 8);
        assert_eq!(g.order(&d), 4);
        assert_eq!(g.order(&o), 8);
    }

    #[test]
    fn order_matches_naive_on_samples() {
        for q in [3, 5, 7, 9] {
            let g = grp(q);
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..300 {
                let x = g.random_element(&mut rng, true);
                assert_eq!(g.order(&x), g.order_naive(&x));
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let g = grp(5);
        let f = g.field();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = g.random_element(&mut rng, true);
            let h = g.random_element(&mut rng, true);
            assert_eq!(g.conjugate(&x, &g.identity()), x);
            assert_eq!(g.order(&g.conjugate(&x, &h)), g.order(&x));
            if x.twist == 1 && h.twist == 0 {
                let direct = h.mat.inv(f).mul(f, &x.mat).mul(f, &g.sigma_mat(&h.mat));
                assert_eq!(g.conjugate(&x, &h), g.elem(direct, 1).unwrap());
            }
        }
    }

    #[test]
    fn g0_membership() {
        let g = grp(3);
        let f = g.field();
        let xi = f.primitive_element();
        assert_eq!(g.in_g0(&g.identity()), Ok(true));
        let d = g.elem(Mat2::dia(xi, f.one()), 1).unwrap();
        assert_eq!(g.in_g0(&d), Ok(false));
        assert_eq!(g.in_g0(&g.mul(&d, &d)), Ok(true));
        assert_eq!(g.in_g0(&g.sigma_elem()), Err(GroupError::NotInG));
    }

    #[test]
    fn m9_has_720_elements_and_twisted_orders_divisible_by_4() {
        let g = grp(3);
        let els: Vec<_> = g.all_g_elements().collect();
        assert_eq!(els.len(), 720);
        assert_eq!(g.all_elements().count(), 1440);
        let twisted: Vec<_> = els.iter().filter(|x| x.twist == 1).collect();
        assert_eq!(twisted.len(), 360);
        for x in twisted {
            let o = g.order(x);
            assert!(o == 4 || o == 8, "order {o}");
        }
        let set: std::collections::HashSet<_> = els.iter().collect();
        assert_eq!(set.len(), 720);
        for x in els.iter().step_by(7) {
            for y in els.iter().step_by(11) {
                assert!(g.in_g(&g.mul(x, y)));
            }
        }
    }

    #[test]
    fn galois_is_an_automorphism() {
        let g = grp(9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = g.random_element(&mut rng, true);
            let y = g.random_element(&mut rng, true);
            assert_eq!(g.galois(&g.mul(&x, &y), 1), g.mul(&g.galois(&x, 1), &g.galois(&y, 1)));
            assert_eq!(g.galois(&x, 0), x);
            assert_eq!(g.galois(&x, 4), x);
        }
    }

    #[test]
    fn rejects_even_and_composite_q() {
        assert_eq!(TwistedGroup::from_q(15).unwrap_err(), GroupError::NotPrimePower(15));
        assert_eq!(TwistedGroup::from_q(8).unwrap_err(), GroupError::NotPrimePower(8));
    }
}
