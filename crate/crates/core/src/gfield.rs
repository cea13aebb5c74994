//! Finite fields `GF(p^m)` of odd characteristic.
//!
//! Elements are stored by their coefficient index: the coefficient vector
//! `(c_0, .., c_{m-1})` of the polynomial representative is read as the base-`p`
//! integer `c_0 + c_1 p + .. + c_{m-1} p^{m-1}`. Multiplication, inversion and
//! powering go through exp/log tables of the fixed primitive element, addition
//! through a Zech logarithm table, so every operation is a handful of lookups.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{m}) exceeds the table limit of {MAX_FIELD_ORDER} elements")]
    TooLarge { p: u64, m: u32 },
    #[error("no irreducible polynomial of degree {m} over GF({p}) found")]
    NoIrreducible { p: u64, m: u32 },
    #[error("zero is neither a square nor a non-square")]
    ZeroHasNoSquareClass,
    #[error("degree {d} does not divide the extension degree {m}")]
    NotASubfield { d: u32, m: u32 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Writes `q = p^f` with `p` an odd prime, if possible.
pub fn odd_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q.is_multiple_of(2) {
        return None;
    }
    let primes = prime_factors(q);
    if primes.len() != 1 {
        return None;
    }
    let p = primes[0];
    let mut f = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        f += 1;
    }
    Some((p, f))
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

// Dense polynomials over GF(p), lowest degree first, no trailing zeros.
mod poly {
    pub(super) fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        super::mod_pow(a, p - 2, p)
    }

    pub(super) fn rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        a = trim(a);
        while a.len() > db {
            let da = a.len() - 1;
            let factor = a[da] * lead_inv % p;
            for (k, &bk) in b.iter().enumerate() {
                let idx = da - db + k;
                a[idx] = (a[idx] + p - factor * bk % p) % p;
            }
            a = trim(a);
        }
        a
    }

    pub(super) fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(out, modulus, p)
    }

    pub(super) fn pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(vec![1], modulus, p);
        let mut b = rem(base.to_vec(), modulus, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, modulus, p);
            }
            b = mul_mod(&b, &b, modulus, p);
            e >>= 1;
        }
        acc
    }

    pub(super) fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        a = trim(a);
        b = trim(b);
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// No factor of degree `<= deg/2`, tested by `gcd(x^{p^k} - x, f) = 1`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        if deg == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=deg / 2 {
            xp = pow_mod(&xp, p, f, p);
            let mut g = xp.clone();
            g.resize(g.len().max(2), 0);
            g[1] = (g[1] + p - 1) % p;
            let d = gcd(f.to_vec(), g, p);
            if d.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Characteristic, degree and defining polynomial of `GF(p^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    /// Monic irreducible modulus, lowest degree first, leading 1 included.
    pub modulus: Vec<u64>,
}

/// Builds the spec with the smallest monic irreducible modulus of degree `m`.
///
/// Candidates `x^m + c_{m-1}x^{m-1} + .. + c_0` are scanned in increasing order of
/// the base-`p` integer `c_0 + c_1 p + ..`, the same order used for elements.
pub fn make_field(p: u64, m: u32) -> Result<FieldSpec, FieldError> {
    if p < 3 || !is_prime(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if order > MAX_FIELD_ORDER as u128 {
        return Err(FieldError::TooLarge { p, m });
    }
    let count = order as u64;
    for idx in 0..count {
        let mut coeffs = digits(idx, p, m);
        coeffs.push(1);
        if poly::is_irreducible(&coeffs, p) {
            return Ok(FieldSpec { p, m, modulus: coeffs });
        }
    }
    Err(FieldError::NoIrreducible { p, m })
}

fn digits(mut idx: u64, p: u64, m: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(idx % p);
        idx /= p;
    }
    out
}

/// An element of a [`Field`], identified by its coefficient index.
///
/// The derived order compares coefficient vectors lexicographically from the
/// highest-degree coefficient down; zero is the smallest element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    spec: FieldSpec,
    size: u32,
    /// Multiplicative group order `p^m - 1`.
    n: u32,
    /// `exp[k] = xi^k` for `k < 2n`, doubled so that sums of two logs need no reduction.
    exp: Vec<FieldElem>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + xi^k)`, or `NO_LOG` when `1 + xi^k = 0`.
    zech: Vec<u32>,
}

/// Shared handle to the arithmetic tables of one field.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.t.spec.p, self.t.spec.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.spec == other.t.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(p: u64, m: u32) -> Result<Field, FieldError> {
        Self::from_spec(make_field(p, m)?)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field, FieldError> {
        let p = spec.p;
        let m = spec.m;
        let size = p.pow(m);
        let n = size - 1;
        let modulus = spec.modulus.clone();

        let xi = (1..size)
            .map(|idx| poly::trim(digits(idx, p, m)))
            .find(|cand| {
                prime_factors(n)
                    .iter()
                    .all(|&r| poly::pow_mod(cand, n / r, &modulus, p) != vec![1])
                    && poly::pow_mod(cand, n, &modulus, p) == vec![1]
            })
            .ok_or(FieldError::NoIrreducible { p, m })?;

        let to_index = |v: &[u64]| -> u32 { v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32 };

        let mut exp = vec![FieldElem::ZERO; 2 * n as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = vec![1u64];
        for (k, slot) in exp[..n as usize].iter_mut().enumerate() {
            let idx = to_index(&cur);
            *slot = FieldElem(idx);
            log[idx as usize] = k as u32;
            cur = poly::mul_mod(&cur, &xi, &modulus, p);
        }
        exp.copy_within(..n as usize, n as usize);

        let p32 = p as u32;
        let zech = (0..n as usize)
            .map(|k| {
                let idx = exp[k].0;
                let c0 = idx % p32;
                let shifted = idx - c0 + (c0 + 1) % p32;
                if shifted == 0 {
                    NO_LOG
                } else {
                    log[shifted as usize]
                }
            })
            .collect();

        Ok(Field {
            t: Arc::new(Tables {
                spec,
                size: size as u32,
                n: n as u32,
                exp,
                log,
                zech,
            }),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.t.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.t.spec.m
    }

    /// Number of elements `p^m`.
    pub fn size(&self) -> u32 {
        self.t.size
    }

    /// Order of the multiplicative group, `p^m - 1`.
    pub fn mult_order(&self) -> u32 {
        self.t.n
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn elem(&self, index: u32) -> FieldElem {
        assert!(index < self.t.size, "index {index} outside {self:?}");
        FieldElem(index)
    }

    pub fn from_int(&self, v: i64) -> FieldElem {
        let p = self.t.spec.p as i64;
        FieldElem(v.rem_euclid(p) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        let p = self.t.spec.p;
        assert!(coeffs.len() <= self.t.spec.m as usize);
        let idx = coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c % p);
        FieldElem(idx as u32)
    }

    /// Coefficient vector, lowest degree first, length `m`.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        digits(x.0 as u64, self.t.spec.p, self.t.spec.m)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.t.size).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.t.size).map(FieldElem)
    }

    /// The fixed primitive element: first generator of the multiplicative group in index order.
    pub fn primitive_element(&self) -> FieldElem {
        self.t.exp[1]
    }

    /// `xi^k` for any integer `k`.
    pub fn xi_pow(&self, k: i64) -> FieldElem {
        let n = self.t.n as i64;
        self.t.exp[k.rem_euclid(n) as usize]
    }

    /// Discrete logarithm to base `xi`; `None` for zero.
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        match self.t.log[x.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let t = &*self.t;
        let la = t.log[a.0 as usize];
        let lb = t.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + t.n - la };
        match t.zech[d as usize] {
            NO_LOG => FieldElem::ZERO,
            z => t.exp[(la + z) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return a;
        }
        let t = &*self.t;
        t.exp[(t.log[a.0 as usize] + t.n / 2) as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = &*self.t;
        t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "inverse of zero");
        let t = &*self.t;
        t.exp[(t.n - t.log[a.0 as usize]) as usize]
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, x: FieldElem, e: u64) -> FieldElem {
        if x.0 == 0 {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let t = &*self.t;
        let n = t.n as u128;
        let l = (t.log[x.0 as usize] as u128 * (e as u128 % n)) % n;
        t.exp[l as usize]
    }

    /// `x^(p^k)`.
    pub fn frobenius(&self, x: FieldElem, k: u32) -> FieldElem {
        let e = mod_pow(self.t.spec.p, k as u64, self.t.n as u64);
        self.pow(x, e)
    }

    /// Euler's criterion in log form: `x` is a square iff its logarithm is even.
    pub fn is_square(&self, x: FieldElem) -> Result<bool, FieldError> {
        self.log(x).map(|l| l % 2 == 0).ok_or(FieldError::ZeroHasNoSquareClass)
    }

    /// One square root of a non-zero square, `None` for non-squares.
    pub fn sqrt(&self, x: FieldElem) -> Option<FieldElem> {
        if x.0 == 0 {
            return Some(x);
        }
        let l = self.log(x)?;
        (l % 2 == 0).then(|| self.t.exp[(l / 2) as usize])
    }

    /// All `z` with `z^r = w`, ordered by increasing discrete logarithm.
    pub fn nth_roots(&self, w: FieldElem, r: u64) -> Vec<FieldElem> {
        assert!(r >= 1, "root degree must be positive");
        let Some(l) = self.log(w) else {
            return vec![FieldElem::ZERO];
        };
        let n = self.t.n as u64;
        let g = num_integer::gcd(r, n);
        let l = l as u64;
        if !l.is_multiple_of(g) {
            return Vec::new();
        }
        let step = n / g;
        let s0 = if step == 1 {
            0
        } else {
            let r_red = (r / g) % step;
            let r_inv = mod_inverse(r_red, step).expect("coprime by construction");
            ((l / g) % step) as u128 * r_inv as u128 % step as u128
        } as u64;
        (0..g).map(|j| self.t.exp[(s0 + j * step) as usize]).collect()
    }

    /// Whether `x` lies in the subfield `GF(p^d)`.
    pub fn in_subfield(&self, x: FieldElem, d: u32) -> Result<bool, FieldError> {
        let m = self.t.spec.m;
        if d == 0 || !m.is_multiple_of(d) {
            return Err(FieldError::NotASubfield { d, m });
        }
        Ok(self.frobenius(x, d) == x)
    }

    /// Primitive element `xi^Q` of the subfield `GF(p^d)`, `Q = (p^m - 1)/(p^d - 1)`.
    pub fn subfield_generator(&self, d: u32) -> Result<FieldElem, FieldError> {
        let m = self.t.spec.m;
        if d == 0 || !m.is_multiple_of(d) {
            return Err(FieldError::NotASubfield { d, m });
        }
        let sub = self.t.spec.p.pow(d) - 1;
        Ok(self.xi_pow((self.t.n as u64 / sub) as i64))
    }

    /// Polynomial notation in `x`, e.g. `2x+1`.
    pub fn render(&self, a: FieldElem) -> String {
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| match (k, v) {
                (0, v) => v.to_string(),
                (1, 1) => "x".to_string(),
                (1, v) => format!("{v}x"),
                (k, 1) => format!("x^{k}"),
                (k, v) => format!("{v}x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}
