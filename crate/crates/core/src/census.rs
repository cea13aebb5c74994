//! Closed-form counts for maps on `M(q^2)`, `q = p^f`.
//!
//! All arithmetic is exact. Per-case orbit counts `n1..n4` and reflexible orbit
//! counts `r1..r4` are polynomials in `q`; map counts come from Moebius inversion
//! over the twisted divisors `e = 2^alpha d` of `f` (`f = 2^alpha o`, `d | o`).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_form, canonical_order, CanonError};
use crate::gfield::{is_prime, prime_factors};
use crate::twisted_group::{TwElem, TwistedGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("characteristic {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{what} = {value} is not divisible by f = {f}")]
    NotDivisible { what: &'static str, value: BigUint, f: u32 },
    #[error("Moebius sum for {what} is negative")]
    Negative { what: &'static str },
    #[error("(xy)^2 is not the identity")]
    NotAMapPair,
    #[error(transparent)]
    Canon(#[from] CanonError),
}

fn check_pf(p: u64, f: u32) -> Result<(), CensusError> {
    if p < 3 || !is_prime(p) {
        return Err(CensusError::NotOddPrime(p));
    }
    if f == 0 {
        return Err(CensusError::ZeroDegree);
    }
    Ok(())
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn q_of(p: u64, f: u32) -> BigUint {
    big(p).pow(f)
}

/// `(q^2 - 1)/4`: non-squares `u != v` with `u - v` a square, for a fixed non-square `v`.
pub fn n_f(q: &BigUint) -> BigUint {
    (q * q - 1u32) / 4u32
}

/// Orbit counts per case; `n2` is 0 unless `q = 3 mod 4`, `n4` is 0 unless `q = 1 mod 4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCounts {
    #[serde(with = "decimal")]
    pub n1: BigUint,
    #[serde(with = "decimal")]
    pub n2: BigUint,
    #[serde(with = "decimal")]
    pub n3: BigUint,
    #[serde(with = "decimal")]
    pub n4: BigUint,
}

impl OrbitCounts {
    pub fn dia(&self) -> BigUint {
        &self.n1 + &self.n2
    }

    pub fn off(&self) -> BigUint {
        &self.n3 + &self.n4
    }

    pub fn total(&self) -> BigUint {
        self.dia() + self.off()
    }
}

fn mod4(q: &BigUint) -> u32 {
    (q % 4u32).to_u32().expect("small")
}

pub fn orbit_counts(q: &BigUint) -> OrbitCounts {
    let q2 = q * q;
    let nf = n_f(q);
    let n1 = (q + 1u32) * ((q - 1u32) / 4u32) * (&q2 - 3u32) / 4u32;
    let n3 = (q - 1u32) * ((q + 1u32) / 4u32) * (&q2 + 1u32) / 4u32;
    let (n2, n4) = if mod4(q) == 3 {
        (((q + 1u32) * (&q2 - 3u32) - 4u32 * &nf) / 8u32, BigUint::zero())
    } else {
        (BigUint::zero(), ((q - 1u32) * (&q2 + 1u32) - 4u32 * &nf) / 8u32)
    };
    OrbitCounts { n1, n2, n3, n4 }
}

/// `(q^2 - 1)(q^2 - 2)/8`.
pub fn total_orbits(q: &BigUint) -> BigUint {
    let q2 = q * q;
    (&q2 - 1u32) * (&q2 - 2u32) / 8u32
}

/// Reflexible orbit counts per conjugator shape, with the per-form and grand totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexibleCounts {
    #[serde(with = "decimal")]
    pub r1: BigUint,
    #[serde(with = "decimal")]
    pub r2: BigUint,
    #[serde(with = "decimal")]
    pub r3: BigUint,
    #[serde(with = "decimal")]
    pub r4: BigUint,
    #[serde(rename = "R1", with = "decimal")]
    pub big_r1: BigUint,
    #[serde(rename = "R2", with = "decimal")]
    pub big_r2: BigUint,
    #[serde(rename = "R", with = "decimal")]
    pub big_r: BigUint,
}

pub fn reflexible_orbit_counts(q: &BigUint) -> ReflexibleCounts {
    let m = q * q - 1u32;
    ReflexibleCounts {
        r1: &m * (q - 2u32) / 8u32,
        r2: &m * (q - 1u32) / 16u32,
        r3: &m * q / 8u32,
        r4: &m * (q + 1u32) / 16u32,
        big_r1: &m * (3u32 * q - 5u32) / 16u32,
        big_r2: &m * (3u32 * q + 1u32) / 16u32,
        big_r: &m * (3u32 * q - 2u32) / 8u32,
    }
}

/// `f = 2^alpha o` with `o` odd.
pub fn split_two(f: u32) -> (u32, u32) {
    let alpha = f.trailing_zeros();
    (alpha, f >> alpha)
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Divisors `e` of `f` with `f/e` odd, ascending.
pub fn twisted_divisors(f: u32) -> Vec<u32> {
    let (alpha, o) = split_two(f);
    divisors(o).into_iter().map(|d| d << alpha).collect()
}

pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1);
    let mut sign = 1;
    let mut m = n;
    for r in prime_factors(n) {
        m /= r;
        if m.is_multiple_of(r) {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// `(p^{2x} - 1)(p^{2x} - 2)/8`.
pub fn h(p: u64, x: u32) -> BigUint {
    let t = big(p).pow(2 * x);
    (&t - 1u32) * (&t - 2u32) / 8u32
}

/// `(p^{2x} - 1)(3 p^x - 2)/8`.
pub fn h_tilde(p: u64, x: u32) -> BigUint {
    let s = big(p).pow(x);
    (&s * &s - 1u32) * (3u32 * &s - 2u32) / 8u32
}

fn mobius_sum(p: u64, f: u32, g: fn(u64, u32) -> BigUint, what: &'static str) -> Result<BigUint, CensusError> {
    check_pf(p, f)?;
    let (alpha, o) = split_two(f);
    let mut acc = BigInt::zero();
    for d in divisors(o) {
        let mu = mobius((o / d) as u64);
        if mu != 0 {
            acc += BigInt::from(mu) * BigInt::from(g(p, d << alpha));
        }
    }
    if acc.is_negative() {
        return Err(CensusError::Negative { what });
    }
    Ok(acc.to_biguint().expect("non-negative"))
}

/// Orbits of pairs generating all of `M(p^{2f})`, equal to `sum_{d|o} mu(o/d) h(2^alpha d)`.
pub fn count_generating_orbits(p: u64, f: u32) -> Result<BigUint, CensusError> {
    mobius_sum(p, f, h, "generating orbits")
}

/// Reflexible counterpart of [`count_generating_orbits`].
pub fn count_reflexible_orbits(p: u64, f: u32) -> Result<BigUint, CensusError> {
    mobius_sum(p, f, h_tilde, "reflexible orbits")
}

fn divide_by_f(value: BigUint, f: u32, what: &'static str) -> Result<BigUint, CensusError> {
    let (quot, rem) = value.div_rem(&big(f as u64));
    if !rem.is_zero() {
        return Err(CensusError::NotDivisible { what, value, f });
    }
    Ok(quot)
}

/// Number of orientably-regular maps with automorphism group `M(p^{2f})`.
pub fn count_maps(p: u64, f: u32) -> Result<BigUint, CensusError> {
    divide_by_f(count_generating_orbits(p, f)?, f, "generating orbits")
}

/// Number of reflexible orientably-regular maps with automorphism group `M(p^{2f})`.
pub fn count_reflexible_maps(p: u64, f: u32) -> Result<BigUint, CensusError> {
    divide_by_f(count_reflexible_orbits(p, f)?, f, "reflexible orbits")
}

/// True when no map of type `(k, l)` exists on any `M(q^2)`.
pub fn type_obstruction(k: u64, l: u64) -> bool {
    k.is_multiple_of(8) && l.is_multiple_of(8) && k % 16 != l % 16
}

/// Type `(order x, order y)` of a pair of twisted elements with `(xy)^2 = 1`.
pub fn map_type(g: &TwistedGroup, x: &TwElem, y: &TwElem) -> Result<(u64, u64), CensusError> {
    let xy = g.mul(x, y);
    if !g.is_identity(&g.mul(&xy, &xy)) {
        return Err(CensusError::NotAMapPair);
    }
    let q = g.q();
    let k = canonical_order(canonical_form(g, x)?.0, q);
    let l = canonical_order(canonical_form(g, y)?.0, q);
    Ok((k, l))
}

/// Number of orbits of pairs generating a subgroup `M(p^{2e})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub e: u32,
    #[serde(with = "decimal")]
    pub orb: BigUint,
}

/// Closed-form census for one `(p, f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub p: u64,
    pub f: u32,
    #[serde(with = "decimal")]
    pub q: BigUint,
    pub alpha: u32,
    pub o: u32,
    pub twisted_divisors: Vec<u32>,
    #[serde(with = "decimal")]
    pub n_f: BigUint,
    pub orbits: OrbitCounts,
    #[serde(with = "decimal")]
    pub total_orbits: BigUint,
    /// `orb(e)` for each twisted divisor `e`.
    pub orb: Vec<LevelCount>,
    #[serde(with = "decimal")]
    pub orb_f: BigUint,
    #[serde(with = "decimal")]
    pub map_count: BigUint,
    pub reflexible_orbits: ReflexibleCounts,
    #[serde(with = "decimal")]
    pub reflexible_orb_f: BigUint,
    #[serde(with = "decimal")]
    pub reflexible_count: BigUint,
}

impl CensusReport {
    pub fn compute(p: u64, f: u32) -> Result<CensusReport, CensusError> {
        check_pf(p, f)?;
        let q = q_of(p, f);
        let (alpha, o) = split_two(f);
        let divs = twisted_divisors(f);
        let orb = divs
            .iter()
            .map(|&e| {
                Ok(LevelCount {
                    e,
                    orb: count_generating_orbits(p, e)?,
                })
            })
            .collect::<Result<Vec<_>, CensusError>>()?;
        let report = CensusReport {
            p,
            f,
            alpha,
            o,
            twisted_divisors: divs,
            n_f: n_f(&q),
            orbits: orbit_counts(&q),
            total_orbits: total_orbits(&q),
            orb_f: count_generating_orbits(p, f)?,
            map_count: count_maps(p, f)?,
            reflexible_orbits: reflexible_orbit_counts(&q),
            reflexible_orb_f: count_reflexible_orbits(p, f)?,
            reflexible_count: count_reflexible_maps(p, f)?,
            orb,
            q,
        };
        Ok(report)
    }

    /// Identities every report must satisfy; returns a description of each failure.
    pub fn check_identities(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if self.orbits.total() != self.total_orbits {
            bad.push(format!("n-sum {} != {}", self.orbits.total(), self.total_orbits));
        }
        if self.total_orbits != h(self.p, self.f) {
            bad.push("total orbits differ from h(f)".into());
        }
        let resum: BigUint = self.orb.iter().map(|l| &l.orb).sum();
        if resum != self.total_orbits {
            bad.push(format!("sum of orb(e) {resum} != {}", self.total_orbits));
        }
        if &self.map_count * self.f != self.orb_f {
            bad.push("map_count * f != orb_f".into());
        }
        if &self.reflexible_count * self.f != self.reflexible_orb_f {
            bad.push("reflexible_count * f != reflexible_orb_f".into());
        }
        if self.reflexible_count > self.map_count {
            bad.push("more reflexible maps than maps".into());
        }
        let r = &self.reflexible_orbits;
        if &r.r1 + &r.r2 != r.big_r1 || &r.r3 + &r.r4 != r.big_r2 || &r.big_r1 + &r.big_r2 != r.big_r {
            bad.push("reflexible totals inconsistent".into());
        }
        bad
    }
}

/// Serializes big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{odd_prime_power, Field};

    fn b(n: u64) -> BigUint {
        big(n)
    }

    #[test]
    fn n_f_examples() {
        assert_eq!(n_f(&b(3)), b(2));
        assert_eq!(n_f(&b(5)), b(6));
    }

    #[test]
    fn n_f_matches_exhaustive_count() {
        for q in [3u64, 5, 7, 9] {
            let (p, f) = odd_prime_power(q).unwrap();
            let field = Field::new(p, 2 * f).unwrap();
            let nonsq: Vec<_> = field.nonzero().filter(|&x| !field.is_square(x).unwrap()).collect();
            for &v in &nonsq {
                let count = nonsq
                    .iter()
                    .filter(|&&u| u != v && field.is_square(field.sub(u, v)).unwrap())
                    .count();
                assert_eq!(b(count as u64), n_f(&b(q)), "q={q}");
            }
        }
    }

    #[test]
    fn orbit_count_examples() {
        let c3 = orbit_counts(&b(3));
        assert_eq!(
            (c3.n1.clone(), c3.n2.clone(), c3.n3.clone(), c3.n4.clone()),
            (b(0), b(2), b(5), b(0))
        );
        assert_eq!(c3.total(), b(7));
        let c5 = orbit_counts(&b(5));
        assert_eq!(
            (c5.n1.clone(), c5.n2.clone(), c5.n3.clone(), c5.n4.clone()),
            (b(33), b(0), b(26), b(10))
        );
        assert_eq!(c5.total(), b(69));
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(twisted_divisors(1), vec![1]);
        assert_eq!(twisted_divisors(2), vec![2]);
        assert_eq!(twisted_divisors(12), vec![4, 12]);
        assert_eq!(twisted_divisors(9), vec![1, 3, 9]);
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (n, &m) in (1..=12u64).zip(expected.iter()) {
            assert_eq!(mobius(n), m, "n={n}");
        }
    }

    #[test]
    fn map_count_examples() {
        assert_eq!(count_generating_orbits(3, 1).unwrap(), b(7));
        assert_eq!(h(3, 3), b(66157));
        assert_eq!(count_generating_orbits(3, 3).unwrap(), b(66150));
        assert_eq!(count_generating_orbits(3, 2).unwrap(), b(790));
        assert_eq!(count_maps(3, 1).unwrap(), b(7));
        assert_eq!(count_maps(3, 2).unwrap(), b(395));
        assert_eq!(count_maps(3, 3).unwrap(), b(22050));
        assert_eq!(count_maps(5, 1).unwrap(), b(69));
    }

    #[test]
    fn reflexible_examples() {
        let r3 = reflexible_orbit_counts(&b(3));
        assert_eq!(
            (
                r3.r1.clone(),
                r3.r2.clone(),
                r3.r3.clone(),
                r3.r4.clone(),
                r3.big_r.clone()
            ),
            (b(1), b(1), b(3), b(2), b(7))
        );
        let r5 = reflexible_orbit_counts(&b(5));
        assert_eq!(
            (
                r5.r1.clone(),
                r5.r2.clone(),
                r5.r3.clone(),
                r5.r4.clone(),
                r5.big_r.clone()
            ),
            (b(9), b(6), b(15), b(9), b(39))
        );
        assert_eq!(count_reflexible_maps(3, 1).unwrap(), b(7));
        assert_eq!(count_reflexible_maps(5, 1).unwrap(), b(39));
        assert_eq!(h_tilde(3, 2), b(250));
        assert_eq!(count_reflexible_maps(3, 2).unwrap(), b(125));
    }

    #[test]
    fn reflexible_totals_consistent_up_to_ten_thousand() {
        for q in (3..10_000u64).filter(|&q| odd_prime_power(q).is_some()) {
            let r = reflexible_orbit_counts(&b(q));
            assert_eq!(&r.big_r1 + &r.big_r2, r.big_r, "q={q}");
            assert_eq!(&r.r1 + &r.r2, r.big_r1);
            assert_eq!(&r.r3 + &r.r4, r.big_r2);
        }
    }

    #[test]
    fn obstruction_examples() {
        assert!(type_obstruction(8, 16));
        assert!(!type_obstruction(8, 8));
        assert!(!type_obstruction(8, 24));
        assert!(!type_obstruction(4, 12));
    }

    #[test]
    fn map_type_of_canonical_pair() {
        let g = TwistedGroup::from_q(3).unwrap();
        let y = crate::canonical::representative(&g, crate::canonical::CanonClass::off(1));
        assert_eq!(map_type(&g, &y, &y), Err(CensusError::NotAMapPair));
    }

    #[test]
    fn report_is_self_consistent() {
        for (p, f) in [(3, 1), (3, 2), (3, 3), (5, 1), (7, 2), (3, 12), (5, 6)] {
            let r = CensusReport::compute(p, f).unwrap();
            assert!(r.check_identities().is_empty(), "{p},{f}: {:?}", r.check_identities());
        }
        assert_eq!(CensusReport::compute(4, 1).unwrap_err(), CensusError::NotOddPrime(4));
        assert_eq!(CensusReport::compute(3, 0).unwrap_err(), CensusError::ZeroDegree);
    }

    #[test]
    fn report_json_uses_decimal_strings() {
        let r = CensusReport::compute(3, 2).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"map_count\":\"395\""), "{json}");
        let back: CensusReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
