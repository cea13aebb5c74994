use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistmaps::canonical::{canonical_form, canonical_order, classes, representative, stabilizer_elements};
use twistmaps::census::{count_generating_orbits, h, mobius, twisted_divisors};
use twistmaps::oracle::orbits::orbit_partition;
use twistmaps::twisted_group::{TwElem, TwistedGroup};
use twistmaps::{Field, FieldElem};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_2024),
        failure_persistence: None,
        ..Config::default()
    }
}

const FIELDS: [(u64, u32); 8] = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 2), (3, 4), (11, 2), (3, 6)];

fn field_and_elems() -> impl Strategy<Value = (Field, FieldElem, FieldElem, FieldElem)> {
    (0..FIELDS.len(), any::<u32>(), any::<u32>(), any::<u32>()).prop_map(|(i, a, b, c)| {
        let (p, m) = FIELDS[i];
        let f = Field::new(p, m).unwrap();
        let n = f.size();
        let (a, b, c) = (f.elem(a % n), f.elem(b % n), f.elem(c % n));
        (f, a, b, c)
    })
}

const QS: [u64; 6] = [3, 5, 7, 9, 25, 27];

fn group() -> impl Strategy<Value = TwistedGroup> {
    (0..QS.len()).prop_map(|i| TwistedGroup::from_q(QS[i]).unwrap())
}

proptest! {
    #![proptest_config(config(512))]

    #[test]
    fn field_axioms((f, a, b, c) in field_and_elems()) {
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.mul(a, f.one()), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism((f, a, b, _c) in field_and_elems(), k in 0u32..8) {
        let fr = |x| f.frobenius(x, k);
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        prop_assert_eq!(f.frobenius(a, f.degree()), a);
        prop_assert_eq!(fr(a), f.pow(a, f.characteristic().pow(k)));
    }

    #[test]
    fn projective_operations_ignore_scaling(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = g.field();
        let x = g.random_element(&mut rng, true);
        let y = g.random_element(&mut rng, true);
        let scalar = |rng: &mut ChaCha8Rng| f.elem(rng.gen_range(1..f.size()));
        let xs = TwElem { mat: x.mat.scale(f, scalar(&mut rng)), twist: x.twist };
        let ys = TwElem { mat: y.mat.scale(f, scalar(&mut rng)), twist: y.twist };
        prop_assert_eq!(g.elem(xs.mat, xs.twist).unwrap(), x);
        prop_assert_eq!(g.mul(&xs, &ys), g.mul(&x, &y));
        prop_assert_eq!(g.inv(&xs), g.inv(&x));
        prop_assert_eq!(g.conjugate(&xs, &ys), g.conjugate(&x, &y));
    }

    #[test]
    fn group_laws(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [x, y, z] = [0; 3].map(|_| g.random_element(&mut rng, true));
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        prop_assert!(g.is_identity(&g.pow(&x, g.order(&x))));
        for j in 0..g.f() * 2 {
            prop_assert_eq!(g.galois(&g.mul(&x, &y), j), g.mul(&g.galois(&x, j), &g.galois(&y, j)));
        }
    }

    #[test]
    fn canonical_form_conjugates_to_representative(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_twisted(&mut rng);
        let (c, w) = canonical_form(&g, &x).unwrap();
        prop_assert_eq!(g.conjugate(&x, &w), representative(&g, c));
        prop_assert_eq!(canonical_order(c, g.q()) as u128, g.order(&x));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn orbits_are_semiregular(qi in 0usize..5, ci in any::<usize>()) {
        let q = [3u64, 5, 7, 9, 11][qi];
        let g = TwistedGroup::from_q(q).unwrap();
        let cs = classes(q);
        let class = cs[ci % cs.len()];
        let stab = stabilizer_elements(&g, class);
        for o in orbit_partition(&g, class).unwrap() {
            prop_assert_eq!(o.size, stab.len());
        }
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn mobius_round_trip(pi in 0usize..5, f in 1u32..=12) {
        let p = [3u64, 5, 7, 11, 13][pi];
        let total: BigUint = twisted_divisors(f)
            .into_iter()
            .map(|e| count_generating_orbits(p, e).unwrap())
            .sum();
        prop_assert_eq!(total, h(p, f));
    }

    #[test]
    fn mobius_sums_vanish(n in 2u64..5000) {
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) as i64).sum();
        prop_assert_eq!(s, 0);
    }
}
