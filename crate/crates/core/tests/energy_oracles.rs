use hypenergy_core::energies::{
    additive_energy, additive_energy_by_differences, additive_energy_spectral, d2_quantity,
    e_plus_k, multiplicative_energy, round_to_count, t_plus_k, t_plus_k_spectral,
};
use hypenergy_core::modfield::is_prime;
use hypenergy_core::{oracle, rep_multiplicative, FieldContext, FpSet};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    (5u64..120).prop_filter("prime", |&p| is_prime(p))
}

fn instance(max: usize) -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    prime().prop_flat_map(move |p| {
        let elems = proptest::collection::vec(0..p as i64, 0..=max);
        (Just(p), elems.clone(), elems)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additive_energy_three_ways((p, a, b) in instance(14)) {
        let ctx = FieldContext::new(p).unwrap();
        let a = FpSet::new(&ctx, a);
        let b = FpSet::new(&ctx, b);
        let sums = additive_energy(&a, &b).unwrap();
        prop_assert_eq!(&sums, &additive_energy_by_differences(&a, &b).unwrap());
        prop_assert_eq!(&sums, &oracle::additive_energy(&a, &b).unwrap());
        prop_assert_eq!(&sums, &round_to_count(additive_energy_spectral(&a, &b).unwrap()));
    }

    #[test]
    fn multiplicative_energy_via_dlog((p, a, b) in instance(14)) {
        let ctx = FieldContext::new(p).unwrap();
        let a = FpSet::new(&ctx, a);
        let b = FpSet::new(&ctx, b);
        prop_assert_eq!(
            multiplicative_energy(&a, &b).unwrap(),
            oracle::multiplicative_energy(&a, &b).unwrap()
        );
    }

    #[test]
    fn product_reps_match_enumeration((p, a, b) in instance(14)) {
        let ctx = FieldContext::new(p).unwrap();
        let a = FpSet::new(&ctx, a);
        let b = FpSet::new(&ctx, b);
        let r = rep_multiplicative(&a, &b).unwrap();
        let mut direct = vec![0u64; p as usize];
        for x in a.iter() {
            for y in b.iter() {
                direct[ctx.mul(x, y) as usize] += 1;
            }
        }
        prop_assert_eq!(r.values(), &direct[..]);
    }

    #[test]
    fn higher_energies_match_brute((p, a, _b) in instance(9), k in 1u32..=3) {
        let ctx = FieldContext::new(p).unwrap();
        let a = FpSet::new(&ctx, a);
        prop_assert_eq!(t_plus_k(&a, k).unwrap(), oracle::t_plus_k(&a, k).unwrap());
        prop_assert_eq!(e_plus_k(&a, k).unwrap(), oracle::e_plus_k(&a, k).unwrap());
        prop_assert_eq!(t_plus_k(&a, k).unwrap(), round_to_count(t_plus_k_spectral(&a, k).unwrap()));
    }

    #[test]
    fn d2_matches_histogram((p, a, b) in instance(8)) {
        let ctx = FieldContext::new(p).unwrap();
        let a = FpSet::new(&ctx, a);
        let b = FpSet::new(&ctx, b);
        prop_assert_eq!(d2_quantity(&a, &b).unwrap(), oracle::d2_quantity(&a, &b).unwrap());
    }

    #[test]
    fn energies_are_translation_and_dilation_invariant((p, a, b) in instance(12), t in 0i64..200, m in 1i64..200) {
        let ctx = FieldContext::new(p).unwrap();
        prop_assume!(m % p as i64 != 0);
        let a = FpSet::new(&ctx, a);
        let b = FpSet::new(&ctx, b);
        let e = additive_energy(&a, &b).unwrap();
        prop_assert_eq!(&e, &additive_energy(&a.translate(t), &b.translate(-t)).unwrap());
        prop_assert_eq!(&e, &additive_energy(&a.dilate(m), &b.dilate(m)).unwrap());
        prop_assert_eq!(&e, &additive_energy(&b, &a).unwrap());
        let em = multiplicative_energy(&a, &b).unwrap();
        prop_assert_eq!(em, multiplicative_energy(&a.dilate(m), &b).unwrap());
    }
}

#[test]
fn oracle_rejects_large_inputs() {
    let ctx = FieldContext::new(101).unwrap();
    let a = FpSet::interval(&ctx, 0, 30);
    assert!(oracle::additive_energy(&a, &a).is_err());
    assert!(oracle::t_plus_k(&FpSet::interval(&ctx, 0, 3), 4).is_err());
}

#[test]
fn full_multiplicative_group_energy() {
    let ctx = FieldContext::new(101).unwrap();
    let units = FpSet::interval(&ctx, 1, 100);
    assert_eq!(
        multiplicative_energy(&units, &units).unwrap(),
        1_000_000u32.into()
    );
}
