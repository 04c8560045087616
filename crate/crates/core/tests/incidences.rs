use hypenergy_core::incidence::{
    bound_asym_z, bound_progression, bound_prop_re, bound_r_aa, bound_thm1, bound_thm_hyp_full,
    count_hyperbola, count_hyperbola_via_action, deviation, int_set, q_inverse_family, rat,
    rho_bound, shift_inverse_profile,
};
use hypenergy_core::modfield::is_prime;
use hypenergy_core::sl2::{free_group_check, t_2k_integer_mode};
use hypenergy_core::{oracle, FieldContext, FpSet};
use proptest::prelude::*;

fn quadruple() -> impl Strategy<Value = (u64, [Vec<i64>; 4], i64)> {
    (5u64..=101)
        .prop_filter("prime", |&p| is_prime(p))
        .prop_flat_map(|p| {
            let s = proptest::collection::vec(0..p as i64, 0..=15);
            (Just(p), [s.clone(), s.clone(), s.clone(), s], 1..p as i64)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fast_count_matches_quadruple_loop((p, sets, lambda) in quadruple()) {
        let ctx = FieldContext::new(p).unwrap();
        let [a, b, c, d] = sets.map(|s| FpSet::new(&ctx, s));
        let n = count_hyperbola(&a, &b, &c, &d, lambda).unwrap();
        prop_assert_eq!(n, oracle::count_hyperbola(&a, &b, &c, &d, lambda as u64));
        prop_assert_eq!(n, count_hyperbola_via_action(&a, &b, &c, &d, lambda).unwrap());
    }

    #[test]
    fn count_symmetries((p, sets, lambda) in quadruple(), m in 1i64..1000) {
        let ctx = FieldContext::new(p).unwrap();
        prop_assume!(m % p as i64 != 0);
        let [a, b, c, d] = sets.map(|s| FpSet::new(&ctx, s));
        let n = count_hyperbola(&a, &b, &c, &d, lambda).unwrap();
        prop_assert_eq!(n, count_hyperbola(&b, &a, &c, &d, lambda).unwrap());
        prop_assert_eq!(n, count_hyperbola(&c, &d, &a, &b, lambda).unwrap());
        let mi = ctx.inv(ctx.reduce(m)) as i64;
        prop_assert_eq!(
            n,
            count_hyperbola(&a.dilate(m), &b.dilate(m), &c.dilate(mi), &d.dilate(mi), lambda).unwrap()
        );
        let dev = deviation(&a, &b, &c, &d, lambda).unwrap();
        prop_assert_eq!(dev, deviation(&d.negate(), &c.negate(), &b.negate(), &a.negate(), lambda).unwrap());
    }
}

#[test]
fn envelope_reports_on_small_instances() {
    let ctx = FieldContext::new(401).unwrap();
    let one = FpSet::new(&ctx, [3]);
    for r in [
        bound_thm1(&one, &one, &one, &one, 5).unwrap(),
        bound_thm_hyp_full(&one, &one, &one, &one, 5).unwrap(),
    ] {
        assert!(r.passed && r.deviation() <= 1.0);
    }
    let iv = FpSet::interval(&ctx, 1, 20);
    for n in [5, 10, 20] {
        let b = FpSet::interval(&ctx, 1, n);
        assert!(bound_thm1(&iv, &b, &b, &iv, 1).unwrap().passed);
        assert!(bound_progression(&iv, &b, &b, &iv, 1).unwrap().asserted);
    }
    let scattered = FpSet::new(&ctx, [1, 5, 9]);
    assert!(
        !bound_progression(&iv, &scattered, &FpSet::interval(&ctx, 1, 4), &iv, 1)
            .unwrap()
            .asserted
    );
    let r = bound_r_aa(&iv, 36).unwrap();
    assert!(r.passed);
    assert!(r.notes.iter().any(|n| n.contains("|A-A|^92")));
}

#[test]
fn shift_profile_by_direct_inversion() {
    let ctx = FieldContext::new(101).unwrap();
    let a = FpSet::interval(&ctx, 1, 20);
    let prof = shift_inverse_profile(&a, 5).unwrap();
    for &(i, size) in &prof.rows {
        let direct = (1..=20u64)
            .map(|x| (x + i) % 101)
            .filter(|&y| y != 0 && (1..=20u64).any(|x| (x + i) % 101 == ctx.inv(y)))
            .count();
        assert_eq!(size, direct, "i = {i}");
    }
    let min = prof.rows.iter().map(|r| r.1).min().unwrap();
    assert!(prof.rows.iter().any(|&(i, s)| i == prof.argmin && s == min));
}

#[test]
fn integer_mode_counts() {
    let b: Vec<i64> = (1..=8).collect();
    let r = rho_bound(&b, &b).unwrap();
    assert!(r.rho <= r.comparison);
    let report = bound_asym_z(&int_set(0..10), &b, &b, &q_inverse_family(4, 3), &rat(1)).unwrap();
    assert!(report.passed, "{report:?}");
    let report = bound_prop_re(&q_inverse_family(8, 4), &int_set(-20..20), 2, 6).unwrap();
    assert!(report.passed, "{report:?}");
    assert!(bound_prop_re(&int_set(0..3), &int_set(0..3), 1, 4).is_err());
}

#[test]
fn no_short_relations_in_free_subgroup() {
    let r = free_group_check(2, 2, 6, 3).unwrap();
    assert!(r.passed);
    assert_eq!(r.lhs, 0.0);
}

#[test]
fn integer_mode_energy_bound() {
    for n in 1..=4i64 {
        let b: Vec<i64> = (1..=n).collect();
        for lambda in [1, 2] {
            for k in [1, 2] {
                let (_, r) = t_2k_integer_mode(&b, &b, lambda, k).unwrap();
                assert!(r.passed, "N={n} λ={lambda} k={k}");
            }
        }
    }
}
