use num_bigint::BigUint;
use padic_count::arith::{divisor_pairs, divisors, euler_phi, gcd_with_p_power_minus_one, pow_mod};
use padic_count::counting::krasner_count;
use padic_count::theorems::{expand_tame_divisor_sum, expand_tame_gcd_sum, iso_count_ef};
use padic_count::{qp_profile, Count, KrasnerQuery, Limits};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

proptest! {
    #[test]
    fn divisor_pairs_factor_n(n in 1u64..5000) {
        let pairs = divisor_pairs(n);
        prop_assert_eq!(pairs.len(), divisors(n).len());
        prop_assert!(pairs.iter().all(|&(a, b)| a * b == n));
    }

    #[test]
    fn phi_sums_over_divisors(n in 1u64..5000) {
        let total: Count = divisors(n).into_iter().map(|d| euler_phi(d).unwrap()).sum();
        prop_assert_eq!(total, Count::from(n));
    }

    #[test]
    fn count_text_and_json_round_trip(digits in "[1-9][0-9]{0,80}") {
        let c: Count = digits.parse().unwrap();
        prop_assert_eq!(c.to_string(), digits.clone());
        let json = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(&json, &format!("\"{digits}\""));
        prop_assert_eq!(serde_json::from_str::<Count>(&json).unwrap(), c);
    }

    #[test]
    fn gcd_reduction_matches_bigint(k in 1u64..2000, p in prime(), exp in 1u64..40) {
        let big = BigUint::from(p).pow(exp as u32) - 1u32;
        let want = num_integer::Integer::gcd(&big, &BigUint::from(k));
        prop_assert_eq!(BigUint::from(gcd_with_p_power_minus_one(k, p, exp)), want);
        prop_assert_eq!(BigUint::from(pow_mod(p, exp, k)), BigUint::from(p).pow(exp as u32) % k);
    }

    #[test]
    fn classes_sandwich_fields(p in prime(), e in 1u64..40, f in 1u64..5) {
        let lim = Limits::default();
        let k = qp_profile(p, 6).unwrap();
        let iso = iso_count_ef(&k, e, f, &lim).unwrap();
        let fields = krasner_count(&KrasnerQuery { p, n0: 1, e, f }, &lim).unwrap();
        prop_assert!(iso >= Count::one());
        prop_assert!(iso <= fields);
        prop_assert!(fields <= &iso * &Count::from(e * f));
    }

    #[test]
    fn tame_forms_agree(p in prime(), e in 1u64..60, f in 1u64..30, f0 in 1u64..4) {
        prop_assume!(e % p != 0);
        let mut k = qp_profile(p, 0).unwrap();
        k.f0 = f0;
        k.n0 = f0;
        let a = expand_tame_gcd_sum(&k, e, f).unwrap().value;
        let b = expand_tame_divisor_sum(&k, e, f).unwrap().value;
        prop_assert_eq!(a, b);
    }
}
