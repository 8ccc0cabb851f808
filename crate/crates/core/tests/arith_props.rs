use num_bigint::BigInt;
use num_integer::Integer;
use overrank::arith::{dedekind_sum, dedekind_sum_direct, frac, inv_neg, inv_neg_even, omega_ratio_odd, Fraction};
use overrank::Error;
use proptest::prelude::*;

#[test]
fn reciprocity_up_to_200() {
    for k in 1..=200i64 {
        for h in 1..=200i64 {
            if h.gcd(&k) != 1 {
                continue;
            }
            let lhs = dedekind_sum(h, k).unwrap() + dedekind_sum(k, h).unwrap();
            let rhs = (frac(h, k) + frac(k, h) + frac(1, h * k)) / BigInt::from(12) - frac(1, 4);
            assert_eq!(lhs, rhs, "h = {h}, k = {k}");
        }
    }
}

#[test]
fn fast_matches_direct_up_to_500() {
    for k in (1..=500i64).step_by(23).chain(497..=500) {
        for h in (0..k).filter(|h| h.gcd(&k) == 1) {
            assert_eq!(dedekind_sum(h, k).unwrap(), dedekind_sum_direct(h, k).unwrap(), "({h},{k})");
        }
    }
}

#[test]
fn rejects_non_coprime() {
    assert!(matches!(dedekind_sum(4, 6), Err(Error::NotCoprime(4, 6))));
    assert!(matches!(inv_neg(3, 9), Err(Error::NotCoprime(_, _))));
}

proptest! {
    #[test]
    fn dedekind_is_periodic_and_odd(h in -1000i64..1000, k in 1i64..400) {
        prop_assume!(h.gcd(&k) == 1);
        let s = dedekind_sum(h, k).unwrap();
        prop_assert_eq!(&s, &dedekind_sum(h + 3 * k, k).unwrap());
        prop_assert_eq!(-s, dedekind_sum(-h, k).unwrap());
    }

    #[test]
    fn twelve_k_s_is_integral(h in 1i64..500, k in 1i64..500) {
        prop_assume!(h.gcd(&k) == 1);
        let s: Fraction = dedekind_sum(h, k).unwrap() * BigInt::from(12 * k);
        prop_assert!(s.is_integer());
    }

    #[test]
    fn inverse_properties(h in 1i64..5000, k in 2i64..2000) {
        prop_assume!(h.gcd(&k) == 1);
        let x = inv_neg(h, k).unwrap();
        prop_assert!((0..k).contains(&x));
        prop_assert_eq!((h * x).rem_euclid(k), k - 1);
        if k % 2 == 1 {
            let e = inv_neg_even(h, k).unwrap();
            prop_assert!(e % 2 == 0 && -k < e && e <= k);
            prop_assert_eq!((h * e).rem_euclid(k), k - 1);
        }
    }

    #[test]
    fn omega_ratio_depends_on_h_mod_k(h in 0i64..300, k in (0i64..150).prop_map(|j| 2 * j + 1)) {
        prop_assume!(h.gcd(&k) == 1);
        prop_assert_eq!(omega_ratio_odd(h, k).unwrap(), omega_ratio_odd(h + k, k).unwrap());
    }
}
