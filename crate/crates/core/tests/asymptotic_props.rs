use overrank::asymptotic::{default_kcap, equidistribution_report, estimate_a, main_term, zuckerman_pbar, TermKind};
use overrank::hp::{ComplexVal, Real};
use overrank::qseries::{rank_table, zeta_eval};
use proptest::prelude::*;

#[test]
fn value_is_ordered_sum_of_terms() {
    let e = estimate_a(2, 7, 500, 128).unwrap();
    assert_eq!(e.k_max, 22);
    let sum = e.terms.iter().fold(ComplexVal::zero(160), |acc, t| &acc + &t.contribution);
    let diff = (&sum.re - &e.value.re).abs().to_f64();
    assert!(diff <= 1e-25 * e.value.re.abs().to_f64().max(1.0));
    let ks: Vec<i64> = e.terms.iter().map(|t| t.k).collect();
    assert!(ks.windows(2).all(|w| w[0] <= w[1]));
    assert!(ks.iter().all(|k| k % 2 == 1 && *k <= e.k_max));
}

#[test]
fn estimate_tracks_exact_values() {
    // pairs whose leading δ is large enough for the main terms to dominate
    // the O(n^ε) remainder by n = 1600
    let t = rank_table(1600);
    for &(a, c) in &[(1, 3), (1, 6), (1, 10), (1, 8), (3, 8), (2, 7), (3, 7), (5, 12)] {
        let exact = zeta_eval(a, c, 1600, &t).unwrap().value.to_f64();
        let est = estimate_a(a, c, 1600, 128).unwrap();
        let rel = (est.value.re.to_f64() / exact - 1.0).abs();
        assert!(rel < 1e-4, "({a},{c}): rel {rel:e}");
        let im = est.value.im.abs().to_f64() / exact.abs();
        assert!(im < 1e-10, "({a},{c}): im {im:e}");
    }
}

#[test]
fn main_terms() {
    let e = estimate_a(1, 3, 400, 128).unwrap();
    let m = main_term(&e).unwrap();
    assert_eq!((m.kind, m.k), (TermKind::B, 3));
    let e = estimate_a(3, 10, 1600, 128).unwrap();
    let m = main_term(&e).unwrap();
    assert_eq!((m.kind, m.k), (TermKind::D, 3));
    let e = estimate_a(1, 10, 10000, 128).unwrap();
    let m = main_term(&e).unwrap();
    assert_eq!((m.kind, m.k, m.r), (TermKind::D, 1, 0));
    let e = estimate_a(1, 3, 10000, 128).unwrap();
    assert_eq!(main_term(&e).unwrap().kind, TermKind::B);
    assert_eq!(main_term(&e).unwrap().k, 3);
    assert!(main_term(&estimate_a(1, 3, 4, 128).unwrap()).is_none());
}

#[test]
fn zuckerman_truncation_is_stable() {
    for n in [5u64, 37, 120, 250] {
        let k = default_kcap(n);
        let a = zuckerman_pbar(n, k, 64).unwrap();
        let b = zuckerman_pbar(n, 2 * k, 64).unwrap();
        assert!((&a - &b).abs().to_f64() < 0.05, "n = {n}");
    }
}

#[test]
fn equidistribution_trend() {
    let t = rank_table(600);
    let spread = |n: usize| {
        equidistribution_report(5, n, &t).unwrap().iter().map(|r| (r.value - 1.0).abs()).fold(0.0, f64::max)
    };
    assert!(spread(600) < spread(200) && spread(200) < spread(50));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn imaginary_part_cancels(a in 1i64..12, c in 3i64..13, n in 1u64..3000) {
        prop_assume!(a < c && num_integer::Integer::gcd(&a, &c) == 1);
        let e = estimate_a(a, c, n, 96).unwrap();
        let scale = e.terms.iter().map(|t| t.contribution.abs().to_f64()).fold(1.0, f64::max);
        prop_assert!(e.value.im.abs().to_f64() <= 1e-20 * scale);
    }

    #[test]
    fn doubling_precision_agrees(n in 10u64..2000) {
        let lo = estimate_a(3, 10, n, 96).unwrap().value.re;
        let hi = estimate_a(3, 10, n, 192).unwrap().value.re;
        let d = (&lo - &hi.with_precision(96)).abs();
        prop_assert!(d.cmp_value(&(lo.abs().max(&Real::one(96)) * Real::from_f64(1e-25, 96))).is_le());
    }
}
