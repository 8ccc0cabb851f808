use num_bigint::BigInt;
use overrank::arith::frac;
use overrank::asymptotic::estimate_a;
use overrank::bounds::{
    bound_report, bound_report_c, coeff_sum, crossover, inequality_ids, mao_decomposition, mao_row,
    minus_one_coefficient, verify_inequality, verify_inequality_with, zeta_relation_10, zeta_relation_6,
};
use overrank::qseries::{class_vector, rank_table};
use overrank::Error;

#[test]
fn coeff_sums_match_closed_forms() {
    let one = coeff_sum(&frac(1, 1), 128).unwrap().to_f64();
    let direct: f64 = (1..200).map(|r| (std::f64::consts::PI * ((r as f64).sqrt() - r as f64)).exp()).sum();
    assert!((one - direct).abs() < 1e-12);
    let fiftieth = coeff_sum(&frac(1, 50), 128).unwrap().to_f64();
    assert!((fiftieth / 4.010139028345277e19 - 1.0).abs() < 1e-12);
}

#[test]
fn main_term_matches_estimate() {
    for n in [400u64, 1030, 2500] {
        let b = bound_report(n, 128).unwrap().main.to_f64();
        let e = estimate_a(1, 10, n, 128).unwrap().terms[0].contribution.re.to_f64();
        assert!((b / e - 1.0).abs() < 1e-12);
    }
}

#[test]
fn dominance_examples() {
    assert!(!bound_report(100, 64).unwrap().dominated);
    assert!(bound_report(1030, 64).unwrap().dominated);
    let r = bound_report(1030, 64).unwrap();
    let sum = r.sides.iter().fold(0.0, |acc, s| acc + s.total().to_f64());
    assert!((sum / r.total.to_f64() - 1.0).abs() < 1e-12);
    assert_eq!(r.components().len(), 16);
    assert!(bound_report_c(7, 100, 64).is_err());
}

#[test]
fn components_nonnegative_and_main_outgrows_them() {
    let mut last_ratio = 0.0;
    let mut last_main = 0.0;
    for n in [10_000u64, 14_000, 20_000, 30_000] {
        let r = bound_report(n, 64).unwrap();
        for (name, v) in r.components() {
            assert!(!v.is_negative(), "{name} at n = {n}");
        }
        let main = r.main.to_f64();
        let ratio = main / r.total.to_f64();
        assert!(main > last_main && ratio > last_ratio);
        last_main = main;
        last_ratio = ratio;
    }
}

#[test]
fn crossover_definition() {
    let x = crossover(64).unwrap();
    assert!(bound_report(x.crossover, 64).unwrap().dominated);
    assert!(bound_report(4 * x.crossover, 64).unwrap().dominated);
    assert!(!bound_report(x.crossover - 1, 64).unwrap().dominated);
    assert!(x.sampled.iter().all(|&s| s >= x.crossover && s <= 4 * x.crossover));
    assert!(x.bound_assembly.contains("a=3"));
}

#[test]
fn root_of_unity_identities() {
    let t = rank_table(200);
    for a in [1, 3, 7, 9] {
        assert!(zeta_relation_10(a, 200, &t).unwrap().holds);
    }
    for a in [1, 5] {
        assert!(zeta_relation_6(a, 200, &t).unwrap().holds);
    }
    assert!(mao_decomposition(200, &t).unwrap().holds);
    assert!(matches!(zeta_relation_10(1, 201, &t), Err(Error::OutOfRange { .. })));
}

#[test]
fn mao_row_137_two_ways() {
    let t = rank_table(137);
    let classes = class_vector(6, 137, &t).unwrap();
    let rows = mao_row(137, &t).unwrap();
    for (j, (ok, value)) in rows.into_iter().enumerate() {
        assert!(ok);
        assert_eq!(value.unwrap(), classes[j]);
    }
    let zero = mao_row(0, &t).unwrap();
    let v: Vec<BigInt> = zero.into_iter().map(|(_, x)| x.unwrap()).collect();
    assert_eq!(v, [1, 0, 0, 0].map(BigInt::from));
}

#[test]
fn minus_one_coefficients_observed() {
    // the coefficients stay O(n); the naive bound |c(n)| <= n fails only below 240
    let t = rank_table(2000);
    let mut worst = (0usize, 0.0f64);
    for n in 1..=2000usize {
        let c: f64 = minus_one_coefficient(n, &t).unwrap().to_string().parse().unwrap();
        let ratio = c.abs() / n as f64;
        if ratio > worst.1 {
            worst = (n, ratio);
        }
        if n > 239 {
            assert!(ratio <= 1.0, "n = {n}");
        }
    }
    assert!(worst.1 <= 8.0 / 3.0 + 1e-12, "{worst:?}");
    assert_eq!(minus_one_coefficient(63, &t).unwrap(), BigInt::from(80));
}

#[test]
fn inequality_reports() {
    let t = rank_table(400);
    for id in ["eq:0312''", "SolvedWei33"] {
        let r = verify_inequality(id, 0, 400, &t).unwrap();
        assert!(r.passed(), "{id}: {:?}", r.violations);
        assert_eq!(r.checked, 133);
    }
    let r = verify_inequality("SolvedWei1", 0, 400, &t).unwrap();
    assert_eq!(r.checked, 134 - 11);
    let unfiltered = verify_inequality_with("eq:1234", 0, 40, &t, None).unwrap();
    assert!(unfiltered.crossover_used.is_some() && unfiltered.bound_assembly.is_some());
    let json = serde_json::to_value(&unfiltered).unwrap();
    for key in ["id", "range", "violations", "crossover_used", "bound_assembly"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(inequality_ids().contains(&"eq:0145"));
    assert!(matches!(verify_inequality("eq:0312", 0, 401, &t), Err(Error::OutOfRange { .. })));
}

#[test]
fn chain_threshold_is_needed() {
    // the chains do fail for some small arguments, which is why n >= 11 is imposed
    let t = rank_table(40);
    let v = class_vector(6, 3, &t).unwrap();
    let chain_3n = v[0] >= v[1] && v[1] >= v[2];
    let mut any_small_failure = !chain_3n;
    for n in (0..33).filter(|n| n % 3 == 2) {
        let v = class_vector(6, n, &t).unwrap();
        any_small_failure |= !(v[1] >= v[2] && v[2] >= v[0] && v[0] >= v[3]);
    }
    assert!(any_small_failure);
}
