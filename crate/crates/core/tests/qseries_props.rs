use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use overrank::qseries::{
    class_vector, load_table, orthogonality_decompose, pbar_series, rank_class, rank_table, save_table_csv,
    save_table_json, GroupRingElt, IntSeries, RankTable,
};
use overrank::Error;
use proptest::prelude::*;

/// Power series in q with coefficients in Z[Z/c], as q-major i128 arrays.
type GSeries = Vec<Vec<i128>>;

/// Σ_{k≥0} (−1;q)_k q^{k(k+1)/2} / ((ζq;q)_k (q/ζ;q)_k), expanded directly.
fn hypergeometric_oracle(c: usize, n_max: usize) -> GSeries {
    let mut total: GSeries = vec![vec![0; c]; n_max + 1];
    let mut k = 0usize;
    while k * (k + 1) / 2 <= n_max {
        let mut s: GSeries = vec![vec![0; c]; n_max + 1];
        s[k * (k + 1) / 2][0] = 1;
        // (−1;q)_k = Π_{i<k} (1 + q^i)
        for i in 0..k {
            if i == 0 {
                s.iter_mut().flatten().for_each(|x| *x *= 2);
                continue;
            }
            for n in (i..=n_max).rev() {
                for j in 0..c {
                    s[n][j] += s[n - i][j];
                }
            }
        }
        // 1/(1 − ζ^{±1} q^i) for i = 1..=k
        for i in 1..=k {
            for e in [1, c - 1] {
                for n in i..=n_max {
                    for j in 0..c {
                        let v = s[n - i][j];
                        s[n][(j + e) % c] += v;
                    }
                }
            }
        }
        for n in 0..=n_max {
            for j in 0..c {
                total[n][j] += s[n][j];
            }
        }
        k += 1;
    }
    total
}

#[test]
fn rank_table_matches_hypergeometric_series() {
    let n_max = 120;
    let t = rank_table(n_max);
    for c in [2usize, 3, 5, 6, 10] {
        let oracle = hypergeometric_oracle(c, n_max);
        for n in 0..=n_max {
            let classes = class_vector(c as i64, n, &t).unwrap();
            let mut ours = GroupRingElt::zero(c);
            for (j, v) in classes.iter().enumerate() {
                ours.add_term(j as i64, v);
            }
            let theirs = GroupRingElt::from_coeffs(oracle[n].iter().map(|&x| BigInt::from(x)).collect()).unwrap();
            assert!(ours.same_value(&theirs), "c = {c}, n = {n}");
        }
    }
}

#[test]
fn row_sums_and_symmetry() {
    let t = rank_table(300);
    let pbar = pbar_series(300);
    for n in 0..=300 {
        assert_eq!(t.pbar(n).unwrap(), pbar.coeff(n).unwrap());
        let row = t.row(n).unwrap();
        let total: BigInt = row.iter().map(|(m, v)| if *m == 0 { v.clone() } else { v * 2 }).sum();
        assert_eq!(&total, t.pbar(n).unwrap());
        for m in 1..n as i64 {
            assert_eq!(t.count(m, n).unwrap(), t.count(-m, n).unwrap());
        }
        assert!(t.count(n as i64 + 1, n).unwrap().is_zero());
    }
    assert!(matches!(t.count(0, 301), Err(Error::OutOfRange { .. })));
}

#[test]
fn orthogonality_reproduces_classes() {
    let t = rank_table(150);
    for c in [3i64, 4, 6, 7, 10] {
        for n in (0..=150).step_by(7) {
            for a in 0..c {
                assert_eq!(orthogonality_decompose(a, c, n, &t).unwrap(), rank_class(a, c, n, &t).unwrap());
            }
        }
    }
}

fn scratch_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("overrank-{}-{name}", std::process::id()))
}

#[test]
fn cache_roundtrip() {
    let t = rank_table(60);
    for (name, save) in [
        ("t.json", save_table_json as fn(&RankTable, &std::path::Path) -> overrank::Result<()>),
        ("t.csv", save_table_csv),
    ] {
        let p = scratch_path(name);
        save(&t, &p).unwrap();
        let back = load_table(&p).unwrap();
        assert_eq!(back.n_max(), 60);
        for n in 0..=60 {
            assert_eq!(back.row(n).unwrap(), t.row(n).unwrap());
        }
        std::fs::remove_file(&p).unwrap();
    }
}

#[test]
fn corrupted_cache_is_rejected() {
    let t = rank_table(20);
    let p = scratch_path("bad.csv");
    save_table_csv(&t, &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    // bump N̄(0,10) by one: the row no longer sums to p̄(10)
    let bad = text.replacen("\n10,0,", "\n10,0,1", 1);
    assert_ne!(bad, text);
    std::fs::write(&p, bad).unwrap();
    assert!(matches!(load_table(&p), Err(Error::Cache(_))));

    std::fs::write(&p, "{\"format_version\": 99, \"n_max\": 0, \"rows\": [[[0, \"1\"]]]}").unwrap();
    assert!(matches!(load_table(&p), Err(Error::Cache(_))));
    std::fs::remove_file(&p).unwrap();
}

proptest! {
    #[test]
    fn inverse_is_inverse(coeffs in prop::collection::vec(-50i64..50, 1..40)) {
        let mut c: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
        c[0] = BigInt::one();
        let s = IntSeries::from_coeffs(c).unwrap();
        let prod = &s * &s.inverse().unwrap();
        prop_assert_eq!(prod, IntSeries::one(s.order()));
    }

    #[test]
    fn binomial_then_division_round_trips(coeffs in prop::collection::vec(-50i64..50, 1..40), j in 1usize..10) {
        let s = IntSeries::from_coeffs(coeffs.into_iter().map(BigInt::from).collect()).unwrap();
        let mut t = s.clone();
        t.mul_binomial(j, -1);
        t.div_one_minus(j);
        prop_assert_eq!(t.coeffs(), s.coeffs());
    }
}
