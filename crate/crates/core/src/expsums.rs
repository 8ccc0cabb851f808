//! The (a, c, k) group data, the δ/m tables, and the Kloosterman-type sums
//! A_{a,c,k}, B_{a,c,k}, D_{a,c,k}.
//!
//! Every summand is a product of exact phases, so each term is assembled as a
//! single rational multiple of π and only the final cosine/sine is rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::arith::{coprime_residues, dedekind_sum, frac, inv_neg, inv_neg_even, omega_ratio_odd, Fraction, Phase};
use crate::error::{invalid, Error, Result};
use crate::hp::{ComplexVal, Real};

/// k̃, d = (c,k), k₁ = k/d, c₁ = c/d and ℓ ≡ a·k₁ (mod c₁).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupData {
    pub k_tilde: u8,
    pub d: i64,
    pub k1: i64,
    pub c1: i64,
    pub ell: i64,
}

impl GroupData {
    /// ℓ/c₁.
    pub fn x(&self) -> Fraction {
        frac(self.ell, self.c1)
    }
}

fn check_ac(a: i64, c: i64) -> Result<()> {
    if c < 2 || !(1..c).contains(&a) {
        return Err(invalid(format!("need 0 < a < c, got a = {a}, c = {c}")));
    }
    if a.gcd(&c) != 1 {
        return Err(Error::NotCoprime(a, c));
    }
    Ok(())
}

pub fn group_data(a: i64, c: i64, k: i64) -> Result<GroupData> {
    check_ac(a, c)?;
    if k < 1 {
        return Err(invalid(format!("k = {k} must be positive")));
    }
    let d = c.gcd(&k);
    let (k1, c1) = (k / d, c / d);
    Ok(GroupData { k_tilde: (k % 2) as u8, d, k1, c1, ell: (a * k1).rem_euclid(c1) })
}

fn check_unit_interval(b: i64, c: i64) -> Result<()> {
    if c <= 0 || b <= 0 || b >= c {
        return Err(invalid(format!("need 0 < b/c < 1, got {b}/{c}")));
    }
    Ok(())
}

/// s(b,c) ∈ {0, 1, 2} by the position of b/c relative to 1/4 and 3/4.
pub fn s_func(b: i64, c: i64) -> Result<u8> {
    check_unit_interval(b, c)?;
    Ok(if 4 * b <= c {
        0
    } else if 4 * b <= 3 * c {
        1
    } else {
        2
    })
}

/// t(b,c) ∈ {1, 3} by the position of b/c relative to 1/2.
pub fn t_func(b: i64, c: i64) -> Result<u8> {
    check_unit_interval(b, c)?;
    match (2 * b).cmp(&c) {
        std::cmp::Ordering::Less => Ok(1),
        std::cmp::Ordering::Greater => Ok(3),
        std::cmp::Ordering::Equal => Err(invalid("t(b,c) is undefined at b/c = 1/2")),
    }
}

/// One (k, r) contribution: δ and 2m (m may be half-integral).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTerm {
    pub r: i64,
    pub delta: Fraction,
    pub twice_m: i64,
    pub primed: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Branch {
    Low,
    Mid,
    High,
}

fn branch(x: &Fraction) -> Branch {
    if *x <= frac(1, 4) {
        Branch::Low
    } else if *x <= frac(3, 4) {
        Branch::Mid
    } else {
        Branch::High
    }
}

/// δ_{c,k,r} (or δ′) and m_{a,c,k,r} (or m′) straight from their
/// piecewise definitions; `None` where the unprimed table is identically 0.
fn delta_and_m(g: &GroupData, a: i64, r: i64, primed: bool) -> Option<(Fraction, Fraction)> {
    let x = g.x();
    let one = frac(1, 1);
    let r_q = frac(r, 1);
    let j = BigInt::from(a * g.k1 - g.ell);
    let c1 = BigInt::from(g.c1);
    let rb = BigInt::from(r);
    let base = frac(1, 16) + &x * &x;
    let (delta, inner) = match (branch(&x), primed) {
        (Branch::Low, false) => (
            base - &x / BigInt::from(2) - &r_q * &x,
            BigInt::from(2) * &j * &j + &c1 * &j + BigInt::from(2) * &rb * &c1 * &j,
        ),
        (Branch::Mid, false) => return None,
        (Branch::High, false) => (
            base - &x * frac(3, 2) + frac(1, 2) - &r_q * (&one - &x),
            BigInt::from(2) * &j * &j + BigInt::from(3) * &c1 * &j - BigInt::from(2) * &rb * &c1 * &j
                - &c1 * &c1 * (BigInt::from(2) * &rb - 1),
        ),
        (Branch::Low, true) => (
            base - &x * frac(3, 2) - &r_q * &x,
            BigInt::from(2) * &j * &j + BigInt::from(3) * &c1 * &j + BigInt::from(2) * &rb * &c1 * &j,
        ),
        (Branch::Mid, true) => (
            base - &x * frac(3, 2) + frac(1, 2) - &r_q * (&one - &x),
            BigInt::from(2) * &j * &j + BigInt::from(3) * &c1 * &j - BigInt::from(2) * &rb * &c1 * &j
                - &c1 * &c1 * (BigInt::from(2) * &rb - 1),
        ),
        (Branch::High, true) => (
            base - &x * frac(5, 2) + frac(3, 2) - &r_q * (&one - &x),
            BigInt::from(2) * &j * &j + BigInt::from(5) * &c1 * &j - BigInt::from(2) * &rb * &c1 * &j
                - &c1 * &c1 * (BigInt::from(2) * &rb - 3),
        ),
    };
    let m = -Fraction::new(inner, BigInt::from(2) * &c1 * &c1);
    Some((delta, m))
}

/// All r ≥ 0 with δ > 0, each with exact δ and 2m.
pub fn delta_terms(a: i64, c: i64, k: i64, primed: bool) -> Result<Vec<DeltaTerm>> {
    let g = group_data(a, c, k)?;
    if g.c1 == 1 {
        return Err(invalid(format!("c = {c} divides k = {k}; the δ table needs c ∤ k")));
    }
    if k % 2 == 0 {
        return Err(invalid(format!("k = {k} must be odd")));
    }
    let mut out = Vec::new();
    // δ is affine in r with slope −ℓ/c₁ or −(1 − ℓ/c₁), both ≤ −1/c₁, and
    // δ(0) < 2, so r never exceeds 2c₁.
    let r_max = 2 * g.c1;
    for r in 0..=r_max + 1 {
        let Some((delta, m)) = delta_and_m(&g, a, r, primed) else { break };
        if !delta.is_positive() {
            break;
        }
        if r > r_max {
            return Err(Error::Consistency(format!("δ still positive at r = {r} for ({a},{c},{k})")));
        }
        let twice = &m * BigInt::from(2);
        if !twice.is_integer() {
            return Err(Error::Consistency(format!("2m = {twice} is not an integer for ({a},{c},{k},{r})")));
        }
        let twice_m = i64::try_from(twice.to_integer()).map_err(|_| invalid("2m out of range"))?;
        out.push(DeltaTerm { r, delta, twice_m, primed });
    }
    Ok(out)
}

/// Representative of h′ used by a sum; `shift` adds multiples of 2k, which
/// must leave B and D unchanged.
fn even_h_prime(h: i64, k: i64, shift: i64) -> Result<i64> {
    Ok(inv_neg_even(h, k)? + 2 * k * shift)
}

fn guard(prec: usize, k: i64) -> usize {
    prec + 24 + (64 - (k as u64).leading_zeros() as usize)
}

fn tan_over_sqrt2(a: i64, c: i64, prec: usize) -> Real {
    Real::tan_pi(&frac(a, c), prec) / Real::from_i64(2, prec).sqrt()
}

/// B_{a,c,k}(n, m) for c | k, k odd.
pub fn kloosterman_b(a: i64, c: i64, k: i64, n: i64, m: i64, prec: usize) -> Result<ComplexVal> {
    kloosterman_b_shifted(a, c, k, n, m, 0, prec)
}

/// B with every h′ replaced by h′ + 2k·shift.
pub fn kloosterman_b_shifted(a: i64, c: i64, k: i64, n: i64, m: i64, shift: i64, prec: usize) -> Result<ComplexVal> {
    let g = group_data(a, c, k)?;
    if g.c1 != 1 || k % 2 == 0 {
        return Err(invalid(format!("B needs c | k and k odd, got c = {c}, k = {k}")));
    }
    let wp = guard(prec, k);
    let mut acc = ComplexVal::zero(wp);
    for h in coprime_residues(k) {
        let hp = even_h_prime(h, k, shift)?;
        if (a * hp) % c == 0 {
            return Err(Error::Pole(format!("sin(π·{a}·{hp}/{c}) = 0")));
        }
        let theta = omega_ratio_odd(h, k)?.theta().clone() - frac(2 * hp * a * a * g.k1, c)
            + frac(2 * (n * h + m * hp), k);
        let term = Phase::new(theta).eval(wp);
        let inv_sin = Real::one(wp) / Real::sin_pi(&frac(a * hp, c), wp);
        acc = &acc + &term.scale(&inv_sin);
    }
    Ok(acc.scale(&-tan_over_sqrt2(a, c, wp)).with_precision(prec))
}

/// D_{a,c,k}(n, m) for c ∤ k, k odd, with m passed as 2m; the sign flips on
/// the high ℓ/c₁ range.
pub fn kloosterman_d(a: i64, c: i64, k: i64, n: i64, twice_m: i64, prec: usize) -> Result<ComplexVal> {
    kloosterman_d_shifted(a, c, k, n, twice_m, 0, prec)
}

pub fn kloosterman_d_shifted(
    a: i64,
    c: i64,
    k: i64,
    n: i64,
    twice_m: i64,
    shift: i64,
    prec: usize,
) -> Result<ComplexVal> {
    let g = group_data(a, c, k)?;
    if g.c1 == 1 || k % 2 == 0 {
        return Err(invalid(format!("D needs c ∤ k and k odd, got c = {c}, k = {k}")));
    }
    let sign = match branch(&g.x()) {
        Branch::Low => 1,
        Branch::High => -1,
        Branch::Mid => {
            return Err(invalid(format!(
                "D is undefined for ℓ/c₁ = {}/{} in (1/4, 3/4]",
                g.ell, g.c1
            )))
        }
    };
    let wp = guard(prec, k);
    let mut acc = ComplexVal::zero(wp);
    for h in coprime_residues(k) {
        let hp = even_h_prime(h, k, shift)?;
        let theta = omega_ratio_odd(h, k)?.theta().clone() + frac(2 * n * h + twice_m * hp, k);
        acc = &acc + &Phase::new(theta).eval(wp);
    }
    let s = tan_over_sqrt2(a, c, wp) * Real::from_i64(sign, wp);
    Ok(acc.scale(&s).with_precision(prec))
}

/// A_{a,c,k}(n, m) for c | k, k even.
pub fn kloosterman_a(a: i64, c: i64, k: i64, n: i64, m: i64, prec: usize) -> Result<ComplexVal> {
    let g = group_data(a, c, k)?;
    if g.c1 != 1 || k % 2 == 1 {
        return Err(invalid(format!("A needs c | k and k even, got c = {c}, k = {k}")));
    }
    let wp = guard(prec, k);
    let half = k / 2;
    let mut acc = ComplexVal::zero(wp);
    for h in coprime_residues(k) {
        let hp = inv_neg(h, k)?;
        if (a * hp) % c == 0 {
            return Err(Error::Pole(format!("cot(π·{a}·{hp}/{c}) has a pole")));
        }
        let ratio = dedekind_sum(h, k)? * BigInt::from(2) - dedekind_sum(h, half)?;
        let theta = ratio - frac(2 * hp * a * a * g.k1, c) + frac(2 * (n * h + m * hp), k);
        let term = Phase::new(theta).eval(wp);
        let cot = Real::cos_pi(&frac(a * hp, c), wp) / Real::sin_pi(&frac(a * hp, c), wp);
        acc = &acc + &term.scale(&cot);
    }
    let sign = if g.k1 % 2 == 1 { 1 } else { -1 };
    let s = Real::tan_pi(&frac(a, c), wp) * Real::from_i64(sign, wp);
    Ok(acc.scale(&s).with_precision(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: &ComplexVal, re: f64, im: f64, tol: f64) -> bool {
        let (x, y) = z.to_f64_pair();
        (x - re).abs() < tol && (y - im).abs() < tol
    }

    #[test]
    fn group_data_examples() {
        assert_eq!(group_data(1, 10, 1).unwrap(), GroupData { k_tilde: 1, d: 1, k1: 1, c1: 10, ell: 1 });
        let g = group_data(1, 3, 3).unwrap();
        assert_eq!((g.d, g.k1, g.c1, g.ell), (3, 1, 1, 0));
        let g = group_data(3, 10, 3).unwrap();
        assert_eq!((g.k1, g.c1, g.ell), (3, 10, 9));
        assert!(group_data(2, 10, 3).is_err());
    }

    #[test]
    fn s_and_t() {
        assert_eq!(s_func(1, 4).unwrap(), 0);
        assert_eq!(s_func(1, 2).unwrap(), 1);
        assert_eq!(t_func(1, 4).unwrap(), 1);
        assert_eq!(s_func(9, 10).unwrap(), 2);
        assert_eq!(t_func(9, 10).unwrap(), 3);
        assert!(t_func(1, 2).is_err());
        assert!(s_func(0, 2).is_err());
    }

    #[test]
    fn delta_examples() {
        let t = delta_terms(1, 10, 1, false).unwrap();
        assert_eq!(t, vec![DeltaTerm { r: 0, delta: frac(9, 400), twice_m: 0, primed: false }]);
        assert!(delta_terms(1, 3, 1, false).unwrap().is_empty());
        // third branch with (ak₁ − ℓ)/c₁ = 0: m = −(−c₁²)/(2c₁²)·(−1) = −1/2
        let t = delta_terms(3, 10, 3, false).unwrap();
        assert_eq!(t, vec![DeltaTerm { r: 0, delta: frac(9, 400), twice_m: -1, primed: false }]);
        let t = delta_terms(1, 6, 1, false).unwrap();
        assert_eq!(t, vec![DeltaTerm { r: 0, delta: frac(1, 144), twice_m: 0, primed: false }]);
        assert!(delta_terms(1, 3, 3, false).is_err());
        assert!(delta_terms(1, 5, 2, false).is_err());
    }

    #[test]
    fn c1_four_contributes_nothing() {
        // c = 4·d with k = d odd forces c₁ = 4
        for (a, c, k) in [(1, 4, 1), (3, 4, 1), (1, 12, 3), (5, 12, 3), (7, 20, 5)] {
            assert_eq!(group_data(a, c, k).unwrap().c1, 4);
            assert!(delta_terms(a, c, k, false).unwrap().is_empty(), "({a},{c},{k})");
            assert!(delta_terms(a, c, k, true).unwrap().is_empty(), "({a},{c},{k}) primed");
        }
    }

    #[test]
    fn d_examples() {
        let want = (std::f64::consts::PI / 10.0).tan() / 2f64.sqrt();
        for n in [-5, -1, 0, 7] {
            assert!(close(&kloosterman_d(1, 10, 1, n, 0, 128).unwrap(), want, 0.0, 1e-15));
        }
        let want6 = (std::f64::consts::PI / 6.0).tan() / 2f64.sqrt();
        assert!(close(&kloosterman_d(1, 6, 1, -3, 0, 128).unwrap(), want6, 0.0, 1e-15));
        assert!(kloosterman_d(1, 3, 1, 0, 0, 128).is_err());
    }

    #[test]
    fn b_depends_on_n_mod_k() {
        for n in 0..3 {
            let x = kloosterman_b(1, 3, 3, -n, 0, 128).unwrap();
            let y = kloosterman_b(1, 3, 3, -n - 3, 0, 128).unwrap();
            assert!((&x - &y).abs().to_f64() < 1e-30);
        }
        assert!(kloosterman_b(1, 3, 6, 0, 0, 128).is_err());
        assert!(kloosterman_b(1, 10, 3, 0, 0, 128).is_err());
    }

    #[test]
    fn a_sum_basic() {
        let z = kloosterman_a(1, 3, 6, 0, 0, 128).unwrap();
        assert!(z.abs().is_finite());
        assert!(kloosterman_a(1, 3, 3, 0, 0, 128).is_err());
    }
}
