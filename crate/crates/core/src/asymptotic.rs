//! The circle-method main terms for A(a/c; n), Zuckerman's convergent series
//! for p̄(n), and equidistribution ratios of rank classes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{coprime_residues, frac, omega_ratio_odd, Fraction, Phase};
use crate::error::{invalid, Error, Result};
use crate::expsums::{delta_terms, group_data, kloosterman_b, kloosterman_d};
use crate::hp::{ComplexVal, Real};
use crate::qseries::{class_vector, RankTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    B,
    D,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::B => "B",
            TermKind::D => "D",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub k: i64,
    pub r: i64,
    /// δ for D-terms; B-terms grow like sinh(π√n/k), i.e. δ = 1/16.
    pub delta: Fraction,
    pub twice_m: i64,
    pub contribution: ComplexVal,
}

/// Truncated main-term sum for A(a/c; n).
#[derive(Clone, Debug)]
pub struct Estimate {
    pub a: i64,
    pub c: i64,
    pub n: u64,
    /// N = ⌊√n⌋, the largest k summed.
    pub k_max: i64,
    pub value: ComplexVal,
    /// In summation order: k ascending, then r.
    pub terms: Vec<Term>,
}

/// i√(2/n)·Σ_{c|k} B(−n,0)/√k·sinh(π√n/k) + 2√(2/n)·Σ_{c∤k, c₁≠4, δ>0} D(−n,m)/√k·sinh(4π√(δn)/k),
/// both over odd k ≤ √n.
pub fn estimate_a(a: i64, c: i64, n: u64, prec: usize) -> Result<Estimate> {
    if c <= 2 {
        return Err(invalid(format!("the asymptotic formula needs c > 2, got c = {c}")));
    }
    group_data(a, c, 1)?;
    if n == 0 {
        return Err(invalid("the asymptotic formula needs n >= 1"));
    }
    let wp = prec + 32;
    let k_max = n.sqrt() as i64;
    let ni = i64::try_from(n).map_err(|_| invalid("n too large"))?;
    let n_r = Real::from_i64(ni, wp);
    let sqrt_n = n_r.sqrt();
    let pi = Real::pi(wp);
    let sqrt_2_over_n = (Real::from_i64(2, wp) / &n_r).sqrt();
    let mut terms = Vec::new();
    let mut value = ComplexVal::zero(wp);
    for k in (1..=k_max).step_by(2) {
        let kr = Real::from_i64(k, wp);
        let sqrt_k = kr.sqrt();
        if k % c == 0 {
            let b = kloosterman_b(a, c, k, -ni, 0, wp)?;
            let s = (&pi * &sqrt_n / &kr).sinh();
            let t = b.mul_i().scale(&(&sqrt_2_over_n * &s / &sqrt_k));
            value = &value + &t;
            terms.push(Term { kind: TermKind::B, k, r: 0, delta: frac(1, 16), twice_m: 0, contribution: t });
            continue;
        }
        if group_data(a, c, k)?.c1 == 4 {
            continue;
        }
        for dt in delta_terms(a, c, k, false)? {
            let d = kloosterman_d(a, c, k, -ni, dt.twice_m, wp)?;
            let delta = Real::from_ratio(&dt.delta, wp);
            let s = (Real::from_i64(4, wp) * &pi * (&delta * &n_r).sqrt() / &kr).sinh();
            let t = d.scale(&(Real::from_i64(2, wp) * &sqrt_2_over_n * &s / &sqrt_k));
            value = &value + &t;
            terms.push(Term {
                kind: TermKind::D,
                k,
                r: dt.r,
                delta: dt.delta,
                twice_m: dt.twice_m,
                contribution: t,
            });
        }
    }
    Ok(Estimate { a, c, n, k_max, value: value.with_precision(prec), terms })
}

/// The single largest-magnitude term of an estimate.
pub fn main_term(est: &Estimate) -> Option<&Term> {
    est.terms.iter().fold(None, |best: Option<&Term>, t| match best {
        Some(b) if b.contribution.abs().cmp_value(&t.contribution.abs()).is_ge() => Some(b),
        _ => Some(t),
    })
}

/// Default truncation for [`zuckerman_pbar`]: 5⌈√n⌉ (empirical).
pub fn default_kcap(n: u64) -> i64 {
    let s = n.sqrt();
    5 * (if s * s == n { s } else { s + 1 }) as i64
}

/// Zuckerman's series for p̄(n) truncated at odd k ≤ k_cap, with the
/// n-derivative of sinh(π√n/k)/√n taken analytically.
pub fn zuckerman_pbar(n: u64, k_cap: i64, prec: usize) -> Result<Real> {
    if n == 0 {
        return Err(invalid("the series needs n >= 1"));
    }
    if k_cap < 1 {
        return Err(invalid("k_cap must be at least 1"));
    }
    let ni = i64::try_from(n).map_err(|_| invalid("n too large"))?;
    // p̄(n) ≈ e^{π√n}/(8n): carry its size on top of the requested precision
    let wp = prec + ((n as f64).sqrt() * std::f64::consts::PI / std::f64::consts::LN_2) as usize + 32;
    let pi = Real::pi(wp);
    let n_r = Real::from_i64(ni, wp);
    let sqrt_n = n_r.sqrt();
    let n32 = &n_r * &sqrt_n;
    let mut total = Real::zero(wp);
    for k in (1..=k_cap).step_by(2) {
        let mut inner = Real::zero(wp);
        for h in coprime_residues(k) {
            let theta = omega_ratio_odd(h, k)?.theta().clone() - frac(2 * ni * h, k);
            inner = inner + Real::cos_pi(Phase::new(theta).theta(), wp);
        }
        if inner.is_zero() {
            continue;
        }
        let kr = Real::from_i64(k, wp);
        let arg = &pi * &sqrt_n / &kr;
        let deriv = &pi / (Real::from_i64(2, wp) * &kr * &n_r) * arg.cosh() - arg.sinh() / (Real::from_i64(2, wp) * &n32);
        total = total + kr.sqrt() * inner * deriv;
    }
    Ok((total / (Real::from_i64(2, wp) * pi)).with_precision(wp))
}

#[derive(Clone, Debug)]
pub struct ClassRatio {
    pub a: i64,
    /// c·N̄(a,c,n)/p̄(n).
    pub exact: Fraction,
    pub value: f64,
}

/// c·N̄(a,c,n)/p̄(n) for every residue a.
pub fn equidistribution_report(c: i64, n: usize, t: &RankTable) -> Result<Vec<ClassRatio>> {
    let classes = class_vector(c, n, t)?;
    let total = t.pbar(n)?.clone();
    if total.is_zero() {
        return Err(Error::Consistency(format!("p̄({n}) = 0")));
    }
    Ok(classes
        .into_iter()
        .enumerate()
        .map(|(a, v)| {
            let exact = Fraction::new(v * BigInt::from(c), total.clone());
            let value = ratio_f64(&exact);
            ClassRatio { a: a as i64, exact, value }
        })
        .collect())
}

fn ratio_f64(x: &Fraction) -> f64 {
    // exact integers can exceed f64 range individually; scale first
    let shift = x.denom().bits().saturating_sub(60);
    let n = x.numer() >> shift;
    let d = x.denom() >> shift;
    match (n.to_f64(), d.to_f64()) {
        (Some(n), Some(d)) if d != 0.0 => n / d,
        _ => Real::from_ratio(x, 64).to_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rank_table;

    #[test]
    fn empty_estimate() {
        let e = estimate_a(1, 3, 4, 128).unwrap();
        assert!(e.terms.is_empty());
        assert!(e.value.re.is_zero() && e.value.im.is_zero());
        assert_eq!(e.k_max, 2);
        assert!(main_term(&e).is_none());
        assert!(estimate_a(1, 2, 10, 128).is_err());
    }

    #[test]
    fn leading_term_for_tenths() {
        let n = 900u64;
        let e = estimate_a(1, 10, n, 128).unwrap();
        let t = &e.terms[0];
        assert_eq!((t.kind, t.k, t.r), (TermKind::D, 1, 0));
        let sn = (n as f64).sqrt();
        let want = 2.0 / sn * (std::f64::consts::PI / 10.0).tan() * (3.0 * std::f64::consts::PI * sn / 5.0).sinh();
        assert!((t.contribution.re.to_f64() / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zuckerman_small() {
        assert_eq!(zuckerman_pbar(4, 15, 64).unwrap().round_to_bigint().unwrap(), BigInt::from(14));
        assert_eq!(zuckerman_pbar(1, 15, 64).unwrap().round_to_bigint().unwrap(), BigInt::from(2));
        assert_eq!(default_kcap(100), 50);
        assert_eq!(default_kcap(101), 55);
    }

    #[test]
    fn equidistribution_at_zero() {
        let t = rank_table(5);
        let r = equidistribution_report(4, 0, &t).unwrap();
        let v: Vec<f64> = r.iter().map(|x| x.value).collect();
        assert_eq!(v, vec![4.0, 0.0, 0.0, 0.0]);
    }
}
