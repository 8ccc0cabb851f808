//! Exact rational and modular primitives: sawtooth, Dedekind sums, the
//! eta-multiplier phase ω_{h,k}, and the modular-inverse conventions used by
//! the Kloosterman sums.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::hp::ComplexVal;


/// Reduced rational with positive denominator.
pub type Fraction = BigRational;

pub fn frac(n: i64, d: i64) -> Fraction {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// ((x)) = x − ⌊x⌋ − 1/2, and 0 on the integers.
pub fn sawtooth(x: &Fraction) -> Fraction {
    if x.is_integer() {
        return Fraction::zero();
    }
    x - x.floor() - frac(1, 2)
}

fn check_coprime(h: i64, k: i64) -> Result<()> {
    if k < 1 {
        return Err(invalid(format!("modulus k = {k} must be positive")));
    }
    if h.gcd(&k) != 1 {
        return Err(Error::NotCoprime(h, k));
    }
    Ok(())
}

/// S(h,k) by the reciprocity recursion.
///
/// `h` is reduced mod `k` first, so any integer coprime to `k` is accepted.
pub fn dedekind_sum(h: i64, k: i64) -> Result<Fraction> {
    check_coprime(h, k)?;
    Ok(dedekind_unchecked(h.rem_euclid(k), k))
}

fn dedekind_unchecked(h: i64, k: i64) -> Fraction {
    // S(h,k) = −1/4 + (h² + k² + 1)/(12hk) − S(k mod h, h), unrolled.
    let mut acc = Fraction::zero();
    let mut sign = 1i64;
    let (mut h, mut k) = (BigInt::from(h), BigInt::from(k));
    while !h.is_zero() && !k.is_one() {
        let term = frac(-1, 4)
            + BigRational::new(&h * &h + &k * &k + 1u32, BigInt::from(12) * &h * &k);
        acc += if sign > 0 { term } else { -term };
        sign = -sign;
        let r = k.mod_floor(&h);
        k = h;
        h = r;
    }
    acc
}

/// S(h,k) by direct summation over μ; O(k), kept as a reference.
pub fn dedekind_sum_direct(h: i64, k: i64) -> Result<Fraction> {
    check_coprime(h, k)?;
    let mut s = Fraction::zero();
    for mu in 0..k {
        s += sawtooth(&frac(mu, k)) * sawtooth(&frac(h * mu, k));
    }
    Ok(s)
}

/// The unit complex number e^{πiθ}, stored by its exact θ reduced to [0, 2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    theta: Fraction,
}

impl Phase {
    pub fn new(theta: Fraction) -> Self {
        let two = BigInt::from(2);
        let num = theta.numer().mod_floor(&(theta.denom() * &two));
        Phase { theta: BigRational::new(num, theta.denom().clone()) }
    }

    pub fn one() -> Self {
        Phase::new(Fraction::zero())
    }

    pub fn theta(&self) -> &Fraction {
        &self.theta
    }

    pub fn inv(&self) -> Self {
        Phase::new(-self.theta.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        Phase::new(&self.theta * BigInt::from(e))
    }

    pub fn eval(&self, prec: usize) -> ComplexVal {
        ComplexVal::expi_pi(&self.theta, prec)
    }
}

// phases multiply by adding their angles
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::new(self.theta + rhs.theta)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul<&Phase> for &Phase {
    type Output = Phase;
    fn mul(self, rhs: &Phase) -> Phase {
        Phase::new(&self.theta + &rhs.theta)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(pi*i*{})", self.theta)
    }
}

/// ω_{h,k} = e^{πi S(h,k)}.
pub fn omega(h: i64, k: i64) -> Result<Phase> {
    Ok(Phase::new(dedekind_sum(h, k)?))
}

/// ω²_{h,k} / ω_{2h,k} for odd k, the multiplier of the η(z/2)/η²(z) law.
pub fn omega_ratio_odd(h: i64, k: i64) -> Result<Phase> {
    if k % 2 == 0 {
        return Err(invalid(format!("k = {k} must be odd")));
    }
    let s1 = dedekind_sum(h, k)?;
    let s2 = dedekind_unchecked((2 * h).rem_euclid(k), k);
    Ok(Phase::new(s1 * BigInt::from(2) - s2))
}

/// The even h′ in (−k, k] with hh′ ≡ −1 (mod k); 0 for k = 1.
pub fn inv_neg_even(h: i64, k: i64) -> Result<i64> {
    check_coprime(h, k)?;
    if k % 2 == 0 {
        return Err(invalid(format!("inv_neg_even needs odd k, got {k}")));
    }
    if k == 1 {
        return Ok(0);
    }
    let x = inv_neg_unchecked(h, k);
    Ok(if x % 2 == 0 { x } else { x - k })
}

/// −h⁻¹ mod k in [0, k).
pub fn inv_neg(h: i64, k: i64) -> Result<i64> {
    check_coprime(h, k)?;
    if k == 1 {
        return Ok(0);
    }
    Ok(inv_neg_unchecked(h, k))
}

fn inv_neg_unchecked(h: i64, k: i64) -> i64 {
    let g = i64::extended_gcd(&h.rem_euclid(k), &k);
    debug_assert_eq!(g.gcd, 1);
    (-g.x).rem_euclid(k)
}

/// Residues 0 ≤ h < k coprime to k (h = 0 only for k = 1).
pub fn coprime_residues(k: i64) -> impl Iterator<Item = i64> {
    (0..k).filter(move |h| h.gcd(&k) == 1)
}
