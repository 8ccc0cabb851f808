//! Arbitrary-precision reals and complex values.
//!
//! Thin wrapper over [`astro_float::BigFloat`] that carries its working
//! precision along with the value, so arithmetic does not need an explicit
//! context argument. Binary operations run at the larger of the two operand
//! precisions. Trigonometric factors of rational multiples of π are reduced
//! exactly before any rounding happens (see [`Real::cos_pi`]).

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A real number at a recorded binary precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    /// Exact when `prec` covers the bit length of `x`, correctly rounded otherwise.
    pub fn from_bigint(x: &BigInt, prec: usize) -> Self {
        let (sign, digits) = x.to_u64_digits();
        let work = prec.max(64 * digits.len() + 64);
        let radix = BigFloat::from_u64(u64::MAX, work).add(&BigFloat::from_u8(1, work), work, RM);
        let mut acc = BigFloat::from_u8(0, work);
        for d in digits.iter().rev() {
            acc = acc
                .mul(&radix, work, RM)
                .add(&BigFloat::from_u64(*d, work), work, RM);
        }
        if sign == BigSign::Minus {
            acc.inv_sign();
        }
        let mut out = acc;
        let _ = out.set_precision(prec, RM);
        Self::wrap(out, prec)
    }

    pub fn from_ratio(x: &BigRational, prec: usize) -> Self {
        let work = prec + 32;
        let n = Self::from_bigint(x.numer(), work);
        let d = Self::from_bigint(x.denom(), work);
        (n / d).with_precision(prec)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn with_precision(mut self, prec: usize) -> Self {
        let _ = self.v.set_precision(prec, RM);
        self.prec = prec;
        self
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn sinh(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sinh(self.prec, RM, cc)), self.prec)
    }

    pub fn cosh(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cosh(self.prec, RM, cc)), self.prec)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    /// `x^y` for positive `x`.
    pub fn pow(&self, y: &Real) -> Self {
        let p = self.prec.max(y.prec);
        Self::wrap(with_consts(|cc| self.v.pow(&y.v, p, RM, cc)), p)
    }

    /// cos(π·θ) with θ reduced modulo 2 in exact arithmetic first.
    pub fn cos_pi(theta: &BigRational, prec: usize) -> Self {
        let (q, r) = reduce_half_turns(theta);
        // q counts half turns in units of 1/2: 0 → θ∈[0,1/2), 1 → [1/2,1), ...
        let angle = (Self::pi(prec + 16) * Self::from_ratio(&r, prec + 16)).with_precision(prec + 16);
        let v = match q {
            0 => angle.cos(),
            1 => -angle.sin(),
            2 => -angle.cos(),
            _ => angle.sin(),
        };
        v.with_precision(prec)
    }

    /// sin(π·θ), exact reduction as in [`Real::cos_pi`].
    pub fn sin_pi(theta: &BigRational, prec: usize) -> Self {
        let (q, r) = reduce_half_turns(theta);
        let angle = (Self::pi(prec + 16) * Self::from_ratio(&r, prec + 16)).with_precision(prec + 16);
        let v = match q {
            0 => angle.sin(),
            1 => angle.cos(),
            2 => -angle.sin(),
            _ => -angle.cos(),
        };
        v.with_precision(prec)
    }

    pub fn tan_pi(theta: &BigRational, prec: usize) -> Self {
        Self::sin_pi(theta, prec + 8) / Self::cos_pi(theta, prec + 8)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// Three-way comparison; NaN compares as equal.
    pub fn cmp_value(&self, other: &Real) -> std::cmp::Ordering {
        match self.v.cmp(&other.v) {
            Some(x) if x < 0 => std::cmp::Ordering::Less,
            Some(x) if x > 0 => std::cmp::Ordering::Greater,
            _ => std::cmp::Ordering::Equal,
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        if self.cmp_value(other) == std::cmp::Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() {
            None
        } else {
            self.v.exponent().map(i64::from)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        self.v.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Nearest integer (ties to even). `None` for non-finite values.
    pub fn round_to_bigint(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        let r = self.v.round(0, RM);
        float_to_bigint(&r)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if !self.is_finite() {
            return self.v.to_string();
        }
        if self.v.is_zero() {
            return "0".to_string();
        }
        // x ≈ m · 10^(e10 - digits + 1) with m an integer of `digits` digits
        let log10_2 = std::f64::consts::LOG10_2;
        let bexp = self.exponent().unwrap_or(0) as f64;
        let mut e10 = ((bexp - 1.0) * log10_2).floor() as i64;
        let work = self.prec + 64;
        loop {
            let shift = digits as i64 - 1 - e10;
            let scale = Real::from_bigint(&BigInt::from(10u32).pow(shift.unsigned_abs() as u32), work);
            let scaled = if shift >= 0 {
                self.clone().with_precision(work) * scale
            } else {
                self.clone().with_precision(work) / scale
            };
            let m = scaled.round_to_bigint().unwrap_or_default();
            let len = m.abs().to_string().len();
            if len > digits {
                e10 += 1;
                continue;
            }
            if len < digits {
                e10 -= 1;
                continue;
            }
            return format_scientific(&m, digits, e10);
        }
    }
}

fn format_scientific(m: &BigInt, digits: usize, e10: i64) -> String {
    let neg = m.is_negative();
    let s = m.abs().to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    // plain notation only while every printed digit is significant
    if (-5..digits as i64).contains(&e10) {
        let e = e10;
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if int_len >= digits {
                out.push_str(&s);
                out.extend(std::iter::repeat_n('0', int_len - digits));
            } else {
                out.push_str(&s[..int_len]);
                out.push('.');
                out.push_str(&s[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&s);
        }
    } else {
        out.push_str(&s[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push_str(&format!("e{e10}"));
    }
    out
}

/// Splits θ (mod 2) into a quarter-turn index q ∈ {0,1,2,3} and a remainder r ∈ [0, 1/2).
fn reduce_half_turns(theta: &BigRational) -> (u8, BigRational) {
    let two = BigInt::from(2);
    let num = theta.numer().mod_floor(&(theta.denom() * &two));
    let t = BigRational::new(num, theta.denom().clone());
    let half = BigRational::new(BigInt::from(1), two);
    let quarters = (&t / &half).floor().to_integer();
    let q = quarters.to_u8().unwrap_or(0);
    let r = t - half * BigRational::from_integer(quarters);
    (q, r)
}

fn float_to_bigint(x: &BigFloat) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    let (words, _bits, sign, exp, _) = x.as_raw_parts()?;
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    let total_bits = 64 * words.len() as i64;
    let shift = i64::from(exp) - total_bits;
    let v = if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize };
    Some(if sign == Sign::Neg { -v } else { v })
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize).max(1);
        f.write_str(&self.to_decimal(digits))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.clone().neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.clone().neg(), self.prec)
    }
}

/// Complex value with high-precision parts.
#[derive(Clone, Debug)]
pub struct ComplexVal {
    pub re: Real,
    pub im: Real,
}

impl ComplexVal {
    pub fn new(re: Real, im: Real) -> Self {
        ComplexVal { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        ComplexVal::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.precision();
        ComplexVal::new(re, Real::zero(p))
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    /// e^{πiθ} for exact rational θ.
    pub fn expi_pi(theta: &BigRational, prec: usize) -> Self {
        ComplexVal::new(Real::cos_pi(theta, prec), Real::sin_pi(theta, prec))
    }

    pub fn scale(&self, s: &Real) -> Self {
        ComplexVal::new(&self.re * s, &self.im * s)
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        ComplexVal::new(-&self.im, self.re.clone())
    }

    pub fn abs(&self) -> Real {
        (&self.re * &self.re + &self.im * &self.im).sqrt()
    }

    pub fn with_precision(self, prec: usize) -> Self {
        ComplexVal::new(self.re.with_precision(prec), self.im.with_precision(prec))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        let re = self.re.to_decimal(digits);
        let im = self.im.abs().to_decimal(digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{re} {sign} {im}i")
    }
}

impl Add<&ComplexVal> for &ComplexVal {
    type Output = ComplexVal;
    fn add(self, rhs: &ComplexVal) -> ComplexVal {
        ComplexVal::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&ComplexVal> for &ComplexVal {
    type Output = ComplexVal;
    fn sub(self, rhs: &ComplexVal) -> ComplexVal {
        ComplexVal::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&ComplexVal> for &ComplexVal {
    type Output = ComplexVal;
    fn mul(self, rhs: &ComplexVal) -> ComplexVal {
        ComplexVal::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bigint_roundtrip() {
        let x: BigInt = "-123456789012345678901234567890123456789".parse().unwrap();
        let r = Real::from_bigint(&x, 256);
        assert_eq!(r.round_to_bigint().unwrap(), x);
    }

    #[test]
    fn trig_of_rational_turns() {
        let p = 128;
        assert!((Real::cos_pi(&q(2, 3), p).to_f64() + 0.5).abs() < 1e-30);
        assert!((Real::sin_pi(&q(-1, 2), p).to_f64() + 1.0).abs() < 1e-30);
        assert!((Real::sin_pi(&q(7, 6), p).to_f64() + 0.5).abs() < 1e-30);
        assert!((Real::tan_pi(&q(1, 4), p).to_f64() - 1.0).abs() < 1e-30);
        // exact reduction keeps huge numerators accurate
        let big = q(2 * 1_000_000_007 + 1, 3);
        let want = Real::cos_pi(&q(1, 3), p);
        assert!((Real::cos_pi(&big, p) - want).abs().to_f64() < 1e-35);
    }

    #[test]
    fn decimal_formatting() {
        let x = Real::from_ratio(&q(1, 3), 128);
        assert_eq!(x.to_decimal(5), "0.33333");
        assert_eq!(Real::from_i64(-14, 64).to_decimal(3), "-14.0");
        assert_eq!(Real::from_i64(123456, 64).to_decimal(2), "1.2e5");
        assert_eq!(Real::from_i64(123456, 64).to_decimal(6), "123456");
        let big = Real::from_i64(10, 128).powi(30);
        assert_eq!(big.to_decimal(3), "1.00e30");
    }

    #[test]
    fn sinh_large_argument() {
        let x = Real::from_i64(600, 256);
        let s = x.sinh();
        assert!(s.is_finite());
        // log2(sinh 600) ≈ 600/ln 2 - 1
        let e = s.exponent().unwrap();
        assert!((e - 865).abs() <= 1, "exponent {e}");
    }
}
