//! Exact q-series: overpartition counts, the rank table, residue classes and
//! root-of-unity evaluations.

mod cache;
mod group_ring;
mod overpartition;
mod table;

pub use cache::{load_table, save_table_csv, save_table_json, CACHE_FORMAT_VERSION};
pub use group_ring::{
    class_vector, cyclotomic_poly, orthogonality_decompose, zeta_eval, zeta_eval_prec, GroupRingElt,
    ZetaValue,
};
pub use overpartition::{enumerate_overpartitions, rank, Overpartition, ENUMERATION_CAP};
pub use table::{rank_class, rank_table, RankTable, DEFAULT_TABLE_CAP};

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// Power series in q with integer coefficients, truncated at `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(order: usize) -> Self {
        IntSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Takes ownership of the coefficients; an empty vector is rejected.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("a series needs at least the constant coefficient"));
        }
        Ok(IntSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    /// Multiplies in place by (1 + s·q^j) for s = ±1.
    pub fn mul_binomial(&mut self, j: usize, s: i32) {
        if j == 0 || j > self.order() {
            if j == 0 {
                let f = BigInt::from(1 + s);
                for c in &mut self.coeffs {
                    *c *= &f;
                }
            }
            return;
        }
        for n in (j..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            if s > 0 {
                hi[0] += &lo[n - j];
            } else {
                hi[0] -= &lo[n - j];
            }
        }
    }

    /// Divides in place by (1 − q^j), j ≥ 1.
    pub fn div_one_minus(&mut self, j: usize) {
        assert!(j >= 1, "1 - q^0 is not a unit");
        for n in j..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            hi[0] += &lo[n - j];
        }
    }

    /// Multiplicative inverse; the constant coefficient must be ±1.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let sign = if c0.is_one() {
            BigInt::one()
        } else if *c0 == -BigInt::one() {
            -BigInt::one()
        } else {
            return Err(invalid("series inverse needs constant coefficient ±1"));
        };
        let mut out = Self::zero(self.order());
        out.coeffs[0] = sign.clone();
        for n in 1..=self.order() {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out.coeffs[n - k];
                }
            }
            out.coeffs[n] = -(acc * &sign);
        }
        Ok(out)
    }
}

impl Add for &IntSeries {
    type Output = IntSeries;
    fn add(self, rhs: &IntSeries) -> IntSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect();
        IntSeries { coeffs }
    }
}

impl Sub for &IntSeries {
    type Output = IntSeries;
    fn sub(self, rhs: &IntSeries) -> IntSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect();
        IntSeries { coeffs }
    }
}

impl Mul for &IntSeries {
    type Output = IntSeries;
    fn mul(self, rhs: &IntSeries) -> IntSeries {
        let order = self.order().min(rhs.order());
        let mut out = IntSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

/// p̄(0..=n_max) from the product Π (1 + q^j)/(1 − q^j).
pub fn pbar_series(n_max: usize) -> IntSeries {
    let mut s = IntSeries::one(n_max);
    for j in 1..=n_max {
        s.mul_binomial(j, 1);
        s.div_one_minus(j);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pbar_small() {
        assert_eq!(pbar_series(4).coeffs(), ints(&[1, 2, 4, 8, 14]).as_slice());
        assert_eq!(pbar_series(0).coeffs(), ints(&[1]).as_slice());
        // OEIS A015128
        let known = [1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232, 344, 504];
        assert_eq!(pbar_series(12).coeffs(), ints(&known).as_slice());
    }

    #[test]
    fn series_arithmetic_respects_order() {
        let a = IntSeries::from_coeffs(ints(&[1, 1, 1])).unwrap();
        let b = IntSeries::from_coeffs(ints(&[1, -1])).unwrap();
        let p = &a * &b;
        assert_eq!(p.order(), 1);
        assert_eq!(p.coeffs(), ints(&[1, 0]).as_slice());
        let inv = a.inverse().unwrap();
        assert_eq!((&a * &inv).coeffs(), ints(&[1, 0, 0]).as_slice());
        assert!(IntSeries::from_coeffs(ints(&[2, 1])).unwrap().inverse().is_err());
    }

    #[test]
    fn pbar_is_quotient_of_eta_products() {
        // (−q;q)∞ · 1/(q;q)∞ computed as two separate series.
        let n = 40;
        let mut num = IntSeries::one(n);
        let mut den = IntSeries::one(n);
        for j in 1..=n {
            num.mul_binomial(j, 1);
            den.mul_binomial(j, -1);
        }
        let q = &num * &den.inverse().unwrap();
        assert_eq!(q, pbar_series(n));
    }
}
