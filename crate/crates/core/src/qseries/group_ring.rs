use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::table::{rank_class, RankTable};
use crate::arith::frac;
use crate::error::{invalid, Error, Result};
use crate::hp::{ComplexVal, Real, DEFAULT_PRECISION};

/// Element Σ_j coeffs[j]·ζ^j of the integral group ring of Z/c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElt {
    c: usize,
    coeffs: Vec<BigInt>,
}

impl GroupRingElt {
    pub fn zero(c: usize) -> Self {
        assert!(c >= 1, "group ring modulus must be positive");
        GroupRingElt { c, coeffs: vec![BigInt::zero(); c] }
    }

    /// The basis element ζ^j.
    pub fn monomial(c: usize, j: i64) -> Self {
        let mut e = Self::zero(c);
        e.coeffs[j.rem_euclid(c as i64) as usize] = BigInt::one();
        e
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("group ring modulus must be positive"));
        }
        Ok(GroupRingElt { c: coeffs.len(), coeffs })
    }

    pub fn modulus(&self) -> usize {
        self.c
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add_term(&mut self, j: i64, v: &BigInt) {
        let i = j.rem_euclid(self.c as i64) as usize;
        self.coeffs[i] += v;
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        GroupRingElt { c: self.c, coeffs: self.coeffs.iter().map(|x| x * s).collect() }
    }

    /// Multiplication by ζ^j.
    pub fn rotate(&self, j: i64) -> Self {
        let mut out = Self::zero(self.c);
        for (i, x) in self.coeffs.iter().enumerate() {
            out.add_term(i as i64 + j, x);
        }
        out
    }

    /// Value at ζ_c = e^{2πi/c}.
    pub fn eval(&self, prec: usize) -> ComplexVal {
        let mut acc = ComplexVal::zero(prec);
        for (j, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let w = ComplexVal::expi_pi(&frac(2 * j as i64, self.c as i64), prec);
            acc = &acc + &w.scale(&Real::from_bigint(x, prec));
        }
        acc
    }

    /// Canonical representative in Z[x]/Φ_c(x), coefficients of degree < φ(c).
    ///
    /// Two elements take the same value at ζ_c exactly when their reductions
    /// agree, which is how identities in Q(ζ_c) are checked without rounding.
    pub fn cyclotomic_reduce(&self) -> Vec<BigInt> {
        let phi = cyclotomic_poly(self.c);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        // Φ_c is monic, so long division stays integral.
        for top in (deg..r.len()).rev() {
            let q = r[top].clone();
            if q.is_zero() {
                continue;
            }
            for (i, p) in phi.iter().enumerate() {
                r[top - deg + i] -= &q * p;
            }
        }
        r.truncate(deg);
        r
    }

    /// Equality of values at ζ_c.
    pub fn same_value(&self, other: &GroupRingElt) -> bool {
        assert_eq!(self.c, other.c, "group ring moduli differ");
        (self - other).cyclotomic_reduce().iter().all(Zero::is_zero)
    }
}

impl Add for &GroupRingElt {
    type Output = GroupRingElt;
    fn add(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.c, rhs.c, "group ring moduli differ");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        GroupRingElt { c: self.c, coeffs }
    }
}

impl Sub for &GroupRingElt {
    type Output = GroupRingElt;
    fn sub(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.c, rhs.c, "group ring moduli differ");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        GroupRingElt { c: self.c, coeffs }
    }
}

impl Mul for &GroupRingElt {
    type Output = GroupRingElt;
    fn mul(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.c, rhs.c, "group ring moduli differ");
        let mut out = GroupRingElt::zero(self.c);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[(i + j) % self.c] += a * b;
                }
            }
        }
        out
    }
}

/// Φ_c as integer coefficients, constant term first.
pub fn cyclotomic_poly(c: usize) -> Vec<BigInt> {
    assert!(c >= 1);
    // x^c − 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); c + 1];
    num[0] = -BigInt::one();
    num[c] = BigInt::one();
    for d in (1..c).filter(|d| c.is_multiple_of(*d)) {
        num = poly_div_exact(&num, &cyclotomic_poly(d));
    }
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - dn];
    for top in (dn..r.len()).rev() {
        let c = r[top].clone();
        q[top - dn] = c.clone();
        for (i, p) in den.iter().enumerate() {
            r[top - dn + i] -= &c * p;
        }
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

/// (N̄(0,c,n), …, N̄(c−1,c,n)).
pub fn class_vector(c: i64, n: usize, t: &RankTable) -> Result<Vec<BigInt>> {
    (0..c).map(|a| rank_class(a, c, n, t)).collect()
}

/// A(a/c; n) in exact and numeric form.
#[derive(Clone, Debug)]
pub struct ZetaValue {
    /// Σ_j N̄(j,c,n)·ζ^{aj}.
    pub element: GroupRingElt,
    pub value: Real,
    /// Imaginary part of the numeric evaluation (zero up to round-off).
    pub imag: Real,
}

fn check_unit(a: i64, c: i64) -> Result<()> {
    if c < 2 || !(1..c).contains(&a) {
        return Err(invalid(format!("need 0 < a < c, got a = {a}, c = {c}")));
    }
    if a.gcd(&c) != 1 {
        return Err(Error::NotCoprime(a, c));
    }
    Ok(())
}

/// A(a/c; n) at the default precision.
pub fn zeta_eval(a: i64, c: i64, n: usize, t: &RankTable) -> Result<ZetaValue> {
    zeta_eval_prec(a, c, n, t, DEFAULT_PRECISION)
}

/// A(a/c; n) with `prec` bits beyond the size of p̄(n); the cosine sum
/// cancels down from magnitude p̄(n), so the working precision grows with n.
pub fn zeta_eval_prec(a: i64, c: i64, n: usize, t: &RankTable, prec: usize) -> Result<ZetaValue> {
    check_unit(a, c)?;
    let classes = class_vector(c, n, t)?;
    let mut element = GroupRingElt::zero(c as usize);
    for (j, v) in classes.iter().enumerate() {
        element.add_term(a * j as i64, v);
    }
    let work = prec + t.pbar(n)?.bits() as usize + 32;
    let z = element.eval(work);
    Ok(ZetaValue { element, value: z.re.with_precision(prec), imag: z.im.with_precision(prec) })
}

/// N̄(a,c,n) recomputed as p̄(n)/c + (1/c)Σ_{j=1}^{c−1} ζ^{−aj}·O(ζ^j;q)[n].
///
/// The sum is formed exactly in the group ring and reduced modulo Φ_c; a
/// non-integral or non-rational outcome is an internal-consistency failure.
pub fn orthogonality_decompose(a: i64, c: i64, n: usize, t: &RankTable) -> Result<BigInt> {
    let classes = class_vector(c, n, t)?;
    if !(0..c).contains(&a) {
        return Err(invalid(format!("residue a = {a} must lie in [0, {c})")));
    }
    let cu = c as usize;
    let mut total = GroupRingElt::zero(cu);
    total.add_term(0, t.pbar(n)?);
    for j in 1..c {
        // O(ζ^j;q)[n] = Σ_l N̄(l,c,n) ζ^{jl}
        let mut o = GroupRingElt::zero(cu);
        for (l, v) in classes.iter().enumerate() {
            o.add_term(j * l as i64, v);
        }
        total = &total + &o.rotate(-a * j);
    }
    let r = total.cyclotomic_reduce();
    if r.iter().skip(1).any(|x| !x.is_zero()) {
        return Err(Error::Consistency(format!(
            "orthogonality sum for ({a},{c},{n}) is not rational: {r:?}"
        )));
    }
    let (q, rem) = r[0].div_rem(&BigInt::from(c));
    if !rem.is_zero() {
        return Err(Error::Consistency(format!(
            "orthogonality sum for ({a},{c},{n}) is {} / {c}, not an integer",
            r[0]
        )));
    }
    if q.is_negative() {
        return Err(Error::Consistency(format!("negative class count for ({a},{c},{n})")));
    }
    Ok(q)
}
