use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::pbar_series;
use crate::error::{invalid, Error, Result};

/// Default upper limit on `n_max` for exact tables built by the front ends.
pub const DEFAULT_TABLE_CAP: usize = 2500;

/// Nonnegative integers packed as u32 digit runs, one run per entry.
#[derive(Clone, Debug, Default)]
struct PackedRow {
    first_n: usize,
    ends: Vec<u32>,
    digits: Vec<u32>,
}

impl PackedRow {
    fn push(&mut self, v: &BigInt) {
        assert!(!v.is_negative(), "negative rank count");
        self.digits.extend(v.magnitude().to_u32_digits());
        self.ends.push(self.digits.len() as u32);
    }

    fn get(&self, n: usize) -> Option<BigInt> {
        if n < self.first_n {
            return None;
        }
        let i = n - self.first_n;
        let end = *self.ends.get(i)? as usize;
        let start = if i == 0 { 0 } else { self.ends[i - 1] as usize };
        Some(BigInt::from_biguint(Sign::Plus, BigUint::from_slice(&self.digits[start..end])))
    }
}

/// Exact rank counts N̄(m, n) for 0 ≤ n ≤ n_max.
///
/// Only m ≥ 0 is stored; row m holds n ∈ [m+1, n_max] (all n for m = 0),
/// since N̄(m, n) = 0 for |m| ≥ n ≥ 1.
#[derive(Clone, Debug)]
pub struct RankTable {
    n_max: usize,
    pbar: Vec<BigInt>,
    rows: Vec<PackedRow>,
}

impl RankTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// N̄(m, n); zero outside the support, `OutOfRange` past n_max.
    pub fn count(&self, m: i64, n: usize) -> Result<BigInt> {
        self.check(n)?;
        Ok(self.count_unchecked(m, n))
    }

    pub(crate) fn count_unchecked(&self, m: i64, n: usize) -> BigInt {
        let m = m.unsigned_abs() as usize;
        self.rows.get(m).and_then(|r| r.get(n)).unwrap_or_default()
    }

    pub fn pbar(&self, n: usize) -> Result<&BigInt> {
        self.check(n)?;
        Ok(&self.pbar[n])
    }

    /// (m, N̄(m,n)) for 0 ≤ m < max(n, 1).
    pub fn row(&self, n: usize) -> Result<Vec<(i64, BigInt)>> {
        self.check(n)?;
        Ok((0..n.max(1)).map(|m| (m as i64, self.count_unchecked(m as i64, n))).collect())
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::OutOfRange { n, n_max: self.n_max });
        }
        Ok(())
    }

    /// Assembles a table from per-n rows of N̄(m, n), m = 0, 1, ...; missing
    /// entries are zero. Row sums are checked against p̄(n).
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("a rank table needs at least the n = 0 row"));
        }
        let n_max = rows.len() - 1;
        let pbar = pbar_series(n_max).into_coeffs();
        let zero = BigInt::zero();
        let mut packed = vec![PackedRow::default(); n_max.max(1)];
        for (m, row) in packed.iter_mut().enumerate() {
            row.first_n = if m == 0 { 0 } else { m + 1 };
            for r in rows.iter().skip(row.first_n) {
                row.push(r.get(m).unwrap_or(&zero));
            }
        }
        for (n, r) in rows.iter().enumerate() {
            if r.iter().skip(n.max(1)).any(|v| !v.is_zero()) {
                return Err(Error::Consistency(format!("row {n} has a nonzero count at |m| >= n")));
            }
            if r.iter().any(|v| v.is_negative()) {
                return Err(Error::Consistency(format!("row {n} has a negative count")));
            }
            let total: BigInt = r.iter().enumerate().map(|(m, v)| if m == 0 { v.clone() } else { v * 2 }).sum();
            if total != pbar[n] {
                return Err(Error::Consistency(format!("row {n} sums to {total}, expected {}", pbar[n])));
            }
        }
        Ok(RankTable { n_max, pbar, rows: packed })
    }
}

/// Exact rank table by the Lambert-series form of the rank generating
/// function.
///
/// The coefficient of u^m in (2 − u − u⁻¹)/((1 − ux)(1 − x/u)), x = q^k, is
/// 2/(1+x) for m = 0 and −x^{m−1}(1−x)/(1+x) for m ≥ 1. Summing over k with
/// the weights (−1)^k q^{k²+k} collapses every row into a running
/// correction of a single convolution P·V, so the full triangle costs
/// O(n_max^{5/2}) big-integer additions.
pub fn rank_table(n_max: usize) -> RankTable {
    let n = n_max;
    let p = pbar_series(n).into_coeffs();

    // V(e) = Σ_{kd=e, d>k} (−1)^d
    let mut v = vec![0i64; n + 1];
    for k in 1..=n {
        for d in (k + 1)..=(n / k) {
            v[k * d] += if d % 2 == 0 { 1 } else { -1 };
        }
    }
    let mut pv = vec![BigInt::zero(); n + 1];
    for (e, &ve) in v.iter().enumerate() {
        if ve == 0 {
            continue;
        }
        for i in e..=n {
            pv[i] += &p[i - e] * ve;
        }
    }

    let mut rows = Vec::with_capacity(n.max(1));
    let mut row0 = PackedRow::default();
    for i in 0..=n {
        row0.push(&(&p[i] - (&pv[i] << 2)));
    }
    rows.push(row0);

    let mut buf: Vec<BigInt> = Vec::with_capacity(n);
    for m in 1..n {
        let shifts: Vec<(usize, usize)> =
            (1..).map(|k| (k * (k + m), k)).take_while(|&(e, _)| e <= n).collect();
        for &(e, k) in &shifts {
            for i in e..=n {
                if (k + m) % 2 == 0 {
                    pv[i] -= &p[i - e];
                } else {
                    pv[i] += &p[i - e];
                }
            }
        }
        buf.clear();
        let positive = m % 2 == 1;
        for i in (m + 1)..=n {
            let x = &pv[i] << 2;
            buf.push(if positive { x } else { -x });
        }
        for &(e, k) in &shifts {
            let add = k % 2 == 1;
            for i in e.max(m + 1)..=n {
                let t = &p[i - e] << 1;
                if add {
                    buf[i - m - 1] += t;
                } else {
                    buf[i - m - 1] -= t;
                }
            }
        }
        let mut row = PackedRow { first_n: m + 1, ..Default::default() };
        for x in &buf {
            row.push(x);
        }
        rows.push(row);
    }
    RankTable { n_max, pbar: p, rows }
}

/// N̄(a, c, n) = Σ_{m ≡ a (mod c)} N̄(m, n).
pub fn rank_class(a: i64, c: i64, n: usize, t: &RankTable) -> Result<BigInt> {
    if c < 2 {
        return Err(invalid(format!("modulus c = {c} must be at least 2")));
    }
    if !(0..c).contains(&a) {
        return Err(invalid(format!("residue a = {a} must lie in [0, {c})")));
    }
    t.check(n)?;
    let lim = n as i64;
    let first = -lim + (a + lim).mod_floor(&c);
    let mut s = BigInt::zero();
    let mut m = first;
    while m <= lim {
        s += t.count_unchecked(m, n);
        m += c;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{enumerate_overpartitions, rank};
    use std::collections::BTreeMap;

    #[test]
    fn matches_enumeration() {
        let t = rank_table(12);
        for n in 0..=12 {
            let mut hist: BTreeMap<i64, i64> = BTreeMap::new();
            for op in enumerate_overpartitions(n).unwrap() {
                *hist.entry(rank(&op)).or_default() += 1;
            }
            for m in -(n as i64) - 1..=(n as i64) + 1 {
                let want = hist.get(&m).copied().unwrap_or(0);
                assert_eq!(t.count(m, n).unwrap(), BigInt::from(want), "N({m},{n})");
            }
        }
    }

    #[test]
    fn small_values() {
        let t = rank_table(6);
        assert_eq!(t.count(0, 0).unwrap(), BigInt::from(1));
        assert_eq!(t.count(0, 1).unwrap(), BigInt::from(2));
        assert_eq!(t.count(1, 2).unwrap(), BigInt::from(2));
        assert_eq!(t.count(-1, 2).unwrap(), BigInt::from(2));
        assert!(matches!(t.count(0, 7), Err(Error::OutOfRange { n: 7, n_max: 6 })));
        assert_eq!(rank_class(0, 3, 1, &t).unwrap(), BigInt::from(2));
        assert_eq!(rank_class(0, 3, 0, &t).unwrap(), BigInt::from(1));
        assert_eq!(rank_class(2, 3, 0, &t).unwrap(), BigInt::from(0));
    }

    #[test]
    fn from_rows_roundtrip_and_validation() {
        let t = rank_table(20);
        let rows: Vec<Vec<BigInt>> = (0..=20).map(|n| t.row(n).unwrap().into_iter().map(|(_, v)| v).collect()).collect();
        let u = RankTable::from_rows(&rows).unwrap();
        for n in 0..=20 {
            assert_eq!(t.row(n).unwrap(), u.row(n).unwrap());
        }
        let mut bad = rows.clone();
        bad[5][1] += 1;
        assert!(matches!(RankTable::from_rows(&bad), Err(Error::Consistency(_))));
    }

    #[test]
    fn degenerate_sizes() {
        let t = rank_table(0);
        assert_eq!(t.row(0).unwrap(), vec![(0, BigInt::from(1))]);
        let t = rank_table(1);
        assert_eq!(t.row(1).unwrap(), vec![(0, BigInt::from(2))]);
    }
}
