use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest n accepted by [`enumerate_overpartitions`]; p̄(30) is already ~10⁶.
pub const ENUMERATION_CAP: usize = 30;

/// An overpartition: parts in non-increasing order, plus the set of part
/// values whose first occurrence carries an overline.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Overpartition {
    parts: Vec<u32>,
    overlined: BTreeSet<u32>,
}

impl Overpartition {
    pub fn new(mut parts: Vec<u32>, overlined: BTreeSet<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid("parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = overlined.iter().find(|v| !parts.contains(v)) {
            return Err(invalid(format!("overlined value {v} is not a part")));
        }
        Ok(Overpartition { parts, overlined })
    }

    pub fn empty() -> Self {
        Overpartition { parts: Vec::new(), overlined: BTreeSet::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn overlined(&self) -> &BTreeSet<u32> {
        &self.overlined
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("()");
        }
        let mut seen = BTreeSet::new();
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if seen.insert(*p) && self.overlined.contains(p) {
                // combining overline on every digit
                for ch in p.to_string().chars() {
                    write!(f, "{ch}\u{0305}")?;
                }
            } else {
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

/// Dyson rank: largest part minus the number of parts. The empty
/// overpartition has rank 0.
pub fn rank(op: &Overpartition) -> i64 {
    match op.parts.first() {
        None => 0,
        Some(&largest) => i64::from(largest) - op.parts.len() as i64,
    }
}

/// Every overpartition of `n`, in a canonical order.
pub fn enumerate_overpartitions(n: usize) -> Result<Vec<Overpartition>> {
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { n, cap: ENUMERATION_CAP });
    }
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partitions(n as u32, n as u32, &mut parts, &mut |p| {
        let mut distinct: Vec<u32> = p.to_vec();
        distinct.dedup();
        for mask in 0u64..(1u64 << distinct.len()) {
            let overlined = distinct
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            out.push(Overpartition { parts: p.to_vec(), overlined });
        }
    });
    Ok(out)
}

fn partitions(rest: u32, max: u32, parts: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if rest == 0 {
        emit(parts);
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        parts.push(p);
        partitions(rest - p, p, parts, emit);
        parts.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(parts: &[u32], over: &[u32]) -> Overpartition {
        Overpartition::new(parts.to_vec(), over.iter().copied().collect()).unwrap()
    }

    #[test]
    fn overpartitions_of_four() {
        let all = enumerate_overpartitions(4).unwrap();
        assert_eq!(all.len(), 14);
        let shown: BTreeSet<String> = all.iter().map(|o| o.to_string()).collect();
        for s in [
            "4", "4\u{305}", "3+1", "3\u{305}+1", "3+1\u{305}", "3\u{305}+1\u{305}", "2+2", "2\u{305}+2",
            "2+1+1", "2\u{305}+1+1", "2+1\u{305}+1", "2\u{305}+1\u{305}+1", "1+1+1+1", "1\u{305}+1+1+1",
        ] {
            assert!(shown.contains(s), "missing {s}");
        }
    }

    #[test]
    fn small_counts_and_edges() {
        assert_eq!(enumerate_overpartitions(0).unwrap(), vec![Overpartition::empty()]);
        assert_eq!(enumerate_overpartitions(3).unwrap().len(), 8);
        assert!(matches!(enumerate_overpartitions(31), Err(Error::EnumerationCap { n: 31, cap: 30 })));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&op(&[2, 1], &[])), 0);
        assert_eq!(rank(&op(&[1, 1, 1], &[])), -2);
        assert_eq!(rank(&op(&[3], &[3])), 2);
        assert_eq!(rank(&Overpartition::empty()), 0);
    }

    #[test]
    fn validation() {
        assert!(Overpartition::new(vec![2, 0], BTreeSet::new()).is_err());
        assert!(Overpartition::new(vec![2, 1], [3].into_iter().collect()).is_err());
        assert_eq!(op(&[1, 3, 2], &[]).parts(), &[3, 2, 1]);
    }
}
