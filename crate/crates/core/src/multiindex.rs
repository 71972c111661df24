//! Multiindices of bounded length and their lexicographic enumeration.
//!
//! The set `J(n, m)` consists of all `k ∈ ℕ₀ⁿ` with `|k| ≤ m − 1`. Its size is
//! the binomial coefficient `C(n + m − 1, n)`; it indexes the components of
//! every fiber vector and the rows and columns of every symbol matrix.
//!
//! Binomials are evaluated in checked 128-bit arithmetic. The documented
//! supported range is `n + m ≤ 40`; anything that does not fit is reported as
//! [`Error::Overflow`], never wrapped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `ℕ₀ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Ambient dimension `n`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|k| = k₁ + … + kₙ`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `k! = k₁! ⋯ kₙ!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k).map(f64::from).product::<f64>())
            .product()
    }

    /// Entrywise `k + 1`, the index `β` of the matching true-poly-Fock summand.
    pub fn succ(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|k| k + 1).collect())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;

    fn index(&self, r: usize) -> &u32 {
        &self.0[r]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// The ordered set `J(n, m)` together with the bijection `φ: {1..d} → J(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexTable {
    n: usize,
    m: usize,
    indices: Vec<MultiIndex>,
}

impl IndexTable {
    /// Enumerates `J(n, m)` in lexicographic order.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let d = dimension(n, m)?;
        let mut indices = Vec::with_capacity(d);
        let mut current = vec![0u32; n];
        push_lex(&mut current, 0, (m - 1) as u32, &mut indices);
        debug_assert_eq!(indices.len(), d);
        Ok(IndexTable { n, m, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `d = #J(n, m)`.
    pub fn d(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.indices.iter()
    }

    /// `φ(j)` with the one-based convention, `1 ≤ j ≤ d`.
    pub fn phi(&self, j: usize) -> Option<&MultiIndex> {
        j.checked_sub(1).and_then(|i| self.indices.get(i))
    }

    /// Zero-based position of `k`, if `k ∈ J(n, m)`.
    pub fn position(&self, k: &MultiIndex) -> Option<usize> {
        self.indices.binary_search(k).ok()
    }

    pub fn contains(&self, k: &MultiIndex) -> bool {
        self.position(k).is_some()
    }
}

impl<'a> IntoIterator for &'a IndexTable {
    type Item = &'a MultiIndex;
    type IntoIter = std::slice::Iter<'a, MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.indices.iter()
    }
}

fn push_lex(current: &mut [u32], pos: usize, budget: u32, out: &mut Vec<MultiIndex>) {
    if pos == current.len() {
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for k in 0..=budget {
        current[pos] = k;
        push_lex(current, pos + 1, budget - k, out);
    }
    current[pos] = 0;
}

/// `d(n, m) = C(n + m − 1, n)`.
pub fn dimension(n: usize, m: usize) -> Result<usize> {
    if n == 0 || m == 0 {
        return Err(Error::domain(format!(
            "n and m must be positive (got n = {n}, m = {m})"
        )));
    }
    let top = (n as u128)
        .checked_add(m as u128 - 1)
        .ok_or_else(|| Error::Overflow(format!("d({n}, {m})")))?;
    let b = binomial(top, n as u128).ok_or_else(|| Error::Overflow(format!("d({n}, {m})")))?;
    usize::try_from(b).map_err(|_| Error::Overflow(format!("d({n}, {m})")))
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(top: u128, k: u128) -> Option<u128> {
    if k > top {
        return Some(0);
    }
    let k = k.min(top - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (top - i) is divisible by (i + 1) since acc = C(top, i).
        acc = acc.checked_mul(top - i)? / (i + 1);
    }
    Some(acc)
}

/// Enumerates all `k ∈ ℕ₀ⁿ` with `|k| = total`.
pub fn layer(n: usize, total: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(current: &mut [u32], pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
        if pos + 1 == current.len() {
            current[pos] = left;
            out.push(MultiIndex(current.to_vec()));
            return;
        }
        for k in 0..=left {
            current[pos] = k;
            rec(current, pos + 1, left - k, out);
        }
    }
    if n > 0 {
        rec(&mut current, 0, total, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn n2_m3_listing() {
        let t = IndexTable::new(2, 3).unwrap();
        assert_eq!(t.d(), 6);
        let expected = [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [2, 0]];
        for (j, e) in expected.iter().enumerate() {
            assert_eq!(t.phi(j + 1).unwrap(), &mi(e));
        }
        assert!(t.phi(0).is_none());
        assert!(t.phi(7).is_none());
    }

    #[test]
    fn single_zero_index() {
        let t = IndexTable::new(1, 1).unwrap();
        assert_eq!(t.indices(), &[mi(&[0])]);
    }

    #[test]
    fn brute_force_n3_m4() {
        let mut brute = Vec::new();
        for a in 0..4u32 {
            for b in 0..4u32 {
                for c in 0..4u32 {
                    if a + b + c <= 3 {
                        brute.push(mi(&[a, b, c]));
                    }
                }
            }
        }
        brute.sort();
        let t = IndexTable::new(3, 4).unwrap();
        assert_eq!(t.d(), 20);
        assert_eq!(t.indices(), brute.as_slice());
    }

    #[test]
    fn dimension_values() {
        assert_eq!(dimension(2, 3).unwrap(), 6);
        for n in 1..10 {
            assert_eq!(dimension(n, 1).unwrap(), 1);
        }
        // |k| ≤ 4 in ℕ₀⁴, counted directly.
        let count = (0..5u32)
            .flat_map(|a| (0..5u32).map(move |b| (a, b)))
            .flat_map(|(a, b)| (0..5u32).map(move |c| (a, b, c)))
            .flat_map(|(a, b, c)| (0..5u32).map(move |e| a + b + c + e))
            .filter(|&s| s <= 4)
            .count();
        assert_eq!(count, 70);
        assert_eq!(dimension(4, 5).unwrap(), 70);
        assert_eq!(dimension(20, 20).unwrap(), 68923264410);
    }

    #[test]
    fn zero_arguments_rejected() {
        assert!(matches!(dimension(0, 3), Err(Error::Domain(_))));
        assert!(matches!(IndexTable::new(2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(dimension(100, 100), Err(Error::Overflow(_))));
        assert!(binomial(200, 100).is_none());
    }

    #[test]
    fn layer_union_matches_table() {
        for n in 1..=8 {
            for m in 1..=8 {
                let t = IndexTable::new(n, m).unwrap();
                assert_eq!(t.d(), dimension(n, m).unwrap());
                let mut union: Vec<_> = (0..m as u32).flat_map(|j| layer(n, j)).collect();
                union.sort();
                assert_eq!(union.as_slice(), t.indices());
                assert!(t.indices().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn position_inverts_phi() {
        let t = IndexTable::new(3, 3).unwrap();
        for (i, k) in t.iter().enumerate() {
            assert_eq!(t.position(k), Some(i));
        }
        assert_eq!(t.position(&mi(&[3, 0, 0])), None);
    }
}
