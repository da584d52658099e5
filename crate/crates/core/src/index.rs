//! Multi-indices, lexicographic order, weight enumeration and margin tables.
//!
//! Positions are 1-based wherever an index is part of the public vocabulary
//! (`succ_index`, operator column numbers); storage is 0-based.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};
use crate::scalar::factorial;

/// A finite sequence of nonnegative integers.
///
/// The derived `Ord` is lexicographic, which agrees with [`lex_compare`] on
/// indices of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// The unit index with a single 1 at 0-based position `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut e = vec![0; len];
        e[pos] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m|`
    pub fn modulus(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `m! = m₁!⋯m_r!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn get(&self, pos: usize) -> u32 {
        self.0[pos]
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len(), "multi-index length mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with(&self, pos: usize, value: u32) -> MultiIndex {
        let mut e = self.0.clone();
        e[pos] = value;
        MultiIndex(e)
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
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

/// A `p × q` matrix of nonnegative integers, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixIndex {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl MatrixIndex {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[MultiIndex]) -> Result<Self> {
        let cols = rows.first().map_or(0, MultiIndex::len);
        for r in rows {
            check_len(cols, r.len())?;
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flat_map(|r| r.entries().iter().copied()).collect(),
        })
    }

    /// The single-row matrix index used for `p = 1`.
    pub fn from_row(row: &MultiIndex) -> Self {
        Self { rows: 1, cols: row.len(), entries: row.entries().to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> MultiIndex {
        MultiIndex(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vec(&self) -> Vec<MultiIndex> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// `c(γ)`: the p-vector of row sums.
    pub fn row_sums(&self) -> MultiIndex {
        MultiIndex((0..self.rows).map(|i| self.row(i).modulus()).collect())
    }

    /// `r(γ)`: the q-vector obtained by adding the rows together.
    pub fn col_sums(&self) -> MultiIndex {
        MultiIndex(
            (0..self.cols)
                .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
                .collect(),
        )
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// `γ! = Π γ_(i)!`
    pub fn factorial(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k))
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn add(&self, other: &MatrixIndex) -> MatrixIndex {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatrixIndex {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Lexicographic comparison of two indices of equal length.
pub fn lex_compare(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    check_len(a.len(), b.len())?;
    Ok(a.0.cmp(&b.0))
}

/// Componentwise `a ≤ b`.
pub fn partial_leq(a: &MultiIndex, b: &MultiIndex) -> Result<bool> {
    check_len(a.len(), b.len())?;
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| x <= y))
}

/// The immediate lexicographic successor of `η` among indices with the same
/// modulus, or `None` for `(n, 0, …, 0)`.
pub fn lex_successor(eta: &MultiIndex) -> Option<MultiIndex> {
    let e = &eta.0;
    // Rightmost position that still has mass strictly to its right.
    let mut tail = 0u32;
    for j in (0..e.len()).rev() {
        if tail > 0 {
            let mut next = e[..j].to_vec();
            next.push(e[j] + 1);
            next.extend(std::iter::repeat_n(0, e.len() - j - 1));
            *next.last_mut().expect("nonempty") += tail - 1;
            return Some(MultiIndex(next));
        }
        tail += e[j];
    }
    None
}

/// `s(η)`: the 1-based position where `η` first differs from its immediate
/// successor, or 0 when `η = (n, 0, …, 0)`.
pub fn succ_index(eta: &MultiIndex) -> usize {
    match lex_successor(eta) {
        Some(next) => eta.0.iter().zip(&next.0).position(|(a, b)| a != b).map_or(0, |i| i + 1),
        None => 0,
    }
}

/// All `η ∈ N₀^q(n)` in increasing lexicographic order.
pub fn enumerate_weight(n: u32, q: usize) -> Vec<MultiIndex> {
    enumerate_bounded(n, &vec![n; q])
}

/// All `η` with `|η| = n` and `η ≤ upper` componentwise, in increasing
/// lexicographic order.
pub fn enumerate_bounded(n: u32, upper: &[u32]) -> Vec<MultiIndex> {
    fn rec(pos: usize, left: u32, upper: &[u32], suffix_cap: &[u32], cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos == upper.len() {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
            }
            return;
        }
        // Remaining positions must be able to absorb what is left.
        let rest_cap = suffix_cap[pos + 1];
        let lo = left.saturating_sub(rest_cap);
        let hi = left.min(upper[pos]);
        for k in lo..=hi {
            cur.push(k);
            rec(pos + 1, left - k, upper, suffix_cap, cur, out);
            cur.pop();
        }
    }
    let q = upper.len();
    let mut suffix_cap = vec![0u32; q + 1];
    for j in (0..q).rev() {
        suffix_cap[j] = suffix_cap[j + 1].saturating_add(upper[j]);
    }
    let mut out = Vec::new();
    if q == 0 {
        if n == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    if suffix_cap[0] < n {
        return out;
    }
    rec(0, n, upper, &suffix_cap, &mut Vec::with_capacity(q), &mut out);
    out
}

/// `d(n, q) = C(n + q − 1, q − 1)`.
pub fn weight_count(n: u32, q: usize) -> usize {
    if q == 0 {
        return usize::from(n == 0);
    }
    let (top, k) = (n as usize + q - 1, q - 1);
    (1..=k).fold(1usize, |acc, i| acc * (top - k + i) / i)
}

/// All nonnegative `p × q` integer matrices with row sums `row_sums` (length
/// p) and column totals `col_sums` (length q).
pub fn enumerate_margin_tables(row_sums: &MultiIndex, col_sums: &MultiIndex) -> Vec<MatrixIndex> {
    let (p, q) = (row_sums.len(), col_sums.len());
    let mut out = Vec::new();
    if row_sums.modulus() != col_sums.modulus() {
        return out;
    }
    fn rec(
        i: usize,
        rows: &[u32],
        remaining: &mut Vec<u32>,
        acc: &mut MatrixIndex,
        out: &mut Vec<MatrixIndex>,
    ) {
        if i == rows.len() {
            if remaining.iter().all(|&r| r == 0) {
                out.push(acc.clone());
            }
            return;
        }
        if i + 1 == rows.len() {
            // The last row is forced to be whatever is left.
            if remaining.iter().sum::<u32>() == rows[i] {
                for (j, r) in remaining.iter().enumerate() {
                    acc.set(i, j, *r);
                }
                out.push(acc.clone());
            }
            return;
        }
        for row in enumerate_bounded(rows[i], remaining) {
            for (j, &k) in row.entries().iter().enumerate() {
                acc.set(i, j, k);
                remaining[j] -= k;
            }
            rec(i + 1, rows, remaining, acc, out);
            for (j, &k) in row.entries().iter().enumerate() {
                remaining[j] += k;
            }
        }
    }
    let mut remaining = col_sums.entries().to_vec();
    let mut acc = MatrixIndex::zeros(p, q);
    if p == 0 {
        if col_sums.is_zero() {
            out.push(acc);
        }
        return out;
    }
    rec(0, row_sums.entries(), &mut remaining, &mut acc, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&mi(&[0, 1, 1]), &mi(&[0, 2, 0])).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&mi(&[1, 0, 1]), &mi(&[1, 1, 0])).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&mi(&[2, 3]), &mi(&[2, 3])).unwrap(), Ordering::Equal);
        assert!(lex_compare(&mi(&[1]), &mi(&[1, 0])).is_err());
    }

    #[test]
    fn partial_order_examples() {
        let nu = mi(&[1, 3, 1]);
        assert!(partial_leq(&mi(&[0, 1, 1]), &nu).unwrap());
        assert!(partial_leq(&mi(&[0, 2, 0]), &nu).unwrap());
        assert!(!partial_leq(&mi(&[2, 0, 0]), &nu).unwrap());
        assert!(partial_leq(&mi(&[1]), &mi(&[1, 2])).is_err());
    }

    #[test]
    fn successor_positions() {
        assert_eq!(succ_index(&mi(&[3, 1, 2, 4, 0])), 3);
        assert_eq!(succ_index(&mi(&[2, 0, 0])), 0);
        assert_eq!(succ_index(&mi(&[0, 0, 2])), 2);
        let table = [
            ([0, 0, 2], 2),
            ([0, 1, 1], 2),
            ([0, 2, 0], 1),
            ([1, 0, 1], 2),
            ([1, 1, 0], 1),
            ([2, 0, 0], 0),
        ];
        for (eta, s) in table {
            assert_eq!(succ_index(&mi(&eta)), s, "{eta:?}");
        }
        assert_eq!(succ_index(&mi(&[5])), 0);
        assert_eq!(succ_index(&mi(&[0, 0, 0])), 0);
    }

    #[test]
    fn successor_is_the_next_enumerated_index() {
        for q in 1..=4 {
            for n in 0..=5 {
                let all = enumerate_weight(n, q);
                for w in all.windows(2) {
                    assert_eq!(lex_successor(&w[0]).as_ref(), Some(&w[1]));
                }
                assert_eq!(lex_successor(all.last().unwrap()), None);
            }
        }
    }

    #[test]
    fn weight_enumeration_matches_table() {
        let rows: Vec<MultiIndex> = [[0, 0, 2], [0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0], [2, 0, 0]]
            .iter()
            .map(|r| mi(r))
            .collect();
        assert_eq!(enumerate_weight(2, 3), rows);
        assert_eq!(weight_count(2, 3), 6);
        assert_eq!(enumerate_weight(0, 4), vec![MultiIndex::zeros(4)]);
        for q in 1..=4 {
            for n in 0..=6 {
                assert_eq!(enumerate_weight(n, q).len(), weight_count(n, q));
            }
        }
    }

    #[test]
    fn bounded_enumeration() {
        let got = enumerate_bounded(2, &[1, 3, 1]);
        let want: Vec<MultiIndex> = [[0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0]].iter().map(|r| mi(r)).collect();
        assert_eq!(got, want);
        assert!(enumerate_bounded(5, &[1, 1]).is_empty());
    }

    #[test]
    fn margin_tables_small_cases() {
        let one_row = enumerate_margin_tables(&mi(&[3]), &mi(&[1, 0, 2]));
        assert_eq!(one_row, vec![MatrixIndex::from_row(&mi(&[1, 0, 2]))]);
        assert!(enumerate_margin_tables(&mi(&[2]), &mi(&[1, 0])).is_empty());

        let mut got = enumerate_margin_tables(&mi(&[1, 1]), &mi(&[1, 1]));
        got.sort();
        let a = MatrixIndex::from_rows(&[mi(&[0, 1]), mi(&[1, 0])]).unwrap();
        let b = MatrixIndex::from_rows(&[mi(&[1, 0]), mi(&[0, 1])]).unwrap();
        assert_eq!(got, vec![a, b]);
    }

    #[test]
    fn matrix_index_sums() {
        let g = MatrixIndex::from_rows(&[mi(&[1, 2, 0]), mi(&[0, 1, 3])]).unwrap();
        assert_eq!(g.row_sums(), mi(&[3, 4]));
        assert_eq!(g.col_sums(), mi(&[1, 3, 3]));
        assert_eq!(g.factorial(), BigInt::from(2 * 6));
        assert_eq!(g.row(1), mi(&[0, 1, 3]));
    }
}
