//! Bit-packed vectors and matrices over GF(2).
//!
//! Coordinates are numbered from the left. Coordinate `0` lives in the most
//! significant bit of the first word, so the packed words of two vectors
//! compare in the same order as their `0`/`1` strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

fn bit_mask(i: usize) -> u64 {
    1u64 << (WORD_BITS - 1 - (i % WORD_BITS))
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from the low `len` bits of `word`; bit `len - 1` is
    /// coordinate `0`.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_word needs len <= 64, got {len}");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = word << (WORD_BITS - len);
        }
        v.clear_tail();
        v
    }

    /// Inverse of [`BitVector::from_word`].
    pub fn to_word(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_word needs len <= 64, got {}", self.len);
        if self.len == 0 {
            0
        } else {
            self.words[0] >> (WORD_BITS - self.len)
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !(u64::MAX >> rem);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] & bit_mask(i) != 0
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        let m = bit_mask(i);
        if value {
            self.words[i / WORD_BITS] |= m;
        } else {
            self.words[i / WORD_BITS] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= bit_mask(i);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// In-place XOR. Panics on a length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Number of coordinates that are 1 in both vectors.
    pub fn mu(&self, other: &BitVector) -> Result<usize> {
        self.check_len(other)?;
        Ok(self.mu_unchecked(other))
    }

    pub(crate) fn mu_unchecked(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn inner_product(&self, other: &BitVector) -> Result<bool> {
        Ok(self.mu(other)? % 2 == 1)
    }

    /// Index of the leftmost 1, if any.
    pub fn leading_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.leading_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// `out[j] = self[perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> BitVector {
        assert_eq!(perm.len(), self.len, "permutation length mismatch");
        let mut out = BitVector::zeros(self.len);
        for (j, &src) in perm.iter().enumerate() {
            if self.get(src) {
                out.set(j, true);
            }
        }
        out
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        let mut out = BitVector::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Error returned when a `0`/`1` string cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseBitsError {
    pub position: usize,
    pub found: char,
}

impl fmt::Display for ParseBitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unexpected character {:?} at position {}", self.found, self.position)
    }
}

impl std::error::Error for ParseBitsError {}

impl FromStr for BitVector {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(ParseBitsError { position, found }),
            }
        }
        Ok(BitVector::from_bits(&bits))
    }
}

/// Result of [`BitMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// An ordered list of equal-length rows over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                left: cols,
                right: bad.len(),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Builds a matrix from rows, taking the column count from the first row.
    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        Self::new(rows, cols)
    }

    pub fn empty(cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn identity(k: usize) -> Self {
        BitMatrix {
            cols: k,
            rows: (0..k).map(|i| BitVector::unit(k, i)).collect(),
        }
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| {
                s.as_ref()
                    .parse::<BitVector>()
                    .map_err(|e| Error::params(format!("bad row {:?}: {e}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            cols: self.rows.len(),
            rows: (0..self.cols).map(|j| self.column(j)).collect(),
        }
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            rows: self.rows.iter().map(|r| r.permute(perm)).collect(),
        }
    }

    pub fn hstack(&self, right: &BitMatrix) -> Result<BitMatrix> {
        if self.row_count() != right.row_count() {
            return Err(Error::LengthMismatch {
                left: self.row_count(),
                right: right.row_count(),
            });
        }
        Ok(BitMatrix {
            cols: self.cols + right.cols,
            rows: self
                .rows
                .iter()
                .zip(&right.rows)
                .map(|(a, b)| a.concat(b))
                .collect(),
        })
    }

    pub fn vstack(&self, below: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != below.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: below.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(below.rows.iter().cloned());
        Ok(BitMatrix { cols: self.cols, rows })
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Submatrix of columns `start..end`.
    pub fn column_slice(&self, start: usize, end: usize) -> BitMatrix {
        BitMatrix {
            cols: end - start,
            rows: self.rows.iter().map(|r| r.slice(start, end)).collect(),
        }
    }

    /// Reduced row-echelon form. Zero rows are kept at the bottom so the
    /// shape is unchanged.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Echelon {
            matrix: BitMatrix { cols: self.cols, rows },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// The nonzero rows of the reduced echelon form: the canonical basis of
    /// the row space.
    pub fn row_space_basis(&self) -> BitMatrix {
        let e = self.rref();
        let mut rows = e.matrix.rows;
        rows.truncate(e.rank);
        BitMatrix { cols: self.cols, rows }
    }

    /// Rewrites a full-rank matrix as `(I_k | A)` after a column permutation.
    ///
    /// Returns the standard-form matrix together with `perm`, where column `j`
    /// of the result comes from column `perm[j]` of `self`.
    pub fn standard_form(&self) -> Result<(BitMatrix, Vec<usize>)> {
        let e = self.rref();
        if e.rank != self.row_count() {
            return Err(Error::RankDeficient {
                rank: e.rank,
                expected: self.row_count(),
            });
        }
        let mut perm = e.pivots.clone();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        perm.extend((0..self.cols).filter(|&c| !is_pivot[c]));
        Ok((e.matrix.permute_columns(&perm), perm))
    }

    /// A full-rank basis of the dual space `{x : M x^T = 0}`.
    ///
    /// For `M = (I_k | A)` this is exactly `(A^T | I_{n-k})`.
    pub fn dual_basis(&self) -> Result<BitMatrix> {
        let e = self.rref();
        if e.rank != self.row_count() {
            return Err(Error::RankDeficient {
                rank: e.rank,
                expected: self.row_count(),
            });
        }
        Ok(kernel_from_echelon(&e, self.cols))
    }

    /// Like [`BitMatrix::dual_basis`] but accepts rank-deficient input.
    pub fn orthogonal_complement(&self) -> BitMatrix {
        kernel_from_echelon(&self.rref(), self.cols)
    }

    pub fn spans(&self, v: &BitVector) -> bool {
        let e = self.rref();
        reduce_against(&e, v).is_zero()
    }

    /// `self * other^T`, a `row_count x other.row_count` matrix.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: other.cols,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|a| {
                let bits: Vec<bool> = other.rows.iter().map(|b| a.mu_unchecked(b) % 2 == 1).collect();
                BitVector::from_bits(&bits)
            })
            .collect();
        Ok(BitMatrix {
            cols: other.row_count(),
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }
}

fn kernel_from_echelon(e: &Echelon, cols: usize) -> BitMatrix {
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let rows = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut h = BitVector::unit(cols, f);
            for (i, &p) in e.pivots.iter().enumerate() {
                if e.matrix.rows[i].get(f) {
                    h.set(p, true);
                }
            }
            h
        })
        .collect();
    BitMatrix { cols, rows }
}

/// Reduces `v` modulo the row space of an echelon form.
pub(crate) fn reduce_against(e: &Echelon, v: &BitVector) -> BitVector {
    let mut r = v.clone();
    for (i, &p) in e.pivots.iter().enumerate() {
        if r.get(p) {
            r.xor_assign(&e.matrix.rows[i]);
        }
    }
    r
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix[{}x{}]", self.rows.len(), self.cols)?;
        for r in &self.rows {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}

/// Sum of two row spaces, as a canonical basis.
pub fn space_sum(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    Ok(a.vstack(b)?.row_space_basis())
}

/// Intersection of two row spaces, computed as `(A^⊥ + B^⊥)^⊥`.
pub fn space_intersection(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    let dual_sum = space_sum(&a.orthogonal_complement(), &b.orthogonal_complement())?;
    Ok(dual_sum.orthogonal_complement().row_space_basis())
}

pub fn same_row_space(a: &BitMatrix, b: &BitMatrix) -> bool {
    a.col_count() == b.col_count() && a.row_space_basis() == b.row_space_basis()
}

/// Single-word helpers for lengths up to 64.
///
/// A word holds coordinate `0` in bit `n - 1` and coordinate `n - 1` in bit
/// `0`, matching [`BitVector::to_word`].
pub mod word {
    /// Reduces `rows` in place to the canonical reduced echelon basis of their
    /// span (pivots on leading ones, rows ordered by pivot, zero rows dropped).
    pub fn rref(rows: &mut Vec<u64>) -> usize {
        let mut rank = 0;
        while rank < rows.len() {
            // pick the row whose leading one is leftmost among the unreduced
            let (idx, &best) = rows[rank..]
                .iter()
                .enumerate()
                .max_by_key(|(_, &w)| w.checked_ilog2().map_or(-1, |l| l as i64))
                .unwrap();
            if best == 0 {
                break;
            }
            rows.swap(rank, rank + idx);
            let pivot = rows[rank];
            let bit = 1u64 << pivot.ilog2();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        rank
    }

    /// Whether `v` lies in the span of a basis produced by [`rref`].
    pub fn in_span(basis: &[u64], v: u64) -> bool {
        let mut r = v;
        for &b in basis {
            let bit = 1u64 << b.ilog2();
            if r & bit != 0 {
                r ^= b;
            }
        }
        r == 0
    }

    /// Orthogonal complement of the span of a reduced basis, for length `n`.
    pub fn dual(basis: &[u64], n: usize) -> Vec<u64> {
        let pivots: u64 = basis.iter().map(|b| 1u64 << b.ilog2()).fold(0, |a, b| a | b);
        let mut out = Vec::with_capacity(n - basis.len());
        for bitpos in (0..n).rev() {
            let f = 1u64 << bitpos;
            if pivots & f != 0 {
                continue;
            }
            let mut h = f;
            for &b in basis {
                if b & f != 0 {
                    h |= 1u64 << b.ilog2();
                }
            }
            out.push(h);
        }
        out
    }

    /// All `2^k` vectors of the span of `basis`; entry `i` is the sum of the
    /// basis rows selected by the bits of `i`.
    pub fn span(basis: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(1 << basis.len());
        out.push(0);
        for &b in basis {
            let len = out.len();
            for i in 0..len {
                let v = out[i] ^ b;
                out.push(v);
            }
        }
        out
    }

    /// Relabels coordinates: coordinate `j` of the result is coordinate
    /// `perm[j]` of `w`.
    pub fn permute(w: u64, perm: &[usize]) -> u64 {
        let n = perm.len();
        let mut out = 0u64;
        for (j, &src) in perm.iter().enumerate() {
            if w >> (n - 1 - src) & 1 == 1 {
                out |= 1 << (n - 1 - j);
            }
        }
        out
    }

    pub fn parity(w: u64) -> bool {
        w.count_ones() % 2 == 1
    }

    pub fn all_ones(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn mat(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(bv("0000").weight(), 0);
        assert_eq!(bv("1111").weight(), 4);
        assert_eq!(bv("111110").weight(), 5);
    }

    #[test]
    fn addition() {
        let x = bv("1100");
        assert_eq!(x.add(&bv("0110")).unwrap(), bv("1010"));
        assert!(x.add(&x).unwrap().is_zero());
        assert_eq!(x.add(&BitVector::zeros(4)).unwrap(), x);
        assert!(matches!(x.add(&bv("110")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn overlaps_and_inner_products() {
        let x = bv("1100");
        assert_eq!(x.mu(&bv("0110")).unwrap(), 1);
        assert_eq!(x.mu(&x).unwrap(), 2);
        assert_eq!(x.mu(&BitVector::zeros(4)).unwrap(), 0);
        assert!(x.inner_product(&bv("0110")).unwrap());
        assert!(!x.inner_product(&bv("0011")).unwrap());
        assert!(!bv("1111").inner_product(&bv("1111")).unwrap());
        assert!(x.mu(&bv("11")).is_err());
    }

    #[test]
    fn tail_stays_clear_across_words() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1].count_ones(), 6);
        let w = BitVector::from_word(0b1011, 4);
        assert_eq!(w.to_string(), "1011");
        assert_eq!(w.to_word(), 0b1011);
    }

    #[test]
    fn rref_examples() {
        let id = BitMatrix::identity(4);
        let e = id.rref();
        assert_eq!(e.matrix, id);
        assert_eq!(e.rank, 4);

        assert_eq!(mat(&["1010", "0111", "1010"]).rank(), 2);
        let e = mat(&["1100", "0110", "1010"]).rref();
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivots, vec![0, 1]);
    }

    #[test]
    fn standard_form_examples() {
        let g = mat(&["100110", "010011", "001101"]);
        let (sf, perm) = g.standard_form().unwrap();
        assert_eq!(sf, g);
        assert_eq!(perm, (0..6).collect::<Vec<_>>());

        let m = mat(&["0011", "1100"]);
        let (sf, perm) = m.standard_form().unwrap();
        assert_eq!(sf, mat(&["1010", "0101"]));
        assert_eq!(perm, vec![0, 2, 1, 3]);
        assert_eq!(m.permute_columns(&perm).rref().matrix, sf);

        assert!(matches!(
            mat(&["1100", "1100"]).standard_form(),
            Err(Error::RankDeficient { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn dual_basis_examples() {
        // (I | A) -> (A^T | I)
        let g = mat(&["10011", "01010"]);
        let h = g.dual_basis().unwrap();
        assert_eq!(h, mat(&["00100", "11010", "10001"]));
        assert!(g.mul_transpose(&h).unwrap().is_zero());

        let g = mat(&["1100", "0011"]);
        let h = g.dual_basis().unwrap();
        assert!(g.mul_transpose(&h).unwrap().is_zero());
        assert_eq!(h.rank(), 2);
        assert!(same_row_space(&g, &h));

        assert_eq!(mat(&["11"]).dual_basis().unwrap(), mat(&["11"]));
        assert!(mat(&["11", "11"]).dual_basis().is_err());
    }

    #[test]
    fn intersections() {
        let a = mat(&["1100", "0011"]);
        let b = mat(&["1010", "0101"]);
        let i = space_intersection(&a, &b).unwrap();
        assert_eq!(i, mat(&["1111"]));
        assert_eq!(space_sum(&a, &b).unwrap().row_count(), 3);
    }

    #[test]
    fn word_helpers_agree_with_matrices() {
        let rows = vec![0b1100u64, 0b0110, 0b1010];
        let mut r = rows.clone();
        assert_eq!(word::rref(&mut r), 2);
        let m = BitMatrix::from_rows(rows.iter().map(|&w| BitVector::from_word(w, 4)).collect()).unwrap();
        let basis: Vec<u64> = m.row_space_basis().rows().iter().map(BitVector::to_word).collect();
        assert_eq!(r, basis);
        let d = word::dual(&r, 4);
        assert_eq!(d.len(), 2);
        for &h in &d {
            for &b in &r {
                assert!(!word::parity(h & b));
            }
        }
        assert!(word::in_span(&r, 0b1010));
        assert!(!word::in_span(&r, 0b0001));
        assert_eq!(word::span(&r).len(), 4);
        assert_eq!(word::permute(0b1000, &[3, 2, 1, 0]), 0b0001);
    }

    fn arb_vec_pair() -> impl Strategy<Value = (BitVector, BitVector)> {
        (1usize..150).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|(a, b)| (BitVector::from_bits(&a), BitVector::from_bits(&b)))
        })
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                BitMatrix::new(rows.iter().map(|b| BitVector::from_bits(b)).collect(), c).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn weight_of_sum_identity((x, y) in arb_vec_pair()) {
            let s = x.add(&y).unwrap();
            prop_assert_eq!(s.weight(), x.weight() + y.weight() - 2 * x.mu(&y).unwrap());
            prop_assert_eq!(x.inner_product(&y).unwrap(), x.mu(&y).unwrap() % 2 == 1);
        }

        #[test]
        fn rref_is_idempotent_and_preserves_row_space(m in arb_matrix(8, 12)) {
            let e = m.rref();
            prop_assert_eq!(&e.matrix.rref().matrix, &e.matrix);
            for r in m.rows() {
                prop_assert!(e.matrix.spans(r));
            }
            for r in e.matrix.rows() {
                prop_assert!(m.spans(r));
            }
        }

        #[test]
        fn standard_form_recovers_rowmixed_code(a in arb_matrix(6, 6), seed in any::<u64>()) {
            let k = a.row_count();
            let g = BitMatrix::identity(k).hstack(&a).unwrap();
            // random invertible row mix: elementary row additions
            let mut rows = g.rows().to_vec();
            let mut s = seed;
            for _ in 0..20 {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let i = (s >> 33) as usize % k;
                let j = (s >> 17) as usize % k;
                if i != j {
                    let rj = rows[j].clone();
                    rows[i].xor_assign(&rj);
                }
            }
            let mixed = BitMatrix::new(rows, g.col_count()).unwrap();
            let (sf, perm) = mixed.standard_form().unwrap();
            prop_assert_eq!(&sf, &g);
            prop_assert_eq!(perm, (0..g.col_count()).collect::<Vec<_>>());
        }

        #[test]
        fn double_dual_is_original_space(a in arb_matrix(6, 6)) {
            let k = a.row_count();
            let g = BitMatrix::identity(k).hstack(&a).unwrap();
            let h = g.dual_basis().unwrap();
            prop_assert!(g.mul_transpose(&h).unwrap().is_zero());
            prop_assert_eq!(h.row_count(), g.col_count() - k);
            prop_assert!(same_row_space(&h.dual_basis().unwrap(), &g));
        }
    }
}
