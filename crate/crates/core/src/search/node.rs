//! Partial standard-form generators and their incremental caches.

use crate::code::{CodeType, LinearCode};
use crate::gf2::{BitMatrix, BitVector};
use crate::mutable::mu_set;

/// Search parameters with the lookup tables the conditions use.
#[derive(Debug, Clone)]
pub struct Rules {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub ty: CodeType,
    /// Number of columns of the `A` block, `n - k`.
    pub a_cols: usize,
    /// Bit `mu` of `mu_ok[w1 * (a_cols + 1) + w2]` is set when `mu` is
    /// admissible for A-rows of weights `w1` and `w2`.
    mu_ok: Vec<u128>,
}

impl Rules {
    pub fn new(n: usize, k: usize, d: usize, ty: CodeType) -> Self {
        let a_cols = n - k;
        let mut mu_ok = vec![0u128; (a_cols + 1) * (a_cols + 1)];
        if ty != CodeType::NotSelfDual {
            for w1 in 0..=a_cols {
                for w2 in 0..=a_cols {
                    for mu in mu_set(w1, w2, n, k, d) {
                        mu_ok[w1 * (a_cols + 1) + w2] |= 1u128 << mu;
                    }
                }
            }
        }
        Rules {
            n,
            k,
            d,
            ty,
            a_cols,
            mu_ok,
        }
    }

    pub fn mu_admissible(&self, w1: usize, w2: usize, mu: usize) -> bool {
        if self.mu_ok[w1 * (self.a_cols + 1) + w2] >> mu & 1 == 1 {
            return true;
        }
        // with k = 2 a pair of rows is the whole basis and may sum to 1
        self.k == 2 && 2 + w1 + w2 - 2 * mu == self.n
    }

    /// Whether a nonzero codeword of weight `weight` may occur; `full` marks
    /// the sum of all `k` rows, the only combination that can be all-ones.
    pub fn weight_in_window(&self, weight: usize, full: bool) -> bool {
        if weight < self.d {
            return false;
        }
        match self.ty {
            CodeType::NotSelfDual => true,
            _ => weight + self.d <= self.n || (full && weight == self.n),
        }
    }

    /// Full generator-row weight parity demanded by the type.
    pub fn type_admits(&self, a_weight: usize) -> bool {
        match self.ty {
            CodeType::TypeI => (1 + a_weight).is_multiple_of(2),
            CodeType::TypeII => (1 + a_weight).is_multiple_of(4),
            CodeType::NotSelfDual => true,
        }
    }

    pub(crate) fn full_mask(&self) -> u64 {
        crate::gf2::word::all_ones(self.a_cols)
    }
}

/// A depth-`k'` node: the first `k'` rows `(e_i | r_i)` of a standard-form
/// generator. Only the `A`-rows `r_i` are stored.
///
/// A-rows are words with column `j` of `A` at bit `a_cols - 1 - j`.
#[derive(Debug, Clone)]
pub struct SearchNode {
    rows: Vec<u64>,
    weights: Vec<usize>,
    /// `mu[i * (i - 1) / 2 + j]` for `j < i`.
    mu: Vec<u32>,
    /// Column blocks of the partition induced by the rows, as masks, in the
    /// order the refinement produced them.
    blocks: Vec<u64>,
    /// Entry `s` is the sum of the A-rows selected by the bits of `s`.
    /// Dropped at full depth, where no row is added any more.
    span: Vec<u64>,
}

impl SearchNode {
    pub fn root(rules: &Rules) -> Self {
        let full = rules.full_mask();
        SearchNode {
            rows: Vec::new(),
            weights: Vec::new(),
            mu: Vec::new(),
            blocks: if full == 0 { Vec::new() } else { vec![full] },
            span: vec![0],
        }
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    pub fn a_rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn mu(&self, i: usize, j: usize) -> u32 {
        let (i, j) = if i > j { (i, j) } else { (j, i) };
        assert!(i != j, "mu cache holds distinct pairs only");
        self.mu[i * (i - 1) / 2 + j]
    }

    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    /// The current column partition of `A`, 0-based column indices.
    pub fn partition(&self, a_cols: usize) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&m| (0..a_cols).filter(|&j| m >> (a_cols - 1 - j) & 1 == 1).collect())
            .collect()
    }

    pub(crate) fn span(&self) -> &[u64] {
        &self.span
    }

    pub fn last_weight(&self) -> Option<usize> {
        self.weights.last().copied()
    }

    /// Appends `row`; the span cache is kept only when `keep_span` is set.
    pub fn extend(&self, row: u64, keep_span: bool) -> SearchNode {
        let mut mu = self.mu.clone();
        mu.extend(self.rows.iter().map(|&r| (r & row).count_ones()));
        let mut rows = self.rows.clone();
        rows.push(row);
        let mut weights = self.weights.clone();
        weights.push(row.count_ones() as usize);
        let mut blocks = Vec::with_capacity(self.blocks.len() + 1);
        for &b in &self.blocks {
            for part in [b & row, b & !row] {
                if part != 0 {
                    blocks.push(part);
                }
            }
        }
        let span = if keep_span {
            let mut span = Vec::with_capacity(2 * self.span.len());
            span.extend_from_slice(&self.span);
            span.extend(self.span.iter().map(|&s| s ^ row));
            span
        } else {
            Vec::new()
        };
        SearchNode {
            rows,
            weights,
            mu,
            blocks,
            span,
        }
    }

    /// Rows `(e_i | r_i)` of length `n` built so far.
    pub fn generator(&self, rules: &Rules) -> BitMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut v = BitVector::zeros(rules.n);
                v.set(i, true);
                for j in 0..rules.a_cols {
                    if r >> (rules.a_cols - 1 - j) & 1 == 1 {
                        v.set(rules.k + j, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix::new(rows, rules.n).expect("rows have length n")
    }

    /// The code of a full-depth node.
    pub fn to_code(&self, rules: &Rules) -> LinearCode {
        debug_assert_eq!(self.depth(), rules.k);
        LinearCode::new(self.generator(rules)).expect("standard-form rows are independent")
    }

    /// Recomputes every cache from the rows and reports the first mismatch.
    pub fn verify_caches(&self, rules: &Rules) -> Result<(), String> {
        let fresh = self.rows.iter().fold(SearchNode::root(rules), |node, &r| node.extend(r, true));
        if fresh.weights != self.weights {
            return Err(format!("row weights {:?} != {:?}", self.weights, fresh.weights));
        }
        if fresh.mu != self.mu {
            return Err(format!("mu cache {:?} != {:?}", self.mu, fresh.mu));
        }
        if fresh.blocks != self.blocks {
            return Err("partition blocks drifted".into());
        }
        if !self.span.is_empty() && fresh.span != self.span {
            return Err("span cache drifted".into());
        }
        Ok(())
    }
}
