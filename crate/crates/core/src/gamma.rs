//! The partition tree of a binary matrix: column indices split level by level
//! by the supports of successive rows.
//!
//! Leaves group identical columns, which is what the search uses for
//! isomorph rejection: columns in the same leaf can be permuted freely
//! without changing the rows placed so far.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Column indices (0-based) in ascending order.
    pub columns: Vec<usize>,
    /// Index of the parent in the previous level.
    pub parent: Option<usize>,
    /// `Some(true)` for the child holding the 1-positions of the splitting row.
    pub one_side: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTree {
    k: usize,
    cols: usize,
    levels: Vec<Vec<TreeNode>>,
}

/// Builds the tree of `a`. Rows must have non-increasing weight. Empty child
/// nodes are dropped, so every level is a partition of the column set.
pub fn build_tree(a: &BitMatrix) -> Result<PartitionTree> {
    let weights: Vec<usize> = a.rows().iter().map(BitVector::weight).collect();
    if let Some(i) = weights.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::precondition(format!(
            "rows must have non-increasing weight; row {} has weight {} < {}",
            i + 1,
            weights[i],
            weights[i + 1]
        )));
    }
    let cols = a.col_count();
    let mut levels = vec![vec![TreeNode {
        columns: (0..cols).collect(),
        parent: None,
        one_side: None,
    }]];
    for row in a.rows() {
        let prev = levels.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() * 2);
        for (pi, node) in prev.iter().enumerate() {
            let (ones, zeros): (Vec<usize>, Vec<usize>) = node.columns.iter().partition(|&&c| row.get(c));
            for (side, part) in [(true, ones), (false, zeros)] {
                if !part.is_empty() {
                    next.push(TreeNode {
                        columns: part,
                        parent: Some(pi),
                        one_side: Some(side),
                    });
                }
            }
        }
        levels.push(next);
    }
    Ok(PartitionTree {
        k: a.row_count(),
        cols,
        levels,
    })
}

impl PartitionTree {
    /// Assembles a tree from explicit levels, for checking abstract trees
    /// against the reconstruction conditions.
    pub fn from_levels(k: usize, cols: usize, levels: Vec<Vec<TreeNode>>) -> Self {
        PartitionTree { k, cols, levels }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn levels(&self) -> &[Vec<TreeNode>] {
        &self.levels
    }

    /// The nonempty nodes of the deepest level.
    pub fn leaves(&self) -> Vec<Vec<usize>> {
        self.levels
            .last()
            .map(|l| l.iter().map(|n| n.columns.clone()).collect())
            .unwrap_or_default()
    }

    /// Recovers the matrix: row `i` is the union of the 1-side nodes on level
    /// `i + 1`.
    pub fn reconstruct(&self) -> Result<BitMatrix> {
        if self.levels.len() != self.k + 1 {
            return Err(Error::precondition(format!(
                "tree has {} levels, expected k + 1 = {}",
                self.levels.len(),
                self.k + 1
            )));
        }
        let mut seen = vec![false; self.cols];
        for leaf in self.levels.last().unwrap() {
            for &c in &leaf.columns {
                if c >= self.cols || seen[c] {
                    return Err(Error::precondition(format!("column {} repeated or out of range", c + 1)));
                }
                seen[c] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::precondition(format!(
                "leaves do not cover the column set; column {} is missing",
                missing + 1
            )));
        }
        for (li, level) in self.levels.iter().enumerate().skip(1) {
            for node in level {
                let parent = node
                    .parent
                    .and_then(|p| self.levels[li - 1].get(p))
                    .ok_or_else(|| Error::precondition(format!("node on level {li} has no parent")))?;
                if !node.columns.iter().all(|c| parent.columns.contains(c)) {
                    return Err(Error::precondition(format!("node on level {li} is not inside its parent")));
                }
            }
        }
        let mut rows = Vec::with_capacity(self.k);
        for level in &self.levels[1..] {
            let mut row = BitVector::zeros(self.cols);
            for node in level.iter().filter(|n| n.one_side == Some(true)) {
                for &c in &node.columns {
                    row.set(c, true);
                }
            }
            rows.push(row);
        }
        BitMatrix::new(rows, self.cols)
    }

    fn fmt_node(&self, f: &mut fmt::Formatter<'_>, level: usize, idx: usize) -> fmt::Result {
        let node = &self.levels[level][idx];
        let indent = "  ".repeat(level);
        let side = match node.one_side {
            Some(true) => "1: ",
            Some(false) => "0: ",
            None => "",
        };
        writeln!(f, "{indent}{side}{}", fmt_set(&node.columns))?;
        if level + 1 < self.levels.len() {
            for (ci, child) in self.levels[level + 1].iter().enumerate() {
                if child.parent == Some(idx) {
                    self.fmt_node(f, level + 1, ci)?;
                }
            }
        }
        Ok(())
    }
}

/// 1-based set notation, e.g. `{1,2,3}`.
pub fn fmt_set(columns: &[usize]) -> String {
    let items: Vec<String> = columns.iter().map(|c| (c + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for PartitionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.levels.is_empty() && !self.levels[0].is_empty() {
            self.fmt_node(f, 0, 0)?;
        }
        Ok(())
    }
}

/// True iff inside every block the 1s of `candidate` sit on the block's
/// lowest-numbered positions with no gap.
pub fn block_sorted(partition: &[Vec<usize>], candidate: &BitVector) -> Result<bool> {
    let n = candidate.len();
    let mut seen = vec![false; n];
    for block in partition {
        for &c in block {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::params(format!("malformed partition at column {}", c + 1)));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::params("partition does not cover every coordinate"));
    }
    Ok(partition.iter().all(|block| {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        let ones = sorted.iter().filter(|&&c| candidate.get(c)).count();
        sorted[..ones].iter().all(|&c| candidate.get(c))
    }))
}
