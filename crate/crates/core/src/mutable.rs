//! Admissible overlap counts between rows of the `A` block of a standard-form
//! generator `(I_k | A)` of a self-dual code.
//!
//! Two full rows `g_i = (e_i | r_i)` and `g_j = (e_j | r_j)` have disjoint
//! identity parts, so `g_i . g_j = mu(r_i, r_j) mod 2` and orthogonality
//! forces `mu` to be even. `g_i + g_j` has weight `2 + w_i + w_j - 2 mu`, which
//! must lie in `[d, n - d]`. The supports of `r_i` and `r_j` live in `k`
//! columns, so `mu >= w_i + w_j - k`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::code::{distance_bound, CodeType};
use crate::error::{Error, Result};

/// Admissible `A`-row weights, in descending order.
///
/// The full row has weight `1 + w`, which must lie in `[d, n - d]`, be even
/// for Type I and divisible by 4 for Type II.
pub fn allowed_row_weights(n: usize, k: usize, d: usize, ty: CodeType) -> Result<Vec<usize>> {
    validate(n, k, d, ty)?;
    Ok((0..=k)
        .rev()
        .filter(|&w| row_weight_admissible(n, d, ty, w))
        .collect())
}

pub(crate) fn row_weight_admissible(n: usize, d: usize, ty: CodeType, w: usize) -> bool {
    let full = 1 + w;
    let parity = match ty {
        CodeType::TypeI => full.is_multiple_of(2),
        CodeType::TypeII => full.is_multiple_of(4),
        CodeType::NotSelfDual => true,
    };
    parity && full >= d && full + d <= n
}

fn validate(n: usize, k: usize, d: usize, ty: CodeType) -> Result<()> {
    if ty == CodeType::NotSelfDual {
        return Err(Error::params("mu tables are defined for self-dual targets only"));
    }
    if 2 * k != n {
        return Err(Error::params(format!("k = {k} must equal n/2 for n = {n}")));
    }
    let bound = distance_bound(n, ty)?;
    if d == 0 || d > bound {
        return Err(Error::params(format!(
            "d = {d} is outside 1..={bound}, the distance bound for n = {n}"
        )));
    }
    Ok(())
}

/// Admissible values of `mu(r1, r2)` for `A`-rows of weights `w1` and `w2`.
pub fn mu_set(w1: usize, w2: usize, n: usize, k: usize, d: usize) -> Vec<usize> {
    let lo = (w1 + w2).saturating_sub(k);
    let hi = w1.min(w2);
    (lo..=hi)
        .filter(|&mu| mu % 2 == 0)
        .filter(|&mu| {
            let sum = 2 + w1 + w2 - 2 * mu;
            sum >= d && sum + d <= n
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTable {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub ty: CodeType,
    weights: Vec<usize>,
    cells: BTreeMap<(usize, usize), Vec<usize>>,
}

impl MuTable {
    pub fn build(n: usize, k: usize, d: usize, ty: CodeType) -> Result<Self> {
        let weights = allowed_row_weights(n, k, d, ty)?;
        let mut cells = BTreeMap::new();
        for &w1 in &weights {
            for &w2 in &weights {
                cells.insert((w1, w2), mu_set(w1, w2, n, k, d));
            }
        }
        Ok(MuTable {
            n,
            k,
            d,
            ty,
            weights,
            cells,
        })
    }

    pub fn allowed_row_weights(&self) -> &[usize] {
        &self.weights
    }

    /// The admissible set for a pair of weights; empty when the pair cannot
    /// occur. Weights outside the table are answered from the formula.
    pub fn cell(&self, w1: usize, w2: usize) -> std::borrow::Cow<'_, [usize]> {
        match self.cells.get(&(w1, w2)) {
            Some(c) => std::borrow::Cow::Borrowed(c),
            None => std::borrow::Cow::Owned(mu_set(w1, w2, self.n, self.k, self.d)),
        }
    }

    pub fn admits(&self, w1: usize, w2: usize, mu: usize) -> bool {
        match self.cells.get(&(w1, w2)) {
            Some(c) => c.binary_search(&mu).is_ok(),
            None => mu_set(w1, w2, self.n, self.k, self.d).contains(&mu),
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> {
        self.cells.iter().map(|(&key, v)| (key, v.as_slice()))
    }

    /// Text rendering: one row per `w(r1)`, one column per `w(r2)`, both in
    /// descending weight order, `-` for an empty cell.
    pub fn render(&self) -> String {
        let fmt_cell = |c: &[usize]| {
            if c.is_empty() {
                "-".to_string()
            } else {
                let items: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("{{{}}}", items.join(","))
            }
        };
        let grid: Vec<Vec<String>> = self
            .weights
            .iter()
            .map(|&w1| self.weights.iter().map(|&w2| fmt_cell(&self.cell(w1, w2))).collect())
            .collect();
        let corner = "w1\\w2";
        let first = self
            .weights
            .iter()
            .map(|w| w.to_string().len())
            .max()
            .unwrap_or(0)
            .max(corner.len());
        let widths: Vec<usize> = (0..self.weights.len())
            .map(|j| {
                grid.iter()
                    .map(|row| row[j].len())
                    .max()
                    .unwrap_or(0)
                    .max(self.weights[j].to_string().len())
            })
            .collect();

        let mut out = String::new();
        let _ = write!(out, "| {corner:>first$} |");
        for (j, w) in self.weights.iter().enumerate() {
            let _ = write!(out, " {:>width$} |", w, width = widths[j]);
        }
        out.push('\n');
        for (i, w1) in self.weights.iter().enumerate() {
            let _ = write!(out, "| {w1:>first$} |");
            for (j, cell) in grid[i].iter().enumerate() {
                let _ = write!(out, " {:>width$} |", cell, width = widths[j]);
            }
            out.push('\n');
        }
        out
    }
}
