//! Permutation equivalence of binary linear codes.
//!
//! Canonical labeling follows the usual individualize-and-refine scheme: the
//! columns are split into an ordered partition that is refined until
//! equitable with respect to the codewords, then a column of the first
//! non-singleton cell is individualized and the process recurses. Each leaf
//! orders all columns; the certificate of a leaf is the reduced echelon basis
//! of the relabeled code, and the smallest certificate wins. Equal
//! certificates yield automorphisms, which prune sibling branches.

mod group;

use std::collections::HashSet;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::word;

pub use group::{group_order, Perm};

/// Largest dimension for which codewords are enumerated.
pub const DIMENSION_GUARD: usize = 20;

/// Default number of search-tree nodes a canonical labeling may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeSignature {
    pub n: usize,
    pub k: usize,
    pub weight_enumerator: Vec<u64>,
    /// Per column: how many codewords of each weight contain it. Sorted, so
    /// the list does not depend on the column order.
    pub column_invariants: Vec<Vec<u32>>,
    /// Canonical basis rows, big-endian, eight bytes each.
    pub fingerprint: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Position `i` of the canonical code holds column `labeling[i]` of the
    /// input.
    pub labeling: Vec<usize>,
    /// Reduced echelon basis of the relabeled code.
    pub basis: Vec<u64>,
    /// Automorphisms found along the way; they generate the automorphism
    /// group.
    pub automorphisms: Vec<Perm>,
    pub nodes: u64,
}

impl CanonicalForm {
    pub fn code(&self, n: usize) -> LinearCode {
        let rows: Vec<_> = self
            .basis
            .iter()
            .map(|&w| crate::gf2::BitVector::from_word(w, n))
            .collect();
        LinearCode::new(crate::gf2::BitMatrix::new(rows, n).expect("rows have length n"))
            .expect("canonical basis is independent")
    }
}

fn check_size(c: &LinearCode) -> Result<()> {
    if c.n() > 64 {
        return Err(Error::params(format!(
            "equivalence testing supports n <= 64, got {}",
            c.n()
        )));
    }
    if c.k() > DIMENSION_GUARD {
        return Err(Error::DimensionGuard {
            k: c.k(),
            limit: DIMENSION_GUARD,
        });
    }
    Ok(())
}

fn bit(n: usize, col: usize) -> u64 {
    1u64 << (n - 1 - col)
}

struct Canonizer<'a> {
    n: usize,
    basis: Vec<u64>,
    codewords: &'a [u64],
    budget: u64,
    nodes: u64,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Perm>,
}

#[derive(Clone)]
struct Leaf {
    cert: Vec<u64>,
    order: Vec<usize>,
    path: Vec<usize>,
}

type Cells = Vec<Vec<usize>>;

fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

const CELL_KEYS: [u64; 64] = {
    let mut keys = [0u64; 64];
    let mut i = 0;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    while i < 64 {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        keys[i] = (z ^ (z >> 31)) | 1;
        i += 1;
    }
    keys
};

impl Canonizer<'_> {
    /// Splits cells until the columns of each cell are indistinguishable by
    /// the codewords through them. A codeword is described by how many
    /// columns of each cell it covers; a column by the multiset of
    /// descriptions of the codewords containing it. Both are hashed; a hash
    /// collision can only merge classes, which keeps the refinement
    /// independent of the column labels.
    fn refine(&self, mut cells: Cells) -> Cells {
        let n = self.n;
        let mut col_hash = vec![0u64; n];
        loop {
            if cells.len() == n {
                return cells;
            }
            let masks: Vec<u64> = cells
                .iter()
                .map(|cell| cell.iter().fold(0, |m, &c| m | bit(n, c)))
                .collect();
            col_hash.iter_mut().for_each(|h| *h = 0);
            for &w in self.codewords {
                if w == 0 {
                    continue;
                }
                let mut h = 0u64;
                for (i, &m) in masks.iter().enumerate() {
                    h = h.wrapping_add(((w & m).count_ones() as u64).wrapping_mul(CELL_KEYS[i]));
                }
                let h = mix(h);
                let mut rest = w;
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    col_hash[n - 1 - b] = col_hash[n - 1 - b].wrapping_add(h);
                }
            }

            let before = cells.len();
            let mut next = Vec::with_capacity(n);
            for mut cell in cells {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                cell.sort_by_key(|&c| (col_hash[c], c));
                let mut start = 0;
                for i in 1..=cell.len() {
                    if i == cell.len() || col_hash[cell[i]] != col_hash[cell[start]] {
                        next.push(cell[start..i].to_vec());
                        start = i;
                    }
                }
            }
            if next.len() == before {
                return next;
            }
            cells = next;
        }
    }

    fn certificate(&self, order: &[usize]) -> Vec<u64> {
        let mut rows: Vec<u64> = self.basis.iter().map(|&b| word::permute(b, order)).collect();
        word::rref(&mut rows);
        rows
    }

    fn orbits_fixing(&self, path: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.autos {
            if path.iter().all(|&x| g[x] == x) {
                for (x, &gx) in g.iter().enumerate() {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gx));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..self.n).map(|x| find(&mut parent, x)).collect()
    }

    /// Returns the level to jump back to, if an automorphism was found.
    fn visit(&mut self, cells: Cells, path: &mut Vec<usize>) -> Result<Option<usize>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        let Some(t) = cells.iter().position(|c| c.len() > 1) else {
            return Ok(self.leaf(&cells, path));
        };
        let level = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for &x in &cells[t] {
            if !explored.is_empty() {
                let orbit = self.orbits_fixing(path);
                if explored.iter().any(|&y| orbit[y] == orbit[x]) {
                    continue;
                }
            }
            let mut child: Cells = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(vec![x]);
            child.push(cells[t].iter().copied().filter(|&y| y != x).collect());
            child.extend_from_slice(&cells[t + 1..]);
            let child = self.refine(child);
            path.push(x);
            let jump = self.visit(child, path)?;
            path.pop();
            explored.push(x);
            if let Some(j) = jump {
                if j < level {
                    return Ok(Some(j));
                }
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, cells: &Cells, path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let cert = self.certificate(&order);
        let common = |a: &[usize], b: &[usize]| a.iter().zip(b).take_while(|(x, y)| x == y).count();
        let Some(first) = &self.first else {
            let leaf = Leaf {
                cert,
                order,
                path: path.to_vec(),
            };
            self.best = Some(leaf.clone());
            self.first = Some(leaf);
            return None;
        };
        if cert == first.cert {
            let g = automorphism(&order, &first.order);
            let j = common(path, &first.path);
            self.autos.push(g);
            return Some(j);
        }
        let best = self.best.as_ref().expect("set with first");
        if cert == best.cert {
            let g = automorphism(&order, &best.order);
            let j = common(path, &best.path);
            self.autos.push(g);
            return Some(j);
        }
        if cert < best.cert {
            self.best = Some(Leaf {
                cert,
                order,
                path: path.to_vec(),
            });
        }
        None
    }
}

/// The column map sending leaf `from` onto leaf `to`.
fn automorphism(from: &[usize], to: &[usize]) -> Perm {
    let mut g = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        g[a] = b;
    }
    g
}

pub fn canonical_form(c: &LinearCode) -> Result<CanonicalForm> {
    canonical_form_with_budget(c, DEFAULT_BUDGET)
}

pub fn canonical_form_with_budget(c: &LinearCode, budget: u64) -> Result<CanonicalForm> {
    check_size(c)?;
    let codewords = c.codeword_words()?;
    let mut canon = Canonizer {
        n: c.n(),
        basis: c.generator().rows().iter().map(|r| r.to_word()).collect(),
        codewords: &codewords,
        budget,
        nodes: 0,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    if c.n() == 0 {
        return Ok(CanonicalForm {
            labeling: Vec::new(),
            basis: Vec::new(),
            automorphisms: Vec::new(),
            nodes: 0,
        });
    }
    let start = canon.refine(vec![(0..c.n()).collect()]);
    canon.visit(start, &mut Vec::new())?;
    let best = canon.best.take().expect("search reaches a leaf");
    Ok(CanonicalForm {
        labeling: best.order,
        basis: best.cert,
        automorphisms: canon.autos,
        nodes: canon.nodes,
    })
}

/// Counts of codewords of each weight containing each column, in column
/// order (unsorted).
pub fn column_profiles(c: &LinearCode) -> Result<Vec<Vec<u32>>> {
    check_size(c)?;
    let n = c.n();
    let mut out = vec![vec![0u32; n + 1]; n];
    for w in c.codeword_words()? {
        let weight = w.count_ones() as usize;
        for (col, profile) in out.iter_mut().enumerate() {
            if w & bit(n, col) != 0 {
                profile[weight] += 1;
            }
        }
    }
    Ok(out)
}

pub fn signature(c: &LinearCode) -> Result<CodeSignature> {
    signature_with_budget(c, DEFAULT_BUDGET)
}

pub fn signature_with_budget(c: &LinearCode, budget: u64) -> Result<CodeSignature> {
    check_size(c)?;
    let mut column_invariants = column_profiles(c)?;
    column_invariants.sort();
    let form = canonical_form_with_budget(c, budget)?;
    Ok(CodeSignature {
        n: c.n(),
        k: c.k(),
        weight_enumerator: c.weight_enumerator()?.to_vec(),
        column_invariants,
        fingerprint: form.basis.iter().flat_map(|w| w.to_be_bytes()).collect(),
    })
}

fn check_shapes(c1: &LinearCode, c2: &LinearCode) -> Result<()> {
    if c1.n() != c2.n() {
        return Err(Error::LengthMismatch {
            left: c1.n(),
            right: c2.n(),
        });
    }
    if c1.k() != c2.k() {
        return Err(Error::params(format!(
            "dimension mismatch: {} vs {}",
            c1.k(),
            c2.k()
        )));
    }
    Ok(())
}

pub fn are_equivalent(c1: &LinearCode, c2: &LinearCode) -> Result<bool> {
    Ok(equivalence_witness(c1, c2)?.is_some())
}

/// A column permutation `p` with `c1.permute_columns(p) == c2`, if the codes
/// are equivalent.
pub fn equivalence_witness(c1: &LinearCode, c2: &LinearCode) -> Result<Option<Perm>> {
    check_shapes(c1, c2)?;
    check_size(c1)?;
    if c1.weight_enumerator()? != c2.weight_enumerator()? {
        return Ok(None);
    }
    let (mut p1, mut p2) = (column_profiles(c1)?, column_profiles(c2)?);
    p1.sort();
    p2.sort();
    if p1 != p2 {
        return Ok(None);
    }
    let f1 = canonical_form(c1)?;
    let f2 = canonical_form(c2)?;
    if f1.basis != f2.basis {
        return Ok(None);
    }
    let mut p = vec![0; c1.n()];
    for (&a, &b) in f1.labeling.iter().zip(&f2.labeling) {
        p[b] = a;
    }
    Ok(Some(p))
}

/// Order of the permutation automorphism group.
pub fn automorphism_group_order(c: &LinearCode) -> Result<u128> {
    let form = canonical_form(c)?;
    Ok(group_order(c.n(), &form.automorphisms))
}

/// Streaming deduplication keyed by signature.
#[derive(Debug, Default)]
pub struct Deduper {
    seen: HashSet<CodeSignature>,
    shape: Option<(usize, usize)>,
}

impl Deduper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true if `c` is the first of its class.
    pub fn insert(&mut self, c: &LinearCode) -> Result<bool> {
        match self.shape {
            Some((n, k)) if (n, k) != (c.n(), c.k()) => {
                return Err(Error::params(format!(
                    "dedupe expects uniform (n, k) = ({n}, {k}), got ({}, {})",
                    c.n(),
                    c.k()
                )))
            }
            _ => self.shape = Some((c.n(), c.k())),
        }
        Ok(self.seen.insert(signature(c)?))
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

/// One representative per class, first-seen order.
pub fn dedupe<I>(codes: I) -> Result<Vec<LinearCode>>
where
    I: IntoIterator<Item = LinearCode>,
{
    let mut d = Deduper::new();
    let mut out = Vec::new();
    for c in codes {
        if d.insert(&c)? {
            out.push(c);
        }
    }
    Ok(out)
}
