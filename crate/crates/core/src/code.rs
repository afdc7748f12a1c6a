//! Binary linear codes held as generator matrices, with the invariants the
//! search and the theory modules need: duality, type, minimum distance,
//! weight enumerator and the maximal doubly-even subcode.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};

/// Largest dimension for which full codeword enumeration is allowed.
pub const ENUMERATION_GUARD: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeType {
    TypeI,
    TypeII,
    NotSelfDual,
}

impl CodeType {
    pub fn tag(self) -> &'static str {
        match self {
            CodeType::TypeI => "I",
            CodeType::TypeII => "II",
            CodeType::NotSelfDual => "linear",
        }
    }
}

impl fmt::Display for CodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeType::TypeI => f.write_str("Type I"),
            CodeType::TypeII => f.write_str("Type II"),
            CodeType::NotSelfDual => f.write_str("not self-dual"),
        }
    }
}

impl FromStr for CodeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" | "TypeI" => Ok(CodeType::TypeI),
            "II" | "2" | "TypeII" => Ok(CodeType::TypeII),
            "linear" | "NotSelfDual" => Ok(CodeType::NotSelfDual),
            other => Err(Error::params(format!("unknown code type {other:?}"))),
        }
    }
}

impl serde::Serialize for CodeType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> serde::Deserialize<'de> for CodeType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| serde::de::Error::custom(format!("unknown code type {s:?}, expected I, II or linear")))
    }
}

/// A binary linear code of length `n` and dimension `k`.
///
/// Minimum distance and weight enumerator are computed on first use and
/// cached. Two codes compare equal when they have the same codeword set.
#[derive(Clone)]
pub struct LinearCode {
    generator: BitMatrix,
    min_distance: OnceLock<usize>,
    enumerator: OnceLock<Vec<u64>>,
}

impl LinearCode {
    pub fn new(generator: BitMatrix) -> Result<Self> {
        let rank = generator.rank();
        if rank != generator.row_count() {
            return Err(Error::RankDeficient {
                rank,
                expected: generator.row_count(),
            });
        }
        Ok(LinearCode {
            generator,
            min_distance: OnceLock::new(),
            enumerator: OnceLock::new(),
        })
    }

    /// The code spanned by `rows`, reduced to a basis if necessary.
    pub fn span_of(rows: BitMatrix) -> Self {
        LinearCode {
            generator: rows.row_space_basis(),
            min_distance: OnceLock::new(),
            enumerator: OnceLock::new(),
        }
    }

    pub fn parse<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        Self::new(BitMatrix::parse_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.generator.col_count()
    }

    pub fn k(&self) -> usize {
        self.generator.row_count()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.n() && self.generator.spans(v)
    }

    /// Calls `f` on every codeword, zero first, in Gray-code order.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&BitVector)) {
        let mut cur = BitVector::zeros(self.n());
        f(&cur);
        let rows = self.generator.rows();
        for i in 1u64..(1u64 << self.k()) {
            cur.xor_assign(&rows[i.trailing_zeros() as usize]);
            f(&cur);
        }
    }

    /// All codewords as single words (requires `n <= 64`); entry `i` is the
    /// sum of the generator rows selected by the bits of `i`.
    pub fn codeword_words(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::params("codeword_words requires n <= 64"));
        }
        self.guard()?;
        let basis: Vec<u64> = self.generator.rows().iter().map(BitVector::to_word).collect();
        Ok(gf2::word::span(&basis))
    }

    fn guard(&self) -> Result<()> {
        if self.k() > ENUMERATION_GUARD {
            return Err(Error::DimensionGuard {
                k: self.k(),
                limit: ENUMERATION_GUARD,
            });
        }
        Ok(())
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.generator.rows();
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i..].iter().all(|b| a.mu_unchecked(b) % 2 == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n() && self.is_self_orthogonal()
    }

    /// Weight mod 4 is additive over pairwise-orthogonal vectors, so the
    /// generator rows decide between Type I and Type II.
    pub fn classify_type(&self) -> CodeType {
        if !self.is_self_dual() {
            CodeType::NotSelfDual
        } else if self.generator.rows().iter().all(|r| r.weight() % 4 == 0) {
            CodeType::TypeII
        } else {
            CodeType::TypeI
        }
    }

    /// Exact minimum distance by enumerating all nonzero codewords, one row
    /// XOR per step. Returns `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        if self.k() == 0 {
            return None;
        }
        Some(*self.min_distance.get_or_init(|| {
            let mut best = usize::MAX;
            let mut cur = BitVector::zeros(self.n());
            let rows = self.generator.rows();
            for i in 1u64..(1u64 << self.k()) {
                cur.xor_assign(&rows[i.trailing_zeros() as usize]);
                best = best.min(cur.weight());
            }
            best
        }))
    }

    /// Entry `i` counts codewords of weight `i`.
    pub fn weight_enumerator(&self) -> Result<&[u64]> {
        self.guard()?;
        Ok(self.enumerator.get_or_init(|| {
            let mut counts = vec![0u64; self.n() + 1];
            self.for_each_codeword(|c| counts[c.weight()] += 1);
            counts
        }))
    }

    pub fn contains_all_ones(&self) -> bool {
        self.contains(&BitVector::ones(self.n()))
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::span_of(self.generator.orthogonal_complement())
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode> {
        Ok(LinearCode::span_of(gf2::space_intersection(
            &self.generator,
            &other.generator,
        )?))
    }

    pub fn permute_columns(&self, perm: &[usize]) -> LinearCode {
        LinearCode {
            generator: self.generator.permute_columns(perm),
            min_distance: self.min_distance.clone(),
            enumerator: self.enumerator.clone(),
        }
    }

    /// An equivalent code with generator `(I_k | A)`, plus the column
    /// permutation used.
    pub fn standard_form(&self) -> (LinearCode, Vec<usize>) {
        let (g, perm) = self
            .generator
            .standard_form()
            .expect("generator has full rank by construction");
        (self.permute_columns(&perm).with_generator(g), perm)
    }

    fn with_generator(mut self, g: BitMatrix) -> Self {
        self.generator = g;
        self
    }

    /// The kernel of `c -> w(c)/2 mod 2`, which is linear on a self-dual code.
    /// For a Type I code this is the unique maximal doubly-even subcode and
    /// has dimension `k - 1`.
    pub fn max_doubly_even_subcode(&self) -> Result<LinearCode> {
        match self.classify_type() {
            CodeType::TypeI => {}
            CodeType::TypeII => return Err(Error::precondition("code is Type II, not Type I")),
            CodeType::NotSelfDual => return Err(Error::precondition("code is not self-dual")),
        }
        let rows = self.generator.rows();
        let singly = |r: &BitVector| r.weight() % 4 == 2;
        let pivot = rows.iter().position(singly).expect("Type I has a singly-even row");
        let kernel: Vec<BitVector> = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pivot)
            .map(|(_, r)| {
                if singly(r) {
                    r.add(&rows[pivot]).unwrap()
                } else {
                    r.clone()
                }
            })
            .collect();
        LinearCode::new(BitMatrix::new(kernel, self.n())?)
    }

    /// The first generator row outside the maximal doubly-even subcode.
    pub(crate) fn singly_even_generator(&self) -> Option<&BitVector> {
        self.generator.rows().iter().find(|r| r.weight() % 4 == 2)
    }

    /// A chain `<1> = C_1 < C_2 < ... < C_{k-1}` of doubly-even
    /// self-orthogonal subcodes with `dim C_i = i`, ending at the maximal
    /// doubly-even subcode. Basis vectors are added in the order of the
    /// reduced echelon basis of `C_{k-1}`.
    pub fn doubly_even_chain(&self) -> Result<Vec<LinearCode>> {
        if !self.n().is_multiple_of(4) {
            return Err(Error::precondition(format!(
                "n = {} is not divisible by 4, so the all-ones word is not doubly-even",
                self.n()
            )));
        }
        let top = self.max_doubly_even_subcode()?;
        let n = self.n();
        let mut basis = BitMatrix::new(vec![BitVector::ones(n)], n)?;
        let mut chain = vec![LinearCode::new(basis.clone())?];
        for v in top.generator.row_space_basis().rows() {
            if chain.len() == top.k() {
                break;
            }
            if !basis.spans(v) {
                basis.push_row(v.clone())?;
                chain.push(LinearCode::new(basis.clone())?);
            }
        }
        debug_assert_eq!(chain.len(), top.k());
        Ok(chain)
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        gf2::same_row_space(&self.generator, &other.generator)
    }
}

impl Eq for LinearCode {}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode(n={}, k={}; {:?})", self.n(), self.k(), self.generator)
    }
}

/// Upper bound on the minimum distance of a self-dual code of length `n`:
/// `4*floor(n/24) + 4`, or `+ 6` when `n = 22 mod 24`.
pub fn distance_bound(n: usize, ty: CodeType) -> Result<usize> {
    if !n.is_multiple_of(2) {
        return Err(Error::params(format!("self-dual codes need even length, got n = {n}")));
    }
    if ty == CodeType::NotSelfDual {
        return Err(Error::params("the distance bound only applies to self-dual codes"));
    }
    Ok(if n % 24 == 22 { 4 * (n / 24) + 6 } else { 4 * (n / 24) + 4 })
}

pub fn singly_even_row_count(g: &BitMatrix) -> usize {
    g.rows().iter().filter(|r| r.weight() % 4 == 2).count()
}

/// Row-parity test for a standard-form generator of a self-dual code.
///
/// With `n = 0 mod 4` the number of singly-even rows is even, and a Type I
/// code has at least two of them. With `n = 2 mod 4` the count is odd: the
/// rows sum to the all-ones word, whose weight is `2 mod 4`, and weights add
/// mod 4 across orthogonal rows. That second case goes beyond the classical
/// statement and is tested separately.
pub fn check_row_parity(g: &BitMatrix, n: usize, claimed: CodeType) -> bool {
    let count = singly_even_row_count(g);
    match (n % 4, claimed) {
        (_, CodeType::NotSelfDual) => true,
        (0, CodeType::TypeI) => count.is_multiple_of(2) && count >= 2,
        (0, CodeType::TypeII) => count == 0,
        (2, CodeType::TypeI) => count % 2 == 1,
        _ => false,
    }
}
