//! Ground truth for tiny lengths, built without the search engine.
//!
//! Up to `n = 12` every self-dual code is enumerated by extending
//! self-orthogonal codes one dimension at a time, starting from `<1>`, over
//! all coset representatives; equivalence classes are the orbits under the
//! generators `(0 1)` and `(0 1 ... n-1)` of the symmetric group. For
//! `n <= 18` the classes are also reached as the closure of `i2^(n/2)` under
//! the neighbor relation; completeness is checked by summing
//! `n!/|Aut(C)|` over the classes against the number of self-dual codes,
//! `prod_{i=1}^{n/2-1} (2^i + 1)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::code::{CodeType, LinearCode};
use crate::equivalence;
use crate::error::{Error, Result};
use crate::gf2::{word, BitMatrix, BitVector};
use crate::persist::codefile;

/// Largest length enumerated code by code.
pub const DIRECT_LIMIT: usize = 12;
/// Largest length classified through neighbors.
pub const CLOSURE_LIMIT: usize = 18;

/// Number of self-dual codes of even length `n`.
pub fn mass_formula(n: usize) -> u128 {
    (1..n / 2).map(|i| (1u128 << i) + 1).product()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[derive(Debug, Clone)]
pub struct OracleClass {
    pub representative: LinearCode,
    /// Number of distinct codes in the class.
    pub size: u128,
    pub min_distance: usize,
    pub ty: CodeType,
}

#[derive(Debug, Clone)]
pub struct OracleCorpus {
    pub n: usize,
    /// Every self-dual code, as its reduced echelon basis.
    pub codes: Vec<Vec<u64>>,
    pub classes: Vec<OracleClass>,
    /// Class index of each entry of `codes`.
    pub class_of: Vec<usize>,
    index: HashMap<u128, usize>,
}

impl OracleCorpus {
    pub fn code(&self, i: usize) -> LinearCode {
        to_code(&self.codes[i], self.n)
    }

    /// Class of an arbitrary self-dual code of this length, by lookup of its
    /// reduced basis; `None` if it is not a self-dual code of length `n`.
    pub fn class_index(&self, code: &LinearCode) -> Option<usize> {
        if code.n() != self.n {
            return None;
        }
        let mut basis: Vec<u64> = code.generator().rows().iter().map(BitVector::to_word).collect();
        word::rref(&mut basis);
        self.index.get(&pack(&basis, self.n)).map(|&i| self.class_of[i])
    }
}

fn to_code(basis: &[u64], n: usize) -> LinearCode {
    let rows = basis.iter().map(|&w| BitVector::from_word(w, n)).collect();
    LinearCode::new(BitMatrix::new(rows, n).expect("rows have length n")).expect("basis is independent")
}

/// Minimum nonzero weight, by listing the span.
fn min_weight(basis: &[u64]) -> usize {
    word::span(basis)
        .into_iter()
        .skip(1)
        .map(|w| w.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

fn doubly_even(basis: &[u64]) -> bool {
    word::span(basis).into_iter().all(|w| w.count_ones() % 4 == 0)
}

fn pack(basis: &[u64], n: usize) -> u128 {
    basis.iter().fold(0u128, |acc, &w| (acc << n) | w as u128)
}

fn check_length(n: usize, limit: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::params(format!("oracle lengths are even and positive, got {n}")));
    }
    if n > limit {
        return Err(Error::params(format!("oracle length {n} exceeds the guard {limit}")));
    }
    Ok(())
}

/// Vectors completing `basis` (reduced) to a basis of `space`, reduced
/// against `basis`.
fn complement(basis: &[u64], space: &[u64]) -> Vec<u64> {
    let mut span = basis.to_vec();
    let mut out = Vec::new();
    for &v in space {
        if !word::in_span(&span, v) {
            out.push(v);
            span.push(v);
            word::rref(&mut span);
        }
    }
    out
}

/// Every self-dual code of length `n <= 12`, with its equivalence classes.
pub fn enumerate_all_self_dual(n: usize) -> Result<OracleCorpus> {
    check_length(n, DIRECT_LIMIT)?;
    let mut level: Vec<Vec<u64>> = vec![vec![word::all_ones(n)]];
    for _ in 1..n / 2 {
        let mut seen: HashSet<u128> = HashSet::new();
        let mut next = Vec::new();
        for basis in &level {
            let reps = complement(basis, &word::dual(basis, n));
            for combo in word::span(&reps).into_iter().skip(1) {
                let mut child = basis.clone();
                child.push(combo);
                word::rref(&mut child);
                if seen.insert(pack(&child, n)) {
                    next.push(child);
                }
            }
        }
        level = next;
    }
    let codes = level;
    let index: HashMap<u128, usize> = codes.iter().enumerate().map(|(i, b)| (pack(b, n), i)).collect();
    let (classes, class_of) = orbit_classes(&codes, &index, n);
    Ok(OracleCorpus {
        n,
        codes,
        classes,
        class_of,
        index,
    })
}

/// Orbits of `codes` (a permutation-closed set) under the symmetric group.
fn orbit_classes(codes: &[Vec<u64>], index: &HashMap<u128, usize>, n: usize) -> (Vec<OracleClass>, Vec<usize>) {
    let mut parent: Vec<usize> = (0..codes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut swap: Vec<usize> = (0..n).collect();
    if n > 1 {
        swap.swap(0, 1);
    }
    let cycle: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
    for (i, basis) in codes.iter().enumerate() {
        for g in [&swap, &cycle] {
            let mut image: Vec<u64> = basis.iter().map(|&w| word::permute(w, g)).collect();
            word::rref(&mut image);
            let j = index[&pack(&image, n)];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut members: Vec<(usize, u128)> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(codes.len());
    for i in 0..codes.len() {
        let root = find(&mut parent, i);
        let s = *slot.entry(root).or_insert_with(|| {
            members.push((i, 0));
            members.len() - 1
        });
        members[s].1 += 1;
        class_of.push(s);
    }
    let classes = members
        .into_iter()
        .map(|(first, size)| {
            let basis = &codes[first];
            OracleClass {
                representative: to_code(basis, n),
                size,
                min_distance: min_weight(basis),
                ty: if doubly_even(basis) { CodeType::TypeII } else { CodeType::TypeI },
            }
        })
        .collect();
    (classes, class_of)
}

/// Classes with minimum distance at least `d_min` and the given type.
pub fn classify(classes: &[OracleClass], d_min: usize, ty: CodeType) -> Vec<OracleClass> {
    classes
        .iter()
        .filter(|c| c.min_distance >= d_min && c.ty == ty)
        .cloned()
        .collect()
}

/// The two other self-dual codes through each hyperplane of `basis` that
/// contains the all-ones word.
fn all_neighbors(basis: &[u64], n: usize) -> Vec<Vec<u64>> {
    // even-weight vectors modulo the code index the hyperplanes through 1
    let even: Vec<u64> = (0..n - 1).map(|i| (0b11u64 << (n - 2)) >> i).collect();
    let reps = complement(basis, &even);
    let mut out = Vec::with_capacity(2 * ((1 << reps.len()) - 1));
    for y in word::span(&reps).into_iter().skip(1) {
        let odd = |b: u64| (b & y).count_ones() % 2 == 1;
        let c0 = *basis.iter().find(|&&b| odd(b)).expect("y lies outside the code");
        let hyper: Vec<u64> = basis
            .iter()
            .filter(|&&b| b != c0)
            .map(|&b| if odd(b) { b ^ c0 } else { b })
            .collect();
        for extra in [y, y ^ c0] {
            let mut nb = hyper.clone();
            nb.push(extra);
            word::rref(&mut nb);
            out.push(nb);
        }
    }
    out
}

/// All equivalence classes of self-dual codes of length `n <= 18`, reached
/// from `i2^(n/2)` through neighbors. Fails if the class sizes do not add up
/// to the number of self-dual codes.
pub fn neighbor_closure(n: usize) -> Result<Vec<OracleClass>> {
    check_length(n, CLOSURE_LIMIT)?;
    let mut start: Vec<u64> = (0..n / 2).map(|b| 0b11u64 << (n - 2 - 2 * b)).collect();
    word::rref(&mut start);
    let mut seen = HashSet::new();
    let mut classes: Vec<OracleClass> = Vec::new();
    let mut queue = VecDeque::new();
    let mut visit = |basis: Vec<u64>, classes: &mut Vec<OracleClass>, queue: &mut VecDeque<Vec<u64>>| -> Result<()> {
        let code = to_code(&basis, n);
        if seen.insert(equivalence::signature(&code)?) {
            let aut = equivalence::automorphism_group_order(&code)?;
            classes.push(OracleClass {
                size: factorial(n) / aut,
                min_distance: min_weight(&basis),
                ty: if doubly_even(&basis) { CodeType::TypeII } else { CodeType::TypeI },
                representative: code,
            });
            queue.push_back(basis);
        }
        Ok(())
    };
    visit(start, &mut classes, &mut queue)?;
    while let Some(basis) = queue.pop_front() {
        for nb in all_neighbors(&basis, n) {
            visit(nb, &mut classes, &mut queue)?;
        }
    }
    let total: u128 = classes.iter().map(|c| c.size).sum();
    if total != mass_formula(n) {
        return Err(Error::Internal(format!(
            "neighbor closure for n = {n} covers {total} codes, expected {}",
            mass_formula(n)
        )));
    }
    Ok(classes)
}

pub fn neighbor_closure_classify(n: usize, d_min: usize, ty: CodeType) -> Result<Vec<OracleClass>> {
    Ok(classify(&neighbor_closure(n)?, d_min, ty))
}

/// Writes class representatives to `<dir>/oracle_n<n>.codes` and records
/// the file's SHA-256 in `<dir>/oracle_n<n>.sha256`.
pub fn save_classes(dir: &Path, n: usize, classes: &[OracleClass]) -> Result<std::path::PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("oracle_n{n}.codes"));
    let codes: Vec<LinearCode> = classes.iter().map(|c| c.representative.clone()).collect();
    codefile::write_codes(&path, &codes)?;
    let digest = hex_digest(&fs::read(&path)?);
    fs::write(dir.join(format!("oracle_n{n}.sha256")), format!("{digest}  oracle_n{n}.codes\n"))?;
    Ok(path)
}

/// Loads cached representatives if the checksum matches; `Ok(None)` if no
/// cache exists.
pub fn load_cached(dir: &Path, n: usize) -> Result<Option<Vec<LinearCode>>> {
    let path = dir.join(format!("oracle_n{n}.codes"));
    let sum = dir.join(format!("oracle_n{n}.sha256"));
    if !path.exists() || !sum.exists() {
        return Ok(None);
    }
    let expected = fs::read_to_string(&sum)?;
    let expected = expected.split_whitespace().next().unwrap_or("");
    if hex_digest(&fs::read(&path)?) != expected {
        return Err(Error::Internal(format!("checksum mismatch for {}", path.display())));
    }
    codefile::load_codes(&path).map(Some)
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes_small() {
        assert_eq!(enumerate_all_self_dual(2).unwrap().codes.len(), 1);
        assert_eq!(enumerate_all_self_dual(4).unwrap().codes.len(), 3);
        assert_eq!(enumerate_all_self_dual(8).unwrap().codes.len(), 135);
        assert_eq!(mass_formula(8), 135);
        assert!(enumerate_all_self_dual(14).is_err());
        assert!(enumerate_all_self_dual(7).is_err());
    }

    #[test]
    fn classes_at_length_8() {
        let corpus = enumerate_all_self_dual(8).unwrap();
        // i2^4 and e8
        assert_eq!(corpus.classes.len(), 2);
        let e8 = classify(&corpus.classes, 4, CodeType::TypeII);
        assert_eq!(e8.len(), 1);
        assert_eq!(e8[0].size, 30);
        assert!(classify(&corpus.classes, 4, CodeType::TypeI).is_empty());
        let sizes: u128 = corpus.classes.iter().map(|c| c.size).sum();
        assert_eq!(sizes, 135);
    }

    #[test]
    fn closure_agrees_with_enumeration() {
        for n in [2usize, 4, 6, 8, 10] {
            let direct = enumerate_all_self_dual(n).unwrap();
            let closure = neighbor_closure(n).unwrap();
            assert_eq!(direct.classes.len(), closure.len(), "n={n}");
        }
    }

    #[test]
    fn neighbors_of_i2_squared() {
        let basis = vec![0b1100, 0b0011];
        let nbs = all_neighbors(&basis, 4);
        // one hyperplane through 1111, two neighbors
        assert_eq!(nbs.len(), 2);
        let mut sets: Vec<Vec<u64>> = nbs
            .iter()
            .map(|b| {
                let mut s = word::span(b);
                s.sort();
                s
            })
            .collect();
        sets.sort();
        assert_eq!(sets, vec![vec![0, 0b0101, 0b1010, 0b1111], vec![0, 0b0110, 0b1001, 0b1111]]);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let classes = enumerate_all_self_dual(8).unwrap().classes;
        assert!(load_cached(dir.path(), 8).unwrap().is_none());
        save_classes(dir.path(), 8, &classes).unwrap();
        assert_eq!(load_cached(dir.path(), 8).unwrap().unwrap().len(), 2);
        fs::write(dir.path().join("oracle_n8.codes"), "n=2 k=1 d=2 type=I\n11\n").unwrap();
        assert!(load_cached(dir.path(), 8).is_err());
    }
}
