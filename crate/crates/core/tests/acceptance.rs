//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use sdcode_core::code::{distance_bound, singly_even_row_count, CodeType, LinearCode};
use sdcode_core::equivalence::{self, CodeSignature};
use sdcode_core::gamma::build_tree;
use sdcode_core::gf2::{BitMatrix, BitVector};
use sdcode_core::mutable::MuTable;
use sdcode_core::neighbors::neighbors_through_kernel;
use sdcode_core::oracle::{self, OracleClass, OracleCorpus};
use sdcode_core::search::{run_search, Condition, SearchConfig};

type Check = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Duration,
    run: fn(&mut Shared) -> Check,
}

/// Oracle data reused across criteria.
#[derive(Default)]
struct Shared {
    direct: BTreeMap<usize, OracleCorpus>,
    closure: BTreeMap<usize, Vec<OracleClass>>,
    direct_time: Duration,
}

impl Shared {
    fn direct(&mut self, n: usize) -> &OracleCorpus {
        self.direct
            .entry(n)
            .or_insert_with(|| oracle::enumerate_all_self_dual(n).expect("direct oracle"))
    }

    fn closure(&mut self, n: usize) -> &[OracleClass] {
        self.closure
            .entry(n)
            .or_insert_with(|| oracle::neighbor_closure(n).expect("neighbor closure"))
    }

    /// Class representatives of every length in `lengths`.
    fn representatives(&mut self, lengths: impl IntoIterator<Item = usize>) -> Vec<LinearCode> {
        let mut out = Vec::new();
        for n in lengths {
            let classes: Vec<OracleClass> = if n <= oracle::DIRECT_LIMIT {
                self.direct(n).classes.clone()
            } else {
                self.closure(n).to_vec()
            };
            out.extend(classes.into_iter().map(|c| c.representative));
        }
        out
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn words(c: &LinearCode) -> Vec<u64> {
    c.generator().rows().iter().map(BitVector::to_word).collect()
}

fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &b in basis {
        let more: Vec<u64> = out.iter().map(|&w| w ^ b).collect();
        out.extend(more);
    }
    out
}

fn deduped_search(config: &SearchConfig) -> Result<(Vec<LinearCode>, usize), String> {
    let outcome = run_search(config).map_err(|e| e.to_string())?;
    let found = outcome.codes.len();
    let reps = equivalence::dedupe(outcome.codes).map_err(|e| e.to_string())?;
    Ok((reps, found))
}

fn mu_table_golden(_: &mut Shared) -> Check {
    // rows: w(r1) = 27, 25, ..., 11; columns: w(r2) = 27, 25, ..., 11
    const TABLE: [[&str; 9]; 9] = [
        ["-", "-", "-", "-", "18", "16", "14", "12", "10"],
        ["-", "-", "-", "18", "16", "14,16", "12,14", "10,12", "8,10"],
        ["-", "-", "18", "16", "14,16", "12,14", "10,12,14", "8,10,12", "6,8,10"],
        ["-", "18", "16", "14,16", "12,14", "10,12,14", "8,10,12", "6,8,10,12", "4,6,8,10"],
        ["18", "16", "14,16", "12,14", "10,12,14", "8,10,12", "6,8,10,12", "4,6,8,10", "2,4,6,8,10"],
        ["16", "14,16", "12,14", "10,12,14", "8,10,12", "6,8,10,12", "4,6,8,10", "2,4,6,8,10", "0,2,4,6,8"],
        ["14", "12,14", "10,12,14", "8,10,12", "6,8,10,12", "4,6,8,10", "2,4,6,8,10", "0,2,4,6,8", "0,2,4,6,8"],
        ["12", "10,12", "8,10,12", "6,8,10,12", "4,6,8,10", "2,4,6,8,10", "0,2,4,6,8", "0,2,4,6,8", "0,2,4,6"],
        ["10", "8,10", "6,8,10", "4,6,8,10", "2,4,6,8,10", "0,2,4,6,8", "0,2,4,6,8", "0,2,4,6", "0,2,4,6"],
    ];
    let table = MuTable::build(56, 28, 12, CodeType::TypeI).map_err(|e| e.to_string())?;
    let weights: Vec<usize> = (0..9).map(|i| 27 - 2 * i).collect();
    ensure(table.allowed_row_weights() == weights.as_slice(), || {
        format!("row weights {:?}", table.allowed_row_weights())
    })?;
    let mut matched = 0;
    for (i, &w1) in weights.iter().enumerate() {
        for (j, &w2) in weights.iter().enumerate() {
            let expected: Vec<usize> = match TABLE[i][j] {
                "-" => Vec::new(),
                s => s.split(',').map(|x| x.parse().unwrap()).collect(),
            };
            let got = table.cell(w1, w2);
            ensure(*got == *expected, || format!("cell ({w1},{w2}): {got:?} != {expected:?}"))?;
            matched += 1;
        }
    }
    Ok(format!("{matched}/81 cells"))
}

fn completeness_12(shared: &mut Shared) -> Check {
    let corpus = shared.direct(12);
    let expected: BTreeSet<usize> = corpus
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.min_distance >= 4 && c.ty == CodeType::TypeI)
        .map(|(i, _)| i)
        .collect();
    let outcome = run_search(&SearchConfig::new(12, 6, 4, CodeType::TypeI)).map_err(|e| e.to_string())?;
    // class membership from the oracle's own labelled corpus
    let mut found = BTreeSet::new();
    for c in &outcome.codes {
        let idx = corpus.class_index(c).ok_or("search yielded a code outside the corpus")?;
        found.insert(idx);
    }
    ensure(found == expected, || format!("classes {found:?} != oracle {expected:?}"))?;
    let reps = equivalence::dedupe(outcome.codes.clone()).map_err(|e| e.to_string())?;
    ensure(reps.len() == expected.len(), || {
        format!("dedupe kept {} codes for {} classes", reps.len(), expected.len())
    })?;
    ensure(reps.len() <= 2, || format!("{} classes, more than the known count 2", reps.len()))?;
    Ok(format!(
        "{} found, {} class(es), oracle {}",
        outcome.codes.len(),
        reps.len(),
        expected.len()
    ))
}

fn completeness_closure(shared: &mut Shared, n: usize, cap: usize) -> Check {
    let expected: HashSet<CodeSignature> = oracle::classify(shared.closure(n), 4, CodeType::TypeI)
        .iter()
        .map(|c| equivalence::signature(&c.representative).unwrap())
        .collect();
    let (reps, found) = deduped_search(&SearchConfig::new(n, n / 2, 4, CodeType::TypeI))?;
    let got: HashSet<CodeSignature> = reps
        .iter()
        .map(|c| equivalence::signature(c).unwrap())
        .collect();
    ensure(got.len() == reps.len(), || "dedupe kept equivalent codes".into())?;
    ensure(got == expected, || {
        format!("{} search classes vs {} oracle classes", got.len(), expected.len())
    })?;
    ensure(reps.len() <= cap, || format!("{} classes, more than the known count {cap}", reps.len()))?;
    Ok(format!("n={n}: {found} found, {} class(es), oracle {}", reps.len(), expected.len()))
}

fn completeness_14_16(shared: &mut Shared) -> Check {
    let t = Instant::now();
    let a = completeness_closure(shared, 14, 6)?;
    let t14 = t.elapsed();
    ensure(t14 < Duration::from_secs(60), || format!("n=14 took {t14:?}"))?;
    let b = completeness_closure(shared, 16, 43)?;
    Ok(format!("{a}; {b}"))
}

fn sanity_18(shared: &mut Shared) -> Check {
    let start = Instant::now();
    let wanted: Vec<CodeSignature> = oracle::classify(shared.closure(18), 4, CodeType::TypeI)
        .iter()
        .map(|c| equivalence::signature(&c.representative).unwrap())
        .collect();
    let mut config = SearchConfig::new(18, 9, 4, CodeType::TypeI);
    config.strategy.limits.time_budget_secs = Some(600.0);
    let mut missing: HashSet<CodeSignature> = wanted.iter().cloned().collect();
    let outcome = run_search(&config).map_err(|e| e.to_string())?;
    let mut first_cover = None;
    for (i, c) in outcome.codes.iter().enumerate() {
        missing.remove(&equivalence::signature(c).unwrap());
        if missing.is_empty() {
            first_cover = Some(i + 1);
            break;
        }
    }
    ensure(missing.is_empty(), || {
        format!("{} of {} oracle classes never found", missing.len(), wanted.len())
    })?;
    Ok(format!(
        "{} oracle classes covered by the first {} of {} codes in {:.1?}",
        wanted.len(),
        first_cover.unwrap(),
        outcome.codes.len(),
        start.elapsed()
    ))
}

fn mass_formula(shared: &mut Shared) -> Check {
    let spent = shared.direct_time;
    ensure(spent < Duration::from_secs(300), || format!("enumeration took {spent:.2?}"))?;
    let mut sizes = Vec::new();
    for n in (2..=12).step_by(2) {
        let corpus = shared.direct(n);
        let product: u128 = (1..n / 2).map(|i| 2u128.pow(i as u32) + 1).product();
        ensure(corpus.codes.len() as u128 == product, || {
            format!("n={n}: {} codes, formula {product}", corpus.codes.len())
        })?;
        let class_total: u128 = corpus.classes.iter().map(|c| c.size).sum();
        ensure(class_total == product, || format!("n={n}: class sizes add to {class_total}"))?;
        sizes.push(corpus.codes.len().to_string());
    }
    Ok(format!("sizes {} enumerated in {spent:.2?}", sizes.join(",")))
}

/// Corpus for the neighbor suites: every labelled code with n <= 12, and for
/// larger lengths each class representative under several random column
/// permutations.
fn neighbor_corpus(shared: &mut Shared, lengths: &[usize]) -> Vec<LinearCode> {
    let mut rng = StdRng::seed_from_u64(0x5d_c0de);
    let mut out = Vec::new();
    for &n in lengths {
        if n <= oracle::DIRECT_LIMIT {
            let corpus = shared.direct(n);
            out.extend((0..corpus.codes.len()).map(|i| corpus.code(i)));
        } else {
            for rep in shared.representatives([n]) {
                out.push(rep.clone());
                for _ in 0..20 {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.shuffle(&mut rng);
                    out.push(rep.permute_columns(&p));
                }
            }
        }
    }
    out
}

fn neighbor_parity(shared: &mut Shared) -> Check {
    let mut tested = 0;
    for c in neighbor_corpus(shared, &[4, 8, 12, 16]) {
        if c.classify_type() != CodeType::TypeI {
            continue;
        }
        let pair = neighbors_through_kernel(&c).map_err(|e| e.to_string())?;
        let (t1, t2) = (pair.n1.classify_type(), pair.n2.classify_type());
        ensure(t1 == t2 && t1 != CodeType::NotSelfDual, || {
            format!("n={}: neighbor types {t1:?} and {t2:?}", c.n())
        })?;
        tested += 1;
    }
    Ok(format!("{tested} Type I codes"))
}

fn singly_even_cosets(shared: &mut Shared) -> Check {
    let mut tested = 0;
    for c in neighbor_corpus(shared, &[8, 16]) {
        if c.classify_type() != CodeType::TypeI {
            continue;
        }
        let pair = neighbors_through_kernel(&c).map_err(|e| e.to_string())?;
        if pair.n1.classify_type() != CodeType::TypeII {
            continue;
        }
        let n = c.n();
        let k = c.k();
        // C0 and its dual by brute force over all 2^n words
        let base: HashSet<u64> = span(&words(&c)).into_iter().collect();
        let kernel: Vec<u64> = base.iter().copied().filter(|w| w.count_ones() % 4 == 0).collect();
        ensure(kernel.len() == 1 << (k - 1), || format!("kernel has {} words", kernel.len()))?;
        let kernel_basis = words(&pair.kernel);
        let singly: Vec<u64> = (0..1u64 << n)
            .filter(|&v| kernel_basis.iter().all(|&b| (b & v).count_ones() % 2 == 0))
            .filter(|v| v.count_ones() % 4 == 2)
            .collect();
        ensure(singly.len() == 1 << (k - 1), || {
            format!("n={n}: {} singly-even words in the kernel dual", singly.len())
        })?;
        ensure(singly.iter().all(|v| base.contains(v)), || {
            format!("n={n}: a singly-even word of the kernel dual lies outside the code")
        })?;
        tested += 1;
    }
    ensure(tested > 0, || "no singly-even/doubly-even pairs in the corpus".into())?;
    Ok(format!("{tested} pairs"))
}

/// Singly-even row counts of the standard-form generator on every
/// information set of `c`.
fn standard_form_counts(c: &LinearCode) -> Vec<usize> {
    let n = c.n();
    let k = c.k();
    let basis = words(c);
    let bit = |j: usize| 1u64 << (n - 1 - j);
    let mut counts = Vec::new();
    for set in 0u64..1 << n {
        if set.count_ones() as usize != k {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&j| set >> (n - 1 - j) & 1 == 1).collect();
        let mut rows = basis.clone();
        let mut ok = true;
        for (i, &col) in cols.iter().enumerate() {
            let Some(p) = (i..k).find(|&r| rows[r] & bit(col) != 0) else {
                ok = false;
                break;
            };
            rows.swap(i, p);
            let pivot = rows[i];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != i && *row & bit(col) != 0 {
                    *row ^= pivot;
                }
            }
        }
        if ok {
            counts.push(rows.iter().filter(|w| w.count_ones() % 4 == 2).count());
        }
    }
    counts
}

fn row_parity(shared: &mut Shared) -> Check {
    // every class member's standard forms are column permutations of the
    // representative's, so representatives over all information sets cover
    // the corpus
    let mut forms = 0;
    for c in shared.representatives([4, 8, 12, 16]) {
        let ty = c.classify_type();
        let counts = standard_form_counts(&c);
        ensure(!counts.is_empty(), || "no information set".into())?;
        for count in counts {
            ensure(count % 2 == 0, || format!("n={}: {count} singly-even rows", c.n()))?;
            ensure(ty != CodeType::TypeI || count >= 2, || {
                format!("n={}: Type I with {count} singly-even rows", c.n())
            })?;
            forms += 1;
        }
        let (sf, _) = c.standard_form();
        ensure(singly_even_row_count(sf.generator()).is_multiple_of(2), || "library standard form".into())?;
    }
    Ok(format!("{forms} standard-form generators"))
}

fn gamma_round_trip(_: &mut Shared) -> Check {
    let example = BitMatrix::parse_rows(&["111110", "111001", "100101", "100010", "000110", "000101"])
        .map_err(|e| e.to_string())?;
    let tree = build_tree(&example).map_err(|e| e.to_string())?;
    let leaves: BTreeSet<BTreeSet<usize>> = tree
        .leaves()
        .into_iter()
        .map(|l| l.into_iter().map(|c| c + 1).collect())
        .collect();
    let expected: BTreeSet<BTreeSet<usize>> = [vec![2, 3], vec![1], vec![4], vec![5], vec![6]]
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    ensure(leaves == expected, || format!("example leaves {leaves:?}"))?;
    ensure(tree.reconstruct().map_err(|e| e.to_string())? == example, || "example round trip".into())?;

    let mut rng = StdRng::seed_from_u64(22);
    for trial in 0..1000 {
        let k = rng.random_range(1..=10);
        let cols = rng.random_range(1..=16);
        let mut rows: Vec<BitVector> = (0..k)
            .map(|_| BitVector::from_bits(&(0..cols).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>()))
            .collect();
        rows.sort_by_key(|r| std::cmp::Reverse(r.weight()));
        let a = BitMatrix::new(rows, cols).map_err(|e| e.to_string())?;
        let back = build_tree(&a).and_then(|t| t.reconstruct()).map_err(|e| e.to_string())?;
        ensure(back == a, || format!("trial {trial}: {a:?} came back as {back:?}"))?;
    }
    Ok("1000 random matrices plus the example".into())
}

fn distance_guard(_: &mut Shared) -> Check {
    for (n, bound) in [(56, 12), (12, 4), (22, 6), (24, 8), (46, 10)] {
        let got = distance_bound(n, CodeType::TypeI).map_err(|e| e.to_string())?;
        ensure(got == bound, || format!("bound({n}) = {got}, expected {bound}"))?;
        // independent formula
        let formula = if n % 24 == 22 { 4 * (n / 24) + 6 } else { 4 * (n / 24) + 4 };
        ensure(got == formula, || format!("bound({n}) disagrees with the formula"))?;
        let over = SearchConfig::new(n, n / 2, bound + 1, CodeType::TypeI).validate();
        ensure(over.is_err(), || format!("n={n}, d={} accepted", bound + 1))?;
        let at = SearchConfig::new(n, n / 2, bound, CodeType::TypeI).validate();
        ensure(at.is_ok(), || format!("n={n}, d={bound} rejected: {at:?}"))?;
    }
    Ok("n=56 -> 12, n=12 -> 4, n=22 -> 6; one above is rejected".into())
}

fn pruning_soundness(shared: &mut Shared) -> Check {
    let mut runs = 0;
    for n in (2..=10).step_by(2) {
        for ty in [CodeType::TypeI, CodeType::TypeII] {
            if ty == CodeType::TypeII && n % 8 != 0 {
                continue;
            }
            let bound = distance_bound(n, ty).unwrap();
            for d in 2..=bound {
                let corpus = shared.direct(n);
                let expected: BTreeSet<usize> = corpus
                    .classes
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.min_distance >= d && c.ty == ty)
                    .map(|(i, _)| i)
                    .collect();
                let base = SearchConfig::new(n, n / 2, d, ty);
                let mut configs = vec![("all".to_string(), base.clone())];
                for c in base.conditions() {
                    if Condition::PER_ROW.contains(&c) {
                        configs.push((c.name().to_string(), base.clone().without(c)));
                    }
                }
                for (label, config) in configs {
                    let (reps, _) = deduped_search(&config)?;
                    let got: BTreeSet<usize> = reps
                        .iter()
                        .map(|c| corpus.class_index(c).expect("code in corpus"))
                        .collect();
                    ensure(got == expected, || {
                        format!("({n},{},{d}) {ty:?} without {label}: {got:?} != {expected:?}", n / 2)
                    })?;
                    ensure(got.len() == reps.len(), || "dedupe kept equivalent codes".into())?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} searches agree with the oracle"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "mu table (56,28,12) Type I", limit: Duration::from_secs(1), run: mu_table_golden },
        Criterion { id: 2, name: "completeness (12,6,4) Type I", limit: Duration::from_secs(10), run: completeness_12 },
        Criterion { id: 3, name: "completeness (14,7,4), (16,8,4) Type I", limit: Duration::from_secs(660), run: completeness_14_16 },
        Criterion { id: 4, name: "sanity run (18,9,4) Type I", limit: Duration::from_secs(600), run: sanity_18 },
        Criterion { id: 5, name: "mass formula n = 2..12", limit: Duration::from_secs(300), run: mass_formula },
        Criterion { id: 6, name: "neighbor parity suite", limit: Duration::from_secs(300), run: neighbor_parity },
        Criterion { id: 7, name: "singly-even vectors of the kernel dual", limit: Duration::from_secs(300), run: singly_even_cosets },
        Criterion { id: 8, name: "standard-form row parity", limit: Duration::from_secs(300), run: row_parity },
        Criterion { id: 9, name: "partition tree round trip", limit: Duration::from_secs(60), run: gamma_round_trip },
        Criterion { id: 10, name: "distance-bound guard", limit: Duration::from_secs(1), run: distance_guard },
        Criterion { id: 11, name: "pruning soundness n <= 10", limit: Duration::from_secs(300), run: pruning_soundness },
    ];
    // oracle data is built once, outside the per-criterion clocks
    let mut shared = Shared::default();
    let start = Instant::now();
    for n in (2..=oracle::DIRECT_LIMIT).step_by(2) {
        shared.direct(n);
    }
    shared.direct_time = start.elapsed();
    for n in [14, 16, 18] {
        shared.closure(n);
    }
    println!(
        "oracle: direct n <= 12 in {:.2?}, closure n = 14..18 in {:.2?}",
        shared.direct_time,
        start.elapsed() - shared.direct_time
    );
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)(&mut shared);
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= c.limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {:?}", c.limit))
            }
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {}: {detail} ({elapsed:.2?}, limit {:?})", c.id, c.name, c.limit),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {}: {why} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
