use super::*;
use crate::gamma::block_sorted;
use crate::gf2::BitVector;

fn cfg(n: usize, d: usize, ty: CodeType) -> SearchConfig {
    SearchConfig::new(n, n / 2, d, ty)
}

fn bits(row: u64, a: usize) -> String {
    BitVector::from_word(row, a).to_string()
}

#[test]
fn starter_rows() {
    let s = starters(&cfg(12, 4, CodeType::TypeI)).unwrap();
    let rows: Vec<String> = s.iter().map(|n| bits(n.a_rows()[0], 6)).collect();
    assert_eq!(rows, vec!["111110", "111000"]);
    let s = starters(&cfg(8, 4, CodeType::TypeII)).unwrap();
    let rows: Vec<String> = s.iter().map(|n| bits(n.a_rows()[0], 4)).collect();
    assert_eq!(rows, vec!["1110"]);
    let mut asc = cfg(12, 4, CodeType::TypeI);
    asc.strategy.order = Order::Ascending;
    let rows: Vec<String> = starters(&asc)
        .unwrap()
        .iter()
        .map(|n| bits(n.a_rows()[0], 6))
        .collect();
    assert_eq!(rows, vec!["111000", "111110"]);
    assert!(starters(&cfg(12, 6, CodeType::TypeI)).is_err());
}

#[test]
fn compositions_enumerate_block_prefixes() {
    // blocks {0,1,2} and {3,4} of five columns
    let blocks = [0b11100, 0b00011];
    let rows: Vec<u64> = Compositions::new(&blocks, 3).collect();
    assert_eq!(rows, vec![0b11100, 0b11010, 0b10011]);
    assert_eq!(Compositions::new(&blocks, 0).collect::<Vec<_>>(), vec![0]);
    assert!(Compositions::new(&blocks, 6).next().is_none());
    // the count equals the number of (c1, c2) with c1 <= 3, c2 <= 2
    for w in 0..=5usize {
        let expected = (0..=3usize).filter(|&c| c <= w && w - c <= 2).count();
        assert_eq!(Compositions::new(&blocks, w).count(), expected);
    }
}

#[test]
fn subsets_cover_every_row_of_a_weight() {
    for a in 1..=7usize {
        for w in 0..=a {
            let rows: Vec<u64> = Subsets::new(a, w).collect();
            let expected = (0u64..1 << a).filter(|r| r.count_ones() as usize == w).count();
            assert_eq!(rows.len(), expected, "a={a} w={w}");
            assert!(rows.windows(2).all(|p| p[0] > p[1]));
            assert!(rows.iter().all(|r| r.count_ones() as usize == w));
        }
    }
}

#[test]
fn children_obey_every_enabled_condition() {
    let config = cfg(12, 4, CodeType::TypeI);
    let rules = Rules::new(12, 6, 4, CodeType::TypeI);
    let first = &starters(&config).unwrap()[0];
    let kids = children(&config, first).unwrap();
    assert!(!kids.is_empty());
    for kid in &kids {
        let row = kid.a_rows()[1];
        for c in Condition::PER_ROW {
            assert!(c.accepts_row(&rules, first, row), "{c}");
        }
        let partition = first.partition(6);
        assert!(block_sorted(&partition, &BitVector::from_word(row, 6)).unwrap());
        let mu = kid.mu(0, 1) as usize;
        assert!(crate::mutable::mu_set(5, kid.weights()[1], 12, 6, 4).contains(&mu));
    }
}

#[test]
fn finds_the_extended_hamming_code() {
    let out = run_search(&cfg(8, 4, CodeType::TypeII)).unwrap();
    assert!(!out.codes.is_empty());
    for c in &out.codes {
        assert!(c.is_self_dual());
        assert_eq!(c.classify_type(), CodeType::TypeII);
        assert_eq!(c.min_distance(), Some(4));
    }
    assert!(out.report.is_consistent(), "{}", out.report);
}

#[test]
fn no_code_of_length_10_and_distance_4() {
    let out = run_search(&cfg(10, 4, CodeType::TypeI)).unwrap();
    assert!(out.codes.is_empty());
    assert!(out.report.is_consistent());
    assert_eq!(out.report.limit_reached, None);
}

#[test]
fn yields_are_sound_and_deterministic() {
    let config = cfg(12, 4, CodeType::TypeI);
    let a = run_search(&config).unwrap();
    let b = run_search(&config).unwrap();
    assert!(!a.codes.is_empty());
    assert_eq!(a.codes.len(), b.codes.len());
    for (x, y) in a.codes.iter().zip(&b.codes) {
        assert_eq!(x.generator(), y.generator());
        assert!(x.is_self_dual());
        assert_eq!(x.classify_type(), CodeType::TypeI);
        assert!(x.min_distance().unwrap() >= 4);
    }
    assert!(a.report.is_consistent(), "{}", a.report);
    assert_eq!(a.report.yields, a.codes.len() as u64);
    assert_eq!(a.report.starters, 2);
}

#[test]
fn limits_end_the_stream_cleanly() {
    let mut config = cfg(12, 4, CodeType::TypeI);
    config.strategy.limits.max_solutions = Some(1);
    let out = run_search(&config).unwrap();
    assert_eq!(out.codes.len(), 1);
    assert_eq!(out.report.limit_reached, Some(LimitKind::MaxSolutions));

    let mut config = cfg(16, 4, CodeType::TypeI);
    config.strategy.limits.max_nodes = Some(10);
    let out = run_search(&config).unwrap();
    assert_eq!(out.report.nodes_expanded, 10);
    assert_eq!(out.report.limit_reached, Some(LimitKind::MaxNodes));
    assert!(out.report.is_consistent());

    let mut config = cfg(16, 4, CodeType::TypeI);
    config.strategy.limits.time_budget_secs = Some(0.0);
    let out = run_search(&config).unwrap();
    assert!(out.codes.is_empty());
    assert_eq!(out.report.limit_reached, Some(LimitKind::TimeBudget));
}

#[test]
fn parallel_merge_matches_sequential_order() {
    let config = cfg(14, 4, CodeType::TypeI);
    let seq = run_search(&config).unwrap();
    let mut par_cfg = config.clone();
    par_cfg.strategy.parallel = true;
    let par = run_search(&par_cfg).unwrap();
    assert_eq!(seq.codes.len(), par.codes.len());
    for (x, y) in seq.codes.iter().zip(&par.codes) {
        assert_eq!(x.generator(), y.generator());
    }
    assert_eq!(seq.report.nodes_expanded, par.report.nodes_expanded);
    assert_eq!(seq.report.pruned, par.report.pruned);
    assert!(par.report.is_consistent());
}

#[test]
fn cache_verification_mode() {
    let mut config = cfg(12, 2, CodeType::TypeI);
    config.strategy.verify_caches = true;
    let out = run_search(&config).unwrap();
    assert!(!out.codes.is_empty());
}

#[test]
fn validation_errors_name_the_key() {
    let bad = |c: SearchConfig, key: &str| match c.validate() {
        Err(Error::Config { path, .. }) => assert_eq!(path, key),
        other => panic!("expected config error at {key}, got {other:?}"),
    };
    bad(SearchConfig::new(12, 5, 4, CodeType::TypeI), "target.k");
    bad(SearchConfig::new(12, 6, 6, CodeType::TypeI), "target.d");
    bad(SearchConfig::new(56, 28, 14, CodeType::TypeI), "target.d");
    bad(SearchConfig::new(12, 6, 4, CodeType::TypeII), "target.type");
    bad(SearchConfig::new(13, 6, 4, CodeType::TypeI), "target.n");
    bad(
        cfg(12, 4, CodeType::TypeI)
            .without(Condition::SpanWindowCondition)
            .without(Condition::DistanceCondition),
        "strategy.conditions",
    );
    bad(
        SearchConfig::new(8, 4, 2, CodeType::NotSelfDual).with_conditions(&[Condition::MuCondition]),
        "strategy.conditions",
    );
    assert!(SearchConfig::new(56, 28, 12, CodeType::TypeI).validate().is_ok());
    assert!(SearchConfig::new(22, 11, 6, CodeType::TypeI).validate().is_ok());
}

#[test]
fn linear_mode_finds_the_hamming_code() {
    let out = run_search(&SearchConfig::new(7, 4, 3, CodeType::NotSelfDual)).unwrap();
    assert!(!out.codes.is_empty());
    for c in &out.codes {
        assert_eq!((c.n(), c.k()), (7, 4));
        assert!(c.min_distance().unwrap() >= 3);
    }
    assert!(run_search(&SearchConfig::new(7, 4, 4, CodeType::NotSelfDual))
        .unwrap()
        .codes
        .is_empty());
}

#[test]
fn tiny_lengths() {
    // n = 2: the single code {00, 11}; n = 4: i2 + i2 up to equivalence
    let out = run_search(&cfg(2, 2, CodeType::TypeI)).unwrap();
    assert_eq!(out.codes.len(), 1);
    let out = run_search(&cfg(4, 2, CodeType::TypeI)).unwrap();
    assert!(!out.codes.is_empty());
}

#[test]
fn logs_carry_indices_and_report() {
    use crate::persist::logger::MemoryLogger;
    let log = Arc::new(MemoryLogger::new(Level::Info));
    let out = run_search_with_logger(&cfg(8, 4, CodeType::TypeII), log.clone()).unwrap();
    let events = log.events();
    assert_eq!(events.first().unwrap().name, "search_started");
    let found: Vec<&Event> = events.iter().filter(|e| e.name == "code_found").collect();
    assert_eq!(found.len(), out.codes.len());
    assert_eq!(found[0].field("index"), Some("1"));
    let done = events.last().unwrap();
    assert_eq!(done.name, "search_done");
    assert_eq!(done.field("yields"), Some(out.codes.len().to_string().as_str()));
}
