//! Depth-first construction of standard-form generators `(I_k | A)`, one
//! A-row per level.
//!
//! Starters are the depth-1 nodes. Each node's children append one A-row of
//! admissible weight that passes every enabled per-row condition; full-depth
//! nodes become codes once the final conditions hold. Every yielded code is
//! rechecked from scratch: self-duality and type for self-dual targets, then
//! the enabled final conditions.

pub mod condition;
pub mod node;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use condition::{default_conditions, Applicability, Condition};
pub use node::{Rules, SearchNode};

use crate::code::{distance_bound, CodeType, LinearCode, ENUMERATION_GUARD};
use crate::error::{Error, Result};
use crate::persist::logger::{Event, Level, Logger, NullLogger};
use condition::top_bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    #[serde(rename = "type")]
    pub ty: CodeType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Order {
    #[serde(rename = "asc", alias = "ascending")]
    Ascending,
    #[default]
    #[serde(rename = "desc", alias = "descending")]
    Descending,
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asc" | "ascending" => Ok(Order::Ascending),
            "desc" | "descending" => Ok(Order::Descending),
            other => Err(Error::params(format!("unknown order {other:?}, expected asc or desc"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_solutions: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_secs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Strategy {
    /// Enabled conditions; `None` means the default set for the type.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Vec<Condition>>,
    /// Removed from the enabled set after `conditions` is resolved.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disable: Vec<Condition>,
    #[serde(default)]
    pub order: Order,
    /// Upper bound on the weight of a full generator row `(e_i | r_i)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_row_weight: Option<usize>,
    #[serde(default)]
    pub limits: Limits,
    /// Search starter subtrees on a thread pool.
    #[serde(default)]
    pub parallel: bool,
    /// Recompute node caches from scratch at every node.
    #[serde(default)]
    pub verify_caches: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sink {
    /// Directory receiving found codes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<std::path::PathBuf>,
    #[serde(default)]
    pub silent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub target: Target,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub sink: Sink,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, d: usize, ty: CodeType) -> Self {
        SearchConfig {
            target: Target { n, k, d, ty },
            strategy: Strategy::default(),
            sink: Sink::default(),
        }
    }

    /// The enabled conditions, in canonical order.
    pub fn conditions(&self) -> Vec<Condition> {
        let base = self
            .strategy
            .conditions
            .clone()
            .unwrap_or_else(|| default_conditions(self.target.ty));
        Condition::ALL
            .into_iter()
            .filter(|c| base.contains(c) && !self.strategy.disable.contains(c))
            .collect()
    }

    pub fn without(mut self, c: Condition) -> Self {
        self.strategy.disable.push(c);
        self
    }

    pub fn with_conditions(mut self, cs: &[Condition]) -> Self {
        self.strategy.conditions = Some(cs.to_vec());
        self.strategy.disable.clear();
        self
    }

    pub fn validate(&self) -> Result<()> {
        let Target { n, k, d, ty } = self.target;
        if n < 2 {
            return Err(Error::config("target.n", format!("length must be at least 2, got {n}")));
        }
        if k == 0 || k > n {
            return Err(Error::config("target.k", format!("dimension must lie in 1..={n}, got {k}")));
        }
        if k > ENUMERATION_GUARD {
            return Err(Error::config(
                "target.k",
                format!("dimension {k} exceeds the search guard {ENUMERATION_GUARD}"),
            ));
        }
        if n - k > 64 {
            return Err(Error::config("target.n", "the A block is limited to 64 columns"));
        }
        if d == 0 {
            return Err(Error::config("target.d", "minimum distance must be positive"));
        }
        if ty == CodeType::NotSelfDual {
            if d > n - k + 1 {
                return Err(Error::config(
                    "target.d",
                    format!("d = {d} exceeds the Singleton bound n - k + 1 = {}", n - k + 1),
                ));
            }
        } else {
            if n % 2 != 0 {
                return Err(Error::config("target.n", format!("self-dual codes need even length, got {n}")));
            }
            if 2 * k != n {
                return Err(Error::config("target.k", format!("k = {k} must equal n/2 = {}", n / 2)));
            }
            if ty == CodeType::TypeII && n % 8 != 0 {
                return Err(Error::config(
                    "target.type",
                    format!("Type II codes exist only for n divisible by 8, got {n}"),
                ));
            }
            let bound = distance_bound(n, ty)?;
            if d > bound {
                return Err(Error::config(
                    "target.d",
                    format!("d = {d} exceeds the distance bound {bound} for n = {n}"),
                ));
            }
        }
        let conds = self.conditions();
        for c in &conds {
            if !c.supports(ty) {
                return Err(Error::config(
                    "strategy.conditions",
                    format!("{c} does not apply to type {}", ty.tag()),
                ));
            }
        }
        if conds.contains(&Condition::DualFilterCondition) && n % 4 != 0 {
            return Err(Error::config(
                "strategy.conditions",
                "dual_filter_condition needs n divisible by 4",
            ));
        }
        if !conds.contains(&Condition::SpanWindowCondition) && !conds.contains(&Condition::DistanceCondition) {
            return Err(Error::config(
                "strategy.conditions",
                "span_window_condition and distance_condition cannot both be disabled",
            ));
        }
        if self.strategy.max_row_weight == Some(0) {
            return Err(Error::config("strategy.max_row_weight", "must be at least 1"));
        }
        if let Some(t) = self.strategy.limits.time_budget_secs {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::config(
                    "strategy.limits.time_budget_secs",
                    "must be a non-negative number",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    MaxSolutions,
    MaxNodes,
    TimeBudget,
}

impl LimitKind {
    pub fn name(self) -> &'static str {
        match self {
            LimitKind::MaxSolutions => "max_solutions",
            LimitKind::MaxNodes => "max_nodes",
            LimitKind::TimeBudget => "time_budget",
        }
    }
}

/// Counters of one run.
///
/// Every materialized candidate row is either pruned by the first per-row
/// condition it fails or accepted as a node, so
/// `candidates_examined = nodes_expanded + sum of per-row prunes`. Rows
/// excluded during generation (type, monotonicity, block order, the row
/// weight cap) are never materialized and are not counted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SearchReport {
    pub starters: u64,
    pub nodes_expanded: u64,
    pub candidates_examined: u64,
    /// Full-depth nodes submitted to the final checks.
    pub leaves: u64,
    pub pruned: BTreeMap<String, u64>,
    pub yields: u64,
    pub limit_reached: Option<LimitKind>,
    pub elapsed_secs: f64,
}

/// Name under which leaves failing the intrinsic self-duality/type recheck
/// are counted.
pub const SELF_DUALITY: &str = "self_duality";

impl SearchReport {
    pub fn pruned_by(&self, name: &str) -> u64 {
        self.pruned.get(name).copied().unwrap_or(0)
    }

    /// Checks the accounting identities.
    pub fn is_consistent(&self) -> bool {
        let per_row: u64 = Condition::PER_ROW.iter().map(|c| self.pruned_by(c.name())).sum();
        let finals: u64 = Condition::ALL
            .iter()
            .filter(|c| c.applicability() == Applicability::Final)
            .map(|c| self.pruned_by(c.name()))
            .sum::<u64>()
            + self.pruned_by(SELF_DUALITY);
        self.candidates_examined == self.nodes_expanded + per_row
            && self.leaves == self.yields + finals
            && self.starters <= self.nodes_expanded
    }

    fn absorb(&mut self, other: &SearchReport) {
        self.starters += other.starters;
        self.nodes_expanded += other.nodes_expanded;
        self.candidates_examined += other.candidates_examined;
        self.leaves += other.leaves;
        self.yields += other.yields;
        for (k, v) in &other.pruned {
            *self.pruned.entry(k.clone()).or_insert(0) += v;
        }
        if self.limit_reached.is_none() {
            self.limit_reached = other.limit_reached;
        }
    }

    fn to_event(&self, level: Level, name: &'static str) -> Event {
        let mut e = Event::new(level, name)
            .with("starters", self.starters)
            .with("nodes_expanded", self.nodes_expanded)
            .with("candidates_examined", self.candidates_examined)
            .with("leaves", self.leaves)
            .with("yields", self.yields);
        for (k, v) in &self.pruned {
            e = e.with(&format!("pruned.{k}"), v);
        }
        e.with(
            "limit_reached",
            self.limit_reached.map_or("none", LimitKind::name),
        )
        .with("elapsed_secs", format!("{:.3}", self.elapsed_secs))
    }
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.to_event(Level::Info, "report");
        let parts: Vec<String> = e.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Validated, immutable search settings shared by all workers.
#[derive(Debug)]
struct Plan {
    rules: Rules,
    order: Order,
    max_row_weight: Option<usize>,
    mu: bool,
    span: bool,
    ty: bool,
    gamma: bool,
    monotone: bool,
    finals: Vec<Condition>,
    limits: Limits,
    verify: bool,
}

impl Plan {
    fn new(config: &SearchConfig) -> Result<Self> {
        config.validate()?;
        let t = config.target;
        let conds = config.conditions();
        let on = |c| conds.contains(&c);
        Ok(Plan {
            rules: Rules::new(t.n, t.k, t.d, t.ty),
            order: config.strategy.order,
            max_row_weight: config.strategy.max_row_weight,
            mu: on(Condition::MuCondition),
            span: on(Condition::SpanWindowCondition),
            ty: on(Condition::TypeCondition),
            gamma: on(Condition::GammaOrderCondition),
            monotone: on(Condition::WeightMonotoneCondition),
            finals: conds
                .iter()
                .copied()
                .filter(|c| c.applicability() == Applicability::Final)
                .collect(),
            limits: config.strategy.limits.clone(),
            verify: config.strategy.verify_caches,
        })
    }

    /// A-row weights a child of `node` may have, in search order.
    fn weights(&self, node: &SearchNode) -> Vec<usize> {
        let r = &self.rules;
        let mut ws: Vec<usize> = (0..=r.a_cols)
            .filter(|&w| !self.ty || r.type_admits(w))
            .filter(|&w| !self.monotone || node.last_weight().is_none_or(|p| w <= p))
            .filter(|&w| self.max_row_weight.is_none_or(|m| w < m))
            .filter(|&w| !self.span || r.weight_in_window(1 + w, r.k == 1))
            .collect();
        if self.order == Order::Descending {
            ws.reverse();
        }
        ws
    }

    fn candidates(&self, node: &SearchNode) -> Candidates {
        let mode = if node.depth() == 0 {
            Mode::LeftJustified
        } else if self.gamma {
            Mode::Blocks(node.block_masks().to_vec())
        } else {
            Mode::All
        };
        Candidates {
            weights: self.weights(node),
            next_weight: 0,
            mode,
            a_cols: self.rules.a_cols,
            rows: None,
        }
    }

    /// First failing per-row condition checked at materialization time.
    fn reject(&self, node: &SearchNode, row: u64) -> Option<Condition> {
        if self.mu && !Condition::MuCondition.accepts_row(&self.rules, node, row) {
            return Some(Condition::MuCondition);
        }
        if self.span && !condition::span_window_admits(&self.rules, node, row) {
            return Some(Condition::SpanWindowCondition);
        }
        None
    }

    /// Final checks; `Ok(None)` when the code survives.
    fn final_reject(&self, code: &LinearCode) -> Result<Option<&'static str>> {
        if self.rules.ty != CodeType::NotSelfDual
            && (!code.is_self_dual() || code.classify_type() != self.rules.ty)
        {
            return Ok(Some(SELF_DUALITY));
        }
        for c in &self.finals {
            if !c.accepts_code(&self.rules, code)? {
                return Ok(Some(c.name()));
            }
        }
        Ok(None)
    }
}

enum Mode {
    LeftJustified,
    Blocks(Vec<u64>),
    All,
}

/// Lazily enumerates candidate rows of a node, weight by weight.
struct Candidates {
    weights: Vec<usize>,
    next_weight: usize,
    mode: Mode,
    a_cols: usize,
    rows: Option<RowIter>,
}

enum RowIter {
    Single(Option<u64>),
    Blocks(Compositions),
    Subsets(Subsets),
}

impl Iterator for RowIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self {
            RowIter::Single(r) => r.take(),
            RowIter::Blocks(c) => c.next(),
            RowIter::Subsets(s) => s.next(),
        }
    }
}

impl Candidates {
    fn next_row(&mut self) -> Option<u64> {
        loop {
            if let Some(row) = self.rows.as_mut().and_then(Iterator::next) {
                return Some(row);
            }
            let &w = self.weights.get(self.next_weight)?;
            self.next_weight += 1;
            let full = crate::gf2::word::all_ones(self.a_cols);
            self.rows = Some(match &self.mode {
                Mode::LeftJustified => RowIter::Single(Some(top_bits(full, w as u32))),
                Mode::Blocks(blocks) => RowIter::Blocks(Compositions::new(blocks, w)),
                Mode::All => RowIter::Subsets(Subsets::new(self.a_cols, w)),
            });
        }
    }
}

/// Rows that take a prefix (highest bits) of every block, with total weight
/// `w`, numerically largest first.
struct Compositions {
    /// `prefix[i][c]` is the top `c` bits of block `i`.
    prefix: Vec<Vec<u64>>,
    /// `cap[i]` is the total size of blocks `i..`.
    cap: Vec<usize>,
    counts: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl Compositions {
    fn new(blocks: &[u64], w: usize) -> Self {
        let prefix: Vec<Vec<u64>> = blocks
            .iter()
            .map(|&b| (0..=b.count_ones()).map(|c| top_bits(b, c)).collect())
            .collect();
        let m = blocks.len();
        let mut cap = vec![0; m + 1];
        for i in (0..m).rev() {
            cap[i] = cap[i + 1] + blocks[i].count_ones() as usize;
        }
        let mut out = Compositions {
            prefix,
            cap,
            counts: vec![0; m],
            fresh: true,
            done: w > 0 && m == 0,
        };
        if w > out.cap[0] {
            out.done = true;
        } else {
            out.fill(0, w);
        }
        out
    }

    /// Greedily places `total` ones into blocks `from..`, earliest first.
    fn fill(&mut self, from: usize, mut total: usize) {
        for i in from..self.counts.len() {
            let size = self.prefix[i].len() - 1;
            let c = size.min(total);
            self.counts[i] = c;
            total -= c;
        }
        debug_assert_eq!(total, 0);
    }

    fn row(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | self.prefix[i][c])
    }
}

impl Iterator for Compositions {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.row());
        }
        // move one unit from the rightmost movable block to the blocks after
        let m = self.counts.len();
        let mut tail = 0usize;
        for i in (0..m).rev() {
            if i + 1 < m && self.counts[i] > 0 && tail < self.cap[i + 1] {
                self.counts[i] -= 1;
                self.fill(i + 1, tail + 1);
                return Some(self.row());
            }
            tail += self.counts[i];
        }
        self.done = true;
        None
    }
}

/// All `w`-subsets of the `a` columns, numerically largest first. Walks the
/// complements in increasing order with Gosper's rule.
struct Subsets {
    full: u64,
    zeros: usize,
    a: usize,
    cur: Option<u64>,
}

impl Subsets {
    fn new(a: usize, w: usize) -> Self {
        let zeros = a - w;
        Subsets {
            full: crate::gf2::word::all_ones(a),
            zeros,
            a,
            cur: Some(crate::gf2::word::all_ones(zeros)),
        }
    }
}

impl Iterator for Subsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let x = self.cur?;
        self.cur = if self.zeros == 0 || self.zeros == self.a {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let next = (((r ^ x) >> 2) / c) | r;
            (next <= self.full && next.count_ones() as usize == self.zeros).then_some(next)
        };
        Some(!x & self.full)
    }
}

struct Frame {
    node: SearchNode,
    candidates: Candidates,
}

/// Depth-first search as an iterator over found codes.
pub struct Search {
    plan: Arc<Plan>,
    logger: Arc<dyn Logger>,
    stack: Vec<Frame>,
    report: SearchReport,
    started: Instant,
    deadline: Option<Instant>,
    /// Stop once this many codes have been yielded.
    max_solutions: Option<u64>,
    announce_found: bool,
    error: Option<Error>,
    finished: bool,
}

impl Search {
    pub fn new(config: &SearchConfig) -> Result<Self> {
        Search::with_logger(config, Arc::new(NullLogger))
    }

    pub fn with_logger(config: &SearchConfig, logger: Arc<dyn Logger>) -> Result<Self> {
        let plan = Arc::new(Plan::new(config)?);
        let started = Instant::now();
        let root = SearchNode::root(&plan.rules);
        let candidates = plan.candidates(&root);
        let t = config.target;
        logger.log(
            Event::new(Level::Info, "search_started")
                .with("n", t.n)
                .with("k", t.k)
                .with("d", t.d)
                .with("type", t.ty.tag())
                .with(
                    "conditions",
                    config
                        .conditions()
                        .iter()
                        .map(|c| c.name())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
        );
        Ok(Search {
            deadline: deadline(started, &plan.limits),
            max_solutions: plan.limits.max_solutions,
            plan,
            logger,
            stack: vec![Frame {
                node: root,
                candidates,
            }],
            report: SearchReport::default(),
            started,
            announce_found: true,
            error: None,
            finished: false,
        })
    }

    /// A search confined to the subtree below `node`.
    fn subtree(plan: Arc<Plan>, logger: Arc<dyn Logger>, node: SearchNode, started: Instant) -> Self {
        let candidates = plan.candidates(&node);
        Search {
            deadline: deadline(started, &plan.limits),
            max_solutions: plan.limits.max_solutions,
            plan,
            logger,
            stack: vec![Frame { node, candidates }],
            report: SearchReport::default(),
            started,
            announce_found: false,
            error: None,
            finished: false,
        }
    }

    pub fn report(&self) -> SearchReport {
        let mut r = self.report.clone();
        r.elapsed_secs = self.started.elapsed().as_secs_f64();
        r
    }

    /// The error that ended the search early, if any.
    pub fn error(&self) -> Option<&Error> {
        self.error.as_ref()
    }

    pub fn take_error(&mut self) -> Option<Error> {
        self.error.take()
    }

    fn stop(&mut self, limit: Option<LimitKind>) {
        if self.report.limit_reached.is_none() {
            self.report.limit_reached = limit;
        }
        self.stack.clear();
    }

    fn finish(&mut self) {
        if !self.finished {
            self.finished = true;
            if self.announce_found {
                self.logger.log(self.report().to_event(Level::Info, "search_done"));
            }
        }
    }

    fn step(&mut self) -> Result<Option<LinearCode>> {
        let plan = Arc::clone(&self.plan);
        while let Some(frame) = self.stack.last_mut() {
            let Some(row) = frame.candidates.next_row() else {
                self.stack.pop();
                continue;
            };
            if self.plan.limits.max_nodes.is_some_and(|m| self.report.nodes_expanded >= m) {
                self.stop(Some(LimitKind::MaxNodes));
                break;
            }
            if self.deadline.is_some_and(|t| Instant::now() >= t) {
                self.stop(Some(LimitKind::TimeBudget));
                break;
            }
            let frame = self.stack.last().expect("frame checked above");
            self.report.candidates_examined += 1;
            if let Some(c) = plan.reject(&frame.node, row) {
                *self.report.pruned.entry(c.name().to_string()).or_insert(0) += 1;
                if self.logger.enabled(Level::Debug) {
                    self.logger.log(
                        Event::new(Level::Debug, "pruned")
                            .with("condition", c.name())
                            .with("depth", frame.node.depth() + 1),
                    );
                }
                continue;
            }
            let depth = frame.node.depth() + 1;
            let child = frame.node.extend(row, depth < plan.rules.k);
            if depth == 1 {
                self.report.starters += 1;
            }
            self.report.nodes_expanded += 1;
            if plan.verify {
                if let Err(msg) = child.verify_caches(&plan.rules) {
                    return Err(Error::Internal(format!("cache check failed at depth {depth}: {msg}")));
                }
            }
            if self.logger.enabled(Level::Debug) {
                self.logger.log(
                    Event::new(Level::Debug, "node_expanded")
                        .with("depth", depth)
                        .with("weight", row.count_ones()),
                );
            }
            if depth < plan.rules.k {
                let candidates = plan.candidates(&child);
                self.stack.push(Frame {
                    node: child,
                    candidates,
                });
                continue;
            }
            self.report.leaves += 1;
            let code = child.to_code(&plan.rules);
            if let Some(name) = plan.final_reject(&code)? {
                *self.report.pruned.entry(name.to_string()).or_insert(0) += 1;
                continue;
            }
            self.report.yields += 1;
            if self.announce_found {
                self.logger.log(found_event(self.report.yields, &code));
            }
            if self.max_solutions.is_some_and(|m| self.report.yields >= m) {
                self.stop(Some(LimitKind::MaxSolutions));
            }
            return Ok(Some(code));
        }
        Ok(None)
    }
}

fn deadline(started: Instant, limits: &Limits) -> Option<Instant> {
    limits
        .time_budget_secs
        .map(|s| started + Duration::from_secs_f64(s))
}

fn found_event(index: u64, code: &LinearCode) -> Event {
    let mut e = Event::new(Level::Info, "code_found").with("index", index);
    if let Some(d) = code.min_distance() {
        e = e.with("d", d);
    }
    e.with("type", code.classify_type().tag())
}

impl Iterator for Search {
    type Item = LinearCode;

    fn next(&mut self) -> Option<LinearCode> {
        if self.error.is_some() || self.max_solutions.is_some_and(|m| self.report.yields >= m) {
            self.finish();
            return None;
        }
        match self.step() {
            Ok(Some(code)) => Some(code),
            Ok(None) => {
                self.finish();
                None
            }
            Err(e) => {
                self.logger
                    .log(Event::new(Level::Error, "search_failed").with("error", &e));
                self.error = Some(e);
                self.stack.clear();
                self.finish();
                None
            }
        }
    }
}

/// The depth-1 nodes, in search order.
pub fn starters(config: &SearchConfig) -> Result<Vec<SearchNode>> {
    let plan = Plan::new(config)?;
    let root = SearchNode::root(&plan.rules);
    let mut cands = plan.candidates(&root);
    let mut out = Vec::new();
    while let Some(row) = cands.next_row() {
        if plan.reject(&root, row).is_none() {
            out.push(root.extend(row, plan.rules.k > 1));
        }
    }
    Ok(out)
}

/// The accepted children of `node`, in search order.
pub fn children(config: &SearchConfig, node: &SearchNode) -> Result<Vec<SearchNode>> {
    let plan = Plan::new(config)?;
    if node.depth() >= plan.rules.k {
        return Ok(Vec::new());
    }
    let mut cands = plan.candidates(node);
    let mut out = Vec::new();
    while let Some(row) = cands.next_row() {
        if plan.reject(node, row).is_none() {
            out.push(node.extend(row, node.depth() + 1 < plan.rules.k));
        }
    }
    Ok(out)
}

/// All codes below `node`.
pub fn descendants(config: &SearchConfig, node: SearchNode) -> Result<Vec<LinearCode>> {
    let plan = Arc::new(Plan::new(config)?);
    if node.depth() == plan.rules.k {
        let code = node.to_code(&plan.rules);
        return Ok(match plan.final_reject(&code)? {
            None => vec![code],
            Some(_) => Vec::new(),
        });
    }
    let mut s = Search::subtree(plan, Arc::new(NullLogger), node, Instant::now());
    let codes: Vec<LinearCode> = s.by_ref().collect();
    match s.take_error() {
        Some(e) => Err(e),
        None => Ok(codes),
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub codes: Vec<LinearCode>,
    pub report: SearchReport,
}

pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome> {
    run_search_with_logger(config, Arc::new(NullLogger))
}

/// Runs a whole search and collects the yield. With `strategy.parallel`
/// the starter subtrees run concurrently and are merged in starter order;
/// `max_nodes` then applies to each subtree separately.
pub fn run_search_with_logger(config: &SearchConfig, logger: Arc<dyn Logger>) -> Result<SearchOutcome> {
    if !config.strategy.parallel {
        let mut s = Search::with_logger(config, logger)?;
        let codes: Vec<LinearCode> = s.by_ref().collect();
        if let Some(e) = s.take_error() {
            return Err(e);
        }
        return Ok(SearchOutcome {
            codes,
            report: s.report(),
        });
    }

    // count the starter level once, then search each subtree
    let plan = Arc::new(Plan::new(config)?);
    let started = Instant::now();
    let mut report = SearchReport::default();
    let root = SearchNode::root(&plan.rules);
    let mut starters = Vec::new();
    let mut cands = plan.candidates(&root);
    while let Some(row) = cands.next_row() {
        report.candidates_examined += 1;
        match plan.reject(&root, row) {
            Some(c) => *report.pruned.entry(c.name().to_string()).or_insert(0) += 1,
            None => starters.push(root.extend(row, plan.rules.k > 1)),
        }
    }
    logger.log(
        Event::new(Level::Info, "search_started")
            .with("n", plan.rules.n)
            .with("k", plan.rules.k)
            .with("d", plan.rules.d)
            .with("type", plan.rules.ty.tag())
            .with("parallel", true),
    );
    let results: Vec<Result<(Vec<LinearCode>, SearchReport)>> = starters
        .into_par_iter()
        .map(|node| {
            let mut sub = SearchReport {
                starters: 1,
                nodes_expanded: 1,
                ..SearchReport::default()
            };
            let codes = if node.depth() == plan.rules.k {
                sub.leaves = 1;
                let code = node.to_code(&plan.rules);
                match plan.final_reject(&code)? {
                    None => {
                        sub.yields = 1;
                        vec![code]
                    }
                    Some(name) => {
                        sub.pruned.insert(name.to_string(), 1);
                        Vec::new()
                    }
                }
            } else {
                let mut s = Search::subtree(Arc::clone(&plan), Arc::clone(&logger), node, started);
                let codes: Vec<LinearCode> = s.by_ref().collect();
                if let Some(e) = s.take_error() {
                    return Err(e);
                }
                sub.absorb(&s.report);
                codes
            };
            Ok((codes, sub))
        })
        .collect();
    let mut codes = Vec::new();
    for r in results {
        let (c, sub) = r?;
        report.absorb(&sub);
        codes.extend(c);
    }
    // branches do not know about each other's yields; `yields` keeps
    // counting everything they accepted
    if let Some(m) = plan.limits.max_solutions {
        if codes.len() as u64 >= m {
            codes.truncate(m as usize);
            report.limit_reached = Some(LimitKind::MaxSolutions);
        }
    }
    for (i, code) in codes.iter().enumerate() {
        logger.log(found_event(i as u64 + 1, code));
    }
    report.elapsed_secs = started.elapsed().as_secs_f64();
    logger.log(report.to_event(Level::Info, "search_done"));
    Ok(SearchOutcome { codes, report })
}

#[cfg(test)]
mod tests;
