//! Pruning conditions.
//!
//! Per-row conditions judge a candidate A-row against a node; final
//! conditions judge a complete code. `type_condition`,
//! `weight_monotone_condition` and `gamma_order_condition` are also applied
//! while candidates are generated, so the engine never materializes rows
//! they reject; their predicates here state the same rule row by row.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::node::{Rules, SearchNode};
use crate::code::{check_row_parity, CodeType, LinearCode};
use crate::error::{Error, Result};
use crate::neighbors::singly_even_dual_filter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    PerRow,
    Final,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    MuCondition,
    SpanWindowCondition,
    TypeCondition,
    GammaOrderCondition,
    WeightMonotoneCondition,
    ParityCondition,
    DistanceCondition,
    DualFilterCondition,
}

impl Condition {
    pub const ALL: [Condition; 8] = [
        Condition::MuCondition,
        Condition::SpanWindowCondition,
        Condition::TypeCondition,
        Condition::GammaOrderCondition,
        Condition::WeightMonotoneCondition,
        Condition::ParityCondition,
        Condition::DistanceCondition,
        Condition::DualFilterCondition,
    ];

    pub const PER_ROW: [Condition; 5] = [
        Condition::MuCondition,
        Condition::SpanWindowCondition,
        Condition::TypeCondition,
        Condition::GammaOrderCondition,
        Condition::WeightMonotoneCondition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::MuCondition => "mu_condition",
            Condition::SpanWindowCondition => "span_window_condition",
            Condition::TypeCondition => "type_condition",
            Condition::GammaOrderCondition => "gamma_order_condition",
            Condition::WeightMonotoneCondition => "weight_monotone_condition",
            Condition::ParityCondition => "parity_condition",
            Condition::DistanceCondition => "distance_condition",
            Condition::DualFilterCondition => "dual_filter_condition",
        }
    }

    pub fn applicability(self) -> Applicability {
        match self {
            Condition::ParityCondition | Condition::DistanceCondition | Condition::DualFilterCondition => {
                Applicability::Final
            }
            _ => Applicability::PerRow,
        }
    }

    /// Whether the condition makes sense for the requested type.
    pub fn supports(self, ty: CodeType) -> bool {
        match self {
            Condition::MuCondition | Condition::TypeCondition | Condition::ParityCondition => {
                ty != CodeType::NotSelfDual
            }
            Condition::DualFilterCondition => ty == CodeType::TypeI,
            _ => true,
        }
    }

    /// Per-row predicate: may `row` be appended to `node`?
    pub fn accepts_row(self, rules: &Rules, node: &SearchNode, row: u64) -> bool {
        let w = row.count_ones() as usize;
        match self {
            Condition::MuCondition => node
                .a_rows()
                .iter()
                .zip(node.weights())
                .all(|(&r, &wr)| rules.mu_admissible(wr, w, (r & row).count_ones() as usize)),
            Condition::SpanWindowCondition => span_window_admits(rules, node, row),
            Condition::TypeCondition => rules.type_admits(w),
            Condition::GammaOrderCondition => node.block_masks().iter().all(|&b| {
                let ones = b & row;
                // the 1s of the row must be the highest bits of the block
                ones == top_bits(b, ones.count_ones())
            }),
            Condition::WeightMonotoneCondition => node.last_weight().is_none_or(|prev| w <= prev),
            _ => true,
        }
    }

    /// Final predicate on a complete code.
    pub fn accepts_code(self, rules: &Rules, code: &LinearCode) -> Result<bool> {
        match self {
            Condition::ParityCondition => Ok(check_row_parity(code.generator(), rules.n, rules.ty)),
            Condition::DistanceCondition => code
                .min_distance()
                .map(|dist| dist >= rules.d)
                .ok_or(Error::DimensionGuard {
                    k: code.k(),
                    limit: crate::code::ENUMERATION_GUARD,
                }),
            Condition::DualFilterCondition => singly_even_dual_filter(code, rules.d),
            _ => Ok(true),
        }
    }
}

/// Every new combination involving `row` keeps its full weight in the
/// window. A combination selecting `s` old rows plus the new one has full
/// weight `popcount(s) + 1 + popcount(span[s] ^ row)`.
pub(crate) fn span_window_admits(rules: &Rules, node: &SearchNode, row: u64) -> bool {
    let span = node.span();
    let depth = node.depth();
    let completes = depth + 1 == rules.k;
    let all_old = span.len() - 1;
    span.iter().enumerate().all(|(s, &v)| {
        let weight = s.count_ones() as usize + 1 + (v ^ row).count_ones() as usize;
        rules.weight_in_window(weight, completes && s == all_old)
    })
}

/// The `c` highest set bits of `mask`.
pub(crate) fn top_bits(mask: u64, c: u32) -> u64 {
    let mut out = 0u64;
    let mut rest = mask;
    for _ in 0..c {
        if rest == 0 {
            break;
        }
        let b = 63 - rest.leading_zeros();
        out |= 1u64 << b;
        rest &= !(1u64 << b);
    }
    out
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::params(format!("unknown condition {s:?}")))
    }
}

/// Conditions active when a config names none.
pub fn default_conditions(ty: CodeType) -> Vec<Condition> {
    match ty {
        CodeType::NotSelfDual => vec![
            Condition::SpanWindowCondition,
            Condition::WeightMonotoneCondition,
            Condition::DistanceCondition,
        ],
        _ => vec![
            Condition::MuCondition,
            Condition::SpanWindowCondition,
            Condition::TypeCondition,
            Condition::GammaOrderCondition,
            Condition::WeightMonotoneCondition,
            Condition::ParityCondition,
            Condition::DistanceCondition,
        ],
    }
}
