//! Neighbors of self-dual codes: two self-dual codes of length `n` whose
//! intersection has dimension `n/2 - 1`.
//!
//! A Type I code `C` with maximal doubly-even subcode `C0` sits inside
//! `C0^⊥`, which is `C0` plus two more dimensions. Exactly three self-dual
//! codes contain `C0`: `C` itself and the two neighbors built here.

use crate::code::{CodeType, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone)]
pub struct NeighborPair {
    pub base: LinearCode,
    pub kernel: LinearCode,
    pub gamma1: BitVector,
    pub gamma2: BitVector,
    /// `<kernel, gamma2>`
    pub n1: LinearCode,
    /// `<kernel, gamma1 + gamma2>`
    pub n2: LinearCode,
}

impl NeighborPair {
    /// Both neighbors are singly-even, or both are doubly-even.
    pub fn parity_agrees(&self) -> bool {
        self.n1.classify_type() == self.n2.classify_type()
    }

    pub fn neighbor_type(&self) -> CodeType {
        self.n1.classify_type()
    }
}

fn require_self_dual(c: &LinearCode, which: &str) -> Result<()> {
    if !c.is_self_dual() {
        return Err(Error::precondition(format!("{which} is not self-dual")));
    }
    Ok(())
}

pub fn are_neighbors(c1: &LinearCode, c2: &LinearCode) -> Result<bool> {
    if c1.n() != c2.n() {
        return Err(Error::LengthMismatch {
            left: c1.n(),
            right: c2.n(),
        });
    }
    require_self_dual(c1, "first code")?;
    require_self_dual(c2, "second code")?;
    Ok(c1.intersection(c2)?.k() + 1 == c1.n() / 2)
}

/// How the second extension vector is picked from a basis of `kernel^⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gamma2Choice {
    /// First basis vector not orthogonal to `gamma1`.
    #[default]
    First,
    /// Last basis vector not orthogonal to `gamma1`, plus every earlier basis
    /// vector orthogonal to `gamma1`.
    Alternate,
}

pub fn neighbors_through_kernel(c: &LinearCode) -> Result<NeighborPair> {
    neighbors_with_choice(c, Gamma2Choice::First)
}

pub fn neighbors_with_choice(c: &LinearCode, choice: Gamma2Choice) -> Result<NeighborPair> {
    if !c.n().is_multiple_of(4) {
        return Err(Error::precondition(format!(
            "n = {} is not divisible by 4; the construction needs the all-ones word in the doubly-even kernel",
            c.n()
        )));
    }
    let kernel = c.max_doubly_even_subcode()?;
    let gamma1 = c
        .singly_even_generator()
        .cloned()
        .ok_or_else(|| Error::Internal("Type I code without a singly-even generator".into()))?;
    let dual = kernel.generator().orthogonal_complement();
    let not_orth = |v: &BitVector| v.mu_unchecked(&gamma1) % 2 == 1;
    let gamma2 = match choice {
        Gamma2Choice::First => dual.rows().iter().find(|v| not_orth(v)).cloned(),
        Gamma2Choice::Alternate => dual.rows().iter().rposition(not_orth).map(|last| {
            let mut g = dual.row(last).clone();
            for v in &dual.rows()[..last] {
                if !not_orth(v) {
                    g.xor_assign(v);
                }
            }
            g
        }),
    }
    .ok_or_else(|| Error::Internal("no vector of the kernel dual pairs with gamma1".into()))?;
    let sum = gamma1.add(&gamma2)?;
    let extend = |v: &BitVector| -> Result<LinearCode> {
        let mut g = kernel.generator().clone();
        g.push_row(v.clone())?;
        LinearCode::new(g)
    };
    let n1 = extend(&gamma2)?;
    let n2 = extend(&sum)?;
    if !n1.is_self_dual() || !n2.is_self_dual() {
        return Err(Error::Internal("constructed neighbor is not self-dual".into()));
    }
    Ok(NeighborPair {
        base: c.clone(),
        kernel,
        gamma1,
        gamma2,
        n1,
        n2,
    })
}

/// Checks the weight-window statement for a singly-even code `c1` and a
/// doubly-even neighbor `c2`: all singly-even vectors of `(c1 ∩ c2)^⊥` lie in
/// `c1`, there are exactly `2^(k-1)` of them, and their weights lie in
/// `[d, n - d]`.
pub fn check_neighbor_weight_window(c1: &LinearCode, c2: &LinearCode, d: usize) -> Result<bool> {
    if c1.classify_type() != CodeType::TypeI {
        return Err(Error::precondition("first code must be singly-even self-dual"));
    }
    if c2.classify_type() != CodeType::TypeII {
        return Err(Error::precondition("second code must be doubly-even self-dual"));
    }
    if !are_neighbors(c1, c2)? {
        return Err(Error::precondition("codes are not neighbors"));
    }
    let shared = c1.intersection(c2)?;
    if shared != c1.max_doubly_even_subcode()? {
        return Err(Error::precondition(
            "shared subcode is not the maximal doubly-even subcode of the first code",
        ));
    }
    let n = c1.n();
    let k = c1.k();
    let dual = LinearCode::new(shared.generator().orthogonal_complement())?;
    let mut singly = 0u64;
    let mut ok = true;
    dual.for_each_codeword(|v| {
        let w = v.weight();
        if w % 4 == 2 {
            singly += 1;
            ok &= c1.contains(v) && w >= d && w + d <= n;
        }
    });
    Ok(ok && singly == 1u64 << (k - 1))
}

/// Search filter on a Type I code `c`: false iff a singly-even vector of
/// `C0^⊥` that the weight window forces into `c` has weight below `d`
/// (`C0` the maximal doubly-even subcode).
///
/// `C0^⊥` splits into `C0` and the cosets of `gamma1`, `gamma2` and
/// `gamma1 + gamma2`. With doubly-even neighbors its only singly-even coset is
/// `gamma1 + C0`; with singly-even neighbors the other two singly-even cosets
/// belong to the neighbors and are unconstrained. Either way the scan covers
/// `gamma1 + C0`.
pub fn singly_even_dual_filter(c: &LinearCode, d: usize) -> Result<bool> {
    let pair = neighbors_through_kernel(c)?;
    Ok(coset_min_weight(pair.kernel.generator(), &pair.gamma1) >= d)
}

fn coset_min_weight(kernel: &BitMatrix, rep: &BitVector) -> usize {
    let mut cur = rep.clone();
    let mut best = cur.weight();
    for i in 1u64..(1u64 << kernel.row_count()) {
        cur.xor_assign(kernel.row(i.trailing_zeros() as usize));
        best = best.min(cur.weight());
    }
    best
}
