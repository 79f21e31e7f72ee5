//! Exact-weight decision problems over oracle matroids: exact matroid basis,
//! exact matroid independent set, the pseudo-polynomial k-subset-sum special
//! case, and the path-graph reduction to weighted colored paths.

use serde::{Deserialize, Serialize};

use crate::matroid::{rank, Matroid, MatroidOracle};
use crate::set::ElemSet;

/// Enumeration guard for the brute-force solvers.
pub const ENUMERATION_LIMIT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("ground set of size {0} exceeds the enumeration limit {ENUMERATION_LIMIT}")]
    GroundSetTooLarge(u32),
    #[error("ground set of size {0} too small for the path reduction")]
    GroundSetTooSmall(u32),
    #[error("graph is not the expected simple path")]
    UnsupportedTopology,
    #[error("expected one cost per element ({expected}), got {got}")]
    CostVectorMismatch { expected: u32, got: usize },
}

/// Exact matroid basis: does some basis have cost exactly `target`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbInstance {
    pub matroid: Matroid,
    /// `cost[i]` is the cost of element `i + 1`.
    pub cost: Vec<u64>,
    pub target: u64,
}

impl EmbInstance {
    pub fn total_cost(&self) -> u64 {
        self.cost.iter().sum()
    }

    pub fn cost_of(&self, set: ElemSet) -> u64 {
        set.iter().map(|e| self.cost[(e - 1) as usize]).sum()
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        if self.cost.len() != self.matroid.n_elements() as usize {
            return Err(ExactError::CostVectorMismatch {
                expected: self.matroid.n_elements(),
                got: self.cost.len(),
            });
        }
        Ok(())
    }
}

/// Exact matroid independent set: is there `S ∈ I` with `|S| = k` and
/// `w(S) = target`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmiInstance {
    pub matroid: Matroid,
    pub weight: Vec<u64>,
    pub k: u32,
    pub target: u64,
}

impl EmiInstance {
    pub fn weight_of(&self, set: ElemSet) -> u64 {
        set.iter().map(|e| self.weight[(e - 1) as usize]).sum()
    }
}

/// Decides an exact-basis instance by scanning all rank-sized independent
/// sets in lexicographic order; returns the first basis of cost exactly
/// `target`.
pub fn brute_force_emb(inst: &EmbInstance) -> Result<Option<ElemSet>, ExactError> {
    brute_force_emb_oracle(&inst.matroid, &inst.cost, inst.target)
}

/// [`brute_force_emb`] against any membership oracle; the form used when the
/// matroid is only reachable through a query channel.
pub fn brute_force_emb_oracle<M: MatroidOracle + ?Sized>(
    m: &M,
    cost: &[u64],
    target: u64,
) -> Result<Option<ElemSet>, ExactError> {
    let n = m.n_elements();
    if n > ENUMERATION_LIMIT {
        return Err(ExactError::GroundSetTooLarge(n));
    }
    if target > cost.iter().sum() {
        return Ok(None);
    }
    let r = rank(m);
    let cost_of = |s: ElemSet| -> u64 { s.iter().map(|e| cost[(e - 1) as usize]).sum() };
    Ok(ElemSet::combinations(n, r).find(|&s| cost_of(s) == target && m.is_independent(s)))
}

/// As [`brute_force_emb`] with the cardinality-k independent-set predicate.
pub fn brute_force_emi(inst: &EmiInstance) -> Result<Option<ElemSet>, ExactError> {
    let n = inst.matroid.n_elements();
    if n > ENUMERATION_LIMIT {
        return Err(ExactError::GroundSetTooLarge(n));
    }
    Ok(ElemSet::combinations(n, inst.k).find(|&s| {
        inst.weight_of(s) == inst.target && inst.matroid.is_independent(s)
    }))
}

/// Pluggable exact-basis decision procedure; the brute-force solver is the
/// desk-scale reference.
pub trait EmbSolver {
    fn decide(&self, inst: &EmbInstance) -> bool;
}

pub struct BruteForceEmb;

impl EmbSolver for BruteForceEmb {
    fn decide(&self, inst: &EmbInstance) -> bool {
        brute_force_emb(inst)
            .expect("instance exceeds the enumeration limit")
            .is_some()
    }
}

/// Pseudo-polynomial DP over (element, count, sum): is there a k-subset of
/// `weights` summing to exactly `target`? Runs in `O(n * k * target)`.
pub fn k_subset_sum_dp(weights: &[u64], k: u32, target: u64) -> bool {
    let k = k as usize;
    if k > weights.len() {
        return false;
    }
    let t = usize::try_from(target).expect("target too large for the DP table");
    // reachable[j][s]: some j-subset of the prefix sums to s.
    let mut reachable = vec![vec![false; t + 1]; k + 1];
    reachable[0][0] = true;
    for &w in weights {
        let w = w as usize;
        if w > t {
            continue;
        }
        for j in (0..k).rev() {
            for s in (0..=t - w).rev() {
                if reachable[j][s] {
                    reachable[j + 1][s + w] = true;
                }
            }
        }
    }
    reachable[k][t]
}

/// Weighted colored-paths instance produced by the path reduction: the graph
/// is a path over the elements, with a size-k exact-weight independent set
/// sought among the vertices covered by one terminal-to-terminal path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwcpInstance {
    pub edges: Vec<(u32, u32)>,
    pub a: ElemSet,
    pub b: ElemSet,
    pub matroid: Matroid,
    pub weight: Vec<u64>,
    pub p: u32,
    pub k: u32,
    pub target: u64,
}

/// The path reduction: elements `e_1..e_n` become the path
/// `e_1 - e_2 - ... - e_n` with terminals `A = {e_1}`, `B = {e_n}` and a
/// single requested path. Preserves yes/no exactly.
pub fn emi_to_gwcp(inst: &EmiInstance) -> Result<GwcpInstance, ExactError> {
    let n = inst.matroid.n_elements();
    if n < 2 {
        return Err(ExactError::GroundSetTooSmall(n));
    }
    Ok(GwcpInstance {
        edges: (1..n).map(|i| (i, i + 1)).collect(),
        a: ElemSet::singleton(1),
        b: ElemSet::singleton(n),
        matroid: inst.matroid.clone(),
        weight: inst.weight.clone(),
        p: 1,
        k: inst.k,
        target: inst.target,
    })
}

/// Validation oracle for path-shaped instances: the single terminal-to-
/// terminal path covers every vertex, so the decision reduces to enumerating
/// k-subsets of the vertices.
pub fn brute_force_gwcp(inst: &GwcpInstance) -> Result<bool, ExactError> {
    let n = inst.matroid.n_elements();
    if n > ENUMERATION_LIMIT {
        return Err(ExactError::GroundSetTooLarge(n));
    }
    let expected_edges: Vec<(u32, u32)> = (1..n).map(|i| (i, i + 1)).collect();
    if inst.p != 1
        || inst.edges != expected_edges
        || inst.a != ElemSet::singleton(1)
        || inst.b != ElemSet::singleton(n)
    {
        return Err(ExactError::UnsupportedTopology);
    }
    let weight_of = |s: ElemSet| -> u64 { s.iter().map(|e| inst.weight[(e - 1) as usize]).sum() };
    Ok(ElemSet::combinations(n, inst.k)
        .any(|s| weight_of(s) == inst.target && inst.matroid.is_independent(s)))
}
