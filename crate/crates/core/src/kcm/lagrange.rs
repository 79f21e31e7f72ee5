//! Lagrangian relaxation over the common bases of the instance matroid and a
//! pattern partition matroid:
//!
//! `LR(lambda) = lambda * D + min { c(S) - lambda * d(S) }`,
//!
//! a concave piecewise-linear function of `lambda` whose maximizer is found
//! by an exact parametric line search. Reduced costs are cleared of
//! fractions by scaling with the denominator of `lambda`, so the inner
//! matroid-intersection calls run on integers.

use num::Zero;

use crate::intersection::{min_weight_common_basis, LexPair};
use crate::kcm::classes::{CostClassing, PatternVector};
use crate::kcm::{KcmInstance, Rat};
use crate::matroid::{rank, MatroidOracle, PartitionMatroid};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LambdaError {
    #[error("no common basis satisfies the pattern quotas")]
    EmptyFeasible,
    #[error("no common basis covers the demand under this pattern")]
    NoCoveringBasis,
}

/// The maximizer of the relaxation for one pattern, with bracketing optima.
#[derive(Debug, Clone)]
pub struct LagrangianResult {
    pub lambda_star: Rat,
    /// `LR(lambda_star)`.
    pub value: Rat,
    /// A reduced-cost-optimal common basis with `d(S) <= D`; absent when
    /// every optimal basis already covers the demand.
    pub s_low: Option<ElemSet>,
    /// A reduced-cost-optimal common basis with `d(S) >= D`.
    pub s_high: ElemSet,
}

/// The pattern's partition matroid: one block per cost class with the
/// pattern quota as capacity, and the over-cap elements locked out by a
/// zero-capacity block.
pub fn pattern_partition_matroid(
    classing: &CostClassing,
    pattern: &PatternVector,
) -> PartitionMatroid {
    let mut blocks = classing.classes.clone();
    let mut bounds: Vec<u32> = pattern.0.clone();
    if !classing.over_cap.is_empty() {
        blocks.push(classing.over_cap);
        bounds.push(0);
    }
    // Blocks cover [n] by construction of the classing.
    PartitionMatroid { blocks, bounds }
}

/// `c(e) - lambda * d(e)` scaled by the denominator of `lambda`, keeping the
/// ordering of set sums while staying in integers.
fn scaled_reduced_costs(inst: &KcmInstance, lambda: &Rat) -> Vec<i128> {
    let p = *lambda.numer();
    let q = *lambda.denom();
    inst.cost
        .iter()
        .zip(&inst.size)
        .map(|(&c, &d)| q * c as i128 - p * d as i128)
        .collect()
}

fn sum_in(values: &[i128], set: ElemSet) -> i128 {
    set.iter().map(|e| values[(e - 1) as usize]).sum()
}

/// `LR` at a fixed multiplier: the relaxation value and a witnessing
/// minimizer, or `None` when the pattern admits no common basis (the
/// `+infinity` case).
pub fn lagrangian_value(
    inst: &KcmInstance,
    classing: &CostClassing,
    pattern: &PatternVector,
    lambda: &Rat,
) -> Option<(Rat, ElemSet)> {
    let j = pattern_partition_matroid(classing, pattern);
    let b = rank(&inst.matroid);
    let weights = scaled_reduced_costs(inst, lambda);
    let argmin = min_weight_common_basis(&inst.matroid, &j, &weights, b)?;
    Some((lr_of(inst, lambda, argmin), argmin))
}

fn lr_of(inst: &KcmInstance, lambda: &Rat, basis: ElemSet) -> Rat {
    let c = Rat::from_integer(inst.cost_of(basis) as i128);
    let d = Rat::from_integer(inst.size_of(basis) as i128);
    let demand = Rat::from_integer(inst.demand as i128);
    c + lambda * (demand - d)
}

/// Minimizers of the scaled reduced cost with ties steered toward the
/// smallest and the largest coverage.
fn eval_extremes<J: MatroidOracle>(
    inst: &KcmInstance,
    j: &J,
    b: u32,
    lambda: &Rat,
) -> Option<(ElemSet, ElemSet)> {
    let base = scaled_reduced_costs(inst, lambda);
    let low: Vec<LexPair<i128, i128>> = base
        .iter()
        .zip(&inst.size)
        .map(|(&w, &d)| LexPair(w, d as i128))
        .collect();
    let high: Vec<LexPair<i128, i128>> = base
        .iter()
        .zip(&inst.size)
        .map(|(&w, &d)| LexPair(w, -(d as i128)))
        .collect();
    let s_low = min_weight_common_basis(&inst.matroid, j, &low, b)?;
    let s_high = min_weight_common_basis(&inst.matroid, j, &high, b)
        .expect("feasibility is independent of weights");
    debug_assert_eq!(sum_in(&base, s_low), sum_in(&base, s_high));
    Some((s_low, s_high))
}

const PARAMETRIC_ITERATION_CAP: u32 = 100_000;

/// Maximizes `LR` over `lambda >= 0` exactly and produces bracketing optimal
/// bases `d(s_low) <= D <= d(s_high)`.
///
/// The search walks crossings of pairs of basis lines: starting from the
/// best undercovering line at `lambda = 0` and a covering line, it evaluates
/// the relaxation at their intersection and replaces one side by the
/// minimizer found there, until the optimal face at the crossing straddles
/// the demand. Every step is exact rational arithmetic, and each step
/// strictly lowers the envelope at the current crossing, so the walk visits
/// each basis line at most once.
pub fn optimize_lambda(
    inst: &KcmInstance,
    classing: &CostClassing,
    pattern: &PatternVector,
) -> Result<LagrangianResult, LambdaError> {
    let j = pattern_partition_matroid(classing, pattern);
    let b = rank(&inst.matroid);
    let demand = inst.demand;

    // Flush out infeasibility once: the max-coverage common basis.
    let coverage: Vec<LexPair<i128, i128>> = inst
        .size
        .iter()
        .zip(&inst.cost)
        .map(|(&d, &c)| LexPair(-(d as i128), c as i128))
        .collect();
    let max_cover = min_weight_common_basis(&inst.matroid, &j, &coverage, b)
        .ok_or(LambdaError::EmptyFeasible)?;
    if inst.size_of(max_cover) < demand {
        return Err(LambdaError::NoCoveringBasis);
    }

    let zero = Rat::zero();
    let (m_min, m_max) = eval_extremes(inst, &j, b, &zero).expect("feasible by the check above");
    if inst.size_of(m_max) >= demand {
        // The relaxation is non-increasing from the start.
        let s_low = (inst.size_of(m_min) <= demand).then_some(m_min);
        return Ok(LagrangianResult {
            lambda_star: zero,
            value: lr_of(inst, &zero, m_max),
            s_low,
            s_high: m_max,
        });
    }

    // Invariant: d(s_lo) < D <= d(s_hi); the lines cross at a positive
    // multiplier.
    let mut s_lo = m_max;
    let mut s_hi = max_cover;
    for _ in 0..PARAMETRIC_ITERATION_CAP {
        let c_lo = inst.cost_of(s_lo) as i128;
        let c_hi = inst.cost_of(s_hi) as i128;
        let d_lo = inst.size_of(s_lo) as i128;
        let d_hi = inst.size_of(s_hi) as i128;
        debug_assert!(d_lo < demand as i128 && d_hi >= demand as i128);
        let lambda = Rat::new(c_hi - c_lo, d_hi - d_lo);
        debug_assert!(lambda >= Rat::zero());

        let (m_min, m_max) = eval_extremes(inst, &j, b, &lambda).expect("feasibility is fixed");
        let d_min = inst.size_of(m_min);
        let d_max = inst.size_of(m_max);
        if d_min <= demand && demand <= d_max {
            return Ok(LagrangianResult {
                lambda_star: lambda,
                value: lr_of(inst, &lambda, m_max),
                s_low: Some(m_min),
                s_high: m_max,
            });
        }
        if d_max < demand {
            s_lo = m_max;
        } else {
            s_hi = m_min;
        }
    }
    unreachable!("parametric search failed to converge");
}
