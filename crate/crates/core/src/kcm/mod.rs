//! Knapsack cover with a matroid (KCM) and its basis variant (KCMB):
//! minimize the cost of an independent set (resp. basis) whose total size
//! covers a demand. The approximation scheme enumerates per-cost-class
//! selection patterns, maximizes a Lagrangian relaxation over the pattern's
//! common bases, and walks a chain between the bracketing optima.

pub mod chain;
pub mod classes;
pub mod lagrange;

use serde::{Deserialize, Serialize};

use crate::matroid::{greedy_extreme_basis, rank, Direction, Matroid, MatroidOracle};
use crate::set::ElemSet;

pub use chain::{balanced_step, chain, ChainError};
pub use classes::{build_cost_classes, enumerate_patterns, normalize_eps, CostClassing, PatternVector};
pub use lagrange::{
    lagrangian_value, optimize_lambda, pattern_partition_matroid, LagrangianResult, LambdaError,
};

/// Exact rational used throughout the scheme. Fixed-width keeps the inner
/// loops fast; input bounds are validated so the arithmetic cannot overflow.
pub type Rat = num::rational::Ratio<i128>;

/// Per-element cost cap accepted by the scheme.
pub const MAX_COST: u64 = 1 << 32;
/// Per-element size cap accepted by the scheme (leaves room for the demand
/// shift, which inflates sizes by `2 d(E)`).
pub const MAX_SIZE: u64 = 1 << 42;

/// A knapsack-cover instance. As a KCM instance, a solution is an
/// independent set `S` with `d(S) >= D`; as a KCMB instance, a solution must
/// additionally be a basis. The goal is minimum cost in either reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KcmInstance {
    pub matroid: Matroid,
    pub cost: Vec<u64>,
    pub size: Vec<u64>,
    pub demand: u64,
}

impl KcmInstance {
    pub fn n_elements(&self) -> u32 {
        self.matroid.n_elements()
    }

    pub fn cost_of(&self, set: ElemSet) -> u64 {
        set.iter().map(|e| self.cost[(e - 1) as usize]).sum()
    }

    pub fn size_of(&self, set: ElemSet) -> u64 {
        set.iter().map(|e| self.size[(e - 1) as usize]).sum()
    }

    pub fn validate(&self) -> Result<(), KcmError> {
        let n = self.n_elements() as usize;
        if self.cost.len() != n || self.size.len() != n {
            return Err(KcmError::Invalid(
                "cost and size vectors must match the ground-set size".into(),
            ));
        }
        if self.cost.iter().any(|&c| c > MAX_COST) {
            return Err(KcmError::Invalid(format!("costs must be at most {MAX_COST}")));
        }
        if self.size.iter().any(|&d| d > MAX_SIZE) {
            return Err(KcmError::Invalid(format!("sizes must be at most {MAX_SIZE}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KcmError {
    #[error("instance has no solution")]
    Infeasible,
    #[error("ground set of size {0} exceeds the enumeration limit {1}")]
    GroundSetTooLarge(u32, u32),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A solution with its cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KcmSolution {
    pub set: ElemSet,
    pub cost: u64,
}

pub const KCM_ENUMERATION_LIMIT: u32 = 20;

/// Exact KCM optimum by enumeration over all independent sets.
pub fn brute_force_kcm(inst: &KcmInstance) -> Result<Option<(ElemSet, u64)>, KcmError> {
    let n = inst.n_elements();
    if n > KCM_ENUMERATION_LIMIT {
        return Err(KcmError::GroundSetTooLarge(n, KCM_ENUMERATION_LIMIT));
    }
    let mut best: Option<(ElemSet, u64)> = None;
    for s in ElemSet::all_subsets(n) {
        if inst.size_of(s) >= inst.demand && inst.matroid.is_independent(s) {
            let c = inst.cost_of(s);
            if best.as_ref().is_none_or(|&(_, bc)| c < bc) {
                best = Some((s, c));
            }
        }
    }
    Ok(best)
}

/// Exact KCMB optimum by enumeration over all bases.
pub fn brute_force_kcmb(inst: &KcmInstance) -> Result<Option<(ElemSet, u64)>, KcmError> {
    let n = inst.n_elements();
    if n > KCM_ENUMERATION_LIMIT {
        return Err(KcmError::GroundSetTooLarge(n, KCM_ENUMERATION_LIMIT));
    }
    let b = rank(&inst.matroid);
    let mut best: Option<(ElemSet, u64)> = None;
    for s in ElemSet::combinations(n, b) {
        if inst.size_of(s) >= inst.demand && inst.matroid.is_independent(s) {
            let c = inst.cost_of(s);
            if best.as_ref().is_none_or(|&(_, bc)| c < bc) {
                best = Some((s, c));
            }
        }
    }
    Ok(best)
}

/// A constant-factor estimator for the KCMB optimum: must return `C` with
/// `OPT <= C <= 2 * OPT` on feasible instances.
pub trait CostEstimator {
    fn estimate(&self, inst: &KcmInstance) -> Result<u64, KcmError>;
}

/// Desk-scale estimator returning the exact optimum (trivially in range).
pub struct ExactEstimator;

impl CostEstimator for ExactEstimator {
    fn estimate(&self, inst: &KcmInstance) -> Result<u64, KcmError> {
        Ok(brute_force_kcmb(inst)?.ok_or(KcmError::Infeasible)?.1)
    }
}

/// Wraps another estimator and doubles its answer; stays in range whenever
/// the inner estimate is exact. Exercises the scheme away from `C = OPT`.
pub struct DoublingEstimator<E>(pub E);

impl<E: CostEstimator> CostEstimator for DoublingEstimator<E> {
    fn estimate(&self, inst: &KcmInstance) -> Result<u64, KcmError> {
        Ok(self.0.estimate(inst)?.saturating_mul(2))
    }
}

/// The default constant-factor estimate (the exact desk-scale optimum).
pub fn constant_factor_estimate(inst: &KcmInstance) -> Result<u64, KcmError> {
    ExactEstimator.estimate(inst)
}

/// Whether the instance has any KCMB solution: the greedy max-size basis
/// must cover the demand.
fn kcmb_feasible(inst: &KcmInstance) -> bool {
    let sizes: Vec<i64> = inst.size.iter().map(|&d| d as i64).collect();
    let max_cover = greedy_extreme_basis(&inst.matroid, &sizes, Direction::Max);
    inst.size_of(max_cover) >= inst.demand
}

/// The approximation scheme for KCMB at error `eps` (normalized so that
/// `1/eps` is an integer), with the default estimator. On feasible input the
/// returned basis covers the demand at cost at most `(1 + 5 eps) * OPT`.
pub fn kcmb_eptas(inst: &KcmInstance, eps: &Rat) -> Result<Option<KcmSolution>, KcmError> {
    kcmb_eptas_with(inst, eps, &ExactEstimator)
}

/// [`kcmb_eptas`] with a caller-chosen constant-factor estimator.
pub fn kcmb_eptas_with<E: CostEstimator + ?Sized>(
    inst: &KcmInstance,
    eps: &Rat,
    estimator: &E,
) -> Result<Option<KcmSolution>, KcmError> {
    inst.validate()?;
    if !kcmb_feasible(inst) {
        return Ok(None);
    }
    let c_estimate = estimator.estimate(inst)?;
    let classing = build_cost_classes(inst, eps, c_estimate);
    let b = rank(&inst.matroid);
    let n = inst.n_elements();

    let mut incumbent: Option<KcmSolution> = None;
    let consider = |set: ElemSet, inst: &KcmInstance, incumbent: &mut Option<KcmSolution>| {
        // Candidates must be verified solutions before they can win.
        if set.len() != b || !inst.matroid.is_independent(set) || inst.size_of(set) < inst.demand {
            return;
        }
        let cost = inst.cost_of(set);
        if incumbent.as_ref().is_none_or(|cur| cost < cur.cost) {
            *incumbent = Some(KcmSolution { set, cost });
        }
    };

    // Only patterns whose quotas sum to the rank can be the exact class
    // profile of a basis; any basis feasible under looser quotas is feasible
    // under its own profile, so nothing is lost. Pinning the totals also
    // fixes the per-class counts across each pattern's optimal face, which
    // is what the chain steps rely on.
    for pattern in classes::exact_total_patterns(&classing, n, b) {
        let lag = match optimize_lambda(inst, &classing, &pattern) {
            Ok(lag) => lag,
            Err(LambdaError::EmptyFeasible | LambdaError::NoCoveringBasis) => continue,
        };
        consider(lag.s_high, inst, &mut incumbent);
        let Some(s_low) = lag.s_low else {
            continue;
        };
        if s_low == lag.s_high {
            continue;
        }
        let seq = match chain(inst, &classing, &pattern, &lag.lambda_star, s_low, lag.s_high) {
            Ok(seq) => seq,
            // A failed walk only forfeits this pattern's refinement; the
            // bracket endpoint above already competes.
            Err(ChainError::SearchFailed(_)) => continue,
            Err(e @ ChainError::EndpointNotOptimal(_)) => return Err(e.into()),
        };
        // First crossing of the relaxation value along the chain.
        let crossing = seq.windows(2).position(|w| {
            Rat::from_integer(inst.cost_of(w[0]) as i128) <= lag.value
                && lag.value <= Rat::from_integer(inst.cost_of(w[1]) as i128)
        });
        if let Some(j) = crossing {
            consider(seq[j + 1], inst, &mut incumbent);
        }
    }
    Ok(incumbent)
}

/// Solvers for the basis variant, pluggable into the KCM wrapper.
pub trait KcmbSolver {
    fn solve(&self, inst: &KcmInstance, eps: &Rat) -> Result<Option<KcmSolution>, KcmError>;
}

/// The approximation scheme as a [`KcmbSolver`].
pub struct EptasKcmbSolver;

impl KcmbSolver for EptasKcmbSolver {
    fn solve(&self, inst: &KcmInstance, eps: &Rat) -> Result<Option<KcmSolution>, KcmError> {
        kcmb_eptas(inst, eps)
    }
}

/// Exact KCMB enumeration as a [`KcmbSolver`].
pub struct BruteForceKcmbSolver;

impl KcmbSolver for BruteForceKcmbSolver {
    fn solve(&self, inst: &KcmInstance, _eps: &Rat) -> Result<Option<KcmSolution>, KcmError> {
        Ok(brute_force_kcmb(inst)?.map(|(set, cost)| KcmSolution { set, cost }))
    }
}

/// Solves KCM through the basis variant: for every cardinality `a` up to the
/// rank, solve KCMB on the truncation to rank `a` and keep the cheapest
/// answer. The approximation factor is inherited from the solver. A zero
/// demand is covered by the empty set.
pub fn kcm_via_kcmb<S: KcmbSolver + ?Sized>(
    inst: &KcmInstance,
    solver: &S,
    eps: &Rat,
) -> Result<Option<KcmSolution>, KcmError> {
    if inst.demand == 0 {
        return Ok(Some(KcmSolution {
            set: ElemSet::EMPTY,
            cost: 0,
        }));
    }
    let b = rank(&inst.matroid);
    let mut best: Option<KcmSolution> = None;
    for a in 1..=b {
        let truncated = KcmInstance {
            matroid: crate::matroid::truncate(&inst.matroid, a),
            cost: inst.cost.clone(),
            size: inst.size.clone(),
            demand: inst.demand,
        };
        if let Some(sol) = solver.solve(&truncated, eps)? {
            if best.as_ref().is_none_or(|cur| sol.cost < cur.cost) {
                best = Some(sol);
            }
        }
    }
    Ok(best)
}

/// A KCM solver interface for the reverse wrapper.
pub trait KcmSolver {
    fn solve(&self, inst: &KcmInstance) -> Result<Option<KcmSolution>, KcmError>;
}

/// Exact KCM enumeration as a [`KcmSolver`].
pub struct BruteForceKcmSolver;

impl KcmSolver for BruteForceKcmSolver {
    fn solve(&self, inst: &KcmInstance) -> Result<Option<KcmSolution>, KcmError> {
        Ok(brute_force_kcm(inst)?.map(|(set, cost)| KcmSolution { set, cost }))
    }
}

/// Solves KCMB through a KCM solver by the demand shift: sizes become
/// `d(e) + 2 d(E)` and the demand `D + 2 k d(E)`, which forces every
/// solution of the shifted instance to have exactly `k = rank` elements,
/// at unchanged cost.
pub fn kcmb_via_kcm_shift<S: KcmSolver + ?Sized>(
    inst: &KcmInstance,
    solver: &S,
) -> Result<Option<KcmSolution>, KcmError> {
    let k = rank(&inst.matroid);
    let total_size: u64 = inst.size.iter().sum();
    if total_size == 0 {
        // Degenerate shift: any basis covers a zero demand, none covers more.
        if inst.demand > 0 {
            return Ok(None);
        }
        let costs: Vec<i64> = inst.cost.iter().map(|&c| c as i64).collect();
        let set = greedy_extreme_basis(&inst.matroid, &costs, Direction::Min);
        let cost = inst.cost_of(set);
        return Ok(Some(KcmSolution { set, cost }));
    }
    let shift = 2 * total_size;
    let shifted = KcmInstance {
        matroid: inst.matroid.clone(),
        cost: inst.cost.clone(),
        size: inst.size.iter().map(|&d| d + shift).collect(),
        demand: inst.demand + u64::from(k) * shift,
    };
    let sol = solver.solve(&shifted)?;
    if let Some(sol) = &sol {
        debug_assert_eq!(sol.set.len(), k, "shift must force exact cardinality");
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{Matroid, PartitionMatroid, UniformMatroid};

    fn rat(n: i128, d: i128) -> Rat {
        Rat::new(n, d)
    }

    fn uniform(n: u32, k: u32) -> Matroid {
        Matroid::Uniform(UniformMatroid { n, k })
    }

    #[test]
    fn eptas_finds_exact_meeting_basis() {
        // One basis meets the demand exactly at minimum cost.
        let inst = KcmInstance {
            matroid: uniform(5, 2),
            cost: vec![2, 3, 10, 10, 10],
            size: vec![3, 4, 1, 1, 1],
            demand: 7,
        };
        let (opt_set, opt) = brute_force_kcmb(&inst).unwrap().unwrap();
        assert_eq!(opt_set, ElemSet::from_elems([1, 2]));
        let sol = kcmb_eptas(&inst, &rat(1, 2)).unwrap().unwrap();
        assert_eq!(sol.cost, opt);
        assert_eq!(sol.set, opt_set);
    }

    #[test]
    fn eptas_infeasible_is_none() {
        let inst = KcmInstance {
            matroid: uniform(3, 2),
            cost: vec![1, 1, 1],
            size: vec![1, 1, 1],
            demand: 10,
        };
        assert_eq!(kcmb_eptas(&inst, &rat(1, 2)).unwrap(), None);
    }

    #[test]
    fn eptas_respects_ratio_on_partition_instance() {
        let inst = KcmInstance {
            matroid: Matroid::Partition(
                PartitionMatroid::new(
                    vec![
                        ElemSet::from_elems([1, 2, 3]),
                        ElemSet::from_elems([4, 5, 6]),
                    ],
                    vec![1, 2],
                )
                .unwrap(),
            ),
            cost: vec![4, 7, 2, 9, 3, 5],
            size: vec![5, 2, 8, 4, 6, 1],
            demand: 14,
        };
        let (_, opt) = brute_force_kcmb(&inst).unwrap().unwrap();
        for eps in [rat(1, 2), rat(1, 3)] {
            let sol = kcmb_eptas(&inst, &eps).unwrap().unwrap();
            assert!(inst.size_of(sol.set) >= inst.demand);
            let bound = Rat::from_integer(opt as i128) * (Rat::from_integer(1) + rat(5, 1) * eps);
            assert!(Rat::from_integer(sol.cost as i128) <= bound);
        }
    }

    #[test]
    fn kcm_wrapper_tries_all_cardinalities() {
        // The optimum uses 2 of the 3 available slots.
        let inst = KcmInstance {
            matroid: uniform(5, 3),
            cost: vec![5, 5, 1, 1, 30],
            size: vec![1, 1, 6, 6, 1],
            demand: 12,
        };
        let sol = kcm_via_kcmb(&inst, &BruteForceKcmbSolver, &rat(1, 2))
            .unwrap()
            .unwrap();
        assert_eq!(sol.set, ElemSet::from_elems([3, 4]));
        assert_eq!(sol.cost, 2);
        let (_, opt) = brute_force_kcm(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, opt);
    }

    #[test]
    fn kcm_wrapper_zero_demand_and_infeasible() {
        let inst = KcmInstance {
            matroid: uniform(3, 2),
            cost: vec![1, 1, 1],
            size: vec![1, 1, 1],
            demand: 0,
        };
        let sol = kcm_via_kcmb(&inst, &BruteForceKcmbSolver, &rat(1, 2))
            .unwrap()
            .unwrap();
        assert_eq!(sol.set, ElemSet::EMPTY);

        let infeasible = KcmInstance {
            demand: 100,
            ..inst
        };
        assert_eq!(
            kcm_via_kcmb(&infeasible, &BruteForceKcmbSolver, &rat(1, 2)).unwrap(),
            None
        );
    }

    #[test]
    fn shift_forces_exact_cardinality() {
        let inst = KcmInstance {
            matroid: uniform(4, 2),
            cost: vec![4, 3, 2, 1],
            size: vec![1, 2, 3, 4],
            demand: 5,
        };
        // Every KCM solution of the shifted instance is a 2-set; enumerate
        // the shifted instance to confirm.
        let shift = 2 * 10u64;
        let shifted = KcmInstance {
            matroid: inst.matroid.clone(),
            cost: inst.cost.clone(),
            size: inst.size.iter().map(|&d| d + shift).collect(),
            demand: inst.demand + 2 * shift,
        };
        for s in ElemSet::all_subsets(4) {
            if shifted.matroid.is_independent(s) && shifted.size_of(s) >= shifted.demand {
                assert_eq!(s.len(), 2);
            }
        }
        let via_shift = kcmb_via_kcm_shift(&inst, &BruteForceKcmSolver).unwrap().unwrap();
        let (_, direct) = brute_force_kcmb(&inst).unwrap().unwrap();
        assert_eq!(via_shift.cost, direct);
    }

    #[test]
    fn shift_degenerate_sizes() {
        let inst = KcmInstance {
            matroid: uniform(3, 2),
            cost: vec![3, 1, 2],
            size: vec![0, 0, 0],
            demand: 0,
        };
        let sol = kcmb_via_kcm_shift(&inst, &BruteForceKcmSolver).unwrap().unwrap();
        assert_eq!(sol.set.len(), 2);
        assert_eq!(sol.cost, 3); // cheapest pair {2,3}
        let no = KcmInstance {
            demand: 1,
            ..inst
        };
        assert_eq!(kcmb_via_kcm_shift(&no, &BruteForceKcmSolver).unwrap(), None);
    }

    #[test]
    fn estimators_stay_in_range() {
        let inst = KcmInstance {
            matroid: uniform(4, 2),
            cost: vec![2, 5, 4, 3],
            size: vec![3, 3, 3, 3],
            demand: 6,
        };
        let (_, opt) = brute_force_kcmb(&inst).unwrap().unwrap();
        let exact = ExactEstimator.estimate(&inst).unwrap();
        assert_eq!(exact, opt);
        let doubled = DoublingEstimator(ExactEstimator).estimate(&inst).unwrap();
        assert_eq!(doubled, 2 * opt);
        assert_eq!(constant_factor_estimate(&inst).unwrap(), opt);

        let infeasible = KcmInstance {
            demand: 1000,
            ..inst
        };
        assert_eq!(
            ExactEstimator.estimate(&infeasible).unwrap_err(),
            KcmError::Infeasible
        );
    }

    #[test]
    fn eptas_with_doubling_estimator_keeps_ratio() {
        let inst = KcmInstance {
            matroid: uniform(6, 3),
            cost: vec![3, 1, 4, 1, 5, 9],
            size: vec![2, 6, 5, 3, 5, 8],
            demand: 13,
        };
        let (_, opt) = brute_force_kcmb(&inst).unwrap().unwrap();
        let eps = rat(1, 3);
        let sol = kcmb_eptas_with(&inst, &eps, &DoublingEstimator(ExactEstimator))
            .unwrap()
            .unwrap();
        assert!(inst.size_of(sol.set) >= inst.demand);
        let bound = Rat::from_integer(opt as i128) * (Rat::from_integer(1) + rat(5, 1) * eps);
        assert!(Rat::from_integer(sol.cost as i128) <= bound);
    }
}
