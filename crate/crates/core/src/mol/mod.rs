//! Matroid optimization with a linear constraint (MOL): the parameterized
//! problem family, the exact-basis reduction with its gap parameter, and the
//! decide-by-approximation driver.

pub mod standard;

use num::{BigInt, BigRational, One, Signed};
use serde::{Deserialize, Serialize};

use crate::exact::EmbInstance;
use crate::matroid::{rank, Matroid, MatroidOracle};
use crate::set::ElemSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Opt {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feas {
    /// Any independent set is feasible.
    Is,
    /// Only maximum-cardinality independent sets are feasible.
    Bases,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Le,
    Ge,
}

/// The `(opt, feasibility, relation)` triple naming one MOL problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MolParams {
    pub opt: Opt,
    pub feas: Feas,
    pub rel: Rel,
}

impl MolParams {
    pub const fn new(opt: Opt, feas: Feas, rel: Rel) -> Self {
        MolParams { opt, feas, rel }
    }

    /// `(min, IS, <=)` is solved by the empty set; the reduction rejects it.
    pub fn is_trivial(self) -> bool {
        matches!(
            self,
            MolParams {
                opt: Opt::Min,
                feas: Feas::Is,
                rel: Rel::Le
            }
        )
    }

    /// The seven non-trivial parameter triples, in a fixed order.
    pub fn all_nontrivial() -> Vec<MolParams> {
        let mut out = Vec::with_capacity(7);
        for opt in [Opt::Max, Opt::Min] {
            for feas in [Feas::Is, Feas::Bases] {
                for rel in [Rel::Le, Rel::Ge] {
                    let p = MolParams::new(opt, feas, rel);
                    if !p.is_trivial() {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for MolParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let opt = match self.opt {
            Opt::Max => "max",
            Opt::Min => "min",
        };
        let feas = match self.feas {
            Feas::Is => "is",
            Feas::Bases => "bases",
        };
        let rel = match self.rel {
            Rel::Le => "le",
            Rel::Ge => "ge",
        };
        write!(f, "({opt},{feas},{rel})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MolError {
    #[error("(min,is,le) is trivial and not accepted by the reduction")]
    TrivialParams,
    #[error("ground set of size {0} exceeds the limit {1}")]
    GroundSetTooLarge(u32, u32),
    #[error("approximate solver violated its contract: {0}")]
    SolverContract(String),
}

/// One MOL instance: optimize `v(S)` over feasible `S` subject to
/// `w(S) rel L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolInstance {
    pub matroid: Matroid,
    #[serde(rename = "v")]
    pub value: Vec<i64>,
    #[serde(rename = "w")]
    pub weight: Vec<i64>,
    #[serde(rename = "L")]
    pub bound: i64,
    pub params: MolParams,
}

impl MolInstance {
    pub fn value_of(&self, set: ElemSet) -> i64 {
        set.iter().map(|e| self.value[(e - 1) as usize]).sum()
    }

    pub fn weight_of(&self, set: ElemSet) -> i64 {
        set.iter().map(|e| self.weight[(e - 1) as usize]).sum()
    }
}

/// The auxiliary sign selector: 0 for `(max, <=)` and `(min, >=)`, 1 for the
/// other non-trivial triples.
pub fn d_of(params: MolParams) -> Result<u8, MolError> {
    if params.is_trivial() {
        return Err(MolError::TrivialParams);
    }
    let zero = matches!(
        (params.opt, params.rel),
        (Opt::Max, Rel::Le) | (Opt::Min, Rel::Ge)
    );
    Ok(if zero { 0 } else { 1 })
}

/// The reduced MOL instance of an exact-basis instance, carrying the shift
/// `H`, the rank, the sign `d`, and the exact gap parameter `eps`.
#[derive(Debug, Clone)]
pub struct ReducedMolInstance {
    pub mol: MolInstance,
    pub h: u64,
    pub k_rank: u32,
    pub d: u8,
    /// `1 / (8 (|E|+1) (T+1) (c(E)+1))`, exact.
    pub eps: BigRational,
    pub source: EmbInstance,
}

impl ReducedMolInstance {
    /// The pinned objective value `k_rank * H + T` that witnesses a source
    /// yes-instance.
    pub fn target_value(&self) -> i64 {
        i64::try_from(u64::from(self.k_rank) * self.h + self.source.target)
            .expect("target value exceeds i64")
    }
}

/// Builds the reduced instance: `H = 2 max(1, c(E))`, `v(e) = H + c(e)`,
/// `w(e) = H + c(e) * (-1)^d`, `L = rank * H + T * (-1)^d`. The rank is
/// recomputed by greedy rather than trusted from the caller.
pub fn reduce_emb_to_mol(
    inst: &EmbInstance,
    params: MolParams,
) -> Result<ReducedMolInstance, MolError> {
    let d = d_of(params)?;
    let total = inst.total_cost();
    let h = 2 * total.max(1);
    let k_rank = rank(&inst.matroid);

    let to_i64 = |x: u64| i64::try_from(x).expect("reduced weights exceed i64");
    let value: Vec<i64> = inst.cost.iter().map(|&c| to_i64(h + c)).collect();
    let weight: Vec<i64> = inst
        .cost
        .iter()
        .map(|&c| {
            if d == 0 {
                to_i64(h + c)
            } else {
                // h >= 2 c(E) >= 2 c(e) keeps this non-negative.
                to_i64(h - c)
            }
        })
        .collect();
    debug_assert!(weight.iter().all(|&w| w >= 0));
    let bound = if d == 0 {
        to_i64(u64::from(k_rank) * h + inst.target)
    } else {
        to_i64(u64::from(k_rank) * h) - to_i64(inst.target)
    };

    let n_plus = BigInt::from(inst.matroid.n_elements() + 1);
    let t_plus = BigInt::from(inst.target + 1);
    let m_plus = BigInt::from(total + 1);
    let eps = BigRational::new(BigInt::one(), BigInt::from(8) * n_plus * t_plus * m_plus);

    Ok(ReducedMolInstance {
        mol: MolInstance {
            matroid: inst.matroid.clone(),
            value,
            weight,
            bound,
            params,
        },
        h,
        k_rank,
        d,
        eps,
        source: inst.clone(),
    })
}

/// Whether `set` is a (feasible) solution of the instance: it must satisfy
/// the matroid feasibility constraint and the linear constraint.
pub fn is_mol_solution(mol: &MolInstance, set: ElemSet) -> bool {
    is_mol_solution_ranked(mol, set, rank(&mol.matroid))
}

fn is_mol_solution_ranked(mol: &MolInstance, set: ElemSet, k_rank: u32) -> bool {
    if !mol.matroid.is_independent(set) {
        return false;
    }
    if mol.params.feas == Feas::Bases && set.len() != k_rank {
        return false;
    }
    let w = mol.weight_of(set);
    match mol.params.rel {
        Rel::Le => w <= mol.bound,
        Rel::Ge => w >= mol.bound,
    }
}

/// Size guard for the exact solver.
pub const MOL_ENUMERATION_LIMIT: u32 = 18;

/// Exact MOL optimizer by enumeration; stands in for any approximation
/// scheme since the exact optimum is a `(1+eps)`-approximation for every
/// `eps`. Returns an optimizer and its objective value, or `None` when the
/// instance has no solution.
pub fn brute_force_mol(mol: &MolInstance) -> Result<Option<(ElemSet, i64)>, MolError> {
    let n = mol.matroid.n_elements();
    if n > MOL_ENUMERATION_LIMIT {
        return Err(MolError::GroundSetTooLarge(n, MOL_ENUMERATION_LIMIT));
    }
    let k_rank = rank(&mol.matroid);
    let mut best: Option<(ElemSet, i64)> = None;
    for s in ElemSet::all_subsets(n) {
        if !is_mol_solution_ranked(mol, s, k_rank) {
            continue;
        }
        let v = mol.value_of(s);
        let better = match (&best, mol.params.opt) {
            (None, _) => true,
            (Some((_, bv)), Opt::Max) => v > *bv,
            (Some((_, bv)), Opt::Min) => v < *bv,
        };
        if better {
            best = Some((s, v));
        }
    }
    Ok(best)
}

/// An approximation scheme for MOL instances. The contract mirrors a
/// randomized FPTAS run at a fixed error: when the instance has a solution,
/// `solve` returns a feasible solution whose value is within `(1+eps)` of
/// optimal; it reports `None` only when no solution exists.
pub trait MolSolver {
    fn solve(&self, mol: &MolInstance, eps: &BigRational) -> Result<Option<ElemSet>, MolError>;
}

/// The exact enumeration solver behind the [`MolSolver`] interface.
pub struct BruteForceMolSolver;

impl MolSolver for BruteForceMolSolver {
    fn solve(&self, mol: &MolInstance, _eps: &BigRational) -> Result<Option<ElemSet>, MolError> {
        Ok(brute_force_mol(mol)?.map(|(s, _)| s))
    }
}

/// Decides an exact-basis instance through a MOL approximation: build the
/// reduced instance, solve it at the gap parameter, and answer yes exactly
/// when the returned solution pins the objective at `rank * H + T`.
///
/// A solver that returns an infeasible set is reported as a contract
/// violation, never as a "no".
pub fn decide_emb_via_mol<S: MolSolver + ?Sized>(
    inst: &EmbInstance,
    params: MolParams,
    solver: &S,
) -> Result<bool, MolError> {
    let reduced = reduce_emb_to_mol(inst, params)?;
    match solver.solve(&reduced.mol, &reduced.eps)? {
        None => Ok(false),
        Some(s) => {
            if !is_mol_solution_ranked(&reduced.mol, s, reduced.k_rank) {
                return Err(MolError::SolverContract(format!(
                    "returned set {s} is not a solution of the reduced instance"
                )));
            }
            Ok(reduced.mol.value_of(s) == reduced.target_value())
        }
    }
}

/// Size guard for the bound certifier.
pub const CERTIFY_LIMIT: u32 = 14;

/// Exhaustively certifies the value structure of a reduced instance:
///
/// * maximization solutions never exceed `rank * H + T`, minimization
///   solutions never fall below it;
/// * any solution hitting the pinned value is a solution of the source
///   exact-basis instance;
/// * every source witness appears as a solution of pinned value.
pub fn certify_value_bounds(reduced: &ReducedMolInstance) -> Result<bool, MolError> {
    let n = reduced.mol.matroid.n_elements();
    if n > CERTIFY_LIMIT {
        return Err(MolError::GroundSetTooLarge(n, CERTIFY_LIMIT));
    }
    let pinned = reduced.target_value();
    for s in ElemSet::all_subsets(n) {
        if !is_mol_solution_ranked(&reduced.mol, s, reduced.k_rank) {
            continue;
        }
        let v = reduced.mol.value_of(s);
        let in_bounds = match reduced.mol.params.opt {
            Opt::Max => v <= pinned,
            Opt::Min => v >= pinned,
        };
        if !in_bounds {
            return Ok(false);
        }
        if v == pinned {
            let is_emb_witness = s.len() == reduced.k_rank
                && reduced.source.cost_of(s) == reduced.source.target;
            if !is_emb_witness {
                return Ok(false);
            }
        }
    }
    // Forward direction: witnesses survive the reduction with pinned value.
    for s in ElemSet::combinations(n, reduced.k_rank) {
        if reduced.source.matroid.is_independent(s)
            && reduced.source.cost_of(s) == reduced.source.target
            && (!is_mol_solution_ranked(&reduced.mol, s, reduced.k_rank)
                || reduced.mol.value_of(s) != pinned)
            {
                return Ok(false);
            }
    }
    Ok(true)
}

/// `eps * (H * rank + T) < 1/2`, the integrality margin that makes the gap
/// argument close.
pub fn gap_margin_holds(reduced: &ReducedMolInstance) -> bool {
    let lhs = &reduced.eps * BigRational::from(BigInt::from(reduced.target_value()));
    lhs < BigRational::new(BigInt::one(), BigInt::from(2)) && !lhs.is_negative()
}
