//! Standard weight and budget reductions from Pi-matroids to the classic
//! constrained problems (budgeted independent set, exact-weight independent
//! set, constrained minimum basis, knapsack cover).
//!
//! For the ground set `[n]` with `s = sum([n])`:
//!
//! * standard weight `w_n(i) = i + 2 s`, standard budget
//!   `B_{n,k,alpha} = alpha + 2 k s`;
//! * standard cost `c_n(i) = w_n(i) - 2 i = 2 s - i`, standard bound
//!   `L_{n,k,alpha} = B_{n,k,alpha} - 2 alpha = 2 k s - alpha`.
//!
//! Among independent sets, `w_n(S) = B` holds exactly for the hidden-layer
//! members (the k-sets of sum `alpha` inside the secret), which is what makes
//! an exact optimizer of any of the classic instances reveal the secret.

use num::{BigInt, BigRational, One};

use crate::exact::EmiInstance;
use crate::kcm::KcmInstance;
use crate::matroid::{Matroid, MatroidOracle};
use crate::mol::{Feas, MolInstance, MolParams, Opt, Rel};
use crate::pi::{sum_of, PiMatroid};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StandardError {
    #[error("alpha = {alpha} outside [n^2] = [1, {max}]")]
    AlphaOutOfRange { alpha: u64, max: u64 },
}

/// The standard weight/cost functions of a ground set `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StandardWeights {
    pub n: u32,
}

impl StandardWeights {
    pub fn new(n: u32) -> Self {
        StandardWeights { n }
    }

    fn ground_sum(self) -> u64 {
        u64::from(self.n) * (u64::from(self.n) + 1) / 2
    }

    /// `w_n(i) = i + 2 sum([n])`.
    pub fn weight(self, i: u32) -> u64 {
        u64::from(i) + 2 * self.ground_sum()
    }

    /// `c_n(i) = 2 sum([n]) - i`.
    pub fn cost(self, i: u32) -> u64 {
        2 * self.ground_sum() - u64::from(i)
    }

    pub fn weight_vec(self) -> Vec<u64> {
        (1..=self.n).map(|i| self.weight(i)).collect()
    }

    pub fn cost_vec(self) -> Vec<u64> {
        (1..=self.n).map(|i| self.cost(i)).collect()
    }

    pub fn weight_of(self, set: ElemSet) -> u64 {
        sum_of(set) + 2 * self.ground_sum() * u64::from(set.len())
    }

    pub fn cost_of(self, set: ElemSet) -> u64 {
        2 * self.ground_sum() * u64::from(set.len()) - sum_of(set)
    }

    /// `B_{n,k,alpha} = alpha + 2 k sum([n])`.
    pub fn budget(self, k: u32, alpha: u64) -> u64 {
        alpha + 2 * u64::from(k) * self.ground_sum()
    }

    /// `L_{n,k,alpha} = 2 k sum([n]) - alpha`.
    pub fn cost_bound(self, k: u32, alpha: u64) -> u64 {
        2 * u64::from(k) * self.ground_sum() - alpha
    }
}

/// The error parameter `1 / (6 n^3)` used by the standard-weight drivers;
/// coarser than the per-instance gap parameter of the generic reduction, and
/// kept separate on purpose.
pub fn standard_epsilon(n: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(6u64 * u64::from(n).pow(3)))
}

fn check_alpha(pm: &PiMatroid) -> Result<(), StandardError> {
    let max = u64::from(pm.n) * u64::from(pm.n);
    if pm.alpha > max {
        return Err(StandardError::AlphaOutOfRange {
            alpha: pm.alpha,
            max,
        });
    }
    Ok(())
}

/// For an independent `set`, returns whether it belongs to the hidden layer
/// (cardinality `k`, sum `alpha`), and checks on the way that this is
/// equivalent to `w_n(set) = B_{n,k,alpha}`, and that for k-sets
/// `w_n(set) >= B` iff `c_n(set) <= L`.
pub fn standard_weight_check(pm: &PiMatroid, set: ElemSet) -> Result<bool, StandardError> {
    check_alpha(pm)?;
    assert!(
        pm.is_independent(set),
        "standard_weight_check expects an independent set"
    );
    let sw = StandardWeights::new(pm.n);
    let in_hidden_layer = set.len() == pm.k && sum_of(set) == pm.alpha;
    let weight_hits_budget = sw.weight_of(set) == sw.budget(pm.k, pm.alpha);
    assert_eq!(
        in_hidden_layer, weight_hits_budget,
        "weight/budget equivalence failed on {set}"
    );
    if set.len() == pm.k {
        let w_side = sw.weight_of(set) >= sw.budget(pm.k, pm.alpha);
        let c_side = sw.cost_of(set) <= sw.cost_bound(pm.k, pm.alpha);
        assert_eq!(w_side, c_side, "weight/cost bound flip failed on {set}");
    }
    Ok(in_hidden_layer)
}

/// The four classic targets of the standard reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicTarget {
    /// Budgeted matroid independent set: maximize profit under a cost budget.
    Bm,
    /// Exact-weight independent set of prescribed cardinality.
    Emi,
    /// Constrained minimum basis: minimize weight under a cost bound.
    Cmb,
    /// Knapsack cover with a matroid: minimize cost while covering a demand.
    Kcm,
}

#[derive(Debug, Clone)]
pub enum ClassicInstance {
    Bm(MolInstance),
    Emi(EmiInstance),
    Cmb(MolInstance),
    Kcm(KcmInstance),
}

/// Builds the classic instance whose exact optimum pins the standard budget
/// (for CMB: the standard budget in `w_n`-value) exactly when the
/// Pi-matroid's hidden layer is non-empty.
pub fn reduce_pi_to_classic(
    pm: &PiMatroid,
    target: ClassicTarget,
) -> Result<ClassicInstance, StandardError> {
    check_alpha(pm)?;
    let sw = StandardWeights::new(pm.n);
    let w_i64: Vec<i64> = sw.weight_vec().iter().map(|&x| x as i64).collect();
    let c_i64: Vec<i64> = sw.cost_vec().iter().map(|&x| x as i64).collect();
    let matroid = Matroid::Pi(pm.clone());
    Ok(match target {
        ClassicTarget::Bm => ClassicInstance::Bm(MolInstance {
            matroid,
            value: w_i64.clone(),
            weight: w_i64,
            bound: sw.budget(pm.k, pm.alpha) as i64,
            params: MolParams::new(Opt::Max, Feas::Is, Rel::Le),
        }),
        ClassicTarget::Emi => ClassicInstance::Emi(EmiInstance {
            matroid,
            weight: sw.weight_vec(),
            k: pm.k,
            target: sw.budget(pm.k, pm.alpha),
        }),
        ClassicTarget::Cmb => ClassicInstance::Cmb(MolInstance {
            matroid,
            value: w_i64,
            weight: c_i64,
            bound: sw.cost_bound(pm.k, pm.alpha) as i64,
            params: MolParams::new(Opt::Min, Feas::Bases, Rel::Le),
        }),
        ClassicTarget::Kcm => ClassicInstance::Kcm(KcmInstance {
            matroid,
            cost: sw.weight_vec(),
            size: sw.weight_vec(),
            demand: sw.budget(pm.k, pm.alpha),
        }),
    })
}
