//! The Pi-matroid family: a paving matroid that hides an arbitrary secret
//! family behind its membership oracle, reachable only through the k-subsets
//! of a fixed id-sum.

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::exact::EmbInstance;
use crate::matroid::{rank, Matroid, MatroidError, MatroidOracle};
use crate::sat::SatInstance;
use crate::set::{ElemSet, MAX_GROUND_SET};

/// `sum(S)`: the sum of the element ids of `S`.
pub fn sum_of(set: ElemSet) -> u64 {
    set.id_sum()
}

/// A secret family `Π ⊆ 2^[n]`, exposed only as a query. The toolkit never
/// enumerates a secret except inside explicitly named brute-force oracles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SecretFamily {
    Empty,
    Singleton { set: ElemSet },
    Explicit { sets: Vec<ElemSet> },
    /// `S ∈ Π` iff `S` is an independent set of the graph (no edge inside).
    Graph { edges: Vec<(u32, u32)> },
    /// `S ∈ Π` iff the assignment "i true ⟺ i ∈ S" satisfies the instance.
    Sat { sat: SatInstance },
}

impl SecretFamily {
    pub fn contains(&self, set: ElemSet) -> bool {
        match self {
            SecretFamily::Empty => false,
            SecretFamily::Singleton { set: s } => set == *s,
            SecretFamily::Explicit { sets } => sets.contains(&set),
            SecretFamily::Graph { edges } => edges
                .iter()
                .all(|&(u, v)| !(set.contains(u) && set.contains(v))),
            SecretFamily::Sat { sat } => sat.is_solution(set),
        }
    }
}

/// The Pi-matroid `M_{n,k,α}(Π)`. A set is independent iff
///
/// * `|S| < k`, or
/// * `|S| = k` and `sum(S) ≠ α`, or
/// * `|S| = k`, `sum(S) = α`, and `S ∈ Π`.
///
/// The third layer is the only place the secret is consulted, so membership
/// of any set with `|S| ≠ k` or `sum(S) ≠ α` issues zero secret queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiMatroid {
    pub n: u32,
    pub k: u32,
    pub alpha: u64,
    pub secret: SecretFamily,
}

impl PiMatroid {
    pub fn new(n: u32, k: u32, alpha: u64, secret: SecretFamily) -> Result<Self, MatroidError> {
        let m = PiMatroid { n, k, alpha, secret };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), MatroidError> {
        if self.n > MAX_GROUND_SET {
            return Err(MatroidError::GroundSetTooLarge(self.n, MAX_GROUND_SET));
        }
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return Err(MatroidError::Invalid(format!(
                "need 1 <= k <= n, got n={} k={}",
                self.n, self.k
            )));
        }
        if self.alpha == 0 {
            return Err(MatroidError::Invalid("alpha must be positive".into()));
        }
        if let SecretFamily::Graph { edges } = &self.secret {
            for &(u, v) in edges {
                if !(1..=self.n).contains(&u) || !(1..=self.n).contains(&v) {
                    return Err(MatroidError::Invalid(format!(
                        "graph edge ({u},{v}) outside [{0}]",
                        self.n
                    )));
                }
            }
        }
        if let SecretFamily::Sat { sat } = &self.secret {
            sat.validate()
                .map_err(|e| MatroidError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    /// Membership decision together with whether the secret was consulted.
    /// The boolean is the engine behind the secret-query discipline: only
    /// k-sets of sum exactly `alpha` may touch the secret.
    pub fn membership_with_trace(&self, set: ElemSet) -> (bool, bool) {
        let len = set.len();
        if len < self.k {
            return (true, false);
        }
        if len > self.k {
            return (false, false);
        }
        if sum_of(set) != self.alpha {
            return (true, false);
        }
        (self.secret.contains(set), true)
    }

    /// True in the single corner where the rank can fall below `k`: the only
    /// k-subset of the ground set sums to `alpha` (so `k = n` and
    /// `alpha = sum([n])`) and might lie outside the secret. Computed without
    /// consulting the secret; callers that care should treat it as "rank may
    /// be below k".
    pub fn possible_degenerate_rank(&self) -> bool {
        self.k == self.n && self.alpha == ElemSet::full(self.n).id_sum()
    }
}

impl MatroidOracle for PiMatroid {
    fn n_elements(&self) -> u32 {
        self.n
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        self.membership_with_trace(set).0
    }
}

/// Membership per the three-layer rule. Equivalent to
/// `pm.is_independent(set)`; kept as a free function for symmetry with the
/// other oracle entry points.
pub fn pi_membership(pm: &PiMatroid, set: ElemSet) -> bool {
    pm.is_independent(set)
}

/// The target family `F_{n,k,α}`: all k-subsets of `[n]` with id-sum exactly
/// `alpha`, in lexicographic order.
pub fn enumerate_target_sets(n: u32, k: u32, alpha: u64) -> Vec<ElemSet> {
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    ElemSet::combinations(n, k)
        .filter(|s| sum_of(*s) == alpha)
        .collect()
}

/// `|F_{n,k,α}|` by the restricted-partition recurrence: the number of
/// k-subsets of `[n]` with id-sum `alpha`, computed without enumeration.
pub fn count_target_sets(n: u32, k: u32, alpha: u64) -> BigUint {
    count_target_sets_by_sum(n, k)
        .get(alpha as usize)
        .cloned()
        .unwrap_or(BigUint::ZERO)
}

/// One pass of the recurrence for all sums at once: entry `s` is the number
/// of k-subsets of `[n]` with id-sum exactly `s`.
pub fn count_target_sets_by_sum(n: u32, k: u32) -> Vec<BigUint> {
    let max_sum = (u64::from(n) * (u64::from(n) + 1) / 2) as usize;
    if k > n {
        return vec![BigUint::ZERO; max_sum + 1];
    }
    let k = k as usize;
    // dp[j][s] = number of j-subsets of the elements seen so far with sum s.
    let mut dp = vec![vec![BigUint::ZERO; max_sum + 1]; k + 1];
    dp[0][0] = BigUint::from(1u32);
    for e in 1..=n as usize {
        for j in (1..=k).rev() {
            for s in (e..=max_sum).rev() {
                let add = dp[j - 1][s - e].clone();
                if add != BigUint::ZERO {
                    dp[j][s] += add;
                }
            }
        }
    }
    dp.swap_remove(k)
}

/// Output of the hard-parameter search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardParameters {
    pub n: u32,
    pub k: u32,
    pub alpha: u64,
    pub family_size: BigUint,
}

/// Finds parameters whose target family outnumbers the query budget of any
/// decider running in time `(12·n^5)^d`:
///
/// * the smallest `ñ` with `(12·ñ^5)^d < (2^ñ - 1) / (2·ñ^3)`,
/// * `k̃ = ⌊ñ/2⌋`, verified to satisfy `C(ñ,k̃) ≥ (2^ñ - 1)/ñ`,
/// * `α̃ = argmax_α |F_{ñ,k̃,α}|` by the counting recurrence.
///
/// All arithmetic is exact big-integer; the resulting family size is
/// guaranteed to exceed `2·(12·ñ^5)^d`.
pub fn choose_hard_parameters(d: u32) -> HardParameters {
    assert!(d >= 1);
    let n = (1u32..)
        .find(|&n| {
            let n_big = BigUint::from(n);
            let budget = (BigUint::from(12u32) * n_big.pow(5)).pow(d);
            let pow2 = (BigUint::from(1u32) << n) - 1u32;
            // (12 n^5)^d < (2^n - 1) / (2 n^3), cross-multiplied.
            budget * (BigUint::from(2u32) * n_big.pow(3)) < pow2
        })
        .expect("search is unbounded");

    let k = n / 2;
    let binom = binomial(n, k);
    let pow2 = (BigUint::from(1u32) << n) - 1u32;
    assert!(
        &binom * BigUint::from(n) >= pow2,
        "central binomial coefficient unexpectedly small"
    );

    let by_sum = count_target_sets_by_sum(n, k);
    let mut best_alpha = 1u64;
    let mut best_count = BigUint::ZERO;
    for alpha in 1..=u64::from(n) * u64::from(n) {
        let c = by_sum.get(alpha as usize).cloned().unwrap_or(BigUint::ZERO);
        if c > best_count {
            best_count = c;
            best_alpha = alpha;
        }
    }
    let budget = (BigUint::from(12u32) * BigUint::from(n).pow(5)).pow(d);
    assert!(
        best_count > BigUint::from(2u32) * budget,
        "hard-parameter guarantee violated"
    );
    HardParameters {
        n,
        k,
        alpha: best_alpha,
        family_size: best_count,
    }
}

fn binomial(n: u32, k: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k.min(n.saturating_sub(k)) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The induced exact-basis instance of a Pi-matroid: ground set `[n]`,
/// identity costs, target `alpha`. It is a yes-instance iff some `S ∈ Π` has
/// `|S| = k` and `sum(S) = alpha`, provided the rank equals `k` (see
/// [`PiMatroid::possible_degenerate_rank`]).
pub fn induced_emb_instance(pm: &PiMatroid) -> EmbInstance {
    EmbInstance {
        matroid: Matroid::Pi(pm.clone()),
        cost: (1..=u64::from(pm.n)).collect(),
        target: pm.alpha,
    }
}

/// True iff every dependent subset has cardinality at least the rank.
/// Exhaustive over `2^[n]`, hence the limit guard.
pub fn is_paving<M: MatroidOracle + ?Sized>(m: &M, limit: u32) -> Result<bool, MatroidError> {
    let n = m.n_elements();
    if n > limit {
        return Err(MatroidError::GroundSetTooLarge(n, limit));
    }
    let r = rank(m);
    Ok(ElemSet::all_subsets(n).all(|s| m.is_independent(s) || s.len() >= r))
}
