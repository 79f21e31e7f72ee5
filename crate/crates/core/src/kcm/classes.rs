//! Cost classes and pattern vectors for the knapsack-cover scheme.

use num::{One, Zero};

use crate::kcm::{KcmInstance, Rat};
use crate::set::ElemSet;

/// Clamps `eps` into `(0, 1]` and rounds it down to the nearest reciprocal of
/// an integer, so that `1/eps` is a natural number.
pub fn normalize_eps(eps: &Rat) -> Rat {
    assert!(*eps > Rat::zero(), "eps must be positive");
    if *eps >= Rat::one() {
        return Rat::one();
    }
    let inv = (Rat::one() / eps).ceil();
    Rat::one() / inv
}

/// Partition of the ground set into cost bands relative to a constant-factor
/// estimate `C` of the optimum:
///
/// * `E_0`: `c(e) < eps * C`;
/// * `E_i` for `i in [k_eps]`: `(eps + (i-1) eps^2) C <= c(e) < (eps + i eps^2) C`,
///   with `k_eps = (1 - eps) / eps^2` (an integer once `1/eps` is);
/// * elements with `c(e) = C` land in class `k_eps`; elements with
///   `c(e) > C` can never appear in a solution once `C >= OPT`, and are
///   set aside as over-cap.
#[derive(Debug, Clone)]
pub struct CostClassing {
    pub c_estimate: u64,
    /// Normalized error parameter; `1 / eps` is integral.
    pub eps: Rat,
    pub k_eps: u32,
    /// `classes[i]` is `E_i`, for `i in 0..=k_eps`.
    pub classes: Vec<ElemSet>,
    /// Elements priced strictly above the estimate.
    pub over_cap: ElemSet,
}

impl CostClassing {
    /// `1 / eps` as an integer.
    pub fn inv_eps(&self) -> u32 {
        let inv = self.eps.denom() / self.eps.numer();
        u32::try_from(inv).expect("1/eps fits u32")
    }

    /// Class index of an element, or `None` when it is over-cap.
    pub fn class_of(&self, e: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(e))
    }

    /// Per-class membership counts of a set (over-cap elements ignored).
    pub fn count_vector(&self, set: ElemSet) -> Vec<u32> {
        self.classes.iter().map(|c| c.intersect(set).len()).collect()
    }
}

/// Builds the cost classing of an instance for `eps` (normalized here) and a
/// constant-factor estimate `c_estimate`.
pub fn build_cost_classes(inst: &KcmInstance, eps: &Rat, c_estimate: u64) -> CostClassing {
    let eps = normalize_eps(eps);
    let m = eps.denom(); // eps = 1/m
    let k_eps = u32::try_from(m * (m - 1)).expect("k_eps fits u32");
    let n = inst.n_elements();

    let c_big = Rat::from_integer(i128::from(c_estimate));
    let eps_sq = eps * eps;
    let mut classes = vec![ElemSet::EMPTY; (k_eps + 1) as usize];
    let mut over_cap = ElemSet::EMPTY;
    for e in 1..=n {
        let c = Rat::from_integer(inst.cost[(e - 1) as usize] as i128);
        if c > c_big {
            over_cap.insert(e);
        } else if c < eps * c_big || k_eps == 0 || c_estimate == 0 {
            // A zero estimate collapses every band; free elements are E_0.
            classes[0].insert(e);
        } else {
            // i = floor((c/C - eps) / eps^2) + 1, clamped into [1, k_eps];
            // the clamp is what files c(e) = C under class k_eps.
            let ratio = (c / c_big - eps) / eps_sq;
            let i = (ratio.floor().to_integer() + 1).clamp(1, i128::from(k_eps)) as usize;
            classes[i].insert(e);
        }
    }
    CostClassing {
        c_estimate,
        eps,
        k_eps,
        classes,
        over_cap,
    }
}

/// Per-class selection quotas `n_0, ..., n_{k_eps}` subject to
/// `sum_{i>=1} n_i <= 1/eps` and `sum_i n_i <= |E|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternVector(pub Vec<u32>);

impl PatternVector {
    pub fn quota(&self, class: usize) -> u32 {
        self.0[class]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn tail_total(&self) -> u32 {
        self.0.iter().skip(1).sum()
    }
}

/// Enumerates every pattern vector of the classing over a ground set of
/// `n_elems` elements, in lexicographic order of `(n_1, ..., n_k, n_0)`.
/// The family has at most `(k_eps + 1)^(1/eps) * (n_elems + 1)` members.
pub fn enumerate_patterns(
    classing: &CostClassing,
    n_elems: u32,
) -> impl Iterator<Item = PatternVector> {
    PatternIter::new(classing.k_eps, classing.inv_eps(), n_elems, None)
}

/// The driver's restriction of the pattern family: total quota pinned to
/// `total` (the rank) and per-class quotas capped by the class sizes, which
/// drops only patterns that cannot be the class profile of a basis.
pub(crate) fn exact_total_patterns(
    classing: &CostClassing,
    n_elems: u32,
    total: u32,
) -> impl Iterator<Item = PatternVector> {
    let caps: Vec<u32> = classing.classes.iter().map(|c| c.len()).collect();
    PatternIter::new(classing.k_eps, classing.inv_eps(), n_elems, Some((total, caps)))
}

struct PatternIter {
    k: usize,
    budget: u32,
    n_elems: u32,
    /// When set: require `sum == total` and `n_i <= caps[i]`.
    exact: Option<(u32, Vec<u32>)>,
    tail: Option<Vec<u32>>, // n_1..n_k
    n0: u32,
    n0_done: bool,
}

impl PatternIter {
    fn new(k_eps: u32, inv_eps: u32, n_elems: u32, exact: Option<(u32, Vec<u32>)>) -> Self {
        PatternIter {
            k: k_eps as usize,
            budget: inv_eps,
            n_elems,
            exact,
            tail: Some(vec![0; k_eps as usize]),
            n0: 0,
            n0_done: false,
        }
    }

    /// Advances `tail` to the next vector with `sum <= budget` (and caps,
    /// when restricted); returns false when exhausted.
    fn advance_tail(&mut self) -> bool {
        let Some(tail) = self.tail.as_mut() else {
            return false;
        };
        let caps = self.exact.as_ref().map(|(_, c)| c.clone());
        let mut i = 0;
        loop {
            if i >= self.k {
                self.tail = None;
                return false;
            }
            tail[i] += 1;
            let cap_ok = caps
                .as_ref()
                .is_none_or(|c| tail[i] <= c[i + 1]);
            if cap_ok && tail.iter().sum::<u32>() <= self.budget {
                for slot in tail.iter_mut().take(i) {
                    *slot = 0;
                }
                return true;
            }
            tail[i] = 0;
            i += 1;
        }
    }

    fn n0_range(&self, tail_sum: u32) -> Option<(u32, u32)> {
        if tail_sum > self.n_elems {
            return None;
        }
        let max_by_elems = self.n_elems - tail_sum;
        match &self.exact {
            None => Some((0, max_by_elems)),
            Some((total, caps)) => {
                if tail_sum > *total {
                    return None;
                }
                let n0 = total - tail_sum;
                if n0 <= max_by_elems && n0 <= caps[0] {
                    Some((n0, n0))
                } else {
                    None
                }
            }
        }
    }
}

impl Iterator for PatternIter {
    type Item = PatternVector;

    fn next(&mut self) -> Option<PatternVector> {
        loop {
            let tail = self.tail.as_ref()?.clone();
            let tail_sum: u32 = tail.iter().sum();
            if let Some((lo, hi)) = self.n0_range(tail_sum) {
                if !self.n0_done {
                    self.n0 = lo;
                    self.n0_done = true;
                } else {
                    self.n0 += 1;
                }
                if self.n0 <= hi {
                    let mut v = Vec::with_capacity(self.k + 1);
                    v.push(self.n0);
                    v.extend_from_slice(&tail);
                    return Some(PatternVector(v));
                }
            }
            self.n0_done = false;
            if !self.advance_tail() {
                return None;
            }
        }
    }
}
