//! Chains of reduced-cost-optimal common bases: a sequence from `S` to `S'`
//! whose consecutive members exchange at most one element per cost class.
//! The walk is a guided local search (single swaps, then coordinated pair
//! swaps), with an exhaustive desk-scale search as a last resort; a missing
//! step surfaces as an error instead of being silently skipped.

use crate::intersection::min_weight_common_basis;
use crate::kcm::classes::{CostClassing, PatternVector};
use crate::kcm::lagrange::pattern_partition_matroid;
use crate::kcm::{KcmInstance, Rat};
use crate::matroid::{rank, MatroidOracle};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("endpoint {0} is not an optimal common basis for the pattern")]
    EndpointNotOptimal(ElemSet),
    #[error("no class-balanced optimal step exists from {0}")]
    SearchFailed(ElemSet),
}

/// Whether one chain step from `from` to `to` is class-balanced: within each
/// cost class, the numbers of removed and added elements agree and are at
/// most one.
pub fn balanced_step(classing: &CostClassing, from: ElemSet, to: ElemSet) -> bool {
    let removed = from.minus(to);
    let added = to.minus(from);
    if !removed.intersect(classing.over_cap).is_empty()
        || !added.intersect(classing.over_cap).is_empty()
    {
        return false;
    }
    classing.classes.iter().all(|class| {
        let r = removed.intersect(*class).len();
        let a = added.intersect(*class).len();
        r == a && r <= 1
    })
}

struct ChainContext<'a> {
    inst: &'a KcmInstance,
    classing: &'a CostClassing,
    scaled: Vec<i128>,
    optimum: i128,
    b: u32,
}

impl<'a> ChainContext<'a> {
    fn weight(&self, set: ElemSet) -> i128 {
        set.iter().map(|e| self.scaled[(e - 1) as usize]).sum()
    }

    /// Optimal common basis staying inside the pattern: same scaled weight as
    /// the relaxation optimum. Partition feasibility is preserved by every
    /// class-balanced move, so only the instance matroid needs a fresh check.
    fn step_ok(&self, candidate: ElemSet) -> bool {
        self.inst.matroid.is_independent(candidate) && self.weight(candidate) == self.optimum
    }
}

/// Builds the chain from `s` to `s_prime` through reduced-cost-optimal
/// common bases at `lambda_star`. Both endpoints are re-checked for
/// optimality first. Consecutive members satisfy the per-class single-swap
/// balance; every emitted step is verified before it is appended.
pub fn chain(
    inst: &KcmInstance,
    classing: &CostClassing,
    pattern: &PatternVector,
    lambda_star: &Rat,
    s: ElemSet,
    s_prime: ElemSet,
) -> Result<Vec<ElemSet>, ChainError> {
    let j = pattern_partition_matroid(classing, pattern);
    let b = rank(&inst.matroid);
    let p = *lambda_star.numer();
    let q = *lambda_star.denom();
    let scaled: Vec<i128> = inst
        .cost
        .iter()
        .zip(&inst.size)
        .map(|(&c, &d)| q * c as i128 - p * d as i128)
        .collect();
    let optimum = min_weight_common_basis(&inst.matroid, &j, &scaled, b)
        .map(|best| best.iter().map(|e| scaled[(e - 1) as usize]).sum::<i128>())
        .ok_or(ChainError::EndpointNotOptimal(s))?;

    let ctx = ChainContext {
        inst,
        classing,
        scaled,
        optimum,
        b,
    };
    for endpoint in [s, s_prime] {
        let feasible = endpoint.len() == b
            && inst.matroid.is_independent(endpoint)
            && j.is_independent(endpoint);
        if !feasible || ctx.weight(endpoint) != optimum {
            return Err(ChainError::EndpointNotOptimal(endpoint));
        }
    }

    let mut seq = vec![s];
    let mut cur = s;
    while cur != s_prime {
        match local_step(&ctx, cur, s_prime) {
            Some(next) => {
                debug_assert!(balanced_step(classing, cur, next));
                debug_assert!(ctx.step_ok(next));
                debug_assert!(next.sym_diff(s_prime).len() < cur.sym_diff(s_prime).len());
                seq.push(next);
                cur = next;
            }
            None => {
                // Guided search dead-ended; route the rest through an
                // exhaustive walk over the optimal bases.
                let rest = bfs_chain(&ctx, &j, cur, s_prime)
                    .ok_or(ChainError::SearchFailed(cur))?;
                seq.extend(rest.into_iter().skip(1));
                return Ok(seq);
            }
        }
    }
    Ok(seq)
}

/// First valid move toward the far endpoint: a same-class single swap, or a
/// pair of swaps across two classes, each strictly shrinking the symmetric
/// difference while keeping reduced-cost optimality.
fn local_step(ctx: &ChainContext, cur: ElemSet, target: ElemSet) -> Option<ElemSet> {
    let removals: Vec<u32> = cur.minus(target).iter().collect();
    let additions: Vec<u32> = target.minus(cur).iter().collect();

    for &e in &removals {
        let ce = ctx.classing.class_of(e);
        for &f in &additions {
            if ce == ctx.classing.class_of(f) {
                let cand = cur.without(e).with(f);
                if ctx.step_ok(cand) {
                    return Some(cand);
                }
            }
        }
    }
    // Coordinated swaps in two distinct classes at once.
    for (i, &e1) in removals.iter().enumerate() {
        for &e2 in removals.iter().skip(i + 1) {
            let (c1, c2) = (ctx.classing.class_of(e1), ctx.classing.class_of(e2));
            if c1 == c2 {
                continue;
            }
            for &f1 in &additions {
                for &f2 in &additions {
                    if f1 == f2 {
                        continue;
                    }
                    let matches_classes = ctx.classing.class_of(f1) == c1
                        && ctx.classing.class_of(f2) == c2;
                    if !matches_classes {
                        continue;
                    }
                    let cand = cur.without(e1).without(e2).with(f1).with(f2);
                    if ctx.step_ok(cand) {
                        return Some(cand);
                    }
                }
            }
        }
    }
    None
}

const EXHAUSTIVE_CHAIN_LIMIT: u32 = 16;

/// Desk-scale fallback: breadth-first search over all optimal common bases,
/// with class-balanced steps as edges. Unlike the guided walk it may take
/// detours, which the chain contract permits.
fn bfs_chain<J: MatroidOracle>(
    ctx: &ChainContext,
    j: &J,
    from: ElemSet,
    to: ElemSet,
) -> Option<Vec<ElemSet>> {
    let n = ctx.inst.n_elements();
    if n > EXHAUSTIVE_CHAIN_LIMIT {
        return None;
    }
    let nodes: Vec<ElemSet> = ElemSet::combinations(n, ctx.b)
        .filter(|&cand| j.is_independent(cand) && ctx.step_ok(cand))
        .collect();
    let index = |s: ElemSet| nodes.iter().position(|&x| x == s);
    let (start, goal) = (index(from)?, index(to)?);
    let mut pred: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut queue = std::collections::VecDeque::from([start]);
    pred[start] = Some(start);
    while let Some(u) = queue.pop_front() {
        if u == goal {
            let mut path = vec![nodes[u]];
            let mut at = u;
            while at != start {
                at = pred[at].unwrap();
                path.push(nodes[at]);
            }
            path.reverse();
            return Some(path);
        }
        for v in 0..nodes.len() {
            if pred[v].is_none() && balanced_step(ctx.classing, nodes[u], nodes[v]) {
                pred[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcm::classes::build_cost_classes;
    use crate::matroid::{Matroid, UniformMatroid};

    fn rat(n: i128, d: i128) -> Rat {
        Rat::new(n, d)
    }

    fn flat_instance() -> (KcmInstance, CostClassing, PatternVector) {
        // All costs equal: every pair is optimal at lambda = 0.
        let inst = KcmInstance {
            matroid: Matroid::Uniform(UniformMatroid { n: 4, k: 2 }),
            cost: vec![3, 3, 3, 3],
            size: vec![1, 2, 3, 4],
            demand: 3,
        };
        let classing = build_cost_classes(&inst, &rat(1, 2), 100);
        let pattern = PatternVector(vec![2, 0, 0]);
        (inst, classing, pattern)
    }

    #[test]
    fn trivial_chain_is_a_singleton() {
        let (inst, classing, pattern) = flat_instance();
        let s = ElemSet::from_elems([1, 2]);
        let seq = chain(&inst, &classing, &pattern, &Rat::new(0, 1), s, s).unwrap();
        assert_eq!(seq, vec![s]);
    }

    #[test]
    fn single_swap_chain() {
        let (inst, classing, pattern) = flat_instance();
        let s = ElemSet::from_elems([1, 2]);
        let t = ElemSet::from_elems([1, 3]);
        let seq = chain(&inst, &classing, &pattern, &Rat::new(0, 1), s, t).unwrap();
        assert_eq!(seq, vec![s, t]);
    }

    #[test]
    fn disjoint_endpoints_walk_in_balanced_steps() {
        let (inst, classing, pattern) = flat_instance();
        let s = ElemSet::from_elems([1, 2]);
        let t = ElemSet::from_elems([3, 4]);
        let seq = chain(&inst, &classing, &pattern, &Rat::new(0, 1), s, t).unwrap();
        assert_eq!(*seq.first().unwrap(), s);
        assert_eq!(*seq.last().unwrap(), t);
        for pair in seq.windows(2) {
            assert!(balanced_step(&classing, pair[0], pair[1]));
        }
    }

    #[test]
    fn non_optimal_endpoint_is_rejected() {
        let inst = KcmInstance {
            matroid: Matroid::Uniform(UniformMatroid { n: 4, k: 2 }),
            cost: vec![1, 1, 9, 9],
            size: vec![1, 1, 1, 1],
            demand: 0,
        };
        let classing = build_cost_classes(&inst, &rat(1, 2), 20);
        let pattern = PatternVector(vec![2, 0, 0]);
        let bad = ElemSet::from_elems([3, 4]);
        let good = ElemSet::from_elems([1, 2]);
        let err = chain(&inst, &classing, &pattern, &Rat::new(0, 1), good, bad).unwrap_err();
        assert_eq!(err, ChainError::EndpointNotOptimal(bad));
    }

    #[test]
    fn balanced_step_predicate() {
        let (_, classing, _) = flat_instance();
        // Same-class swap (everything is in E_0 here).
        assert!(balanced_step(
            &classing,
            ElemSet::from_elems([1, 2]),
            ElemSet::from_elems([1, 3])
        ));
        // Two-for-two inside one class is out of balance.
        assert!(!balanced_step(
            &classing,
            ElemSet::from_elems([1, 2]),
            ElemSet::from_elems([3, 4])
        ));
    }
}
