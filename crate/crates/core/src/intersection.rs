//! Matroid intersection: maximum-cardinality common independent sets and
//! minimum-weight common independent sets of prescribed cardinality, via
//! shortest augmenting paths in the exchange graph.

use std::ops::{Add, Neg, Sub};

use num::Zero;

use crate::matroid::{weight_of, MatroidOracle, Weight};
use crate::set::{ElemSet, Element};

/// Ground sets at most this large are solved by enumeration instead of the
/// augmenting-path algorithm, keeping a trivially correct reference path in
/// routine use.
pub const DEFAULT_BRUTE_FORCE_THRESHOLD: u32 = 6;

/// Pair ordered lexicographically, with componentwise arithmetic. Used to
/// break weight ties by a secondary objective (for example: minimize reduced
/// cost, then steer coverage up or down).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexPair<A, B>(pub A, pub B);

impl<A: Add<Output = A>, B: Add<Output = B>> Add for LexPair<A, B> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        LexPair(self.0 + rhs.0, self.1 + rhs.1)
    }
}

impl<A: Sub<Output = A>, B: Sub<Output = B>> Sub for LexPair<A, B> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        LexPair(self.0 - rhs.0, self.1 - rhs.1)
    }
}

impl<A: Neg<Output = A>, B: Neg<Output = B>> Neg for LexPair<A, B> {
    type Output = Self;
    fn neg(self) -> Self {
        LexPair(-self.0, -self.1)
    }
}

impl<A: Zero, B: Zero> Zero for LexPair<A, B> {
    fn zero() -> Self {
        LexPair(A::zero(), B::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
}

fn common_size_limit<M1, M2>(m1: &M1, m2: &M2) -> u32
where
    M1: MatroidOracle + ?Sized,
    M2: MatroidOracle + ?Sized,
{
    let n = m1.n_elements();
    assert_eq!(n, m2.n_elements(), "matroids must share a ground set");
    n
}

/// Maximum-cardinality set independent in both matroids, via augmenting
/// paths. Deterministic: ties resolve toward smaller element ids.
pub fn max_common_independent<M1, M2>(m1: &M1, m2: &M2) -> ElemSet
where
    M1: MatroidOracle + ?Sized,
    M2: MatroidOracle + ?Sized,
{
    let n = common_size_limit(m1, m2);
    // Zero weights turn the weighted machinery into plain BFS layering.
    let zeros = vec![0i64; n as usize];
    let mut s = ElemSet::EMPTY;
    while let Some(next) = augment(m1, m2, &zeros, s) {
        s = next;
    }
    s
}

/// Minimum-weight common independent set of cardinality exactly `b`, or
/// `None` when the matroids admit no common independent set that large.
/// Weights may be negative. Equivalent to full enumeration; ground sets of
/// size at most [`DEFAULT_BRUTE_FORCE_THRESHOLD`] are in fact enumerated.
pub fn min_weight_common_basis<M1, M2, W>(
    m1: &M1,
    m2: &M2,
    weights: &[W],
    b: u32,
) -> Option<ElemSet>
where
    M1: MatroidOracle + ?Sized,
    M2: MatroidOracle + ?Sized,
    W: Weight,
{
    min_weight_common_basis_with_threshold(m1, m2, weights, b, DEFAULT_BRUTE_FORCE_THRESHOLD)
}

/// [`min_weight_common_basis`] with an explicit enumeration threshold
/// (`0` forces the augmenting-path algorithm everywhere).
pub fn min_weight_common_basis_with_threshold<M1, M2, W>(
    m1: &M1,
    m2: &M2,
    weights: &[W],
    b: u32,
    brute_force_threshold: u32,
) -> Option<ElemSet>
where
    M1: MatroidOracle + ?Sized,
    M2: MatroidOracle + ?Sized,
    W: Weight,
{
    let n = common_size_limit(m1, m2);
    assert_eq!(weights.len(), n as usize, "one weight per element expected");
    if b > n {
        return None;
    }
    if n <= brute_force_threshold {
        return brute_force_min_common(m1, m2, weights, b);
    }
    let mut s = ElemSet::EMPTY;
    for _ in 0..b {
        s = augment(m1, m2, weights, s)?;
    }
    Some(s)
}

/// Reference implementation by lexicographic enumeration of all b-subsets.
pub fn brute_force_min_common<M1, M2, W>(
    m1: &M1,
    m2: &M2,
    weights: &[W],
    b: u32,
) -> Option<ElemSet>
where
    M1: MatroidOracle + ?Sized,
    M2: MatroidOracle + ?Sized,
    W: Weight,
{
    let n = common_size_limit(m1, m2);
    ElemSet::combinations(n, b)
        .filter(|&s| m1.is_independent(s) && m2.is_independent(s))
        .min_by(|a, b| weight_of(weights, *a).cmp(&weight_of(weights, *b)))
}

/// One augmentation step: from a weight-extreme common independent set `s`,
/// returns an extreme common independent set of size `|s| + 1`, or `None`
/// when no augmenting path exists.
fn augment<M1, M2, W>(m1: &M1, m2: &M2, weights: &[W], s: ElemSet) -> Option<ElemSet>
where
    M1: MatroidOracle + ?Sized,
    M2: MatroidOracle + ?Sized,
    W: Weight,
{
    let n = common_size_limit(m1, m2);
    let outside = ElemSet::full(n).minus(s);

    let mut sources = Vec::new();
    let mut sinks = ElemSet::EMPTY;
    for x in outside.iter() {
        if m1.is_independent(s.with(x)) {
            sources.push(x);
        }
        if m2.is_independent(s.with(x)) {
            sinks.insert(x);
        }
    }
    if sources.is_empty() || sinks.is_empty() {
        return None;
    }

    // Exchange arcs. y in S, x outside:  y -> x  when S - y + x stays
    // independent in m1;  x -> y  when it stays independent in m2.
    let mut arcs: Vec<(Element, Element)> = Vec::new();
    for y in s.iter() {
        for x in outside.iter() {
            let swapped = s.without(y).with(x);
            if m1.is_independent(swapped) {
                arcs.push((y, x));
            }
            if m2.is_independent(swapped) {
                arcs.push((x, y));
            }
        }
    }

    // Node lengths: w(x) for entering elements, -w(y) for leaving ones.
    let len = |v: Element| -> W {
        let w = weights[(v - 1) as usize].clone();
        if s.contains(v) {
            -w
        } else {
            w
        }
    };

    // Bellman-Ford on (cost, hops), synchronous rounds; paths are simple so
    // n rounds suffice. Minimizing hops among cost ties keeps the
    // augmentation exchange-valid.
    type Dist<W> = Option<(W, u32, Element)>; // cost, hops, predecessor (0 = source)
    let mut dist: Vec<Dist<W>> = vec![None; (n + 1) as usize];
    for &x in &sources {
        dist[x as usize] = Some((len(x), 0, 0));
    }
    for _ in 0..n {
        let snapshot = dist.clone();
        let mut changed = false;
        for &(u, v) in &arcs {
            if let Some((du, hops, _)) = &snapshot[u as usize] {
                let cand = (du.clone() + len(v), hops + 1, u);
                let better = match &dist[v as usize] {
                    None => true,
                    Some((dv, hv, pv)) => {
                        (cand.0.clone(), cand.1, cand.2) < (dv.clone(), *hv, *pv)
                    }
                };
                if better {
                    dist[v as usize] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Best sink by (cost, hops, id).
    let mut best: Option<(W, u32, Element)> = None;
    for t in sinks.iter() {
        if let Some((d, h, _)) = &dist[t as usize] {
            let cand = (d.clone(), *h, t);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let (_, _, mut v) = best?;

    let mut result = s;
    let mut steps = 0;
    loop {
        result = result.sym_diff(ElemSet::singleton(v));
        let (_, _, pred) = dist[v as usize].as_ref().unwrap().clone();
        if pred == 0 {
            break;
        }
        v = pred;
        steps += 1;
        assert!(steps <= n, "exchange-graph path is not simple");
    }
    Some(result)
}
