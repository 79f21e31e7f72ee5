//! Membership-oracle matroids: the oracle trait, concrete families, greedy
//! optimization, axiom verification and truncation.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ops::{Add, Neg, Sub};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::pi::PiMatroid;
use crate::sat::SatMatroidCode;
use crate::set::{ElemSet, Element, MAX_GROUND_SET};

/// Membership oracle over a ground set `[n]`. The oracle is the only access
/// path to the independent sets; callers must treat answers as opaque.
///
/// Implementations must be deterministic: identical query sets yield
/// identical answers over the object's lifetime, and `is_independent(EMPTY)`
/// must be `true` for anything presented as a matroid.
pub trait MatroidOracle {
    /// Ground-set size; elements are `1..=n_elements()`.
    fn n_elements(&self) -> u32;

    /// Whether `set` is independent. `set` must be a subset of the ground set.
    fn is_independent(&self, set: ElemSet) -> bool;
}

impl<M: MatroidOracle + ?Sized> MatroidOracle for &M {
    fn n_elements(&self) -> u32 {
        (**self).n_elements()
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        (**self).is_independent(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("ground set of size {0} exceeds the limit {1}")]
    GroundSetTooLarge(u32, u32),
    #[error("invalid matroid description: {0}")]
    Invalid(String),
}

/// Uniform matroid: `S` independent iff `|S| <= k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformMatroid {
    pub n: u32,
    pub k: u32,
}

impl MatroidOracle for UniformMatroid {
    fn n_elements(&self) -> u32 {
        self.n
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        set.len() <= self.k
    }
}

/// Partition matroid: blocks partition the ground set and `S` is independent
/// iff `|S ∩ block_i| <= bound_i` for every block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionMatroid {
    pub blocks: Vec<ElemSet>,
    pub bounds: Vec<u32>,
}

impl PartitionMatroid {
    pub fn new(blocks: Vec<ElemSet>, bounds: Vec<u32>) -> Result<Self, MatroidError> {
        let m = PartitionMatroid { blocks, bounds };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), MatroidError> {
        if self.blocks.len() != self.bounds.len() {
            return Err(MatroidError::Invalid(
                "blocks and bounds have different lengths".into(),
            ));
        }
        let mut seen = ElemSet::EMPTY;
        for b in &self.blocks {
            if !b.intersect(seen).is_empty() {
                return Err(MatroidError::Invalid("blocks are not disjoint".into()));
            }
            seen = seen.union(*b);
        }
        // Blocks must cover exactly [n] for n = total size.
        let n = seen.len();
        if seen != ElemSet::full(n) {
            return Err(MatroidError::Invalid(
                "blocks do not cover a prefix ground set [n]".into(),
            ));
        }
        Ok(())
    }
}

impl MatroidOracle for PartitionMatroid {
    fn n_elements(&self) -> u32 {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        self.blocks
            .iter()
            .zip(&self.bounds)
            .all(|(b, &cap)| set.intersect(*b).len() <= cap)
    }
}

/// An explicitly-listed set family over `[n]`. Only `∅`-membership is checked
/// at construction; hereditary and exchange are *not* assumed, so the axiom
/// verifier can be exercised on deliberately broken families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitMatroid {
    pub n: u32,
    pub independent: BTreeSet<ElemSet>,
}

impl ExplicitMatroid {
    pub fn new(n: u32, independent: BTreeSet<ElemSet>) -> Result<Self, MatroidError> {
        let m = ExplicitMatroid { n, independent };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), MatroidError> {
        if self.n > MAX_GROUND_SET {
            return Err(MatroidError::GroundSetTooLarge(self.n, MAX_GROUND_SET));
        }
        if !self.independent.contains(&ElemSet::EMPTY) {
            return Err(MatroidError::Invalid(
                "explicit family does not contain the empty set".into(),
            ));
        }
        let full = ElemSet::full(self.n);
        if let Some(bad) = self.independent.iter().find(|s| !s.is_subset_of(full)) {
            return Err(MatroidError::Invalid(format!(
                "family member {bad} is not a subset of [{}]",
                self.n
            )));
        }
        Ok(())
    }
}

impl MatroidOracle for ExplicitMatroid {
    fn n_elements(&self) -> u32 {
        self.n
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        self.independent.contains(&set)
    }
}

/// Owned matroid usable behind the oracle trait and serializable as a JSON
/// descriptor (`{"type": "uniform", ...}` and friends).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Matroid {
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Explicit(ExplicitMatroid),
    Pi(PiMatroid),
    Sat(SatMatroidCode),
    Truncate { inner: Box<Matroid>, cap: u32 },
}

impl Matroid {
    /// Validates structural invariants after deserialization.
    pub fn validate(&self) -> Result<(), MatroidError> {
        match self {
            Matroid::Uniform(m) => {
                if m.n > MAX_GROUND_SET {
                    return Err(MatroidError::GroundSetTooLarge(m.n, MAX_GROUND_SET));
                }
                Ok(())
            }
            Matroid::Partition(m) => m.validate(),
            Matroid::Explicit(m) => m.validate(),
            Matroid::Pi(m) => m.validate(),
            Matroid::Sat(m) => m.validate(),
            Matroid::Truncate { inner, .. } => inner.validate(),
        }
    }
}

impl MatroidOracle for Matroid {
    fn n_elements(&self) -> u32 {
        match self {
            Matroid::Uniform(m) => m.n_elements(),
            Matroid::Partition(m) => m.n_elements(),
            Matroid::Explicit(m) => m.n_elements(),
            Matroid::Pi(m) => m.n_elements(),
            Matroid::Sat(m) => m.n_elements(),
            Matroid::Truncate { inner, .. } => inner.n_elements(),
        }
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        match self {
            Matroid::Uniform(m) => m.is_independent(set),
            Matroid::Partition(m) => m.is_independent(set),
            Matroid::Explicit(m) => m.is_independent(set),
            Matroid::Pi(m) => m.is_independent(set),
            Matroid::Sat(m) => m.is_independent(set),
            Matroid::Truncate { inner, cap } => set.len() <= *cap && inner.is_independent(set),
        }
    }
}

/// Truncation to rank at most `q`: independent iff `|S| <= q` and independent
/// in `m`. Preserves the matroid axioms.
pub fn truncate(m: &Matroid, q: u32) -> Matroid {
    Matroid::Truncate {
        inner: Box::new(m.clone()),
        cap: q,
    }
}

/// Membership oracle that records every query and answer in order. Single
/// writer: concurrent experiments must each own their own counter.
pub struct CountingOracle<'a> {
    inner: &'a dyn MatroidOracle,
    log: RefCell<Vec<(ElemSet, bool)>>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn MatroidOracle) -> Self {
        CountingOracle {
            inner,
            log: RefCell::new(Vec::new()),
        }
    }

    pub fn query_count(&self) -> usize {
        self.log.borrow().len()
    }

    pub fn transcript(&self) -> Vec<(ElemSet, bool)> {
        self.log.borrow().clone()
    }

    /// The distinct sets queried so far, in canonical order.
    pub fn queried_sets(&self) -> BTreeSet<ElemSet> {
        self.log.borrow().iter().map(|(s, _)| *s).collect()
    }
}

impl<'a> MatroidOracle for CountingOracle<'a> {
    fn n_elements(&self) -> u32 {
        self.inner.n_elements()
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        let ans = self.inner.is_independent(set);
        self.log.borrow_mut().push((set, ans));
        ans
    }
}

/// Rank of a matroid, by greedy growth in element-id order. Only valid when
/// `m` satisfies the matroid axioms.
pub fn rank<M: MatroidOracle + ?Sized>(m: &M) -> u32 {
    greedy_basis_by_order(m, (1..=m.n_elements()).collect()).len()
}

fn greedy_basis_by_order<M: MatroidOracle + ?Sized>(m: &M, order: Vec<Element>) -> ElemSet {
    let mut basis = ElemSet::EMPTY;
    for e in order {
        if m.is_independent(basis.with(e)) {
            basis.insert(e);
        }
    }
    basis
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Additive, totally ordered weight scalar. Satisfied by the exact scalar
/// types this crate instantiates (`i64`, `i128`, `Ratio<i128>`, lexicographic
/// pairs); floats are excluded since they are not `Ord`.
pub trait Weight:
    Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
}

impl<T> Weight for T where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T> + Neg<Output = T>
{
}

pub fn weight_of<W: Weight>(weights: &[W], set: ElemSet) -> W {
    set.iter()
        .fold(W::zero(), |acc, e| acc + weights[(e - 1) as usize].clone())
}

/// Minimum- or maximum-weight basis by the classic matroid greedy. Ties are
/// broken toward the smaller element id, so results are deterministic.
/// `weights[i]` is the weight of element `i + 1`.
pub fn greedy_extreme_basis<M, W>(m: &M, weights: &[W], direction: Direction) -> ElemSet
where
    M: MatroidOracle + ?Sized,
    W: Weight,
{
    let n = m.n_elements();
    assert_eq!(weights.len(), n as usize, "one weight per element expected");
    let mut order: Vec<Element> = (1..=n).collect();
    match direction {
        Direction::Min => order.sort_by(|&a, &b| {
            weights[(a - 1) as usize]
                .cmp(&weights[(b - 1) as usize])
                .then(a.cmp(&b))
        }),
        Direction::Max => order.sort_by(|&a, &b| {
            weights[(b - 1) as usize]
                .cmp(&weights[(a - 1) as usize])
                .then(a.cmp(&b))
        }),
    }
    greedy_basis_by_order(m, order)
}

/// Outcome of the exhaustive axiom scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AxiomReport {
    Pass,
    /// The empty set is dependent.
    EmptyDependent,
    /// `a` is independent but its subset `b` is not.
    HereditaryViolation { a: ElemSet, b: ElemSet },
    /// `a`, `b` independent with `|a| > |b|`, but no element of `a \ b`
    /// extends `b` to an independent set.
    ExchangeViolation { a: ElemSet, b: ElemSet },
}

impl AxiomReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, AxiomReport::Pass)
    }
}

/// Exhaustively checks the three matroid axioms over all of `2^[n]`.
/// `limit` caps the ground-set size (the scan is exponential; 16 is a
/// practical ceiling). Returns the first violation found, scanning in
/// canonical set order.
pub fn verify_matroid_axioms<M: MatroidOracle + ?Sized>(
    m: &M,
    limit: u32,
) -> Result<AxiomReport, MatroidError> {
    let n = m.n_elements();
    if n > limit {
        return Err(MatroidError::GroundSetTooLarge(n, limit));
    }
    if !m.is_independent(ElemSet::EMPTY) {
        return Ok(AxiomReport::EmptyDependent);
    }

    let independent: Vec<ElemSet> = ElemSet::all_subsets(n)
        .filter(|&s| m.is_independent(s))
        .collect();
    let independent_set: BTreeSet<ElemSet> = independent.iter().copied().collect();

    for &a in &independent {
        for b in a.strict_subsets() {
            if !independent_set.contains(&b) {
                return Ok(AxiomReport::HereditaryViolation { a, b });
            }
        }
    }

    // One extension set per independent set, then exchange is a mask test.
    let mut extension = Vec::with_capacity(independent.len());
    for &b in &independent {
        let mut ext = ElemSet::EMPTY;
        for e in ElemSet::full(n).minus(b).iter() {
            if independent_set.contains(&b.with(e)) {
                ext.insert(e);
            }
        }
        extension.push(ext);
    }
    for (bi, &b) in independent.iter().enumerate() {
        for &a in &independent {
            if a.len() > b.len() && a.minus(b).intersect(extension[bi]).is_empty() {
                return Ok(AxiomReport::ExchangeViolation { a, b });
            }
        }
    }
    Ok(AxiomReport::Pass)
}
