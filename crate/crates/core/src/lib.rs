//! A matroid-oracle toolkit built around information hiding: the Pi-matroid
//! and SAT-matroid families, exact-weight basis problems and their
//! reductions to constrained matroid optimization, a query-counting
//! adversary that defeats fast deciders empirically, and a Lagrangian
//! approximation scheme for knapsack cover with a matroid.
//!
//! Every matroid is reached through [`matroid::MatroidOracle`]; ground sets
//! are `[n]` with `n <= 64` and subsets are [`set::ElemSet`] bitmasks.
//! Arithmetic that feeds comparisons is exact throughout: integers,
//! fixed-width rationals ([`Rat`]) inside the approximation scheme, and
//! arbitrary-precision rationals ([`BigRat`]) for gap parameters.

pub mod adversary;
pub mod exact;
pub mod intersection;
pub mod kcm;
pub mod matroid;
pub mod mol;
pub mod pi;
pub mod sat;
pub mod set;

/// Exact fixed-width rational (validated inputs keep it overflow-free).
pub type Rat = kcm::Rat;
/// Exact arbitrary-precision rational.
pub type BigRat = num::BigRational;

pub use matroid::{Matroid, MatroidOracle};
pub use set::{ElemSet, Element};
