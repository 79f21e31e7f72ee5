//! SAT instances and SAT-matroids: Pi-matroids whose secret family is the
//! solution set of a boolean formula, so membership is decidable in time
//! polynomial in the encoding.

use serde::{Deserialize, Serialize};

use crate::exact::{EmbInstance, EmbSolver};
use crate::matroid::{Matroid, MatroidError, MatroidOracle};
use crate::pi::{PiMatroid, SecretFamily};
use crate::set::ElemSet;

/// A CNF-style instance: clauses are sets of signed literals, `+i` for the
/// variable `v_i` and `-i` for its negation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatInstance {
    pub n_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl SatInstance {
    pub fn new(n_vars: u32, clauses: Vec<Vec<i32>>) -> Result<Self, SatError> {
        let inst = SatInstance { n_vars, clauses };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), SatError> {
        if self.n_vars == 0 || self.n_vars > 64 {
            return Err(SatError::BadVariableCount(self.n_vars));
        }
        for clause in &self.clauses {
            if clause.is_empty() {
                return Err(SatError::EmptyClause);
            }
            for &lit in clause {
                let var = lit.unsigned_abs();
                if lit == 0 || var > self.n_vars {
                    return Err(SatError::BadLiteral(lit));
                }
            }
        }
        Ok(())
    }

    /// Whether the assignment "variable `i` true ⟺ `i ∈ set`" satisfies
    /// every clause.
    pub fn is_solution(&self, set: ElemSet) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs();
                if lit > 0 {
                    set.contains(var)
                } else {
                    !set.contains(var)
                }
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SatError {
    #[error("variable count must be in 1..=64, got {0}")]
    BadVariableCount(u32),
    #[error("clauses must be non-empty")]
    EmptyClause,
    #[error("literal {0} out of range")]
    BadLiteral(i32),
}

/// Equivalent to [`SatInstance::is_solution`], named for the assignment view.
pub fn sat_solution_check(a: &SatInstance, set: ElemSet) -> bool {
    a.is_solution(set)
}

/// An encoded SAT-matroid: the Pi-matroid on `n(A), k, alpha` whose secret
/// family is the solution set of `A`. Membership runs one clause scan, never
/// an enumeration of the solution set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatMatroidCode {
    #[serde(flatten)]
    pub sat: SatInstance,
    pub k: u32,
    pub alpha: u64,
}

impl SatMatroidCode {
    pub fn new(sat: SatInstance, k: u32, alpha: u64) -> Result<Self, MatroidError> {
        let code = SatMatroidCode { sat, k, alpha };
        code.validate()?;
        Ok(code)
    }

    pub fn validate(&self) -> Result<(), MatroidError> {
        self.sat
            .validate()
            .map_err(|e| MatroidError::Invalid(e.to_string()))?;
        let n = self.sat.n_vars;
        if self.k == 0 || self.k > n {
            return Err(MatroidError::Invalid(format!(
                "need k in [n], got k={} n={n}",
                self.k
            )));
        }
        if self.alpha == 0 || self.alpha > u64::from(n) * u64::from(n) {
            return Err(MatroidError::Invalid(format!(
                "need alpha in [n^2], got alpha={} n={n}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// The decoded Pi-matroid with the SAT solution set as its secret.
    pub fn decode(&self) -> PiMatroid {
        PiMatroid {
            n: self.sat.n_vars,
            k: self.k,
            alpha: self.alpha,
            secret: SecretFamily::Sat {
                sat: self.sat.clone(),
            },
        }
    }
}

impl MatroidOracle for SatMatroidCode {
    fn n_elements(&self) -> u32 {
        self.sat.n_vars
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        sat_matroid_membership(self, set)
    }
}

/// Membership in the decoded matroid, evaluated directly from the encoding:
/// cardinality and id-sum first, then a single clause scan when the secret
/// layer is reached.
pub fn sat_matroid_membership(code: &SatMatroidCode, set: ElemSet) -> bool {
    let len = set.len();
    if len < code.k {
        return true;
    }
    if len > code.k {
        return false;
    }
    if set.id_sum() != code.alpha {
        return true;
    }
    code.sat.is_solution(set)
}

/// The structured exact-basis instance of `(A, k, alpha)`: the decoded
/// matroid with identity costs and target `alpha`.
pub fn structured_emb_instance(code: &SatMatroidCode) -> EmbInstance {
    EmbInstance {
        matroid: Matroid::Sat(code.clone()),
        cost: (1..=u64::from(code.sat.n_vars)).collect(),
        target: code.alpha,
    }
}

/// Decides satisfiability through exact-basis queries: the empty assignment
/// is special-cased, then every structured instance `(A, k, alpha)` for
/// `k ∈ [n]`, `alpha ∈ [n^2]` is handed to `emb_decider`. Returns the verdict
/// together with the `(k, alpha)` pairs whose instance was a yes.
pub fn decide_sat_via_emb<D: EmbSolver>(
    a: &SatInstance,
    emb_decider: &D,
) -> (bool, Vec<(u32, u64)>) {
    let n = a.n_vars;
    let mut hits = Vec::new();
    if a.is_solution(ElemSet::EMPTY) {
        return (true, hits);
    }
    for k in 1..=n {
        for alpha in 1..=u64::from(n) * u64::from(n) {
            let code = SatMatroidCode {
                sat: a.clone(),
                k,
                alpha,
            };
            let inst = structured_emb_instance(&code);
            if emb_decider.decide(&inst) {
                hits.push((k, alpha));
            }
        }
    }
    (!hits.is_empty(), hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::BruteForceEmb;
    use crate::matroid::verify_matroid_axioms;
    use crate::pi::pi_membership;

    fn truth_table_sat(a: &SatInstance) -> bool {
        ElemSet::all_subsets(a.n_vars).any(|s| a.is_solution(s))
    }

    #[test]
    fn solution_check_examples() {
        let a = SatInstance::new(2, vec![vec![1, 2]]).unwrap();
        assert!(a.is_solution(ElemSet::singleton(1)));
        let b = SatInstance::new(1, vec![vec![-1]]).unwrap();
        assert!(!b.is_solution(ElemSet::singleton(1)));
        assert!(b.is_solution(ElemSet::EMPTY));
        // Both clauses hold under the all-false assignment (checked against
        // the full truth table).
        let c = SatInstance::new(2, vec![vec![1, -2], vec![-1, 2]]).unwrap();
        assert!(c.is_solution(ElemSet::EMPTY));
        assert!(truth_table_sat(&c));
    }

    /// A formula over 4 variables whose unique solution is {2,3}:
    /// unit clauses force v2, v3 true and v1, v4 false.
    fn formula_for_23() -> SatInstance {
        SatInstance::new(4, vec![vec![2], vec![3], vec![-1], vec![-4]]).unwrap()
    }

    #[test]
    fn sat_matroid_membership_matches_decoded_pi() {
        let code = SatMatroidCode::new(formula_for_23(), 2, 5).unwrap();
        assert!(sat_matroid_membership(&code, ElemSet::from_elems([2, 3])));
        assert!(!sat_matroid_membership(&code, ElemSet::from_elems([1, 4])));
        assert!(sat_matroid_membership(&code, ElemSet::singleton(1)));

        let decoded = code.decode();
        for s in ElemSet::all_subsets(4) {
            assert_eq!(sat_matroid_membership(&code, s), pi_membership(&decoded, s));
        }
        assert!(verify_matroid_axioms(&code, 16).unwrap().is_pass());
    }

    #[test]
    fn decide_sat_agrees_with_truth_table() {
        let cases = vec![
            SatInstance::new(1, vec![vec![1]]).unwrap(),
            SatInstance::new(1, vec![vec![1], vec![-1]]).unwrap(),
            SatInstance::new(3, vec![vec![1, 2], vec![-1, 3], vec![-2, -3]]).unwrap(),
            SatInstance::new(3, vec![vec![1], vec![-1, 2], vec![-2]]).unwrap(),
            formula_for_23(),
        ];
        for a in cases {
            let (got, hits) = decide_sat_via_emb(&a, &BruteForceEmb);
            assert_eq!(got, truth_table_sat(&a), "formula {a:?}");
            if got && !a.is_solution(ElemSet::EMPTY) {
                assert!(!hits.is_empty());
            }
        }
    }

    #[test]
    fn code_validation() {
        assert!(SatMatroidCode::new(formula_for_23(), 0, 5).is_err());
        assert!(SatMatroidCode::new(formula_for_23(), 2, 17).is_err());
        assert!(SatInstance::new(2, vec![vec![]]).is_err());
        assert!(SatInstance::new(2, vec![vec![3]]).is_err());
    }

    #[test]
    fn sat_descriptor_json() {
        let code = SatMatroidCode::new(formula_for_23(), 2, 5).unwrap();
        let m = Matroid::Sat(code);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains(r#""type":"sat""#) && json.contains(r#""n_vars":4"#));
        let back: Matroid = serde_json::from_str(
            r#"{"type":"sat","n_vars":4,"clauses":[[2],[3],[-1],[-4]],"k":2,"alpha":5}"#,
        )
        .unwrap();
        back.validate().unwrap();
        assert_eq!(m, back);
    }
}
