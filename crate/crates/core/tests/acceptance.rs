//! Acceptance suite: one test per release criterion, each ending in a single
//! pass line. Run with `cargo test --test acceptance -- --nocapture` to see
//! the lines; any violation fails the corresponding test.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matroidkit::adversary::{adversary_game, AlwaysNo, BruteForceDecider, BudgetedNo, Decider, ProbeStrategy};
use matroidkit::exact::{
    brute_force_emb, brute_force_emi, brute_force_gwcp, emi_to_gwcp, BruteForceEmb, EmbInstance,
    EmiInstance,
};
use matroidkit::kcm::{
    balanced_step, brute_force_kcmb, build_cost_classes, chain, enumerate_patterns, kcmb_eptas,
    optimize_lambda, LambdaError,
};
use matroidkit::matroid::{rank, verify_matroid_axioms, Matroid, MatroidOracle};
use matroidkit::mol::standard::{standard_weight_check, StandardWeights};
use matroidkit::mol::{
    certify_value_bounds, decide_emb_via_mol, gap_margin_holds, reduce_emb_to_mol,
    BruteForceMolSolver, MolParams,
};
use matroidkit::pi::{choose_hard_parameters, enumerate_target_sets, PiMatroid};
use matroidkit::sat::{decide_sat_via_emb, SatInstance};
use matroidkit::set::ElemSet;
use matroidkit::Rat;

use common::{
    random_feasible_kcm, random_matroid, random_partition, random_pi, random_secret,
    random_sparse_paving, uniform,
};

use num::BigUint;

/// Criterion 1: exhaustive axiom verification of the Pi-matroid family over
/// all small parameters and random secrets.
#[test]
fn acceptance_1_pi_matroid_axiom_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0u64;
    for n in 1..=5u32 {
        for k in 1..=n {
            for alpha in 1..=u64::from(n * n) {
                for _ in 0..50 {
                    let pm = PiMatroid::new(n, k, alpha, random_secret(&mut rng, n)).unwrap();
                    let report = verify_matroid_axioms(&pm, 16).unwrap();
                    assert!(
                        report.is_pass(),
                        "axiom violation at n={n} k={k} alpha={alpha}: {report:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("PASS criterion 1: {checked} Pi-matroid configurations satisfy hereditary+exchange");
}

fn argmax_alpha(n: u32, k: u32) -> u64 {
    let by_sum = matroidkit::pi::count_target_sets_by_sum(n, k);
    (1..=u64::from(n) * u64::from(n))
        .max_by_key(|&a| {
            (
                by_sum.get(a as usize).cloned().unwrap_or_default(),
                std::cmp::Reverse(a),
            )
        })
        .unwrap()
}

/// Criterion 2: every budget-limited decider is defeated on every run; the
/// exhaustive decider never is.
#[test]
fn acceptance_2_adversary_defeats_budget_limited_deciders() {
    let mut games = 0u64;
    let mut decider_index = 0u64;
    for n in 6..=12u32 {
        let k = n / 2;
        let alpha = argmax_alpha(n, k);
        let family_size = enumerate_target_sets(n, k, alpha).len();
        assert!(family_size >= 2, "family too small at n={n}");

        // 50 generated deciders per configuration: budgets below the family
        // size across the probing strategies, plus the zero-query decider.
        for i in 0..50u64 {
            let strategy = match i % 3 {
                0 => ProbeStrategy::TargetPrefix,
                1 => ProbeStrategy::TargetRandom,
                _ => ProbeStrategy::RandomSets,
            };
            let budget = (i as usize * 7 + 3) % family_size; // < |F|
            let decider: Box<dyn Decider> = if i % 10 == 9 {
                Box::new(AlwaysNo)
            } else {
                Box::new(BudgetedNo { budget, strategy })
            };
            let report = adversary_game(decider.as_ref(), n, k, alpha, decider_index).unwrap();
            assert!(
                report.defeated,
                "decider {i} with budget {budget} escaped at n={n}"
            );
            assert!(report.hidden.is_some());
            games += 1;
            decider_index += 1;
        }

        let honest = adversary_game(&BruteForceDecider, n, k, alpha, 0).unwrap();
        assert!(!honest.defeated, "exhaustive decider defeated at n={n}");
    }
    println!("PASS criterion 2: {games} budget-limited games all defeated, exhaustive decider never");
}

fn corpus_matroids_up_to_6(rng: &mut ChaCha8Rng) -> Vec<Matroid> {
    let mut corpus = Vec::new();
    for n in 1..=6u32 {
        for k in 0..=n {
            corpus.push(uniform(n, k));
        }
    }
    for n in 2..=6u32 {
        corpus.push(random_partition(rng, n));
        corpus.push(random_partition(rng, n));
        corpus.push(random_pi(rng, n));
        corpus.push(random_pi(rng, n));
        corpus.push(random_sparse_paving(rng, n));
    }
    for m in &corpus {
        assert!(verify_matroid_axioms(m, 16).unwrap().is_pass());
    }
    corpus
}

/// Criterion 3: deciding exact basis through the reduced MOL instance with
/// an exact solver agrees with direct enumeration, for every non-trivial
/// parameter triple, and the value-bound certificate holds.
#[test]
fn acceptance_3_reduction_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let corpus = corpus_matroids_up_to_6(&mut rng);
    let mut cases = 0u64;
    for matroid in corpus {
        let n = matroid.n_elements();
        let mut cost_vectors: Vec<Vec<u64>> = vec![
            vec![0; n as usize],
            (1..=u64::from(n)).map(|i| i % 5).collect(),
            vec![1; n as usize],
        ];
        for _ in 0..2 {
            cost_vectors.push((0..n).map(|_| rng.gen_range(0..=4)).collect());
        }
        for cost in cost_vectors {
            let total: u64 = cost.iter().sum();
            for target in 0..=total {
                let inst = EmbInstance {
                    matroid: matroid.clone(),
                    cost: cost.clone(),
                    target,
                };
                let direct = brute_force_emb(&inst).unwrap().is_some();
                for params in MolParams::all_nontrivial() {
                    let via_mol =
                        decide_emb_via_mol(&inst, params, &BruteForceMolSolver).unwrap();
                    assert_eq!(
                        via_mol, direct,
                        "disagreement at {matroid:?} cost={cost:?} T={target} P={params}"
                    );
                    let reduced = reduce_emb_to_mol(&inst, params).unwrap();
                    assert!(certify_value_bounds(&reduced).unwrap());
                    assert!(gap_margin_holds(&reduced));
                    cases += 1;
                }
            }
        }
    }
    println!("PASS criterion 3: {cases} reduction cases agree with enumeration and certify");
}

/// Criterion 4: the standard-weight equivalences hold exhaustively at small
/// scale, and the cubic weight bound holds on random samples up to n = 30.
#[test]
fn acceptance_4_standard_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut checked_sets = 0u64;
    for n in 1..=5u32 {
        for k in 1..=n {
            for alpha in 1..=u64::from(n * n) {
                for _ in 0..3 {
                    let pm =
                        PiMatroid::new(n, k, alpha, random_secret(&mut rng, n)).unwrap();
                    for s in ElemSet::all_subsets(n) {
                        if pm.is_independent(s) {
                            // The check asserts the budget iff and the
                            // weight/cost flip internally.
                            let in_hidden = standard_weight_check(&pm, s).unwrap();
                            let expected =
                                s.len() == k && s.id_sum() == alpha && pm.is_independent(s);
                            assert_eq!(in_hidden, expected);
                            checked_sets += 1;
                        }
                    }
                }
            }
        }
    }

    let mut samples = 0u64;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=30u32);
        let s = ElemSet::from_elems((1..=n).filter(|_| rng.gen_bool(0.5)));
        let w = StandardWeights::new(n).weight_of(s);
        assert!(w <= 3 * u64::from(n).pow(3), "w_n({s}) = {w} exceeds 3n^3");
        samples += 1;
    }
    println!(
        "PASS criterion 4: {checked_sets} independent sets pass the budget iff; {samples} weight samples within 3n^3"
    );
}

/// Criterion 5: the knapsack-cover scheme stays within `(1 + 5 eps)` of the
/// enumerated optimum on random feasible instances, always feasibly, and
/// chain steps verify.
#[test]
fn acceptance_5_kcm_eptas_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut runs = 0u64;
    let mut chains_checked = 0u64;
    for trial in 0..100 {
        let n = rng.gen_range(4..=12u32);
        let inst = random_feasible_kcm(&mut rng, n, 10);
        let (_, opt) = brute_force_kcmb(&inst)
            .unwrap()
            .expect("generator guarantees feasibility");
        for eps in [Rat::new(1, 2), Rat::new(1, 3)] {
            let sol = kcmb_eptas(&inst, &eps)
                .unwrap()
                .expect("feasible instance must yield a solution");
            let b = rank(&inst.matroid);
            assert_eq!(sol.set.len(), b, "trial {trial}: not a basis");
            assert!(inst.matroid.is_independent(sol.set));
            assert!(
                inst.size_of(sol.set) >= inst.demand,
                "trial {trial}: demand uncovered"
            );
            let bound = Rat::from_integer(opt as i128)
                * (Rat::from_integer(1) + Rat::from_integer(5) * eps);
            assert!(
                Rat::from_integer(sol.cost as i128) <= bound,
                "trial {trial} eps={eps}: cost {} vs opt {opt}",
                sol.cost
            );
            runs += 1;
        }

        // Per-step chain verification on the patterns of this instance.
        for eps in [Rat::new(1, 2), Rat::new(1, 3)] {
            let classing = build_cost_classes(&inst, &eps, opt);
            let b = rank(&inst.matroid);
            for pattern in enumerate_patterns(&classing, n).filter(|p| p.total() == b) {
                let lag = match optimize_lambda(&inst, &classing, &pattern) {
                    Ok(lag) => lag,
                    Err(LambdaError::EmptyFeasible | LambdaError::NoCoveringBasis) => continue,
                };
                let Some(s_low) = lag.s_low else { continue };
                let seq =
                    match chain(&inst, &classing, &pattern, &lag.lambda_star, s_low, lag.s_high) {
                        Ok(seq) => seq,
                        Err(e) => panic!("trial {trial}: chain failed: {e}"),
                    };
                let reduced = |s: ElemSet| {
                    Rat::from_integer(inst.cost_of(s) as i128)
                        - lag.lambda_star * Rat::from_integer(inst.size_of(s) as i128)
                };
                let opt_reduced = reduced(s_low);
                for w in seq.windows(2) {
                    assert!(balanced_step(&classing, w[0], w[1]));
                    assert_eq!(reduced(w[1]), opt_reduced, "step loses optimality");
                    assert!(inst.matroid.is_independent(w[1]));
                    chains_checked += 1;
                }
            }
        }
    }
    println!(
        "PASS criterion 5: {runs} scheme runs within (1+5eps) of optimum; {chains_checked} chain steps verified"
    );
}

/// Criterion 6: SAT through structured exact-basis instances agrees with the
/// truth table on random small formulas.
#[test]
fn acceptance_6_sat_via_emb() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut agreed = 0u64;
    for _ in 0..200 {
        let n_vars = rng.gen_range(1..=4u32);
        let n_clauses = rng.gen_range(1..=6usize);
        let clauses: Vec<Vec<i32>> = (0..n_clauses)
            .map(|_| {
                let len = rng.gen_range(1..=3usize);
                (0..len)
                    .map(|_| {
                        let var = rng.gen_range(1..=n_vars) as i32;
                        if rng.gen_bool(0.5) {
                            var
                        } else {
                            -var
                        }
                    })
                    .collect()
            })
            .collect();
        let inst = SatInstance::new(n_vars, clauses).unwrap();
        let truth_table = ElemSet::all_subsets(n_vars).any(|s| inst.is_solution(s));
        let (via_emb, _) = decide_sat_via_emb(&inst, &BruteForceEmb);
        assert_eq!(via_emb, truth_table, "disagreement on {inst:?}");
        agreed += 1;
    }
    println!("PASS criterion 6: {agreed} formulas agree with the truth table");
}

/// Criterion 7: the hard-parameter search terminates and certifies its count
/// guarantee with exact arithmetic.
#[test]
fn acceptance_7_hard_parameter_search() {
    let start = std::time::Instant::now();
    let hp = choose_hard_parameters(1);
    let elapsed = start.elapsed();
    let budget = BigUint::from(2u32) * (BigUint::from(12u32) * BigUint::from(hp.n).pow(5));
    assert!(hp.family_size > budget);
    assert_eq!(hp.k, hp.n / 2);
    assert!(hp.alpha >= 1 && hp.alpha <= u64::from(hp.n) * u64::from(hp.n));
    assert!(
        elapsed.as_secs() < 10,
        "search took {elapsed:?}, budget is 10 s"
    );
    println!(
        "PASS criterion 7: (n,k,alpha) = ({}, {}, {}) with |F| = {} > {budget} in {elapsed:?}",
        hp.n, hp.k, hp.alpha, hp.family_size
    );
}

/// Criterion 8: the path-graph reduction preserves yes/no on random
/// exact-weight independent-set instances.
#[test]
fn acceptance_8_gwcp_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut agreed = 0u64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8u32);
        let inst = EmiInstance {
            matroid: random_matroid(&mut rng, n),
            weight: (0..n).map(|_| rng.gen_range(0..=6)).collect(),
            k: rng.gen_range(0..=n),
            target: rng.gen_range(0..=20),
        };
        let direct = brute_force_emi(&inst).unwrap().is_some();
        let gwcp = emi_to_gwcp(&inst).unwrap();
        let via_path = brute_force_gwcp(&gwcp).unwrap();
        assert_eq!(direct, via_path, "disagreement on {inst:?}");
        agreed += 1;
    }
    println!("PASS criterion 8: {agreed} path-reduction instances preserve the answer");
}

