//! Shared generators and reference oracles for the integration suites.
//! Everything is seeded; no test depends on ambient randomness.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use matroidkit::kcm::KcmInstance;
use matroidkit::matroid::{
    greedy_extreme_basis, rank, verify_matroid_axioms, Direction, ExplicitMatroid, Matroid,
    MatroidOracle, PartitionMatroid, UniformMatroid,
};
use matroidkit::pi::{PiMatroid, SecretFamily};
use matroidkit::set::ElemSet;

pub fn uniform(n: u32, k: u32) -> Matroid {
    Matroid::Uniform(UniformMatroid { n, k })
}

/// A random partition of `[n]` into contiguous blocks with random caps.
pub fn random_partition(rng: &mut ChaCha8Rng, n: u32) -> Matroid {
    let mut blocks = Vec::new();
    let mut bounds = Vec::new();
    let mut start = 1;
    while start <= n {
        let len = rng.gen_range(1..=(n - start + 1));
        blocks.push(ElemSet::from_elems(start..start + len));
        bounds.push(rng.gen_range(0..=len));
        start += len;
    }
    Matroid::Partition(PartitionMatroid::new(blocks, bounds).unwrap())
}

pub fn random_secret(rng: &mut ChaCha8Rng, n: u32) -> SecretFamily {
    match rng.gen_range(0..4) {
        0 => SecretFamily::Empty,
        1 => {
            let set = ElemSet::from_elems((1..=n).filter(|_| rng.gen_bool(0.5)));
            SecretFamily::Singleton { set }
        }
        2 => {
            let sets = (0..rng.gen_range(1..=5))
                .map(|_| ElemSet::from_elems((1..=n).filter(|_| rng.gen_bool(0.5))))
                .collect();
            SecretFamily::Explicit { sets }
        }
        _ => {
            let mut edges = Vec::new();
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            SecretFamily::Graph { edges }
        }
    }
}

pub fn random_pi(rng: &mut ChaCha8Rng, n: u32) -> Matroid {
    let k = rng.gen_range(1..=n);
    let alpha = rng.gen_range(1..=u64::from(n) * u64::from(n));
    let secret = random_secret(rng, n);
    Matroid::Pi(PiMatroid::new(n, k, alpha, secret).unwrap())
}

/// A random sparse-paving matroid listed explicitly: rank `r`, with a set of
/// pairwise far-apart r-subsets demoted to circuits.
pub fn random_sparse_paving(rng: &mut ChaCha8Rng, n: u32) -> Matroid {
    let r = rng.gen_range(1..=n);
    let all_r: Vec<ElemSet> = ElemSet::combinations(n, r).collect();
    let mut excluded: Vec<ElemSet> = Vec::new();
    for &cand in &all_r {
        if excluded.len() + 1 >= all_r.len() {
            break; // keep at least one basis
        }
        let far = excluded.iter().all(|h| h.intersect(cand).len() + 2 <= r);
        if far && rng.gen_bool(0.3) {
            excluded.push(cand);
        }
    }
    let mut family: BTreeSet<ElemSet> = ElemSet::all_subsets(n)
        .filter(|s| s.len() < r)
        .collect();
    family.extend(all_r.iter().filter(|s| !excluded.contains(s)));
    Matroid::Explicit(ExplicitMatroid::new(n, family).unwrap())
}

/// A random matroid from the toolkit families, guaranteed axiom-clean.
pub fn random_matroid(rng: &mut ChaCha8Rng, n: u32) -> Matroid {
    let m = match rng.gen_range(0..5) {
        0 => uniform(n, rng.gen_range(0..=n)),
        1 => random_partition(rng, n),
        2 => random_pi(rng, n),
        3 => random_sparse_paving(rng, n),
        _ => Matroid::Truncate {
            inner: Box::new(random_partition(rng, n)),
            cap: rng.gen_range(0..=n),
        },
    };
    debug_assert!(n > 10 || verify_matroid_axioms(&m, 16).unwrap().is_pass());
    m
}

/// Brute-force maximum independent-set cardinality.
pub fn brute_force_rank<M: MatroidOracle + ?Sized>(m: &M) -> u32 {
    ElemSet::all_subsets(m.n_elements())
        .filter(|&s| m.is_independent(s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// A random KCM/KCMB instance that is feasible as a KCMB instance.
pub fn random_feasible_kcm(rng: &mut ChaCha8Rng, n: u32, max_value: u64) -> KcmInstance {
    loop {
        let matroid = random_matroid(rng, n);
        if rank(&matroid) == 0 {
            continue;
        }
        let cost: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_value)).collect();
        let size: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_value)).collect();
        let sizes_i64: Vec<i64> = size.iter().map(|&d| d as i64).collect();
        let max_cover = greedy_extreme_basis(&matroid, &sizes_i64, Direction::Max);
        let cover: u64 = max_cover.iter().map(|e| size[(e - 1) as usize]).sum();
        if cover == 0 {
            continue;
        }
        let demand = rng.gen_range(1..=cover);
        return KcmInstance {
            matroid,
            cost,
            size,
            demand,
        };
    }
}
