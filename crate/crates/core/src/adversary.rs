//! Query-counting adversary for induced exact-basis instances.
//!
//! A decider is run against the empty-secret Pi-matroid while every oracle
//! query is recorded. If the decider answers "no" without having queried all
//! of the target family, the adversary replants the run on a singleton secret
//! chosen among the unqueried target sets; determinism forces an identical
//! transcript and the same (now wrong) verdict.

use std::io::{BufRead, BufReader, Write as IoWrite};
use std::process::{Command, Stdio};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::brute_force_emb_oracle;
use crate::matroid::{CountingOracle, MatroidOracle};
use crate::pi::{enumerate_target_sets, PiMatroid, SecretFamily};
use crate::set::ElemSet;

/// Instance metadata handed to deciders: the induced exact-basis instance of
/// `(n, k, alpha)` with identity costs and target `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceMeta {
    pub n: u32,
    pub k: u32,
    pub alpha: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum DeciderError {
    #[error("decider protocol violation: {0}")]
    Protocol(String),
    #[error("decider i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, thiserror::Error)]
pub enum AdversaryError {
    #[error("target family F_(n,k,alpha) is empty")]
    EmptyTargetFamily,
    #[error("decider is not a pure function of (metadata, answers, seed): {0}")]
    NotReplayable(String),
    #[error(transparent)]
    Decider(#[from] DeciderError),
}

/// A decision procedure for induced exact-basis instances. Implementations
/// must be deterministic given `(meta, seed, oracle answers)`; randomness
/// must flow exclusively from `seed`.
pub trait Decider {
    fn decide(
        &self,
        meta: &InstanceMeta,
        seed: u64,
        oracle: &CountingOracle,
    ) -> Result<bool, DeciderError>;
}

/// Outcome of one adversary game.
#[derive(Debug, Clone)]
pub struct AdversaryReport {
    pub meta: InstanceMeta,
    pub seed: u64,
    /// Distinct sets queried in the first run.
    pub queried: Vec<ElemSet>,
    /// The replanted target set, when one was needed and available.
    pub hidden: Option<ElemSet>,
    pub defeated: bool,
    pub first_verdict: bool,
    pub transcript_empty_run: Vec<(ElemSet, bool)>,
    pub transcript_hidden_run: Option<Vec<(ElemSet, bool)>>,
}

/// Plays the two-run game at `(n, k, alpha)` with the given seed.
///
/// Run 1 executes the decider on the empty-secret instance (a no-instance).
/// A "yes" verdict is immediately wrong. Otherwise the lexicographically
/// first unqueried target set becomes a singleton secret for run 2, executed
/// with the same seed; the transcripts must match bit for bit, so the decider
/// repeats its "no" on what is now a yes-instance.
pub fn adversary_game<D: Decider + ?Sized>(
    decider: &D,
    n: u32,
    k: u32,
    alpha: u64,
    seed: u64,
) -> Result<AdversaryReport, AdversaryError> {
    let family = enumerate_target_sets(n, k, alpha);
    if family.is_empty() {
        return Err(AdversaryError::EmptyTargetFamily);
    }
    let meta = InstanceMeta { n, k, alpha };

    let empty_secret = PiMatroid::new(n, k, alpha, SecretFamily::Empty)
        .expect("game parameters validated by enumerate_target_sets");
    let oracle = CountingOracle::new(&empty_secret);
    let verdict = decider.decide(&meta, seed, &oracle)?;
    let transcript = oracle.transcript();
    let queried = oracle.queried_sets();

    if verdict {
        // Wrong already: the empty secret makes this a no-instance.
        return Ok(AdversaryReport {
            meta,
            seed,
            queried: queried.into_iter().collect(),
            hidden: None,
            defeated: true,
            first_verdict: true,
            transcript_empty_run: transcript,
            transcript_hidden_run: None,
        });
    }

    let hidden = family.iter().copied().find(|s| !queried.contains(s));
    let Some(hidden_set) = hidden else {
        // The decider covered the whole target family; it cannot be fooled.
        return Ok(AdversaryReport {
            meta,
            seed,
            queried: queried.into_iter().collect(),
            hidden: None,
            defeated: false,
            first_verdict: false,
            transcript_empty_run: transcript,
            transcript_hidden_run: None,
        });
    };

    let planted = PiMatroid::new(n, k, alpha, SecretFamily::Singleton { set: hidden_set })
        .expect("same parameters as above");
    let oracle2 = CountingOracle::new(&planted);
    let verdict2 = decider.decide(&meta, seed, &oracle2)?;
    let transcript2 = oracle2.transcript();

    if transcript2 != transcript {
        return Err(AdversaryError::NotReplayable(format!(
            "transcripts diverge after {} common queries",
            transcript
                .iter()
                .zip(&transcript2)
                .take_while(|(a, b)| a == b)
                .count()
        )));
    }
    if verdict2 {
        return Err(AdversaryError::NotReplayable(
            "identical transcripts produced different verdicts".into(),
        ));
    }

    Ok(AdversaryReport {
        meta,
        seed,
        queried: queried.into_iter().collect(),
        hidden: Some(hidden_set),
        defeated: true,
        first_verdict: false,
        transcript_empty_run: transcript,
        transcript_hidden_run: Some(transcript2),
    })
}

/// Estimates the set of target-family members a randomized decider queries
/// with empirical frequency at least one half, over `num_seeds` runs on the
/// empty-secret instance with seeds `0..num_seeds`.
pub fn empirical_frequent_queries<D: Decider + ?Sized>(
    decider: &D,
    n: u32,
    k: u32,
    alpha: u64,
    num_seeds: u64,
) -> Result<Vec<ElemSet>, DeciderError> {
    assert!(num_seeds >= 1);
    let family = enumerate_target_sets(n, k, alpha);
    let meta = InstanceMeta { n, k, alpha };
    let empty_secret = PiMatroid::new(n, k, alpha, SecretFamily::Empty)
        .expect("parameters validated by enumerate_target_sets");
    let mut counts = vec![0u64; family.len()];
    for seed in 0..num_seeds {
        let oracle = CountingOracle::new(&empty_secret);
        decider.decide(&meta, seed, &oracle)?;
        let queried = oracle.queried_sets();
        for (i, s) in family.iter().enumerate() {
            if queried.contains(s) {
                counts[i] += 1;
            }
        }
    }
    Ok(family
        .into_iter()
        .zip(counts)
        .filter(|&(_, c)| 2 * c >= num_seeds)
        .map(|(s, _)| s)
        .collect())
}

/// Answers "no" without querying at all.
pub struct AlwaysNo;

impl Decider for AlwaysNo {
    fn decide(&self, _: &InstanceMeta, _: u64, _: &CountingOracle) -> Result<bool, DeciderError> {
        Ok(false)
    }
}

/// How a budgeted decider spends its queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStrategy {
    /// The lexicographically first target sets.
    TargetPrefix,
    /// A seed-dependent sample of target sets.
    TargetRandom,
    /// Seed-dependent k-subsets of the ground set.
    RandomSets,
}

/// A decider that issues at most `budget` membership queries and then gives
/// up with "no". Stands in for any algorithm whose query count is below the
/// target-family size.
pub struct BudgetedNo {
    pub budget: usize,
    pub strategy: ProbeStrategy,
}

impl Decider for BudgetedNo {
    fn decide(
        &self,
        meta: &InstanceMeta,
        seed: u64,
        oracle: &CountingOracle,
    ) -> Result<bool, DeciderError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probes: Vec<ElemSet> = match self.strategy {
            ProbeStrategy::TargetPrefix => enumerate_target_sets(meta.n, meta.k, meta.alpha)
                .into_iter()
                .take(self.budget)
                .collect(),
            ProbeStrategy::TargetRandom => {
                let mut family = enumerate_target_sets(meta.n, meta.k, meta.alpha);
                family.shuffle(&mut rng);
                family.into_iter().take(self.budget).collect()
            }
            ProbeStrategy::RandomSets => (0..self.budget)
                .map(|_| {
                    let mut ids: Vec<u32> = (1..=meta.n).collect();
                    ids.shuffle(&mut rng);
                    ElemSet::from_elems(ids.into_iter().take(meta.k as usize))
                })
                .collect(),
        };
        for p in probes {
            oracle.is_independent(p);
        }
        Ok(false)
    }
}

/// Queries one uniformly random target set per run, then answers "no".
pub struct SingleRandomProbe;

impl Decider for SingleRandomProbe {
    fn decide(
        &self,
        meta: &InstanceMeta,
        seed: u64,
        oracle: &CountingOracle,
    ) -> Result<bool, DeciderError> {
        let family = enumerate_target_sets(meta.n, meta.k, meta.alpha);
        if !family.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let idx = rng.gen_range(0..family.len());
            oracle.is_independent(family[idx]);
        }
        Ok(false)
    }
}

/// The exhaustive reference decider: runs the exact-basis brute force
/// directly against the oracle. Its query set covers the whole target
/// family, so the adversary can never defeat it.
pub struct BruteForceDecider;

impl Decider for BruteForceDecider {
    fn decide(
        &self,
        meta: &InstanceMeta,
        _seed: u64,
        oracle: &CountingOracle,
    ) -> Result<bool, DeciderError> {
        let cost: Vec<u64> = (1..=u64::from(meta.n)).collect();
        let witness = brute_force_emb_oracle(oracle, &cost, meta.alpha)
            .map_err(|e| DeciderError::Protocol(format!("instance too large: {e}")))?;
        Ok(witness.is_some())
    }
}

/// Host side of the external decider protocol. Each decision spawns the
/// program, writes one JSON metadata line
/// `{"n":N,"k":K,"alpha":A,"seed":S}` to its stdin, then serves line
/// requests:
///
/// * `Q e1 e2 ...` — membership query; the host answers `1` or `0`.
/// * `V yes` / `V no` — the verdict; the session ends.
pub struct ExternalDecider {
    pub program: String,
    pub args: Vec<String>,
}

impl Decider for ExternalDecider {
    fn decide(
        &self,
        meta: &InstanceMeta,
        seed: u64,
        oracle: &CountingOracle,
    ) -> Result<bool, DeciderError> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()?;
        let mut stdin = child.stdin.take().expect("stdin piped");
        let stdout = child.stdout.take().expect("stdout piped");

        let header = format!(
            "{{\"n\":{},\"k\":{},\"alpha\":{},\"seed\":{}}}\n",
            meta.n, meta.k, meta.alpha, seed
        );
        stdin.write_all(header.as_bytes())?;
        stdin.flush()?;

        let mut verdict = None;
        for line in BufReader::new(stdout).lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('Q') {
                let mut set = ElemSet::EMPTY;
                for tok in rest.split_whitespace() {
                    let e: u32 = tok.parse().map_err(|_| {
                        DeciderError::Protocol(format!("bad element id {tok:?} in query"))
                    })?;
                    if e == 0 || e > meta.n {
                        return Err(DeciderError::Protocol(format!(
                            "element id {e} outside ground set [{0}]",
                            meta.n
                        )));
                    }
                    set.insert(e);
                }
                let ans = oracle.is_independent(set);
                stdin.write_all(if ans { b"1\n" } else { b"0\n" })?;
                stdin.flush()?;
            } else if let Some(rest) = line.strip_prefix('V') {
                verdict = match rest.trim() {
                    "yes" => Some(true),
                    "no" => Some(false),
                    other => {
                        return Err(DeciderError::Protocol(format!(
                            "verdict must be 'yes' or 'no', got {other:?}"
                        )))
                    }
                };
                break;
            } else {
                return Err(DeciderError::Protocol(format!(
                    "unrecognized request line {line:?}"
                )));
            }
        }
        drop(stdin);
        let _ = child.wait();
        verdict.ok_or_else(|| DeciderError::Protocol("decider ended without a verdict".into()))
    }
}
