//! Non-interactive experiment driver: verifies matroid descriptors, runs the
//! query adversary against decider plug-ins, serializes exact-basis
//! reductions, decides SAT through structured instances, and runs the
//! knapsack-cover scheme. Exit codes are a stable contract: 0 success,
//! 1 domain-negative, 2 input error, 3 plug-in protocol error.

mod output;
mod spec_args;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use matroidkit::adversary::{adversary_game, AdversaryError};
use matroidkit::exact::{brute_force_emb, EmbInstance};
use matroidkit::kcm::{
    brute_force_kcm, brute_force_kcmb, kcm_via_kcmb, kcmb_eptas, EptasKcmbSolver, KcmInstance,
};
use matroidkit::matroid::{rank, verify_matroid_axioms, AxiomReport};
use matroidkit::mol::{decide_emb_via_mol, reduce_emb_to_mol, BruteForceMolSolver};
use matroidkit::pi::is_paving;
use matroidkit::sat::{decide_sat_via_emb, SatInstance};
use matroidkit::exact::BruteForceEmb;
use matroidkit::MatroidOracle;

use output::{OutputSink, Row};
use spec_args::{parse_decider, parse_eps, parse_params};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PROTOCOL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "matroidkit", version, about = "Matroid-oracle experiment driver")]
struct Cli {
    /// Base seed; all randomness is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for per-seed parallel runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Output format (default: csv for `adversary`, json elsewhere).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the matroid axioms and the paving property of a descriptor.
    Axioms {
        /// JSON matroid descriptor file.
        matroid_file: PathBuf,
        /// Ground-set size cap for the exhaustive scan.
        #[arg(long, default_value_t = 16)]
        limit: u32,
    },
    /// Run the query adversary against a decider over a batch of seeds.
    Adversary {
        /// Ground-set size of the induced instance.
        #[arg(long)]
        n: u32,
        /// Rank parameter (default: n/2).
        #[arg(long)]
        k: Option<u32>,
        /// Target sum (default: the most popular sum).
        #[arg(long)]
        alpha: Option<u64>,
        /// Decider: `builtin:bruteforce`, `builtin:alwaysno`,
        /// `builtin:budget=K[:prefix|random|randomsets]` (negative K counts
        /// back from the family size), or an executable speaking the line
        /// protocol.
        #[arg(long)]
        decider: String,
        /// Number of games, with seeds base..base+seeds.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Reduce an exact-basis instance file to a MOL instance.
    Reduce {
        emb_file: PathBuf,
        /// Problem parameters as `opt,feas,rel`, e.g. `max,is,le`.
        #[arg(long)]
        params: String,
    },
    /// Decide an exact-basis instance file by enumeration.
    Emb { emb_file: PathBuf },
    /// Decide satisfiability through structured exact-basis instances.
    Sat { sat_file: PathBuf },
    /// Run the knapsack-cover approximation scheme on an instance file.
    Kcm {
        instance_file: PathBuf,
        /// Error parameter, e.g. `1/3` or `0.25`.
        #[arg(long, default_value = "1/2")]
        eps: String,
        /// Also report the exact optimum and the achieved ratio.
        #[arg(long)]
        with_oracle: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sink = OutputSink::new(cli.out.clone());
    match run(cli, &sink) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli, sink: &OutputSink) -> Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Axioms { matroid_file, limit } => cmd_axioms(&matroid_file, limit, format, sink),
        Command::Adversary {
            n,
            k,
            alpha,
            decider,
            seeds,
        } => cmd_adversary(n, k, alpha, &decider, seeds, cli.seed, cli.jobs, format, sink),
        Command::Reduce { emb_file, params } => cmd_reduce(&emb_file, &params, format, sink),
        Command::Emb { emb_file } => cmd_emb(&emb_file, format, sink),
        Command::Sat { sat_file } => cmd_sat(&sat_file, format, sink),
        Command::Kcm {
            instance_file,
            eps,
            with_oracle,
        } => cmd_kcm(&instance_file, &eps, with_oracle, format, sink),
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct AxiomsOut {
    rank: u32,
    axioms: AxiomReport,
    paving: bool,
}

fn cmd_axioms(
    path: &PathBuf,
    limit: u32,
    format: Option<Format>,
    sink: &OutputSink,
) -> Result<ExitCode> {
    let matroid: matroidkit::Matroid = load_json(path)?;
    matroid.validate().map_err(|e| anyhow!("{e}"))?;
    let report = verify_matroid_axioms(&matroid, limit).map_err(|e| anyhow!("{e}"))?;
    let paving = is_paving(&matroid, limit).map_err(|e| anyhow!("{e}"))?;
    let out = AxiomsOut {
        rank: rank(&matroid),
        axioms: report,
        paving,
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => sink.write_json(&out)?,
        Format::Csv => sink.write_csv(
            &["field", "value"],
            vec![
                Row::new(vec![
                    "axioms".into(),
                    if out.axioms.is_pass() { "pass".into() } else { "fail".into() },
                ]),
                Row::new(vec!["paving".into(), out.paving.to_string()]),
                Row::new(vec!["rank".into(), out.rank.to_string()]),
            ],
        )?,
    }
    Ok(if out.axioms.is_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    })
}

#[derive(Serialize, Clone)]
struct AdversaryRow {
    seed: u64,
    queries: usize,
    defeated: bool,
    hidden_set: Option<matroidkit::ElemSet>,
}

#[derive(Serialize)]
struct AdversaryOut {
    n: u32,
    k: u32,
    alpha: u64,
    family_size: String,
    runs: Vec<AdversaryRow>,
    defeat_rate: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_adversary(
    n: u32,
    k: Option<u32>,
    alpha: Option<u64>,
    decider_spec: &str,
    seeds: u64,
    base_seed: u64,
    jobs: usize,
    format: Option<Format>,
    sink: &OutputSink,
) -> Result<ExitCode> {
    if n == 0 || n > 64 {
        return Err(anyhow!("need 1 <= n <= 64, got {n}"));
    }
    let k = k.unwrap_or(n / 2).max(1);
    if k > n {
        return Err(anyhow!("need k <= n, got k={k} n={n}"));
    }
    let by_sum = matroidkit::pi::count_target_sets_by_sum(n, k);
    let alpha = alpha.unwrap_or_else(|| {
        (1..=u64::from(n) * u64::from(n))
            .max_by_key(|&a| {
                (
                    by_sum.get(a as usize).cloned().unwrap_or_default(),
                    std::cmp::Reverse(a),
                )
            })
            .unwrap_or(1)
    });
    let family_size = by_sum
        .get(alpha as usize)
        .cloned()
        .unwrap_or_default();
    let decider = parse_decider(decider_spec, n, k, alpha)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("building thread pool")?;
    let seed_list: Vec<u64> = (base_seed..base_seed + seeds).collect();
    let results: Vec<Result<AdversaryRow, AdversaryError>> = pool.install(|| {
        seed_list
            .par_iter()
            .map(|&seed| {
                adversary_game(decider.as_ref(), n, k, alpha, seed).map(|report| AdversaryRow {
                    seed,
                    queries: report.transcript_empty_run.len(),
                    defeated: report.defeated,
                    hidden_set: report.hidden,
                })
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(AdversaryError::EmptyTargetFamily) => {
                eprintln!("error: {}", AdversaryError::EmptyTargetFamily);
                return Ok(ExitCode::from(EXIT_NEGATIVE));
            }
            Err(e @ (AdversaryError::Decider(_) | AdversaryError::NotReplayable(_))) => {
                eprintln!("error: {e}");
                return Ok(ExitCode::from(EXIT_PROTOCOL));
            }
        }
    }
    let defeats = rows.iter().filter(|r| r.defeated).count();
    let defeat_rate = defeats as f64 / rows.len().max(1) as f64;

    match format.unwrap_or(Format::Csv) {
        Format::Json => sink.write_json(&AdversaryOut {
            n,
            k,
            alpha,
            family_size: family_size.to_string(),
            runs: rows,
            defeat_rate,
        })?,
        Format::Csv => {
            let mut csv_rows: Vec<Row> = rows
                .iter()
                .map(|r| {
                    Row::new(vec![
                        r.seed.to_string(),
                        r.queries.to_string(),
                        r.defeated.to_string(),
                        r.hidden_set
                            .map(|s| {
                                s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";")
                            })
                            .unwrap_or_default(),
                    ])
                })
                .collect();
            let total_queries: usize = rows.iter().map(|r| r.queries).sum();
            csv_rows.push(Row::new(vec![
                "summary".into(),
                total_queries.to_string(),
                defeat_rate.to_string(),
                family_size.to_string(),
            ]));
            sink.write_csv(&["seed", "queries", "defeated", "hidden_set"], csv_rows)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ReduceOut {
    mol: matroidkit::mol::MolInstance,
    eps: String,
    h: u64,
    k_rank: u32,
    d: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    equiv: Option<bool>,
}

fn cmd_reduce(
    path: &PathBuf,
    params: &str,
    format: Option<Format>,
    sink: &OutputSink,
) -> Result<ExitCode> {
    let inst: EmbInstance = load_json(path)?;
    inst.matroid.validate().map_err(|e| anyhow!("{e}"))?;
    inst.validate().map_err(|e| anyhow!("{e}"))?;
    let params = parse_params(params)?;
    let reduced = match reduce_emb_to_mol(&inst, params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(EXIT_NEGATIVE));
        }
    };
    // Round-trip check at enumeration scale: deciding through the reduced
    // instance must agree with the direct enumeration.
    let equiv = if inst.matroid.n_elements() <= 18 {
        let via_mol = decide_emb_via_mol(&inst, params, &BruteForceMolSolver)
            .map_err(|e| anyhow!("{e}"))?;
        let direct = brute_force_emb(&inst).map_err(|e| anyhow!("{e}"))?.is_some();
        Some(via_mol == direct)
    } else {
        None
    };
    let out = ReduceOut {
        eps: reduced.eps.to_string(),
        h: reduced.h,
        k_rank: reduced.k_rank,
        d: reduced.d,
        mol: reduced.mol,
        equiv,
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => sink.write_json(&out)?,
        Format::Csv => {
            sink.write_csv(
                &["field", "value"],
                vec![
                    Row::new(vec!["eps".into(), out.eps.clone()]),
                    Row::new(vec!["h".into(), out.h.to_string()]),
                    Row::new(vec!["k_rank".into(), out.k_rank.to_string()]),
                    Row::new(vec!["L".into(), out.mol.bound.to_string()]),
                ],
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EmbOut {
    solution: Option<matroidkit::ElemSet>,
    cost: Option<u64>,
}

fn cmd_emb(path: &PathBuf, format: Option<Format>, sink: &OutputSink) -> Result<ExitCode> {
    let inst: EmbInstance = load_json(path)?;
    inst.matroid.validate().map_err(|e| anyhow!("{e}"))?;
    inst.validate().map_err(|e| anyhow!("{e}"))?;
    let witness = brute_force_emb(&inst).map_err(|e| anyhow!("{e}"))?;
    let out = EmbOut {
        cost: witness.map(|s| inst.cost_of(s)),
        solution: witness,
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => sink.write_json(&out)?,
        Format::Csv => sink.write_csv(
            &["solution", "cost"],
            vec![Row::new(vec![
                out.solution
                    .map(|s| s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default(),
                out.cost.map(|c| c.to_string()).unwrap_or_default(),
            ])],
        )?,
    }
    Ok(if out.solution.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    })
}

#[derive(Serialize)]
struct SatOut {
    satisfiable: bool,
    /// The (k, alpha) pairs whose structured instance was a yes.
    trace: Vec<(u32, u64)>,
}

fn cmd_sat(path: &PathBuf, format: Option<Format>, sink: &OutputSink) -> Result<ExitCode> {
    let inst: SatInstance = load_json(path)?;
    inst.validate().map_err(|e| anyhow!("{e}"))?;
    let (satisfiable, trace) = decide_sat_via_emb(&inst, &BruteForceEmb);
    let out = SatOut { satisfiable, trace };
    match format.unwrap_or(Format::Json) {
        Format::Json => sink.write_json(&out)?,
        Format::Csv => {
            let mut rows = vec![Row::new(vec![
                "satisfiable".into(),
                out.satisfiable.to_string(),
            ])];
            rows.extend(
                out.trace
                    .iter()
                    .map(|(k, a)| Row::new(vec![format!("k={k}"), format!("alpha={a}")])),
            );
            sink.write_csv(&["field", "value"], rows)?;
        }
    }
    Ok(if out.satisfiable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    })
}

#[derive(serde::Deserialize)]
struct KcmFile {
    #[serde(flatten)]
    instance: KcmInstance,
    /// `"kcm"` (default) solves the independent-set variant through the
    /// basis scheme; `"kcmb"` solves the basis variant directly.
    #[serde(default)]
    problem: Option<String>,
}

#[derive(Serialize)]
struct KcmOut {
    solution: matroidkit::ElemSet,
    cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimum: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
}

fn cmd_kcm(
    path: &PathBuf,
    eps: &str,
    with_oracle: bool,
    format: Option<Format>,
    sink: &OutputSink,
) -> Result<ExitCode> {
    let file: KcmFile = load_json(path)?;
    let inst = file.instance;
    inst.matroid.validate().map_err(|e| anyhow!("{e}"))?;
    inst.validate().map_err(|e| anyhow!("{e}"))?;
    let eps = parse_eps(eps)?;
    let problem = file.problem.as_deref().unwrap_or("kcm");
    let solution = match problem {
        "kcm" => kcm_via_kcmb(&inst, &EptasKcmbSolver, &eps).map_err(|e| anyhow!("{e}"))?,
        "kcmb" => kcmb_eptas(&inst, &eps).map_err(|e| anyhow!("{e}"))?,
        other => return Err(anyhow!("unknown problem flag {other:?} (kcm|kcmb)")),
    };
    let Some(solution) = solution else {
        eprintln!("error: instance has no solution");
        return Ok(ExitCode::from(EXIT_NEGATIVE));
    };
    let optimum = if with_oracle {
        let opt = match problem {
            "kcm" => brute_force_kcm(&inst).map_err(|e| anyhow!("{e}"))?,
            _ => brute_force_kcmb(&inst).map_err(|e| anyhow!("{e}"))?,
        };
        opt.map(|(_, c)| c)
    } else {
        None
    };
    let ratio = optimum.map(|opt| {
        if opt == 0 {
            if solution.cost == 0 { 1.0 } else { f64::INFINITY }
        } else {
            solution.cost as f64 / opt as f64
        }
    });
    let out = KcmOut {
        solution: solution.set,
        cost: solution.cost,
        optimum,
        ratio,
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => sink.write_json(&out)?,
        Format::Csv => sink.write_csv(
            &["solution", "cost", "optimum", "ratio"],
            vec![Row::new(vec![
                out.solution
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                out.cost.to_string(),
                out.optimum.map(|o| o.to_string()).unwrap_or_default(),
                out.ratio.map(|r| r.to_string()).unwrap_or_default(),
            ])],
        )?,
    }
    Ok(ExitCode::SUCCESS)
}
