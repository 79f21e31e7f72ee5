//! Parsers for the small argument mini-languages: problem parameters,
//! error fractions, and decider specifications.

use anyhow::{anyhow, bail, Result};
use num::BigUint;

use matroidkit::adversary::{
    AlwaysNo, BruteForceDecider, BudgetedNo, Decider, ExternalDecider, ProbeStrategy,
};
use matroidkit::mol::{Feas, MolParams, Opt, Rel};
use matroidkit::pi::count_target_sets;
use matroidkit::Rat;

/// `opt,feas,rel` — e.g. `max,is,le` or `min,bases,ge`.
pub fn parse_params(text: &str) -> Result<MolParams> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected opt,feas,rel (e.g. max,is,le), got {text:?}");
    }
    let opt = match parts[0] {
        "max" => Opt::Max,
        "min" => Opt::Min,
        other => bail!("unknown objective {other:?} (max|min)"),
    };
    let feas = match parts[1] {
        "is" => Feas::Is,
        "bases" => Feas::Bases,
        other => bail!("unknown feasibility {other:?} (is|bases)"),
    };
    let rel = match parts[2] {
        "le" => Rel::Le,
        "ge" => Rel::Ge,
        other => bail!("unknown relation {other:?} (le|ge)"),
    };
    Ok(MolParams::new(opt, feas, rel))
}

/// `a/b`, a plain integer, or a decimal such as `0.25`, as an exact rational.
pub fn parse_eps(text: &str) -> Result<Rat> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: i128 = num.trim().parse()?;
        let d: i128 = den.trim().parse()?;
        if d == 0 {
            bail!("zero denominator in {text:?}");
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let whole: i128 = if whole.is_empty() { 0 } else { whole.parse()? };
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            bail!("cannot parse decimal {text:?}");
        }
        let scale = 10i128.pow(frac.len() as u32);
        let frac_val: i128 = frac.parse()?;
        return Ok(Rat::new(whole * scale + frac_val, scale));
    }
    Ok(Rat::from_integer(text.parse::<i128>()?))
}

/// Decider specifications:
///
/// * `builtin:bruteforce` — the exhaustive reference decider;
/// * `builtin:alwaysno` — zero queries, answers no;
/// * `builtin:budget=K[:prefix|random|randomsets]` — gives up after at most
///   `K` queries (negative `K` counts back from the target-family size);
/// * anything else — an executable path (whitespace-separated arguments)
///   speaking the line protocol.
pub fn parse_decider(
    spec: &str,
    n: u32,
    k: u32,
    alpha: u64,
) -> Result<Box<dyn Decider + Sync + Send>> {
    if let Some(builtin) = spec.strip_prefix("builtin:") {
        if builtin == "bruteforce" {
            return Ok(Box::new(BruteForceDecider));
        }
        if builtin == "alwaysno" {
            return Ok(Box::new(AlwaysNo));
        }
        if let Some(rest) = builtin.strip_prefix("budget=") {
            let (amount, strategy) = match rest.split_once(':') {
                Some((a, s)) => (a, s),
                None => (rest, "random"),
            };
            let strategy = match strategy {
                "prefix" => ProbeStrategy::TargetPrefix,
                "random" => ProbeStrategy::TargetRandom,
                "randomsets" => ProbeStrategy::RandomSets,
                other => bail!("unknown probe strategy {other:?}"),
            };
            let raw: i64 = amount.parse()?;
            let budget = if raw >= 0 {
                raw as usize
            } else {
                let family = count_target_sets(n, k, alpha);
                let back = BigUint::from(raw.unsigned_abs());
                if family < back {
                    bail!("budget {raw} reaches below zero for family size {family}");
                }
                usize::try_from(family - back)
                    .map_err(|_| anyhow!("relative budget does not fit usize"))?
            };
            return Ok(Box::new(BudgetedNo { budget, strategy }));
        }
        bail!("unknown builtin decider {builtin:?}");
    }
    let mut parts = spec.split_whitespace().map(String::from);
    let program = parts
        .next()
        .ok_or_else(|| anyhow!("empty decider specification"))?;
    Ok(Box::new(ExternalDecider {
        program,
        args: parts.collect(),
    }))
}
