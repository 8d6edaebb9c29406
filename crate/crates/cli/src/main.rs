//! Command-line front end for the fast-robber crate.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use fast_robber::baseline::AmbushScript;
use fast_robber::hierarchy::{level_product, parse_exact_uint, time_budget, HierarchyParams, Mode};
use fast_robber::registry::{cop_strategy, robber_strategy, StrategyOptions};
use fast_robber::runner::{AbortReason, MatchAbort};
use fast_robber::solver::{cop_number, solve, CopNumber, SolverError, SolverInstance, DEFAULT_BUDGET};
use fast_robber::sweep::{sweep_cop_count, sweep_half_width};
use fast_robber::trace::Actor;
use fast_robber::{replay, run_match, GridSpec, MatchConfig, MatchReport, Trace};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

/// Exit status of a check that ran and failed: invalid trace, invalid
/// parameters, solver budget exceeded.
const EXIT_CHECK: u8 = 1;
/// Bad flags, config or strategy names.
const EXIT_USAGE: u8 = 2;
const EXIT_COP_ABORT: u8 = 3;
const EXIT_ROBBER_ABORT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "fast-robber", version, about = "Cops and a fast robber on square grids")]
struct Cli {
    /// TOML file with default values for any flag (flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact cop number on a tiny grid.
    Solve(SolveArgs),
    /// Play matches between named strategies.
    Simulate(SimArgs),
    /// Line sweep against a named robber.
    Sweep(SweepArgs),
    /// Check a hierarchy parameter set.
    ValidateParams(ParamArgs),
    /// Lower and upper cop bounds for a grid.
    Bounds(BoundsArgs),
    /// Validate a trace file.
    Replay(ReplayArgs),
}

fn exact_u64(s: &str) -> Result<u64, String> {
    parse_exact_uint(s).map_err(|e| e.to_string())?.to_u64().ok_or_else(|| format!("`{s}` is too large"))
}

fn exact_i64(s: &str) -> Result<i64, String> {
    exact_u64(s)?.to_i64().ok_or_else(|| format!("`{s}` is too large"))
}

fn exact_big(s: &str) -> Result<BigUint, String> {
    parse_exact_uint(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Default)]
struct SolveArgs {
    #[arg(long, value_parser = exact_i64)]
    n: Option<i64>,
    #[arg(long, value_parser = exact_i64)]
    speed: Option<i64>,
    #[arg(long = "max-cops", value_parser = exact_u64)]
    max_cops: Option<u64>,
    /// Solve one cop count and report the winning placements.
    #[arg(long, value_parser = exact_u64)]
    cops: Option<u64>,
    /// Largest allowed (n^2)^c * n^2 * 2.
    #[arg(long, value_parser = exact_big)]
    budget: Option<BigUint>,
    /// Write the table for `--cops` as binary plus a `.json` summary.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
struct HierArgs {
    /// Parameter block file with keys C, N, R, k_max, mode.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long = "C", value_parser = exact_u64)]
    c: Option<u64>,
    #[arg(long = "N", value_parser = exact_big)]
    big_n: Option<BigUint>,
    #[arg(long = "R", value_parser = exact_big)]
    big_r: Option<BigUint>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Args, Debug, Default)]
struct SimArgs {
    #[arg(long, value_parser = exact_i64)]
    n: Option<i64>,
    #[arg(long, value_parser = exact_i64)]
    speed: Option<i64>,
    #[arg(long, value_parser = exact_u64)]
    cops: Option<u64>,
    #[arg(long = "cop-strategy")]
    cop_strategy: Option<String>,
    #[arg(long = "robber-strategy")]
    robber_strategy: Option<String>,
    #[arg(long, value_parser = exact_u64)]
    rounds: Option<u64>,
    #[arg(long, value_parser = exact_u64)]
    seed: Option<u64>,
    /// JSON-lines trace output; with several matches `.i` is inserted
    /// before the extension.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Ambush script, JSON lines of cop positions.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Line-sweep half-width override.
    #[arg(long = "L", value_parser = exact_i64)]
    half_width: Option<i64>,
    /// Number of matches, seeds `seed, seed+1, ...`.
    #[arg(long, value_parser = exact_u64)]
    matches: Option<u64>,
    /// Worker threads for independent matches.
    #[arg(long, value_parser = exact_u64)]
    parallel: Option<u64>,
    /// Attach robber diagnostics to the trace.
    #[arg(long)]
    diagnostics: bool,
    #[command(flatten)]
    hier: HierArgs,
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    #[arg(long, value_parser = exact_i64)]
    n: Option<i64>,
    #[arg(long, value_parser = exact_i64)]
    speed: Option<i64>,
    #[arg(long = "robber-strategy")]
    robber_strategy: Option<String>,
    #[arg(long = "L", value_parser = exact_i64)]
    half_width: Option<i64>,
    #[arg(long, value_parser = exact_u64)]
    rounds: Option<u64>,
    #[arg(long, value_parser = exact_u64)]
    seed: Option<u64>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    #[command(flatten)]
    hier: HierArgs,
}

#[derive(Args, Debug, Default)]
struct BoundsArgs {
    #[arg(long, value_parser = exact_big)]
    n: Option<BigUint>,
    #[arg(long, value_parser = exact_i64)]
    speed: Option<i64>,
    #[command(flatten)]
    hier: HierArgs,
}

#[derive(Args, Debug, Default)]
struct ReplayArgs {
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_parser = exact_i64)]
    n: Option<i64>,
    #[arg(long, value_parser = exact_i64)]
    speed: Option<i64>,
}

/// A number in the config file: a TOML integer or an exact-notation string.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum Num {
    Int(u64),
    Text(String),
}

impl Num {
    fn big(&self) -> anyhow::Result<BigUint> {
        match self {
            Num::Int(v) => Ok(BigUint::from(*v)),
            Num::Text(s) => exact_big(s).map_err(|e| anyhow!(e)),
        }
    }

    fn u64(&self) -> anyhow::Result<u64> {
        self.big()?.to_u64().ok_or_else(|| anyhow!("config value is too large"))
    }

    fn i64(&self) -> anyhow::Result<i64> {
        self.u64()?.to_i64().ok_or_else(|| anyhow!("config value is too large"))
    }
}

/// Config file keys, the same as the long flags.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Config {
    n: Option<Num>,
    speed: Option<Num>,
    max_cops: Option<Num>,
    cops: Option<Num>,
    budget: Option<Num>,
    export: Option<PathBuf>,
    cop_strategy: Option<String>,
    robber_strategy: Option<String>,
    rounds: Option<Num>,
    seed: Option<Num>,
    trace: Option<PathBuf>,
    script: Option<PathBuf>,
    #[serde(rename = "L")]
    half_width: Option<Num>,
    matches: Option<Num>,
    parallel: Option<Num>,
    diagnostics: Option<bool>,
    params: Option<PathBuf>,
    #[serde(rename = "C")]
    c: Option<Num>,
    #[serde(rename = "N")]
    big_n: Option<Num>,
    #[serde(rename = "R")]
    big_r: Option<Num>,
    k: Option<u32>,
    mode: Option<String>,
}

/// Error that carries its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn usage(err: anyhow::Error) -> Failure {
    Failure { code: EXIT_USAGE, err }
}

fn check(err: anyhow::Error) -> Failure {
    Failure { code: EXIT_CHECK, err }
}

type Outcome<T = ()> = Result<T, Failure>;

macro_rules! merge {
    ($flag:expr, $cfg:expr, $conv:ident) => {
        match ($flag, &$cfg) {
            (Some(v), _) => Some(v),
            (None, Some(c)) => Some(c.$conv().map_err(usage)?),
            (None, None) => None,
        }
    };
}

fn load_config(path: Option<&Path>) -> Outcome<Config> {
    let Some(path) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display())).map_err(usage)
}

fn hier_params(args: &HierArgs, cfg: &Config, speed: Option<&BigUint>) -> Outcome<Option<HierarchyParams>> {
    let file = args.params.clone().or(cfg.params.clone());
    let c = merge!(args.c, cfg.c, u64);
    let n = merge!(args.big_n.clone(), cfg.big_n, big);
    let r = merge!(args.big_r.clone(), cfg.big_r, big).or(speed.cloned());
    let k = args.k.or(cfg.k);
    let mode = match (args.mode, &cfg.mode) {
        (Some(m), _) => Some(m),
        (None, Some(s)) => Some(s.parse::<Mode>().map_err(|e| usage(anyhow!(e))) ?),
        (None, None) => None,
    };
    let mut params = match &file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
            HierarchyParams::parse_block(&text).map_err(|e| usage(e.into()))?
        }
        None if c.is_none() && n.is_none() && k.is_none() && mode.is_none() && args.big_r.is_none() => return Ok(None),
        None => {
            let mut p = HierarchyParams::canonical(1);
            if mode != Some(Mode::Canonical) {
                p.mode = Mode::Relaxed;
            }
            p
        }
    };
    if let Some(c) = c {
        params.c = c;
    }
    if let Some(n) = n {
        params.n = n;
    }
    if let Some(r) = r {
        params.r = r;
    }
    if let Some(k) = k {
        params.k_max = k;
    }
    if let Some(m) = mode {
        params.mode = m;
    }
    Ok(Some(params))
}

fn emit(json_out: bool, value: serde_json::Value, human: impl FnOnce() -> String) {
    if json_out {
        println!("{value}");
    } else {
        println!("{}", human());
    }
}

fn cmd_solve(args: SolveArgs, cfg: &Config, json_out: bool) -> Outcome {
    let n = merge!(args.n, cfg.n, i64).ok_or_else(|| usage(anyhow!("--n is required")))?;
    let speed = merge!(args.speed, cfg.speed, i64).unwrap_or(1);
    let budget = merge!(args.budget, cfg.budget, big).map(|b| b.to_u128().unwrap_or(u128::MAX)).unwrap_or(DEFAULT_BUDGET);
    let export = args.export.or(cfg.export.clone());
    let solver_err = |e: SolverError| match e {
        SolverError::Instance(_) => usage(e.into()),
        _ => check(e.into()),
    };
    if let Some(c) = merge!(args.cops, cfg.cops, u64) {
        let inst = SolverInstance::new(n, speed, c as usize).map_err(solver_err)?;
        let table = solve(inst, budget).map_err(solver_err)?;
        let wins = table.winning_placements();
        if let Some(path) = &export {
            let file = File::create(path).with_context(|| format!("creating {}", path.display())).map_err(check)?;
            table.write_binary(BufWriter::new(file)).map_err(solver_err)?;
            let summary = path.with_extension("json");
            std::fs::write(&summary, table.summary_json().to_string()).map_err(|e| check(e.into()))?;
        }
        let first = wins.first().map(|&m| table.unrank(m));
        emit(
            json_out,
            json!({"n": n, "R": speed, "c": c, "copWin": !wins.is_empty(), "winningPlacements": wins.len(),
                   "placements": table.multiset_count(), "passes": table.passes(), "example": first}),
            || match &first {
                Some(p) => format!(
                    "{c} cops win on n = {n}, R = {speed}: {} of {} placements, e.g. {}",
                    wins.len(),
                    table.multiset_count(),
                    p.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
                ),
                None => format!("{c} cops lose on n = {n}, R = {speed}"),
            },
        );
        return Ok(());
    }
    let max = merge!(args.max_cops, cfg.max_cops, u64).unwrap_or(n as u64) as usize;
    let result = cop_number(n, speed, max, budget).map_err(solver_err)?;
    match result {
        CopNumber::Exact(c) => emit(json_out, json!({"n": n, "R": speed, "copNumber": c}), || format!("f_{speed}({n}) = {c}")),
        CopNumber::Exceeds(m) => emit(json_out, json!({"n": n, "R": speed, "copNumber": null, "exceeds": m}), || {
            format!("f_{speed}({n}) > {m}")
        }),
    }
    Ok(())
}

fn trace_path(base: &Path, index: u64, total: u64) -> PathBuf {
    if total <= 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{index}"),
    };
    base.with_file_name(name)
}

fn write_trace(path: &Path, trace: &Trace) -> Outcome {
    let file = File::create(path).with_context(|| format!("creating {}", path.display())).map_err(check)?;
    let mut out = BufWriter::new(file);
    trace.write_jsonl(&mut out).map_err(|e| check(e.into()))?;
    out.flush().map_err(|e| check(e.into()))
}

fn abort_code(abort: &MatchAbort) -> u8 {
    match abort.side {
        Actor::Cops => EXIT_COP_ABORT,
        Actor::Robber => EXIT_ROBBER_ABORT,
    }
}

fn describe_abort(abort: &MatchAbort) -> serde_json::Value {
    let kind = match abort.reason {
        AbortReason::Illegal(_) => "illegal",
        AbortReason::Fault(_) => "fault",
    };
    json!({"outcome": "aborted", "side": abort.side, "kind": kind, "round": abort.round, "reason": abort.reason.to_string()})
}

fn report_json(report: &MatchReport, seed: u64) -> serde_json::Value {
    json!({"outcome": report.outcome, "rounds": report.rounds, "seed": seed})
}

fn cmd_simulate(args: SimArgs, cfg: &Config, json_out: bool) -> Outcome {
    let cop_name = args.cop_strategy.or(cfg.cop_strategy.clone()).unwrap_or_else(|| "greedy-pursuer".into());
    let robber_name = args.robber_strategy.or(cfg.robber_strategy.clone()).unwrap_or_else(|| "greedy-evader".into());
    let speed = merge!(args.speed, cfg.speed, i64);
    let params = hier_params(&args.hier, cfg, speed.map(|s| BigUint::from(s.max(0) as u64)).as_ref())?;
    let mut opts = StrategyOptions { params: params.clone(), script: None, sweep_l: merge!(args.half_width, cfg.half_width, i64) };
    if let Some(path) = args.script.or(cfg.script.clone()) {
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        opts.script = Some(AmbushScript::parse(&text).map_err(|e| usage(e.into()))?);
    }
    // validate names and parameters before playing
    cop_strategy(&cop_name, &opts).map_err(|e| usage(e.into()))?;
    let probe = robber_strategy(&robber_name, &opts).map_err(|e| usage(e.into()))?;
    drop(probe);

    let hier_side = match (&params, robber_name.as_str()) {
        (Some(p), "hierarchical") => {
            let side = BigUint::from(2u32) * &p.n * level_product(p.k_max);
            Some(side.to_i64().ok_or_else(|| usage(anyhow!("grid side {side} does not fit in 64 bits")))?)
        }
        _ => None,
    };
    let n = merge!(args.n, cfg.n, i64).or(hier_side).ok_or_else(|| usage(anyhow!("--n is required")))?;
    let speed = match speed {
        Some(s) => s,
        None => match &params {
            Some(p) => p.r.to_i64().ok_or_else(|| usage(anyhow!("R does not fit in 64 bits")))?,
            None => 1,
        },
    };
    let spec = GridSpec::new(n, speed).map_err(|e| usage(e.into()))?;
    let cops = match merge!(args.cops, cfg.cops, u64) {
        Some(c) => c as usize,
        None => match cop_name.as_str() {
            "line-sweep" => match opts.sweep_l {
                Some(l) => (2 * l + 1) as usize,
                None => sweep_cop_count(n, speed).map_err(|e| usage(e.into()))?,
            },
            "wall" => n as usize,
            _ => 1,
        },
    };
    let rounds = merge!(args.rounds, cfg.rounds, u64).unwrap_or(1000);
    let seed = merge!(args.seed, cfg.seed, u64).unwrap_or(0);
    let matches = merge!(args.matches, cfg.matches, u64).unwrap_or(1).max(1);
    let threads = merge!(args.parallel, cfg.parallel, u64).unwrap_or(1).max(1);
    let diagnostics = args.diagnostics || cfg.diagnostics.unwrap_or(false);
    let trace = args.trace.or(cfg.trace.clone());

    let play = |i: u64| -> Result<MatchReport, MatchAbort> {
        let mut c = cop_strategy(&cop_name, &opts).expect("validated above");
        let mut r = robber_strategy(&robber_name, &opts).expect("validated above");
        let mc = MatchConfig { spec, cop_count: cops, max_rounds: rounds, seed: seed + i, diagnostics };
        run_match(&mc, c.as_mut(), r.as_mut())
    };
    let results: Vec<Result<MatchReport, MatchAbort>> = if threads > 1 && matches > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads as usize).build().map_err(|e| check(e.into()))?;
        pool.install(|| (0..matches).into_par_iter().map(play).collect())
    } else {
        (0..matches).map(play).collect()
    };

    let mut code = 0u8;
    for (i, result) in results.iter().enumerate() {
        let i = i as u64;
        let rec = match result {
            Ok(rep) => {
                if let Some(base) = &trace {
                    write_trace(&trace_path(base, i, matches), &rep.trace)?;
                }
                report_json(rep, seed + i)
            }
            Err(abort) => {
                if let Some(base) = &trace {
                    write_trace(&trace_path(base, i, matches), &abort.trace)?;
                }
                code = code.max(abort_code(abort));
                let mut v = describe_abort(abort);
                v["seed"] = json!(seed + i);
                v
            }
        };
        emit(json_out, rec.clone(), || match result {
            Ok(rep) => format!(
                "{cop_name} ({cops} cops) vs {robber_name}, n = {n}, R = {speed}, seed {}: {} after {} rounds",
                seed + i,
                serde_json::to_value(rep.outcome).unwrap().as_str().unwrap_or_default(),
                rep.rounds
            ),
            Err(abort) => format!("seed {}: {abort}", seed + i),
        });
    }
    if code != 0 {
        return Err(Failure { code, err: anyhow!("a match was aborted") });
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, cfg: &Config, json_out: bool) -> Outcome {
    let n = merge!(args.n, cfg.n, i64).ok_or_else(|| usage(anyhow!("--n is required")))?;
    let speed = merge!(args.speed, cfg.speed, i64).unwrap_or(1);
    let sim = SimArgs {
        n: Some(n),
        speed: Some(speed),
        cop_strategy: Some("line-sweep".into()),
        robber_strategy: args.robber_strategy.or(cfg.robber_strategy.clone()).or(Some("greedy-evader".into())),
        rounds: Some(merge!(args.rounds, cfg.rounds, u64).unwrap_or(10 * (n * n) as u64)),
        seed: merge!(args.seed, cfg.seed, u64),
        trace: args.trace.or(cfg.trace.clone()),
        half_width: merge!(args.half_width, cfg.half_width, i64),
        ..SimArgs::default()
    };
    let l = sim.half_width.unwrap_or_else(|| sweep_half_width(n, speed));
    if !json_out {
        println!("line sweep with L = {l}: {} cops", 2 * l + 1);
    }
    let empty = Config::default();
    cmd_simulate(sim, &empty, json_out)
}

fn cmd_validate(args: ParamArgs, cfg: &Config, json_out: bool) -> Outcome {
    let params = hier_params(&args.hier, cfg, None)?.unwrap_or_else(|| HierarchyParams::canonical(1));
    let violations = params.validate();
    let k = params.k_max;
    let side = BigUint::from(2u32) * &params.n * level_product(k);
    let budget = time_budget(k, params.c);
    let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    emit(
        json_out,
        json!({"C": params.c, "N": params.n.to_string(), "R": params.r.to_string(), "k": k, "mode": params.mode.to_string(),
               "valid": violations.is_empty(), "violations": list, "T_k": budget.to_string(), "gridSide": side.to_string()}),
        || {
            let mut s = format!(
                "C = {}, N = {}, R = {}, k = {k}, mode = {}\nT_{k} = {budget}, grid side 2NL_{k} = {side}\n",
                params.c, params.n, params.r, params.mode
            );
            if violations.is_empty() {
                s.push_str("valid");
            } else {
                s.push_str("invalid, violated:");
                for v in &list {
                    s.push_str(&format!("\n  {v}"));
                }
            }
            s
        },
    );
    if violations.is_empty() {
        Ok(())
    } else {
        Err(check(anyhow!("{} violated inequalities", violations.len())))
    }
}

fn cmd_bounds(args: BoundsArgs, cfg: &Config, json_out: bool) -> Outcome {
    let n = merge!(args.n, cfg.n, big).ok_or_else(|| usage(anyhow!("--n is required")))?;
    let speed = merge!(args.speed, cfg.speed, i64);
    let params = hier_params(&args.hier, cfg, None)?.unwrap_or_else(|| HierarchyParams::canonical(1));
    let two = BigUint::from(2u32);
    let mut k = 0u32;
    while &two * &params.n * level_product(k + 1) <= n {
        k += 1;
    }
    let evaded = two.pow(k);
    let mut checked = params.clone();
    checked.k_max = k.max(1);
    let violations: Vec<String> = checked.validate().iter().map(|v| v.to_string()).collect();
    let sweep = match (speed, n.to_i64()) {
        (Some(r), Some(ni)) if r >= 1 => Some((2 * sweep_half_width(ni, r) + 1, sweep_cop_count(ni, r).is_ok())),
        _ => None,
    };
    emit(
        json_out,
        json!({"n": n.to_string(), "k": k, "lowerBound": evaded.to_string(), "C": params.c, "N": params.n.to_string(),
               "R": params.r.to_string(), "paramsValid": violations.is_empty(), "violations": violations,
               "sweepCops": sweep.map(|s| s.0), "sweepFits": sweep.map(|s| s.1)}),
        || {
            let mut s = if k == 0 {
                format!("n = {n}: no 1-cell array fits (2NL_1 = {})", &two * &params.n * level_product(1))
            } else {
                let beaten = &evaded - BigUint::one();
                let noun = if beaten == BigUint::one() { "cop" } else { "cops" };
                format!("n = {n}: k = {k}, the robber evades {beaten} {noun}, so at least {evaded} are needed")
            };
            if !violations.is_empty() {
                s.push_str(&format!("\n  parameters (C = {}, N = {}, R = {}) violate: {}", params.c, params.n, params.r, violations.join(", ")));
            }
            if let Some((cops, fits)) = sweep {
                s.push_str(&format!("\nsweep count: {cops}{}", if fits { "" } else { " (exceeds n)" }));
            }
            s
        },
    );
    Ok(())
}

fn cmd_replay(args: ReplayArgs, cfg: &Config, json_out: bool) -> Outcome {
    let path = args.trace.or(cfg.trace.clone()).ok_or_else(|| usage(anyhow!("--trace is required")))?;
    let n = merge!(args.n, cfg.n, i64).ok_or_else(|| usage(anyhow!("--n is required")))?;
    let speed = merge!(args.speed, cfg.speed, i64).ok_or_else(|| usage(anyhow!("--speed is required")))?;
    let spec = GridSpec::new(n, speed).map_err(|e| usage(e.into()))?;
    let file = File::open(&path).with_context(|| format!("opening {}", path.display())).map_err(usage)?;
    let trace = match Trace::read_jsonl(BufReader::new(file)) {
        Ok(t) => t,
        Err(e) => {
            emit(json_out, json!({"valid": false, "reason": e.to_string()}), || format!("invalid: {e}"));
            return Err(check(anyhow!("unreadable trace")));
        }
    };
    match replay(spec, &trace.records) {
        Ok(s) => {
            emit(json_out, json!({"valid": true, "records": s.records, "rounds": s.rounds, "captured": s.captured}), || {
                format!("valid: {} records, {} rounds, {}", s.records, s.rounds, if s.captured { "capture" } else { "no capture" })
            });
            Ok(())
        }
        Err(e) => {
            let record = serde_json::to_value(&trace.records[e.index]).unwrap_or_default();
            emit(json_out, json!({"valid": false, "index": e.index, "reason": e.reason, "record": record}), || {
                format!("invalid at record {} (line {}): {}\n  {record}", e.index, e.index + 1, e.reason)
            });
            Err(check(anyhow!("trace rejected")))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a, &cfg, cli.json),
        Cmd::Simulate(a) => cmd_simulate(a, &cfg, cli.json),
        Cmd::Sweep(a) => cmd_sweep(a, &cfg, cli.json),
        Cmd::ValidateParams(a) => cmd_validate(a, &cfg, cli.json),
        Cmd::Bounds(a) => cmd_bounds(a, &cfg, cli.json),
        Cmd::Replay(a) => cmd_replay(a, &cfg, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_numbers() {
        assert_eq!(exact_i64("1e3").unwrap(), 1000);
        assert!(exact_i64("1.5").is_err());
        assert_eq!(exact_big("2^70").unwrap(), BigUint::from(2u32).pow(70));
    }

    #[test]
    fn trace_paths() {
        let p = Path::new("/tmp/run.jsonl");
        assert_eq!(trace_path(p, 0, 1), PathBuf::from("/tmp/run.jsonl"));
        assert_eq!(trace_path(p, 2, 3), PathBuf::from("/tmp/run.2.jsonl"));
    }

    #[test]
    fn config_keys_match_flags() {
        let cfg: Config = toml::from_str("n = 5\nspeed = \"1e0\"\ncop-strategy = \"wall\"\nC = 40\nN = \"1e20\"\n").unwrap();
        assert_eq!(cfg.n.unwrap().i64().unwrap(), 5);
        assert_eq!(cfg.big_n.unwrap().big().unwrap(), parse_exact_uint("1e20").unwrap());
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
    }
}
