//! `levy-kato` command line: classify, kernel, kato-check, simulate, battery.
//!
//! Exit codes: 0 definitive result, 1 input error, 2 inconclusive,
//! 3 battery failure (a mismatch or a broken identity).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use levy_kato::classify::{classify, RegularityConfig};
use levy_kato::config::RunConfig;
use levy_kato::kato::battery::run_battery;
use levy_kato::kato::{verdict, ConditionId, Potential};
use levy_kato::levy::{parse_spec, ProcessSpec, SCHEMA_VERSION};
use levy_kato::montecarlo::{estimate_space_functional, estimate_time_functional, Observable, PathSampler, Product};
use levy_kato::potential::{potential_density, truncated_potential};
use levy_kato::util::linspace;
use levy_kato::Error;

#[derive(Parser)]
#[command(name = "levy-kato", version, about = "Kato-class membership for Lévy processes")]
struct Cli {
    /// Run configuration (JSON); defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a process into the regularity cases.
    Classify {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate G_t^λ on a symmetric grid as CSV (x,value,err).
    Kernel {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Truncation time; omit for t = ∞.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide 𝕂 and 𝒦 membership of a potential.
    KatoCheck(KatoArgs),
    /// Monte Carlo estimate of the time (or, with --lambda and --r, space) functional.
    Simulate {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in ground-truth suite.
    Battery {
        /// Only cases whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct KatoArgs {
    #[arg(long, required_unless_present = "battery")]
    spec: Option<String>,
    #[arg(long, required_unless_present = "battery")]
    q: Option<String>,
    /// Comma-separated subset of time, space, timespace, closed, all.
    #[arg(long, default_value = "all")]
    conditions: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the ground-truth suite instead of a single check.
    #[arg(long)]
    battery: bool,
    #[arg(long)]
    filter: Option<String>,
}

enum Outcome {
    Definitive,
    Inconclusive,
    BatteryFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(Outcome::Definitive) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive) => ExitCode::from(2),
        Ok(Outcome::BatteryFailed) => ExitCode::from(3),
        Err(e) => {
            if let Some(i) = e.downcast_ref::<InconclusiveError>() {
                eprintln!("inconclusive: {}", i.0);
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Errors that map to exit code 2 rather than 1.
#[derive(Debug)]
struct InconclusiveError(String);

impl std::fmt::Display for InconclusiveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InconclusiveError {}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("LEVY_KATO_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("LEVY_KATO_THREADS must be a positive integer, got '{v}'"))?;
        if n == 0 {
            bail!("LEVY_KATO_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the worker pool")?;
    }
    Ok(())
}

/// A path to a JSON file, or the JSON text itself.
fn read_json_arg(arg: &str) -> anyhow::Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

fn load_spec(arg: &str) -> anyhow::Result<ProcessSpec> {
    let text = read_json_arg(arg)?;
    parse_spec(&text).with_context(|| format!("spec {arg}"))
}

fn load_potential(arg: &str) -> anyhow::Result<Potential> {
    let text = read_json_arg(arg)?;
    let q: Potential = serde_json::from_str(&text).with_context(|| format!("potential {arg}"))?;
    q.validate().with_context(|| format!("potential {arg}"))?;
    Ok(q)
}

fn load_config(path: Option<&Path>) -> anyhow::Result<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            RunConfig::from_json(&text).with_context(|| format!("config {}", p.display()))
        }
    }
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout(), "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn parse_conditions(s: &str) -> anyhow::Result<Vec<ConditionId>> {
    let mut ids = Vec::new();
    for part in s.split(',') {
        let found = ConditionId::parse(part).ok_or_else(|| anyhow!("unknown condition '{part}' (use time, space, timespace, closed, all)"))?;
        for id in found {
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
    }
    Ok(ids)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Classify { spec, lambda, out } => {
            let spec = load_spec(&spec)?;
            let c = match classify(&spec, lambda, &RegularityConfig::default()) {
                Ok(c) => c,
                Err(e @ Error::InconclusiveIntegral(_)) => return Err(InconclusiveError(e.to_string()).into()),
                Err(e) => return Err(e.into()),
            };
            write_json(&json!({"schema_version": SCHEMA_VERSION, "label": c.label, "classification": c}), out.as_deref())?;
            Ok(Outcome::Definitive)
        }
        Cmd::Kernel { spec, lambda, t, half_width, points, out } => {
            let spec = load_spec(&spec)?;
            let w = half_width.unwrap_or(cfg.grid.half_width);
            let n = points.unwrap_or(cfg.grid.points);
            let grid = linspace(-w, w, n);
            let k = match t {
                Some(t) => truncated_potential(&spec, lambda, t, &grid)?,
                None => potential_density(&spec, lambda, &grid)?,
            };
            let mut wtr: csv::Writer<Box<dyn std::io::Write>> = match out.as_deref() {
                Some(p) => csv::Writer::from_writer(Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
                None => csv::Writer::from_writer(Box::new(std::io::stdout())),
            };
            wtr.write_record(["x", "value", "err"])?;
            for ((x, v), e) in k.grid.iter().zip(&k.values).zip(&k.errors) {
                wtr.write_record([x.to_string(), v.to_string(), e.to_string()])?;
            }
            wtr.flush()?;
            Ok(Outcome::Definitive)
        }
        Cmd::KatoCheck(a) => {
            if a.battery {
                return battery(&cfg, a.filter.as_deref(), a.out.as_deref());
            }
            let spec = load_spec(a.spec.as_deref().unwrap_or_default())?;
            let q = load_potential(a.q.as_deref().unwrap_or_default())?;
            let ids = parse_conditions(&a.conditions)?;
            let v = verdict(&q, &spec, &cfg.verdict(&ids))?;
            write_json(&v, a.out.as_deref())?;
            Ok(if v.definitive() { Outcome::Definitive } else { Outcome::Inconclusive })
        }
        Cmd::Simulate { spec, q, x, t, lambda, r, horizon, paths, seed, out } => {
            let spec = load_spec(&spec)?;
            let text = read_json_arg(&q)?;
            let obs: Box<dyn Observable> = match serde_json::from_str::<Product>(&text) {
                Ok(p) => Box::new(p),
                Err(_) => Box::new(load_potential(&q)?),
            };
            let mut sc = cfg.mc.sampler();
            if let Some(s) = seed {
                sc.seed = s;
            }
            let sampler = PathSampler::new(&spec, &sc)?;
            let n = paths.unwrap_or(cfg.mc.paths);
            let est = match (lambda, r) {
                (None, None) => estimate_time_functional(&sampler, obs.as_ref(), x, t, n, cfg.mc.steps)?,
                (Some(l), r) => estimate_space_functional(&sampler, obs.as_ref(), x, l, r.unwrap_or(f64::INFINITY), horizon, n)?,
                (None, Some(_)) => bail!("--r needs --lambda"),
            };
            write_json(&est, out.as_deref())?;
            Ok(Outcome::Definitive)
        }
        Cmd::Battery { filter, out } => battery(&cfg, filter.as_deref(), out.as_deref()),
    }
}

fn battery(cfg: &RunConfig, filter: Option<&str>, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let report = run_battery(&cfg.verdict(&ConditionId::all()), filter)?;
    for row in &report.rows {
        eprintln!(
            "{:<28} {:<16} 𝕂 {:?} (expected {:?})  𝒦 {:?} (expected {:?})  {}",
            row.name,
            row.label.as_str(),
            row.verdict.membership_k,
            row.expected_k,
            row.verdict.membership_calk,
            row.expected_calk,
            if row.matches && row.violations.is_empty() { "ok" } else { "FAIL" }
        );
        for v in &row.violations {
            eprintln!("    violation: {v}");
        }
    }
    for s in &report.space_time {
        eprintln!("space-time {:<20} {}", s.name, if s.matches { "ok" } else { "FAIL" });
    }
    write_json(&report, out)?;
    Ok(if report.all_passed() { Outcome::Definitive } else { Outcome::BatteryFailed })
}
