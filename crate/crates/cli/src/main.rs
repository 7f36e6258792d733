use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use matchbandit::enumerate::{enumerate_stable, DEFAULT_ENUMERATION_CAP};
use matchbandit::harness::{read_results, run_experiment, write_results, ExperimentConfig, Parallelism};
use matchbandit::profile::{generate, ProfileKind};
use matchbandit::structure::{check_alpha, check_spc};
use matchbandit::{da_match, envy_set, min_gap, MarketError, MarketInstance, Side};

/// Set to a non-empty value other than `0` for progress messages on stderr.
const VERBOSE_ENV: &str = "MATCHBANDIT_VERBOSE";

#[derive(Parser)]
#[command(name = "matchbandit", version, about = "Stable matching under bandit feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON.
    Gen {
        #[arg(long)]
        n: usize,
        /// Number of arms; defaults to `n`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "general")]
        kind: ProfileKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiply every utility by this factor.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print structural facts about a small instance on one line.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a Monte Carlo experiment and write the results CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 uses every core, 1 runs sequentially.
        #[arg(long, default_value_t = 0)]
        parallel: usize,
    },
    /// Print a per-algorithm table from a results CSV.
    Report {
        #[arg(long)]
        results: PathBuf,
    },
}

fn verbose() -> bool {
    std::env::var(VERBOSE_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn exit_code(err: &MarketError) -> u8 {
    match err {
        MarketError::CapExceeded { .. } => 4,
        _ => 3,
    }
}

fn gen(
    n: usize,
    k: Option<usize>,
    kind: ProfileKind,
    seed: u64,
    scale: f64,
    out: Option<PathBuf>,
) -> matchbandit::Result<()> {
    let inst = generate(kind, n, k.unwrap_or(n), seed)?.scaled(scale)?;
    match out {
        Some(path) => inst.write(path),
        None => {
            println!("{}", inst.to_json());
            Ok(())
        }
    }
}

/// `stable_count=.. agent_optimal=.. arm_optimal=.. es_opt=.. es_pess=.. delta=.. spc=.. alpha=..`
///
/// Matchings print as 1-based `(agent,arm)` pairs joined by `;`; `delta=-` when undefined.
fn oracle_line(inst: &MarketInstance) -> matchbandit::Result<String> {
    let stable = enumerate_stable(inst, DEFAULT_ENUMERATION_CAP)?;
    let top = da_match(inst, Side::AgentProposing);
    let bottom = da_match(inst, Side::ArmProposing);
    let delta = match min_gap(inst) {
        Ok(d) => d.to_string(),
        Err(MarketError::GapUndefined) => "-".into(),
        Err(e) => return Err(e),
    };
    Ok(format!(
        "stable_count={} agent_optimal={} arm_optimal={} es_opt={} es_pess={} delta={} spc={} alpha={}",
        stable.len(),
        top,
        bottom,
        envy_set(inst, &top).len(),
        envy_set(inst, &bottom).len(),
        delta,
        check_spc(inst).is_some(),
        check_alpha(inst, DEFAULT_ENUMERATION_CAP)?,
    ))
}

fn run(config: PathBuf, out: PathBuf, parallel: usize) -> matchbandit::Result<()> {
    let cfg = ExperimentConfig::read(&config)?;
    let start = Instant::now();
    let agg = run_experiment(&cfg, Parallelism(parallel))?;
    write_results(&agg, &out)?;
    if verbose() {
        eprintln!(
            "{} trials x {} budgets in {:.1}s -> {}",
            cfg.trials,
            cfg.budgets.len(),
            start.elapsed().as_secs_f64(),
            out.display()
        );
    }
    Ok(())
}

fn report(results: PathBuf) -> matchbandit::Result<()> {
    let mut agg = read_results(&results)?;
    agg.rows
        .sort_by(|a, b| (a.algorithm.as_str(), a.budget).cmp(&(b.algorithm.as_str(), b.budget)));
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<18} {:>8} {:>6} {:>22} {:>10} {:>10} {:>10} {:>10} {:>12}",
        "algorithm", "budget", "trials", "stability [95% CI]", "avg_opt", "max_opt", "avg_pess", "max_pess", "pulls"
    )?;
    for r in &agg.rows {
        writeln!(
            out,
            "{:<18} {:>8} {:>6} {:>22} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>12.1}",
            r.algorithm,
            r.budget,
            r.trials,
            format!("{:.3} [{:.3},{:.3}]", r.stability.mean, r.stability.lo, r.stability.hi),
            r.avg_regret_opt.mean,
            r.max_regret_opt.mean,
            r.avg_regret_pess.mean,
            r.max_regret_pess.mean,
            r.mean_total_pulls,
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            n,
            k,
            kind,
            seed,
            scale,
            out,
        } => gen(n, k, kind, seed, scale, out),
        Command::Oracle { instance } => MarketInstance::read(&instance)
            .and_then(|inst| oracle_line(&inst))
            .map(|line| println!("{line}")),
        Command::Run { config, out, parallel } => run(config, out, parallel),
        Command::Report { results } => report(results),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
