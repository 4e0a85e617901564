use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fsdfe::harness::{compare_variants, export, plot, run_experiment, sweep, ExperimentConfig};

#[derive(Parser)]
#[command(
    version,
    about = "Activity-guided LMS channel identification and FS-DFE simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV tables and plots.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run every variant over a range of seeds.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Inclusive seed range, e.g. `1..20`.
        #[arg(long, value_parser = parse_seeds)]
        seeds: RangeInclusive<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tabulate the cosine-squared impulse and frequency responses.
    Channel {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        spacing: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-run one configuration with a single key varied.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        vary: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty seed range {s}"));
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn announce(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn execute(cmd: Command) -> fsdfe::Result<()> {
    match cmd {
        Command::Run { config, seed, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let r = run_experiment(&cfg)?;
            announce(&export::export_run(&r, &out)?);
            announce(&plot::emit_run_plots(&r, &out)?);
            println!(
                "variant={} seed={} asymptotic_mse={:e} convergence_iter={} active_taps={} symbol_errors={} burst={}",
                cfg.variant,
                cfg.seed,
                r.asymptotic_mse,
                r.convergence_iteration
                    .map_or_else(|| "none".to_string(), |i| i.to_string()),
                r.estimate.active_count(),
                r.symbol_errors,
                r.burst_length,
            );
        }
        Command::Compare { config, seeds, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let seeds: Vec<u64> = seeds.collect();
            let cmp = compare_variants(&cfg, &seeds)?;
            export::ensure_dir(&out)?;
            let paths = [
                out.join("compare.csv"),
                out.join("compare_summary.csv"),
                out.join("compare.svg"),
            ];
            export::export_comparison(&cmp.rows, &paths[0])?;
            export::export_summary(&cmp.summaries, &paths[1])?;
            plot::emit_comparison_plot(&cmp, &paths[2])?;
            announce(&paths);
            for s in &cmp.summaries {
                println!(
                    "{:>7}: mean_convergence_iter={:.1} mean_asymptotic_mse={:e} mean_symbol_errors={:.2} not_converged={}",
                    s.variant.as_str(),
                    s.mean_convergence_iter,
                    s.mean_asymptotic_mse,
                    s.mean_symbol_errors,
                    s.not_converged
                );
            }
        }
        Command::Channel { tau, spacing, out } => {
            announce(&export::export_channel_tables(tau, spacing, &out)?);
            let (ir, fr) = export::channel_tables(tau, spacing)?;
            announce(&plot::emit_channel_plots(&ir, &fr, &out)?);
        }
        Command::Sweep {
            config,
            vary,
            values,
            out,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = sweep(&cfg, &vary, &values)?;
            export::ensure_dir(&out)?;
            let path = Path::new(&out).join("sweep.csv");
            export::export_sweep(&rows, &path)?;
            announce(&[path]);
        }
    }
    Ok(())
}
