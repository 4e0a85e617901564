//! One complete run from a config file, with CSV tables and SVG plots.
//!
//!     cargo run --release --example full_run -- crates/core/configs/sparse.toml out/run

use std::path::PathBuf;

use fsdfe::harness::{export, plot, run_experiment, ExperimentConfig};

fn main() -> fsdfe::Result<()> {
    let mut args = std::env::args().skip(1);
    let cfg = match args.next() {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/run".into()));

    let r = run_experiment(&cfg)?;
    let mut files = export::export_run(&r, &out)?;
    files.extend(plot::emit_run_plots(&r, &out)?);
    for f in &files {
        println!("wrote {}", f.display());
    }
    println!("estimate      {:.4?}", r.estimate.taps());
    println!("active taps   {}", r.estimate.active_count());
    println!("asymptote     {:.3e}", r.asymptotic_mse);
    match r.convergence_iteration {
        Some(i) => println!("converged at  {i}"),
        None => println!("did not converge"),
    }
    println!(
        "symbol errors {} (burst {})",
        r.symbol_errors, r.burst_length
    );
    Ok(())
}
