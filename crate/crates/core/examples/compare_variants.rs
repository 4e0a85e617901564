//! Plain, activity-guided and tap-decoupled LMS over a batch of seeds.

use fsdfe::harness::{compare_variants, ExperimentConfig};

fn main() -> fsdfe::Result<()> {
    let seeds: Vec<u64> = (1..=20).collect();
    let cmp = compare_variants(&ExperimentConfig::default(), &seeds)?;
    println!(
        "{:>7} {:>12} {:>12} {:>8}",
        "variant", "convergence", "asymptote", "errors"
    );
    for s in &cmp.summaries {
        println!(
            "{:>7} {:>12.1} {:>12.3e} {:>8.2}",
            s.variant.as_str(),
            s.mean_convergence_iter,
            s.mean_asymptotic_mse,
            s.mean_symbol_errors
        );
    }
    Ok(())
}
