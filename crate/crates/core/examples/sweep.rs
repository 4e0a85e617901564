//! Effect of the LMS step size on convergence and asymptote.

use fsdfe::harness::{sweep, ExperimentConfig};

fn main() -> fsdfe::Result<()> {
    let values: Vec<String> = ["0.001", "0.002", "0.005", "0.01", "0.02"]
        .map(String::from)
        .to_vec();
    let rows = sweep(&ExperimentConfig::default(), "step_size", &values)?;
    for r in rows {
        let conv = r.convergence_iter.map_or("-".into(), |i| i.to_string());
        println!(
            "step_size {:>6}: convergence {conv:>5}, asymptote {:.2e}, errors {}",
            r.value, r.asymptotic_mse, r.symbol_errors
        );
    }
    Ok(())
}
