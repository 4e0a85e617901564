//! Exit criteria for the simulator. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

mod common;

use std::fs;
use std::process::Command;

use fsdfe::channel::{discretize, frequency_response, impulse_response, transmit};
use fsdfe::harness::{compare_variants, run_experiment, Comparison, Variant};
use fsdfe::lms::{identify_channel, LmsFilter};
use fsdfe::signals::{gen_symbols, RandomSource};

use common::{batch_least_squares, distance, simpson, sparse_scenario};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn channel_fidelity() -> Outcome {
    let mut worst_area = 0.0f64;
    let mut worst_null = 0.0f64;
    let mut worst_dft = 0.0f64;
    for tau in [0.5, 1.0, 1.5, 4.0] {
        let area = simpson(
            |t| impulse_response(t, tau).unwrap(),
            -tau / 2.0,
            tau / 2.0,
            4000,
        );
        worst_area = worst_area.max((area - 1.0).abs());
        for n in 2..=10 {
            for sign in [-1.0, 1.0] {
                let h = frequency_response(sign * n as f64 / tau, tau).unwrap();
                worst_null = worst_null.max(h.abs());
            }
        }
        let ch = discretize(tau, tau / 8.0, tau).unwrap();
        let center = (ch.len() - 1) as f64 / 2.0;
        for i in 0..=600 {
            let ft = -3.0 + 6.0 * i as f64 / 600.0;
            if ft.abs() >= 3.0 {
                continue;
            }
            let (re, im) = ch.dtft(ft / tau, center);
            let h = frequency_response(ft / tau, tau).unwrap();
            // Relative to the peak response |H(0)| = 1.
            worst_dft = worst_dft.max((re - h).abs().max(im.abs()));
        }
    }
    outcome(
        worst_area <= 1e-6 && worst_null <= 1e-12 && worst_dft <= 1e-2,
        format!("area err {worst_area:.2e} (<=1e-6), null max {worst_null:.2e} (<=1e-12), DFT err {worst_dft:.2e} (<=1e-2)"),
    )
}

fn lms_matches_least_squares() -> Outcome {
    let cfg = sparse_scenario();
    let h = cfg.true_channel().unwrap();
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let symbols = gen_symbols(
            cfg.training_length / 2,
            &mut RandomSource::with_stream(seed, 0),
        );
        let x = cfg.pulse.apply(&symbols, cfg.oversampling).unwrap();
        let u = transmit(
            &h,
            &x,
            cfg.noise_variance,
            &mut RandomSource::with_stream(seed, 1),
        )
        .unwrap();
        let mut f = LmsFilter::new(h.len(), cfg.step_size).unwrap();
        identify_channel(&x, &u, &mut f, 100).unwrap();
        let ls = batch_least_squares(&x, &u, h.len());
        worst = worst.max(distance(f.weights(), &ls));
    }
    outcome(
        worst < 0.1,
        format!("max |w_lms - w_ls| over 20 seeds = {worst:.4} (<0.1)"),
    )
}

fn asymptotic_performance(cmp: &Comparison) -> Outcome {
    // The seed-averaged tail is the Monte Carlo estimate of the asymptote.
    // A single run's tail spans about two step-size time constants, so its
    // spread is reported but not banded.
    let band = 2e-4..=5e-3;
    let base = sparse_scenario();
    let mut parts = Vec::new();
    let mut pass = true;
    for v in [Variant::Adg, Variant::AdgTd] {
        let mean = cmp.summary(v).unwrap().mean_asymptotic_mse;
        let single = run_experiment(&fsdfe::harness::ExperimentConfig {
            variant: v,
            ..base.clone()
        })
        .unwrap()
        .asymptotic_mse;
        let vals: Vec<f64> = cmp
            .rows
            .iter()
            .filter(|r| r.variant == v)
            .map(|r| r.asymptotic_mse)
            .collect();
        let inside = vals.iter().filter(|&&x| band.contains(&x)).count();
        pass &= band.contains(&mean) && band.contains(&single);
        parts.push(format!(
            "{v}: mean {mean:.2e}, seed {} {single:.2e} ({inside}/{} runs in band)",
            base.seed,
            vals.len()
        ));
    }
    outcome(
        pass,
        format!("tail MSE in [2e-4, 5e-3]: {}", parts.join("; ")),
    )
}

fn convergence_speedup(cmp: &Comparison) -> Outcome {
    let adg = cmp.summary(Variant::Adg).unwrap();
    let td = cmp.summary(Variant::AdgTd).unwrap();
    let ratio = adg.mean_convergence_iter / td.mean_convergence_iter;
    outcome(
        (1.5..=3.0).contains(&ratio),
        format!(
            "mean convergence adg {:.1} / adg_td {:.1} = {ratio:.3} (in [1.5, 3.0], {} seeds)",
            adg.mean_convergence_iter, td.mean_convergence_iter, td.runs
        ),
    )
}

fn active_set_recovery() -> Outcome {
    let base = sparse_scenario();
    let truth_mask = base.true_channel().unwrap().active_mask().to_vec();
    let mut exact = 0;
    let mut pinned = true;
    for seed in 0..100u64 {
        let cfg = fsdfe::harness::ExperimentConfig {
            variant: Variant::AdgTd,
            seed,
            ..base.clone()
        };
        let r = run_experiment(&cfg).unwrap();
        // Mask in force after N = 2000 tracker updates.
        let at_2000 = r
            .classifications
            .iter()
            .rev()
            .find(|(n, _)| *n <= 2000)
            .map(|&(_, c)| c);
        let mask_ok = r.estimate.active_mask() == truth_mask.as_slice();
        if at_2000 == Some(2) && r.trajectory.active_counts[1999] == 2 && mask_ok {
            exact += 1;
        }
        pinned &= r
            .estimate
            .taps()
            .iter()
            .zip(r.estimate.active_mask())
            .all(|(&w, &a)| a || w.to_bits() == 0);
    }
    outcome(
        exact >= 95 && pinned,
        format!("exact 2-tap recovery at N=2000 in {exact}/100 runs (>=95); inactive taps exactly 0: {pinned}"),
    )
}

fn equalizer_correctness() -> Outcome {
    let base = sparse_scenario();
    let mut clean_errors = 0;
    let mut worst_ser = 0.0f64;
    for seed in 0..20u64 {
        let cfg = fsdfe::harness::ExperimentConfig {
            variant: Variant::AdgTd,
            seed,
            noise_variance: 0.0,
            ..base.clone()
        };
        clean_errors += run_experiment(&cfg).unwrap().symbol_errors;
        let noisy = fsdfe::harness::ExperimentConfig {
            noise_variance: 0.1,
            ..cfg
        };
        worst_ser = worst_ser.max(run_experiment(&noisy).unwrap().symbol_error_rate());
    }
    outcome(
        clean_errors == 0 && worst_ser <= 1e-3,
        format!("noise-free errors after skip over 20x1e4 symbols = {clean_errors} (=0); worst SER at noise 0.1 = {worst_ser:.2e} (<=1e-3)"),
    )
}

fn variant_ordering(cmp: &Comparison) -> Outcome {
    let s = |v| cmp.summary(v).unwrap();
    let (p, a, t) = (s(Variant::Plain), s(Variant::Adg), s(Variant::AdgTd));
    let mse_ok = t.mean_asymptotic_mse <= a.mean_asymptotic_mse
        && a.mean_asymptotic_mse <= p.mean_asymptotic_mse;
    let conv_ok = t.mean_convergence_iter <= a.mean_convergence_iter
        && a.mean_convergence_iter <= p.mean_convergence_iter;
    outcome(
        mse_ok && conv_ok,
        format!(
            "mean MSE td {:.2e} <= adg {:.2e} <= plain {:.2e}; mean convergence td {:.1} <= adg {:.1} <= plain {:.1}",
            t.mean_asymptotic_mse,
            a.mean_asymptotic_mse,
            p.mean_asymptotic_mse,
            t.mean_convergence_iter,
            a.mean_convergence_iter,
            p.mean_convergence_iter
        ),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, sparse_scenario().to_toml_string()).unwrap();
    let run = |out: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_fsdfe"))
            .args(["run", "--config"])
            .arg(&cfg)
            .args(["--seed", "17", "--out"])
            .arg(dir.path().join(out))
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
    };
    run("a");
    run("b");
    let files = [
        "learning_curve.csv",
        "taps.csv",
        "active_count.csv",
        "equalizer_output.csv",
    ];
    let identical = files.iter().all(|f| {
        fs::read(dir.path().join("a").join(f)).unwrap()
            == fs::read(dir.path().join("b").join(f)).unwrap()
    });
    outcome(
        identical,
        format!(
            "{} CSV files byte-identical across two runs: {identical}",
            files.len()
        ),
    )
}

fn main() {
    let seeds: Vec<u64> = (0..50).collect();
    let cmp = compare_variants(&sparse_scenario(), &seeds).expect("comparison runs");

    let results = [
        ("1 channel model fidelity", channel_fidelity()),
        ("2 LMS vs batch least squares", lms_matches_least_squares()),
        ("3 asymptotic performance", asymptotic_performance(&cmp)),
        ("4 convergence speedup", convergence_speedup(&cmp)),
        ("5 active-set recovery", active_set_recovery()),
        ("6 equalizer correctness", equalizer_correctness()),
        ("7 variant ordering", variant_ordering(&cmp)),
        ("8 determinism", cli_determinism()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "[{}] criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
