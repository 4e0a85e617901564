//! Design a fractionally spaced DFE from a channel estimate and run it
//! decision-directed over noisy data.

use fsdfe::channel::{sparse_channel, transmit};
use fsdfe::dfe::{design_from_channel, equalize, symbol_error_count, DfeConfig, EqualizerMode};
use fsdfe::signals::{gen_symbols, Pulse, RandomSource};

fn main() -> fsdfe::Result<()> {
    let cfg = DfeConfig::default();
    let h = sparse_channel(&[1, 4], &[1.0, 0.5], 7, 0.5)?;
    // Symbol-to-sample response: NRZ pulse followed by the channel.
    let response = h.convolve(&Pulse::Hold.shape(cfg.oversampling));
    let coeffs = design_from_channel(&response, 0.1, cfg)?;
    println!("feedforward {:.4?}", coeffs.feedforward());
    println!("feedback    {:.4?}", coeffs.feedback());

    let symbols = gen_symbols(10_000, &mut RandomSource::with_stream(5, 0));
    let x = Pulse::Hold.apply(&symbols, cfg.oversampling)?;
    for noise in [0.0, 0.1, 0.3] {
        let y = transmit(&h, &x, noise, &mut RandomSource::with_stream(5, 1))?;
        let out = equalize(&coeffs, &y, None, EqualizerMode::DecisionDirected)?;
        let errors = symbol_error_count(&out.decisions, &symbols, cfg.feedback)?;
        println!(
            "noise {noise:.1}: {errors} errors in {} symbols",
            symbols.len()
        );
    }
    Ok(())
}
