//! Cosine-squared channel: time and frequency response, nulls, and the
//! tapped-delay-line model sampled at T/2.
//!
//!     cargo run --example channel_response -- 1.5

use fsdfe::channel::{discretize, frequency_response, ContinuousOpticalChannel};

fn main() -> fsdfe::Result<()> {
    let tau: f64 = std::env::args()
        .nth(1)
        .map_or(1.5, |s| s.parse().expect("tau must be a number"));
    let ch = ContinuousOpticalChannel::new(tau)?;

    println!("impulse response, tau = {tau}");
    for i in -4..=4 {
        let t = i as f64 * tau / 8.0;
        println!("  h({t:+.4}) = {:.6}", ch.impulse_response(t));
    }

    println!("frequency response");
    for i in 0..=8 {
        let f = i as f64 * 0.5 / tau;
        println!("  H({f:.4}) = {:+.3e}", ch.frequency_response(f));
    }
    let nulls: Vec<String> = (2..=5)
        .map(|n| {
            format!(
                "{:.1e}",
                frequency_response(n as f64 / tau, tau).unwrap_or(f64::NAN)
            )
        })
        .collect();
    println!("  at n/tau for n = 2..5: {}", nulls.join(", "));

    let taps = discretize(tau, 0.5, tau)?;
    println!("sampled at T/2: {:?}", taps.taps());
    println!("tap energy {:.4}", taps.energy());
    Ok(())
}
