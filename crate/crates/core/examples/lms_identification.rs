//! Plain LMS identification of the sparse seven-tap channel, with and
//! without knowing which taps are active.

use fsdfe::channel::{sparse_channel, transmit};
use fsdfe::lms::{Identification, LmsFilter};
use fsdfe::signals::{gen_symbols, Pulse, RandomSource};

fn main() -> fsdfe::Result<()> {
    let h = sparse_channel(&[1, 4], &[1.0, 0.5], 7, 0.5)?;
    let symbols = gen_symbols(2000, &mut RandomSource::with_stream(7, 0));
    let x = Pulse::Hold.apply(&symbols, 2)?;
    let u = transmit(&h, &x, 0.1, &mut RandomSource::with_stream(7, 1))?;

    let mut plain = LmsFilter::new(7, 0.005)?;
    let t = Identification::new(&x, &u)
        .truth(h.taps())
        .run(&mut plain)?;

    let mut masked = LmsFilter::new(7, 0.005)?;
    masked.set_active_mask(h.active_mask().to_vec())?;
    let tm = Identification::new(&x, &u)
        .truth(h.taps())
        .run(&mut masked)?;

    println!(
        "{:>5} {:>8} {:>10} {:>10}",
        "tap", "true", "all taps", "masked"
    );
    for k in 0..7 {
        println!(
            "{k:>5} {:>8.3} {:>10.4} {:>10.4}",
            h.taps()[k],
            plain.weights()[k],
            masked.weights()[k]
        );
    }
    let tail = |e: &[f64]| e[e.len() - 400..].iter().sum::<f64>() / 400.0;
    println!(
        "tail |w - h|^2: all taps {:.2e}, masked {:.2e}",
        tail(t.estimate_errors.as_deref().unwrap()),
        tail(tm.estimate_errors.as_deref().unwrap())
    );
    Ok(())
}
