//! Active-tap count over time for the plain and the tap-decoupled activity
//! measure on the same data.

use fsdfe::adg::{ActivityGate, ActivityTracker, MeasureMode};
use fsdfe::channel::{sparse_channel, transmit};
use fsdfe::lms::{Identification, LmsFilter};
use fsdfe::signals::{gen_symbols, Pulse, RandomSource};

fn main() -> fsdfe::Result<()> {
    let h = sparse_channel(&[1, 4], &[1.0, 0.5], 7, 0.5)?;
    let symbols = gen_symbols(2000, &mut RandomSource::with_stream(3, 0));
    let x = Pulse::Hold.apply(&symbols, 2)?;
    let u = transmit(&h, &x, 0.1, &mut RandomSource::with_stream(3, 1))?;

    for mode in [MeasureMode::Plain, MeasureMode::Decoupled] {
        let tracker = ActivityTracker::new(7, mode, 4.0)?;
        let mut gate = ActivityGate::new(tracker, 50, 3)?;
        let mut filter = LmsFilter::new(7, 0.005)?;
        Identification::new(&x, &u).run_guided(&mut filter, &mut gate)?;

        let counts: Vec<String> = gate
            .history()
            .iter()
            .step_by(8)
            .map(|(n, c)| format!("{n}:{c}"))
            .collect();
        println!("{mode:?}");
        println!("  count by N  {}", counts.join(" "));
        println!("  final mask  {:?}", gate.mask());
        let measures: Vec<String> = (0..7)
            .map(|k| format!("{:.1e}", gate.tracker().measure(k).unwrap_or(0.0)))
            .collect();
        println!("  measures    {}", measures.join(" "));
        println!("  threshold   {:.1e}", gate.tracker().activity_threshold()?);
    }
    println!("true mask     {:?}", h.active_mask());
    Ok(())
}
