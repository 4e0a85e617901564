//! Adaptive equalization for dispersive channels.
//!
//! The crate follows the indirect equalization route: a training sequence is
//! used to identify the channel with LMS, optionally restricted to the taps an
//! activity detector flags as active, and a fractionally-spaced
//! decision-feedback equalizer is then designed from the channel estimate.
//!
//! * [`signals`]: seeded symbol and noise generation, rate conversion.
//! * [`channel`]: cosine-squared pulse model, sparse tapped channels, transmission.
//! * [`lms`]: LMS channel identification with optional active-tap masks.
//! * [`adg`]: activity measures, thresholds and tap decoupling.
//! * [`dfe`]: equalizer design from a channel estimate and symbol detection.
//! * [`harness`]: experiment runner, metrics, CSV/SVG export.

pub mod adg;
pub mod channel;
pub mod dfe;
mod error;
pub mod harness;
pub mod lms;
pub mod signals;

pub use error::{Error, Result};
