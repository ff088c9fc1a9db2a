//! Combinatorial chip-inversion watermarking for spread-spectrum ranging codes.
//!
//! A ranging code of `n` binary chips is watermarked by inverting `r`
//! secretly chosen chips per code period. A receiver that learns the
//! inverted positions after the fact correlates its stored baseband
//! samples against the difference and sum of the watermarked and plain
//! replicas, averages the two statistics over `W` consecutive codes, and
//! accepts the signal as authentic when their sum exceeds a threshold.
//! A forger that cannot predict the inverted positions must guess, and
//! the number of correct guesses is hypergeometric, which makes both
//! error probabilities of the test exactly computable.
//!
//! The crate is organised around that pipeline:
//!
//! * [`watermark`] — base-code generation, keyed mask derivation, chip
//!   inversion, and the induced correlation loss;
//! * [`channel`] — rectangular-pulse resampling, AWGN at a configured
//!   C/N0, and the random-inversion forger;
//! * [`receiver`] — difference/sum matched filters, per-epoch statistics,
//!   `W`-averaging, and the threshold decision;
//! * [`security`] — closed-form false-alarm probability and the exact
//!   missed-detection probability over every forger strategy, computed by
//!   FFT self-convolution of the hypergeometric mass function;
//! * [`harness`] — reproducible simulation campaigns and the CSV/text
//!   export formats consumed by plotting tools.

pub mod channel;
pub mod error;
pub mod harness;
pub mod receiver;
pub mod rng;
pub mod security;
pub mod stats;
pub mod watermark;

pub use channel::{AdversaryStrategy, RadioModel, SampleBlock};
pub use error::{Error, Result};
pub use harness::{CampaignConfig, CampaignResult, Cn0Profile, Ellipse};
pub use receiver::{CorrelatorKernels, DecisionStatistic, EpochStatistic, Verdict};
pub use rng::{SeedTree, StreamId};
pub use security::{CltMoments, GaussianSpec, PmdCurve, Pmf};
pub use watermark::{RangingCode, Seed, WatermarkMask, WatermarkParams};
