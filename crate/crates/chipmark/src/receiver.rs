//! Authentication statistics: difference/sum matched filters over stored
//! sample blocks, per-epoch statistics, `W`-averaging, and the threshold
//! decision.
//!
//! Raw samples are reduced to two 8-byte statistics per epoch at the
//! earliest correct point; nothing downstream needs the blocks again.

use crate::channel::{resample, RadioModel, SampleBlock};
use crate::error::Result;
use crate::watermark::{apply_watermark, RangingCode, WatermarkMask, WatermarkParams};

/// Decision threshold on `Y` separating authentic from spoofed.
pub const DEFAULT_THRESHOLD: f64 = 1.0;

/// Matched-filter kernels for one `(code, mask)` pair.
///
/// `delta` is the watermarked-minus-plain replica and responds only at
/// inverted chips; `sigma` is the watermarked-plus-plain replica and
/// responds only at untouched chips. Their supports are disjoint by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorKernels {
    delta: Vec<f64>,
    sigma: Vec<f64>,
    gain_delta: f64,
    gain_sigma: f64,
}

impl CorrelatorKernels {
    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Gain applied to the difference filter, `(1/2r)(n/FT)(1/P)`.
    pub fn gain_delta(&self) -> f64 {
        self.gain_delta
    }

    /// Gain applied to the sum filter, `(1/2(n-r))(n/FT)(1/P)`.
    pub fn gain_sigma(&self) -> f64 {
        self.gain_sigma
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }
}

/// Builds the difference and sum kernels with their gains.
pub fn build_kernels(
    code: &RangingCode,
    mask: &WatermarkMask,
    radio: &RadioModel,
    params: &WatermarkParams,
) -> Result<CorrelatorKernels> {
    assert_eq!(
        code.len(),
        params.chips_per_code(),
        "code length does not match the watermark design"
    );
    assert_eq!(
        mask.len(),
        params.inverted_chips(),
        "mask cardinality does not match the watermark design"
    );
    let watermarked = resample(&apply_watermark(code, mask), radio)?;
    let plain = resample(code, radio)?;
    let delta: Vec<f64> = watermarked
        .samples()
        .iter()
        .zip(plain.samples())
        .map(|(w, p)| w - p)
        .collect();
    let sigma: Vec<f64> = watermarked
        .samples()
        .iter()
        .zip(plain.samples())
        .map(|(w, p)| w + p)
        .collect();
    let n = params.chips_per_code() as f64;
    let r = params.inverted_chips() as f64;
    let ft = radio.samples_per_code()? as f64;
    let p = radio.signal_power();
    Ok(CorrelatorKernels {
        delta,
        sigma,
        gain_delta: (1.0 / (2.0 * r)) * (n / ft) * (1.0 / p),
        gain_sigma: (1.0 / (2.0 * (n - r))) * (n / ft) * (1.0 / p),
    })
}

/// The pair of filter outputs for a single code period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStatistic {
    pub y_delta: f64,
    pub y_sigma: f64,
    pub epoch: u64,
}

/// Correlates one stored block against both kernels.
pub fn epoch_statistics(block: &SampleBlock, kernels: &CorrelatorKernels) -> EpochStatistic {
    assert_eq!(
        block.len(),
        kernels.len(),
        "sample block length does not match the kernels"
    );
    let mut acc_delta = 0.0f64;
    let mut acc_sigma = 0.0f64;
    for ((&x, &d), &s) in block
        .samples()
        .iter()
        .zip(&kernels.delta)
        .zip(&kernels.sigma)
    {
        acc_delta += x * d;
        acc_sigma += x * s;
    }
    let stat = EpochStatistic {
        y_delta: kernels.gain_delta * acc_delta,
        y_sigma: kernels.gain_sigma * acc_sigma,
        epoch: block.epoch(),
    };
    debug_assert!(
        stat.y_delta.is_finite() && stat.y_sigma.is_finite(),
        "non-finite epoch statistic at epoch {}",
        stat.epoch
    );
    stat
}

/// `W`-averaged statistics forming one authentication decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionStatistic {
    y_delta: f64,
    y_sigma: f64,
    w_used: usize,
}

impl DecisionStatistic {
    pub fn y_delta(&self) -> f64 {
        self.y_delta
    }

    pub fn y_sigma(&self) -> f64 {
        self.y_sigma
    }

    /// The decision statistic, exactly `y_delta + y_sigma`.
    pub fn y(&self) -> f64 {
        self.y_delta + self.y_sigma
    }

    /// Number of epochs averaged into this decision.
    pub fn w_used(&self) -> usize {
        self.w_used
    }
}

/// Averages exactly `codes_per_decision` epoch statistics.
///
/// Panics on any other count: a partial window yields no decision, since
/// the security level is defined only at the full aggregation length.
pub fn aggregate(stats: &[EpochStatistic], codes_per_decision: usize) -> DecisionStatistic {
    assert!(
        codes_per_decision > 0,
        "aggregation window must be positive"
    );
    assert_eq!(
        stats.len(),
        codes_per_decision,
        "expected exactly {codes_per_decision} epoch statistics, got {}",
        stats.len()
    );
    let w = stats.len() as f64;
    DecisionStatistic {
        y_delta: stats.iter().map(|s| s.y_delta).sum::<f64>() / w,
        y_sigma: stats.iter().map(|s| s.y_sigma).sum::<f64>() / w,
        w_used: stats.len(),
    }
}

/// The authenticity verdict for one decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Authentic,
    Spoofed,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Authentic => f.write_str("authentic"),
            Verdict::Spoofed => f.write_str("spoofed"),
        }
    }
}

/// Authentic iff `Y` strictly exceeds the threshold; the boundary itself
/// alarms, so the false-alarm region is exactly `Y <= threshold`.
pub fn decide(decision: &DecisionStatistic, threshold: f64) -> Verdict {
    if decision.y() > threshold {
        Verdict::Authentic
    } else {
        Verdict::Spoofed
    }
}
