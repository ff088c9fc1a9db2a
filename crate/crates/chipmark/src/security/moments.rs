//! Closed-form statistic distributions: forger-overlap support maps, CLT
//! moments under spoofing, the authentic decision distribution, and the
//! false-alarm probability.

use crate::channel::{AdversaryStrategy, RadioModel};
use crate::security::normal::GaussianSpec;
use crate::watermark::WatermarkParams;

/// Maps an overlap count `h` onto the difference statistic:
/// `(4h - 2r) / (2r)`. Affine, so real-valued `h` (averages) are fine.
pub fn g_delta(h: f64, params: &WatermarkParams) -> f64 {
    let r = params.inverted_chips() as f64;
    (4.0 * h - 2.0 * r) / (2.0 * r)
}

/// Maps an overlap count `h` onto the sum statistic for strategy `s`:
/// `(2n - 2r - 4s + 4h) / (2(n - r))`.
pub fn g_sigma(h: f64, strategy: AdversaryStrategy, params: &WatermarkParams) -> f64 {
    let n = params.chips_per_code() as f64;
    let r = params.inverted_chips() as f64;
    let s = strategy.inverted_chips() as f64;
    (2.0 * n - 2.0 * r - 4.0 * s + 4.0 * h) / (2.0 * (n - r))
}

/// First and second moments of the `W`-averaged statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltMoments {
    pub mean_delta: f64,
    pub mean_sigma: f64,
    pub var_delta: f64,
    pub var_sigma: f64,
}

impl CltMoments {
    /// Mean of the decision statistic `Y`.
    pub fn mean_y(&self) -> f64 {
        self.mean_delta + self.mean_sigma
    }

    /// Variance of `Y` with the (negligible) cross-covariance dropped.
    pub fn var_y(&self) -> f64 {
        self.var_delta + self.var_sigma
    }
}

/// Noise-only variance of one `W`-averaged filter output:
/// `(1/W) (1/k) (n/FT) (sigma^2/P)` where `k` counts the chips the
/// filter responds to.
fn filter_noise_var(chips: f64, params: &WatermarkParams, radio: &RadioModel) -> f64 {
    let n = params.chips_per_code() as f64;
    let w = params.codes_per_decision() as f64;
    let ft = radio.sample_rate_hz() * radio.code_duration_s();
    (1.0 / w) * (1.0 / chips) * (n / ft) * (radio.sigma2() / radio.signal_power())
}

/// Moments of `(Y_delta, Y_sigma)` under a random-inversion spoof with strategy
/// `s`. The means always cancel: the decision statistic is zero-mean
/// under spoofing for every `s`.
pub fn clt_moments(
    params: &WatermarkParams,
    radio: &RadioModel,
    strategy: AdversaryStrategy,
) -> CltMoments {
    let n = params.chips_per_code() as f64;
    let r = params.inverted_chips() as f64;
    let w = params.codes_per_decision() as f64;
    let s = strategy.inverted_chips() as f64;

    let mean_delta = 2.0 * s / n - 1.0;
    let mean_sigma = 1.0 - 2.0 * s / (n - r) + 2.0 * s * r / ((n - r) * n);

    // hypergeometric spread of the guessed-overlap count
    let overlap_factor = (s / n) * ((n - s) / (n - 1.0));
    let hyper_delta = (1.0 / w) * (4.0 / r) * overlap_factor * ((n - r) / n);
    let hyper_sigma = (1.0 / w) * (4.0 / (n - r)) * overlap_factor * (r / n);

    CltMoments {
        mean_delta,
        mean_sigma,
        var_delta: hyper_delta + filter_noise_var(r, params, radio),
        var_sigma: hyper_sigma + filter_noise_var(n - r, params, radio),
    }
}

/// Moments of `(Y_delta, Y_sigma)` for the authentic signal: means are
/// one and the hypergeometric terms vanish.
pub fn authentic_moments(params: &WatermarkParams, radio: &RadioModel) -> CltMoments {
    let n = params.chips_per_code() as f64;
    let r = params.inverted_chips() as f64;
    CltMoments {
        mean_delta: 1.0,
        mean_sigma: 1.0,
        var_delta: filter_noise_var(r, params, radio),
        var_sigma: filter_noise_var(n - r, params, radio),
    }
}

/// The noise component of the decision statistic, `N(0, (1/W)(1/r +
/// 1/(n-r))(n/FT)(sigma^2/P))`.
pub fn decision_noise(params: &WatermarkParams, radio: &RadioModel) -> GaussianSpec {
    let n = params.chips_per_code() as f64;
    let r = params.inverted_chips() as f64;
    GaussianSpec::new(
        0.0,
        filter_noise_var(r, params, radio) + filter_noise_var(n - r, params, radio),
    )
}

/// Distribution of `Y` under authentic conditions: mean two, noise-only
/// variance.
pub fn authentic_distribution(params: &WatermarkParams, radio: &RadioModel) -> GaussianSpec {
    GaussianSpec::new(2.0, decision_noise(params, radio).variance())
}

/// Probability of false alarm: the authentic lower tail at the decision
/// threshold, `Pr(Y <= threshold | authentic)`.
pub fn pfa(params: &WatermarkParams, radio: &RadioModel, threshold: f64) -> f64 {
    authentic_distribution(params, radio).cdf(threshold)
}

/// CLT approximation of the missed-detection probability for one
/// strategy: upper tail of `N(0, var_delta + var_sigma)` at the
/// threshold.
pub fn clt_pmd(
    params: &WatermarkParams,
    radio: &RadioModel,
    strategy: AdversaryStrategy,
    threshold: f64,
) -> f64 {
    let moments = clt_moments(params, radio, strategy);
    GaussianSpec::new(moments.mean_y(), moments.var_y()).upper_tail(threshold)
}
