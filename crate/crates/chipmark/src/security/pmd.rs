//! Exact missed-detection probability.
//!
//! Conditioned on the total overlap count `h` across the `W` aggregated
//! codes, the decision statistic is Gaussian, so the exact missed
//! detection probability is a sum of Gaussian upper tails weighted by
//! the `W`-fold self-convolution of the per-code overlap distribution:
//! the convolved support is divided by `W`, pushed through the two
//! affine statistic maps, and each point contributes its probability
//! times the noise tail beyond the threshold.

use rayon::prelude::*;

use crate::channel::{AdversaryStrategy, RadioModel};
use crate::error::{Error, Result};
use crate::security::hypergeom::hypergeom_pmf;
use crate::security::moments::{clt_pmd, decision_noise, pfa};
use crate::security::pmf::convolve_power;
use crate::watermark::WatermarkParams;

/// How far the CLT approximation is trusted as a lower-bound prefilter
/// in [`min_r_search`]: a design is rejected without exact confirmation
/// only when the CLT tail already exceeds the target by this factor
/// (half an order of magnitude, the validated CLT-versus-exact
/// disagreement near the worst strategy).
const CLT_PREFILTER_MARGIN: f64 = 3.162_277_660_168_379_5;

/// Exact `Pr(Y > threshold | spoof with strategy s)`.
pub fn pmd_exact(
    params: &WatermarkParams,
    radio: &RadioModel,
    strategy: AdversaryStrategy,
    threshold: f64,
) -> Result<f64> {
    let n = params.chips_per_code();
    let r = params.inverted_chips();
    let w = params.codes_per_decision();
    if strategy.inverted_chips() > n {
        return Err(Error::config(format!(
            "strategy s={} exceeds the code length n={n}",
            strategy.inverted_chips()
        )));
    }

    let per_code = hypergeom_pmf(n, r, strategy.inverted_chips())?;
    let total_overlap = convolve_power(&per_code, w)?;

    // per-decision average overlap, then both statistic maps; all
    // affine, so only the support moves
    let nf = n as f64;
    let rf = r as f64;
    let sf = strategy.inverted_chips() as f64;
    let averaged = total_overlap.affine_map(1.0 / w as f64, 0.0);
    let statistic_sum = averaged.affine_map(2.0 / rf + 2.0 / (nf - rf), -2.0 * sf / (nf - rf));

    let noise = decision_noise(params, radio);
    let total: f64 = statistic_sum
        .iter()
        .map(|(value, prob)| prob * noise.upper_tail(threshold - value))
        .sum();
    debug_assert!(total <= 1.0 + 1e-9);
    Ok(total.min(1.0))
}

/// Missed-detection probability for every strategy `s` in `0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmdCurve {
    s_values: Vec<usize>,
    pmd: Vec<f64>,
}

impl PmdCurve {
    pub fn s_values(&self) -> &[usize] {
        &self.s_values
    }

    pub fn pmd(&self) -> &[f64] {
        &self.pmd
    }

    /// `(s, pmd)` pairs in strategy order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.s_values.iter().copied().zip(self.pmd.iter().copied())
    }

    /// The worst strategy: the `(s, pmd)` attaining the maximum.
    pub fn max(&self) -> (usize, f64) {
        self.iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("pmd values are finite"))
            .expect("curve is non-empty")
    }
}

/// Evaluates [`pmd_exact`] for every strategy, distributing strategies
/// across the rayon pool.
pub fn pmd_curve(params: &WatermarkParams, radio: &RadioModel, threshold: f64) -> Result<PmdCurve> {
    let n = params.chips_per_code();
    let pmd = (0..=n)
        .into_par_iter()
        .map(|s| pmd_exact(params, radio, AdversaryStrategy::new(s), threshold))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PmdCurve {
        s_values: (0..=n).collect(),
        pmd,
    })
}

/// Smallest `r` whose worst-case exact PMD and PFA both beat `target`,
/// or `None` when no `r < n` does.
///
/// Candidates are walked in ascending order. Each is first screened by
/// the closed-form PFA, then by the CLT tail at the worst strategy
/// `s = n/2` with [`CLT_PREFILTER_MARGIN`] of slack; only survivors pay
/// for an exact curve.
pub fn min_r_search(
    chips_per_code: usize,
    codes_per_decision: usize,
    radio: &RadioModel,
    target: f64,
    threshold: f64,
) -> Result<Option<usize>> {
    if !target.is_finite() || target <= 0.0 {
        return Err(Error::config("search target must be positive"));
    }
    let worst = AdversaryStrategy::new(chips_per_code / 2);
    for r in 1..chips_per_code {
        let params = WatermarkParams::new(chips_per_code, r, codes_per_decision)?;
        if pfa(&params, radio, threshold) >= target {
            continue;
        }
        if clt_pmd(&params, radio, worst, threshold) >= target * CLT_PREFILTER_MARGIN {
            continue;
        }
        let curve = pmd_curve(&params, radio, threshold)?;
        if curve.max().1 < target {
            return Ok(Some(r));
        }
    }
    Ok(None)
}
