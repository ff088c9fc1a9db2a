//! Hypergeometric mass function.
//!
//! `hypergeom_pmf(n, r, s)` is the distribution of how many of the `r`
//! inverted chips a forger hits when inverting `s` of `n` chips at
//! random: `C(r,h) C(n-r,s-h) / C(n,s)` over the support `0..=min(r,s)`.
//! Probabilities are evaluated in log space through `lgamma` so that
//! binomial coefficients far beyond f64 range cancel before
//! exponentiation.

use crate::error::{Error, Result};
use crate::security::pmf::Pmf;

/// `ln C(n, k)` for `k <= n`.
fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    libm::lgamma((n + 1) as f64) - libm::lgamma((k + 1) as f64) - libm::lgamma((n - k + 1) as f64)
}

/// Mass function of the forger-overlap count.
pub fn hypergeom_pmf(n: usize, r: usize, s: usize) -> Result<Pmf> {
    if r > n || s > n {
        return Err(Error::config(format!(
            "hypergeometric parameters out of range: n={n}, r={r}, s={s}"
        )));
    }
    let ln_denominator = ln_choose(n as u64, s as u64);
    let top = r.min(s);
    let probs: Vec<f64> = (0..=top)
        .map(|h| {
            // fewer than h inversions can land outside the mask
            if s - h > n - r {
                0.0
            } else {
                (ln_choose(r as u64, h as u64) + ln_choose((n - r) as u64, (s - h) as u64)
                    - ln_denominator)
                    .exp()
            }
        })
        .collect();
    Pmf::new(0.0, 1.0, probs)
}
