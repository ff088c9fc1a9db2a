//! Normal distribution helpers.
//!
//! Tail probabilities near 2^-32 sit deep in the Gaussian tail, so both
//! tails are evaluated through the complementary error function rather
//! than `1 - cdf`, which would cancel catastrophically.

use std::f64::consts::SQRT_2;

/// Lower tail of the standard normal at `z`.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Upper tail of the standard normal at `z`.
pub fn standard_normal_upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

/// A normal distribution given by mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    mean: f64,
    variance: f64,
}

impl GaussianSpec {
    pub fn new(mean: f64, variance: f64) -> Self {
        assert!(
            variance > 0.0 && variance.is_finite() && mean.is_finite(),
            "normal spec requires finite mean and positive variance, got ({mean}, {variance})"
        );
        Self { mean, variance }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// `Pr(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        standard_normal_cdf((x - self.mean) / self.std_dev())
    }

    /// `Pr(X > x)`.
    pub fn upper_tail(&self, x: f64) -> f64 {
        standard_normal_upper_tail((x - self.mean) / self.std_dev())
    }
}
