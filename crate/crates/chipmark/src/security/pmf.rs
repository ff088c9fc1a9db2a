//! Discrete probability mass functions on an affine support, and the
//! `W`-fold self-convolution that turns a per-code overlap distribution
//! into the per-decision one.
//!
//! Convolution powers are computed by binary exponentiation over
//! FFT-based products. Roundoff from the transforms is handled by a
//! clamp-and-check rule: negative entries are clamped to zero, and the
//! total mass must come back within [`MASS_TOLERANCE`] of one, at which
//! point it is renormalized; anything worse is a numerical failure.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Acceptable drift of total probability mass away from one.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A probability mass function whose support is `start + i * step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    support_start: f64,
    support_step: f64,
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates non-negativity and total mass before wrapping.
    pub fn new(support_start: f64, support_step: f64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::config("pmf must have at least one support point"));
        }
        if !support_start.is_finite() || !support_step.is_finite() || support_step == 0.0 {
            return Err(Error::config(
                "pmf support must be finite with a nonzero step",
            ));
        }
        if let Some(&bad) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::numerical(format!(
                "pmf probability {bad} is negative or non-finite"
            )));
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::numerical(format!(
                "pmf mass {mass} drifted more than {MASS_TOLERANCE} from 1"
            )));
        }
        Ok(Self {
            support_start,
            support_step,
            probs,
        })
    }

    /// Distribution concentrated at a single value.
    pub fn point_mass(value: f64) -> Self {
        Self {
            support_start: value,
            support_step: 1.0,
            probs: vec![1.0],
        }
    }

    pub fn support_start(&self) -> f64 {
        self.support_start
    }

    pub fn support_step(&self) -> f64 {
        self.support_step
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Support value of the `i`-th point.
    pub fn support(&self, i: usize) -> f64 {
        self.support_start + i as f64 * self.support_step
    }

    /// `(value, probability)` pairs in support order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.support(i), p))
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, p)| x * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(x, p)| p * (x - m) * (x - m)).sum()
    }

    /// Maps the support through `x -> scale * x + offset`, leaving the
    /// probabilities untouched. `scale` must be positive so support
    /// order is preserved.
    pub fn affine_map(&self, scale: f64, offset: f64) -> Self {
        assert!(
            scale > 0.0 && scale.is_finite() && offset.is_finite(),
            "affine support map requires finite offset and positive scale"
        );
        Self {
            support_start: scale * self.support_start + offset,
            support_step: scale * self.support_step,
            probs: self.probs.clone(),
        }
    }
}

/// Linear convolution of two unit-mass sequences via zero-padded FFTs.
///
/// The true product of two mass functions has mass exactly one, so each
/// product gets the clamp-and-check rule: roundoff negatives are clamped
/// to zero, the mass must land within [`MASS_TOLERANCE`] of one, and the
/// result is rescaled to unit mass so transform roundoff cannot compound
/// across repeated squarings.
fn fft_convolve(a: &[f64], b: &[f64], planner: &mut FftPlanner<f64>) -> Result<Vec<f64>> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fa.resize(size, Complex::ZERO);
    fft.process(&mut fa);

    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fb.resize(size, Complex::ZERO);
    fft.process(&mut fb);

    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    ifft.process(&mut fa);

    let scale = 1.0 / size as f64;
    fa.truncate(out_len);
    let mut out: Vec<f64> = fa.iter().map(|c| (c.re * scale).max(0.0)).collect();

    let mass: f64 = out.iter().sum();
    if (mass - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::numerical(format!(
            "convolution mass {mass} drifted more than {MASS_TOLERANCE} from 1"
        )));
    }
    let inv = 1.0 / mass;
    for p in &mut out {
        *p *= inv;
    }
    Ok(out)
}

/// `W`-fold self-convolution of an integer-supported mass function.
///
/// The support must be integer-indexed (unit step, integer start); the
/// result has support length `W * (len - 1) + 1` starting at `W *
/// start`. Computed by repeated squaring over FFT products; the total
/// mass is renormalized when within [`MASS_TOLERANCE`] of one and is a
/// numerical failure otherwise.
pub fn convolve_power(pmf: &Pmf, w: usize) -> Result<Pmf> {
    assert!(w >= 1, "convolution power must be at least 1");
    assert!(
        pmf.support_step == 1.0 && pmf.support_start.fract() == 0.0,
        "convolution power requires an integer-indexed support"
    );
    if w == 1 {
        return Ok(pmf.clone());
    }

    let mut planner = FftPlanner::new();
    let mut result: Option<Vec<f64>> = None;
    let mut base = pmf.probs.clone();
    let mut exp = w;
    loop {
        if exp & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(acc) => fft_convolve(&acc, &base, &mut planner)?,
            });
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        base = fft_convolve(&base, &base, &mut planner)?;
    }
    let probs = result.expect("w >= 1 always sets a result");
    debug_assert_eq!(probs.len(), w * (pmf.len() - 1) + 1);

    Ok(Pmf {
        support_start: pmf.support_start * w as f64,
        support_step: 1.0,
        probs,
    })
}
