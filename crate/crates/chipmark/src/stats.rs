//! Small statistical validation helpers shared by campaigns and tests:
//! sample moments, a one-sample Kolmogorov–Smirnov test, and chi-square
//! critical values.

/// Upper-tail standard normal quantile for alpha = 0.001.
pub const Z_UPPER_001: f64 = 3.090_232_306_167_813;

/// Two-sided standard normal quantile for alpha = 0.001 (0.9995 point).
pub const Z_TWO_SIDED_001: f64 = 3.290_526_731_491_925_5;

/// Sample mean.
pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Unbiased sample variance.
pub fn variance(samples: &[f64]) -> f64 {
    let m = mean(samples);
    samples.iter().map(|&x| (x - m).powi(2)).sum::<f64>() / (samples.len() - 1) as f64
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Asymptotic KS critical value `sqrt(ln(2/alpha)/2) / sqrt(n)`, adequate
/// for the sample sizes used here (n >= 500).
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Pearson chi-square statistic for observed counts against a uniform
/// expectation.
pub fn chi_square_uniform(counts: &[f64]) -> f64 {
    let expected = counts.iter().sum::<f64>() / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c - expected).powi(2) / expected)
        .sum()
}

/// Upper-tail chi-square critical value via the Wilson–Hilferty cube
/// approximation, accurate to ~1e-4 relative for the degrees of freedom
/// used here (df >= 60).
pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    let z = match alpha {
        a if (a - 0.001).abs() < 1e-12 => Z_UPPER_001,
        _ => unimplemented!("only alpha = 0.001 critical values are tabulated"),
    };
    let k = df as f64;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t.powi(3)
}
