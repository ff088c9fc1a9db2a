//! Security analysis of a watermark design: exact and CLT-approximate
//! statistic distributions, false-alarm and missed-detection
//! probabilities, and the minimal-inversion design search.

mod hypergeom;
mod moments;
mod normal;
mod pmd;
mod pmf;

pub use hypergeom::hypergeom_pmf;
pub use moments::{
    authentic_distribution, authentic_moments, clt_moments, clt_pmd, decision_noise, g_delta,
    g_sigma, pfa, CltMoments,
};
pub use normal::{standard_normal_cdf, standard_normal_upper_tail, GaussianSpec};
pub use pmd::{min_r_search, pmd_curve, pmd_exact, PmdCurve};
pub use pmf::{convolve_power, Pmf, MASS_TOLERANCE};
