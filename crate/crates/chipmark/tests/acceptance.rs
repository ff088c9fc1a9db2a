//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured values when it holds.
//!
//! Run with `cargo test -p chipmark --test acceptance -- --nocapture`.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use chipmark::channel::AdversaryStrategy;
use chipmark::harness::{
    self, authentic_campaign, ellipse_3sigma, spoof_campaign, CampaignConfig, Cn0Profile, Label,
};
use chipmark::receiver::Verdict;
use chipmark::security::{
    authentic_distribution, clt_moments, convolve_power, hypergeom_pmf, min_r_search, pfa,
    pmd_curve,
};
use chipmark::watermark::{degradation_db, derive_mask, Seed, WatermarkParams};
use chipmark::{stats, RadioModel};

/// 32-bit security target on both error probabilities.
const TARGET: f64 = 2.328_306_436_538_696_3e-10; // 2^-32

/// Decision threshold fixed by the design.
const THRESHOLD: f64 = 1.0;

/// Published false-alarm probability and its reproduction tolerance.
const PFA_EXPECTED: f64 = 1.139e-10;
const PFA_RELATIVE_TOL: f64 = 0.005;

/// Published degradation and its tolerance, in dB.
const DEGRADATION_EXPECTED: f64 = -0.364;
const DEGRADATION_TOL: f64 = 1e-3;

/// Convolution oracle agreement, elementwise absolute.
const CONVOLUTION_TOL: f64 = 1e-12;

/// Noiseless statistic identities, relative.
const NOISELESS_TOL: f64 = 1e-12;

/// Authentic Monte-Carlo: mean window, variance ratio window, KS level.
const MC_MEAN_TOL: f64 = 0.005;
const MC_VAR_REL_TOL: f64 = 0.10;
const KS_ALPHA: f64 = 0.001;

/// Spoof-experiment ellipse coverage floor.
const ELLIPSE_COVERAGE_MIN: f64 = 0.98;

/// Worst-strategy window for the r=21 curve.
const WORST_S_RANGE: std::ops::RangeInclusive<usize> = 461..=561;

/// Zero-mean spoof identity tolerance.
const MEAN_SUM_TOL: f64 = 1e-14;

fn reference_params() -> WatermarkParams {
    WatermarkParams::new(1023, 21, 1000).unwrap()
}

fn reference_radio() -> RadioModel {
    RadioModel::new(2.046e6, 1e-3, 30.0, 1.0).unwrap()
}

fn r21_curve() -> &'static chipmark::PmdCurve {
    static CURVE: OnceLock<chipmark::PmdCurve> = OnceLock::new();
    CURVE.get_or_init(|| pmd_curve(&reference_params(), &reference_radio(), THRESHOLD).unwrap())
}

#[test]
fn acceptance_1_pfa_reproduction() {
    let start = Instant::now();
    let value = pfa(&reference_params(), &reference_radio(), THRESHOLD);
    let elapsed = start.elapsed();
    let relative = (value - PFA_EXPECTED).abs() / PFA_EXPECTED;
    assert!(
        relative <= PFA_RELATIVE_TOL,
        "pfa {value:e} deviates {relative:.4} from {PFA_EXPECTED:e}"
    );
    assert!(value < TARGET, "pfa {value:e} not below 2^-32");
    assert!(elapsed < Duration::from_secs(1), "pfa took {elapsed:?}");
    println!("PASS criterion 1: pfa = {value:.4e} (within 0.5% of {PFA_EXPECTED:e}, < 2^-32), {elapsed:?}");
}

#[test]
fn acceptance_2_minimal_r() {
    let start = Instant::now();
    let found = min_r_search(1023, 1000, &reference_radio(), TARGET, THRESHOLD).unwrap();
    assert_eq!(found, Some(21), "minimal r");

    let r20 = WatermarkParams::new(1023, 20, 1000).unwrap();
    let curve20 = pmd_curve(&r20, &reference_radio(), THRESHOLD).unwrap();
    let (worst20_s, worst20_pmd) = curve20.max();
    assert!(
        worst20_pmd > TARGET,
        "r=20 never exceeds the target (max {worst20_pmd:e})"
    );

    let (worst21_s, worst21_pmd) = r21_curve().max();
    assert!(
        worst21_pmd < TARGET,
        "r=21 exceeds the target at s={worst21_s} ({worst21_pmd:e})"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(900),
        "search took {elapsed:?}"
    );
    println!(
        "PASS criterion 2: min r = 21; r=20 worst pmd {worst20_pmd:.3e} at s={worst20_s} (> 2^-32); \
         r=21 worst pmd {worst21_pmd:.3e} at s={worst21_s} (< 2^-32); {elapsed:?}"
    );
}

#[test]
fn acceptance_3_worst_strategy_location() {
    let (worst_s, worst_pmd) = r21_curve().max();
    assert!(
        WORST_S_RANGE.contains(&worst_s),
        "worst strategy s={worst_s} outside {WORST_S_RANGE:?}"
    );
    println!("PASS criterion 3: r=21 curve peaks at s={worst_s} (pmd {worst_pmd:.3e})");
}

#[test]
fn acceptance_4_convolution_oracle() {
    let start = Instant::now();
    // support min(r,s)+1 = 64
    let pmf = hypergeom_pmf(500, 63, 250).unwrap();
    assert_eq!(pmf.len(), 64);
    let mut checked = 0usize;
    for w in [2usize, 4, 8] {
        let fft = convolve_power(&pmf, w).unwrap();
        let mut naive = pmf.probs().to_vec();
        for _ in 1..w {
            let mut next = vec![0.0; naive.len() + pmf.len() - 1];
            for (i, &a) in naive.iter().enumerate() {
                for (j, &b) in pmf.probs().iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            naive = next;
        }
        assert_eq!(fft.len(), naive.len());
        for (i, (&a, &b)) in fft.probs().iter().zip(&naive).enumerate() {
            assert!(
                (a - b).abs() < CONVOLUTION_TOL,
                "w={w} index {i}: fft {a:e} vs naive {b:e}"
            );
        }
        checked += naive.len();
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "oracle took {elapsed:?}");
    println!(
        "PASS criterion 4: fft repeated squaring matches naive convolution on {checked} points \
         within {CONVOLUTION_TOL:e}; {elapsed:?}"
    );
}

#[test]
fn acceptance_5_noiseless_exactness() {
    use chipmark::channel::{resample, spoof_code};
    use chipmark::receiver::{build_kernels, epoch_statistics};
    use chipmark::rng::SeedTree;
    use chipmark::watermark::{apply_watermark, generate_base_code};

    let params = reference_params();
    let radio = reference_radio();
    let code = generate_base_code(1, 1023).unwrap();
    let mask = derive_mask(&Seed::new(*b"acceptance seed!", 0).unwrap(), &params);
    let kernels = build_kernels(&code, &mask, &radio, &params).unwrap();
    let tree = SeedTree::new(b"acceptance noiseless");

    let authentic = epoch_statistics(
        &resample(&apply_watermark(&code, &mask), &radio).unwrap(),
        &kernels,
    );
    let plain = epoch_statistics(&resample(&code, &radio).unwrap(), &kernels);
    let inverted = epoch_statistics(
        &resample(
            &spoof_code(&code, AdversaryStrategy::new(1023), tree.stream("s", &[0])).unwrap(),
            &radio,
        )
        .unwrap(),
        &kernels,
    );

    for (name, got, expect) in [
        ("authentic y_delta", authentic.y_delta, 1.0),
        ("authentic y_sigma", authentic.y_sigma, 1.0),
        ("s=0 y_delta", plain.y_delta, -1.0),
        ("s=0 y_sigma", plain.y_sigma, 1.0),
        ("s=n y_delta", inverted.y_delta, 1.0),
        ("s=n y_sigma", inverted.y_sigma, -1.0),
    ] {
        assert!(
            ((got - expect) / expect).abs() < NOISELESS_TOL,
            "{name}: {got} vs {expect}"
        );
    }
    println!("PASS criterion 5: noiseless statistics exact to {NOISELESS_TOL:e} relative");
}

#[test]
fn acceptance_6_monte_carlo_vs_closed_form() {
    let start = Instant::now();
    let decisions = 10_000usize;
    let config = CampaignConfig {
        params: reference_params(),
        radio: reference_radio(),
        duration_s: decisions as f64, // one decision per second at W=1000
        strategies: vec![],
        w_override: None,
        master_seed: b"acceptance criterion six".to_vec(),
        cn0_profile: Cn0Profile::Constant,
        code_family: 1,
    };
    let result = authentic_campaign(&config).unwrap();
    assert_eq!(result.decisions.len(), decisions);

    let ys: Vec<f64> = result.decisions.iter().map(|d| d.y).collect();
    let predicted = authentic_distribution(&reference_params(), &reference_radio());
    let mean = stats::mean(&ys);
    let var = stats::variance(&ys);
    assert!(
        (mean - 2.0).abs() < MC_MEAN_TOL,
        "mean(Y) = {mean} outside 2 +/- {MC_MEAN_TOL}"
    );
    let var_rel = (var / predicted.variance() - 1.0).abs();
    assert!(
        var_rel < MC_VAR_REL_TOL,
        "var(Y) = {var} deviates {var_rel:.3} from {}",
        predicted.variance()
    );

    let d = stats::ks_statistic(&ys, |x| predicted.cdf(x));
    let d_critical = stats::ks_critical(decisions, KS_ALPHA);
    assert!(d < d_critical, "KS statistic {d} >= critical {d_critical}");

    // no false alarms expected across 1e4 decisions at pfa ~ 1e-10
    let false_alarms = result
        .decisions
        .iter()
        .filter(|d| d.verdict == Verdict::Spoofed)
        .count();
    assert_eq!(false_alarms, 0, "false alarms in an authentic campaign");

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(600),
        "campaign took {elapsed:?}"
    );
    println!(
        "PASS criterion 6: 1e4 decisions, mean(Y) = {mean:.4}, var ratio dev {var_rel:.4}, \
         KS {d:.5} < {d_critical:.5}, 0 false alarms; {elapsed:?}"
    );
}

#[test]
fn acceptance_7_spoof_experiment() {
    let start = Instant::now();
    let strategies: Vec<AdversaryStrategy> = [0usize, 200, 400, 600, 800, 1023]
        .into_iter()
        .map(AdversaryStrategy::new)
        .collect();

    // desk-scale scatter at W = 50: 300 decisions per label at 45 dB-Hz
    let w50 = CampaignConfig {
        params: reference_params(),
        radio: reference_radio().with_cn0(45.0),
        duration_s: 15.0,
        strategies: strategies.clone(),
        w_override: Some(50),
        master_seed: b"acceptance criterion seven scatter".to_vec(),
        cn0_profile: Cn0Profile::Constant,
        code_family: 1,
    };
    let scatter = spoof_campaign(&w50).unwrap();
    let params50 = reference_params().with_codes_per_decision(50).unwrap();
    for strategy in &strategies {
        let s = strategy.inverted_chips();
        let label = Label::Spoof(s);
        let points: Vec<(f64, f64)> = scatter
            .labeled(label)
            .map(|d| (d.y_delta, d.y_sigma))
            .collect();
        assert!(
            points.len() >= 200,
            "only {} decisions at s={s}",
            points.len()
        );

        let predicted = clt_moments(&params50, &w50.radio, *strategy);
        let mean_delta = stats::mean(&points.iter().map(|p| p.0).collect::<Vec<_>>());
        let mean_sigma = stats::mean(&points.iter().map(|p| p.1).collect::<Vec<_>>());
        let tol_delta = 4.0 * (predicted.var_delta / 200.0).sqrt();
        let tol_sigma = 4.0 * (predicted.var_sigma / 200.0).sqrt();
        assert!(
            (mean_delta - predicted.mean_delta).abs() < tol_delta,
            "s={s}: mean delta {mean_delta} vs {} +/- {tol_delta}",
            predicted.mean_delta
        );
        assert!(
            (mean_sigma - predicted.mean_sigma).abs() < tol_sigma,
            "s={s}: mean sigma {mean_sigma} vs {} +/- {tol_sigma}",
            predicted.mean_sigma
        );

        let ellipse = ellipse_3sigma(&predicted);
        let inside = points.iter().filter(|&&p| ellipse.contains(p)).count();
        let coverage = inside as f64 / points.len() as f64;
        assert!(
            coverage >= ELLIPSE_COVERAGE_MIN,
            "s={s}: only {coverage:.3} of points inside the 3-sigma ellipse"
        );
    }

    // compliant window at W = 1000 over 150 simulated seconds per label
    let w1000 = CampaignConfig {
        params: reference_params(),
        radio: reference_radio(),
        duration_s: 150.0,
        strategies: strategies.clone(),
        w_override: None,
        master_seed: b"acceptance criterion seven compliant".to_vec(),
        cn0_profile: Cn0Profile::Constant,
        code_family: 1,
    };
    let compliant = spoof_campaign(&w1000).unwrap();
    let mut authentic = 0usize;
    let mut spoofed = 0usize;
    for d in &compliant.decisions {
        match d.label {
            Label::Authentic => {
                assert_eq!(
                    d.verdict,
                    Verdict::Authentic,
                    "authentic rejected at t={}",
                    d.time_s
                );
                authentic += 1;
            }
            Label::Spoof(s) => {
                assert_eq!(
                    d.verdict,
                    Verdict::Spoofed,
                    "spoof s={s} accepted at t={}",
                    d.time_s
                );
                spoofed += 1;
            }
        }
    }
    assert_eq!(authentic, 150);
    assert_eq!(spoofed, 150 * strategies.len());

    let elapsed = start.elapsed();
    println!(
        "PASS criterion 7: W=50 scatter matches predictions for all 6 strategies; \
         W=1000 verdicts perfect over {authentic} authentic and {spoofed} spoofed decisions; {elapsed:?}"
    );
}

#[test]
fn acceptance_8_degradation() {
    let db = degradation_db(1023, 21).unwrap();
    assert!(
        (db - DEGRADATION_EXPECTED).abs() < DEGRADATION_TOL,
        "degradation {db} dB"
    );
    println!("PASS criterion 8: degradation_db(1023, 21) = {db:.4} dB");
}

#[test]
fn acceptance_9_identity_suite() {
    // zero-mean spoof identity across every strategy
    let params = reference_params();
    let radio = reference_radio();
    let mut worst = 0.0f64;
    for s in 0..=1023usize {
        let m = clt_moments(&params, &radio, AdversaryStrategy::new(s));
        worst = worst.max(m.mean_y().abs());
    }
    assert!(worst <= MEAN_SUM_TOL, "mean sum reaches {worst:e}");

    // mask uniformity over 1e4 epochs
    let seed = Seed::new(*b"acceptance ids!!", 0).unwrap();
    let mut counts = vec![0f64; 1023];
    for epoch in 0..10_000u64 {
        for &idx in derive_mask(&seed.at_epoch(epoch), &params).indices() {
            counts[idx] += 1.0;
        }
    }
    let chi2 = stats::chi_square_uniform(&counts);
    let critical = stats::chi_square_critical(1022, 0.001);
    assert!(chi2 < critical, "chi2 {chi2:.1} >= {critical:.1}");

    // byte-identical campaign outputs under a fixed seed
    let config = CampaignConfig {
        params: WatermarkParams::new(1023, 21, 100).unwrap(),
        radio,
        duration_s: 1.0,
        strategies: vec![AdversaryStrategy::new(200)],
        w_override: None,
        master_seed: b"acceptance determinism".to_vec(),
        cn0_profile: Cn0Profile::Constant,
        code_family: 1,
    };
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let result = spoof_campaign(&config).unwrap();
        let decisions = dir.path().join(format!("decisions{run}.csv"));
        let ellipses = dir.path().join(format!("ellipses{run}.csv"));
        harness::io::write_decisions_csv(&decisions, &result).unwrap();
        harness::io::write_ellipses_csv(&ellipses, &result).unwrap();
        outputs.push((
            std::fs::read(decisions).unwrap(),
            std::fs::read(ellipses).unwrap(),
        ));
    }
    assert_eq!(
        outputs[0], outputs[1],
        "campaign outputs differ across runs"
    );

    println!(
        "PASS criterion 9: mean-sum identity <= {MEAN_SUM_TOL:e} (worst {worst:.2e}), \
         mask chi2 {chi2:.1} < {critical:.1}, byte-identical campaign outputs"
    );
}
