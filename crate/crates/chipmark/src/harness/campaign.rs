//! End-to-end simulation campaigns.
//!
//! A campaign synthesizes epochs through the full pipeline (watermark,
//! resample, noise, matched filters, aggregation, decision) and returns
//! labeled decisions together with the predicted moments and 3-sigma
//! ellipses for every label. Everything derives from the master seed;
//! identical configurations produce identical results byte for byte.

use rayon::prelude::*;

use crate::channel::{add_noise, resample, spoof_code, AdversaryStrategy, RadioModel};
use crate::error::{Error, Result};
use crate::harness::config::CampaignConfig;
use crate::receiver::{
    aggregate, build_kernels, decide, epoch_statistics, EpochStatistic, Verdict, DEFAULT_THRESHOLD,
};
use crate::rng::SeedTree;
use crate::security::{
    authentic_distribution, authentic_moments, clt_moments, CltMoments, GaussianSpec,
};
use crate::watermark::{
    apply_watermark, derive_mask, generate_base_code, RangingCode, Seed, WatermarkParams,
};

/// What a decision was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Authentic,
    /// Spoofed epochs with the forger's strategy `s`.
    Spoof(usize),
}

impl Label {
    /// The label column value.
    pub fn name(&self) -> &'static str {
        match self {
            Label::Authentic => "authentic",
            Label::Spoof(_) => "spoof",
        }
    }

    /// The strategy column value; empty for authentic rows.
    pub fn strategy(&self) -> Option<usize> {
        match self {
            Label::Authentic => None,
            Label::Spoof(s) => Some(*s),
        }
    }
}

/// One completed authentication decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRecord {
    /// First epoch aggregated into this decision.
    pub epoch_start: u64,
    /// Campaign time of `epoch_start`, in seconds.
    pub time_s: f64,
    pub label: Label,
    pub y_delta: f64,
    pub y_sigma: f64,
    pub y: f64,
    pub verdict: Verdict,
}

/// Axis-aligned ellipse in the `(Y_delta, Y_sigma)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: (f64, f64),
    pub semi_axes: (f64, f64),
}

impl Ellipse {
    /// Whether a point lies inside or on the boundary.
    pub fn contains(&self, point: (f64, f64)) -> bool {
        let dx = (point.0 - self.center.0) / self.semi_axes.0;
        let dy = (point.1 - self.center.1) / self.semi_axes.1;
        dx * dx + dy * dy <= 1.0
    }
}

/// The 3-sigma prediction ellipse for a label's moments: centered on the
/// means with semi-axes of three standard deviations, axes aligned
/// because the cross-covariance is negligible and treated as zero.
pub fn ellipse_3sigma(moments: &CltMoments) -> Ellipse {
    assert!(
        moments.var_delta > 0.0 && moments.var_sigma > 0.0,
        "ellipse requires positive variances"
    );
    Ellipse {
        center: (moments.mean_delta, moments.mean_sigma),
        semi_axes: (
            3.0 * moments.var_delta.sqrt(),
            3.0 * moments.var_sigma.sqrt(),
        ),
    }
}

/// Decisions plus per-label predictions for one campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub decisions: Vec<DecisionRecord>,
    /// Predicted `(Y_delta, Y_sigma)` moments per label, at the
    /// effective aggregation window and the radio's base C/N0.
    pub predicted_moments: Vec<(Label, CltMoments)>,
    /// 3-sigma ellipses of the predictions, one per label.
    pub ellipses: Vec<(Label, Ellipse)>,
    /// Predicted distribution of authentic `Y`, for histogram overlays.
    pub authentic_prediction: GaussianSpec,
}

impl CampaignResult {
    /// Decisions carrying a given label.
    pub fn labeled(&self, label: Label) -> impl Iterator<Item = &DecisionRecord> {
        self.decisions.iter().filter(move |d| d.label == label)
    }
}

/// Shared campaign machinery: one label's worth of decisions.
struct LabelRun<'c> {
    config: &'c CampaignConfig,
    params_eff: WatermarkParams,
    code: RangingCode,
    mask_seed: Seed,
    tree: SeedTree,
}

impl<'c> LabelRun<'c> {
    fn new(config: &'c CampaignConfig) -> Result<Self> {
        config.validate()?;
        let params_eff = config
            .params
            .with_codes_per_decision(config.effective_w())?;
        let code = generate_base_code(config.code_family, config.params.chips_per_code())?;
        let tree = SeedTree::new(&config.master_seed);
        let mask_seed = Seed::new(tree.stream("mask-key", &[]).as_bytes().to_vec(), 0)
            .expect("stream ids satisfy the key length requirement");
        Ok(Self {
            config,
            params_eff,
            code,
            mask_seed,
            tree,
        })
    }

    fn radio_at_epoch(&self, epoch: u64) -> RadioModel {
        let time_s = epoch as f64 * self.config.radio.code_duration_s();
        let cn0 = self
            .config
            .cn0_profile
            .cn0_at(time_s, self.config.radio.cn0_dbhz());
        self.config.radio.with_cn0(cn0)
    }

    /// Statistics for one epoch; `spoof` selects the forged transmission
    /// in place of the authentic one.
    fn epoch_statistic(&self, epoch: u64, spoof: Option<AdversaryStrategy>) -> EpochStatistic {
        let radio = self.radio_at_epoch(epoch);
        let mask = derive_mask(&self.mask_seed.at_epoch(epoch), &self.config.params);
        let kernels = build_kernels(&self.code, &mask, &radio, &self.config.params)
            .expect("validated configuration");
        let transmitted = match spoof {
            None => apply_watermark(&self.code, &mask),
            Some(strategy) => spoof_code(
                &self.code,
                strategy,
                self.tree.stream("spoof-chips", &[epoch]),
            )
            .expect("strategy validated against the code length"),
        };
        let block = resample(&transmitted, &radio)
            .expect("validated configuration")
            .at_epoch(epoch);
        let noisy = add_noise(&block, &radio, self.tree.stream("noise", &[epoch]));
        epoch_statistics(&noisy, &kernels)
    }

    /// All decisions for one label, occupying the epoch range starting
    /// at `epoch_base`.
    fn run(&self, label: Label, epoch_base: u64) -> Vec<DecisionRecord> {
        let w = self.config.effective_w();
        let decisions = self.config.decisions_per_label();
        let spoof = label.strategy().map(AdversaryStrategy::new);
        (0..decisions)
            .into_par_iter()
            .map(|d| {
                let epoch_start = epoch_base + (d * w) as u64;
                let stats: Vec<EpochStatistic> = (0..w)
                    .map(|e| self.epoch_statistic(epoch_start + e as u64, spoof))
                    .collect();
                let decision = aggregate(&stats, w);
                DecisionRecord {
                    epoch_start,
                    time_s: epoch_start as f64 * self.config.radio.code_duration_s(),
                    label,
                    y_delta: decision.y_delta(),
                    y_sigma: decision.y_sigma(),
                    y: decision.y(),
                    verdict: decide(&decision, DEFAULT_THRESHOLD),
                }
            })
            .collect()
    }

    fn epochs_per_label(&self) -> u64 {
        (self.config.decisions_per_label() * self.config.effective_w()) as u64
    }
}

/// Simulates an authentic pass: watermarked epochs with noise, aggregated
/// and decided per window.
pub fn authentic_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    let run = LabelRun::new(config)?;
    let decisions = run.run(Label::Authentic, 0);
    let moments = authentic_moments(&run.params_eff, &config.radio);
    Ok(CampaignResult {
        decisions,
        predicted_moments: vec![(Label::Authentic, moments)],
        ellipses: vec![(Label::Authentic, ellipse_3sigma(&moments))],
        authentic_prediction: authentic_distribution(&run.params_eff, &config.radio),
    })
}

/// Runs the spoofing experiment: an authentic segment followed by one
/// injected segment per strategy, with predictions per label. Epoch
/// ranges never overlap across labels.
pub fn spoof_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    if config.strategies.is_empty() {
        return Err(Error::config(
            "spoof campaign requires at least one strategy",
        ));
    }
    let run = LabelRun::new(config)?;
    let span = run.epochs_per_label();

    let mut decisions = run.run(Label::Authentic, 0);
    let mut predicted_moments = vec![(
        Label::Authentic,
        authentic_moments(&run.params_eff, &config.radio),
    )];
    for (k, strategy) in config.strategies.iter().enumerate() {
        let label = Label::Spoof(strategy.inverted_chips());
        decisions.extend(run.run(label, (k as u64 + 1) * span));
        predicted_moments.push((
            label,
            clt_moments(&run.params_eff, &config.radio, *strategy),
        ));
    }
    let ellipses = predicted_moments
        .iter()
        .map(|(label, moments)| (*label, ellipse_3sigma(moments)))
        .collect();
    Ok(CampaignResult {
        decisions,
        predicted_moments,
        ellipses,
        authentic_prediction: authentic_distribution(&run.params_eff, &config.radio),
    })
}
