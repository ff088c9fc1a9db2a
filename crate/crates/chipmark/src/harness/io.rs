//! Plot-ready exports.
//!
//! All floating-point columns are written with nine significant digits
//! in scientific notation so outputs are byte-stable across runs and
//! platforms.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::campaign::{CampaignResult, DecisionRecord};
use crate::security::PmdCurve;
use crate::watermark::{derive_mask, Seed, WatermarkParams};

/// Nine significant digits, scientific notation.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Campaign decisions: `t,label,s,Y_delta,Y_sigma,Y,verdict`, the `s`
/// column empty on authentic rows.
pub fn write_decisions_csv(path: &Path, result: &CampaignResult) -> Result<()> {
    let mut out = String::from("t,label,s,Y_delta,Y_sigma,Y,verdict\n");
    for d in &result.decisions {
        let s = d
            .label
            .strategy()
            .map(|s| s.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sig9(d.time_s),
            d.label.name(),
            s,
            sig9(d.y_delta),
            sig9(d.y_sigma),
            sig9(d.y),
            d.verdict
        );
    }
    write_text(path, &out)
}

/// Receiver-style decision log: `epoch_start,Y_delta,Y_sigma,Y,verdict`.
pub fn write_decision_log(path: &Path, decisions: &[DecisionRecord]) -> Result<()> {
    let mut out = String::from("epoch_start,Y_delta,Y_sigma,Y,verdict\n");
    for d in decisions {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            d.epoch_start,
            sig9(d.y_delta),
            sig9(d.y_sigma),
            sig9(d.y),
            d.verdict
        );
    }
    write_text(path, &out)
}

/// Prediction ellipses: `label,s,cx,cy,ax,ay`.
pub fn write_ellipses_csv(path: &Path, result: &CampaignResult) -> Result<()> {
    let mut out = String::from("label,s,cx,cy,ax,ay\n");
    for (label, ellipse) in &result.ellipses {
        let s = label.strategy().map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            label.name(),
            s,
            sig9(ellipse.center.0),
            sig9(ellipse.center.1),
            sig9(ellipse.semi_axes.0),
            sig9(ellipse.semi_axes.1)
        );
    }
    write_text(path, &out)
}

/// Predicted per-label moments plus the authentic `Y` density:
/// `label,s,mean_delta,mean_sigma,var_delta,var_sigma,mean_y,var_y`.
pub fn write_predictions_csv(path: &Path, result: &CampaignResult) -> Result<()> {
    let mut out = String::from("label,s,mean_delta,mean_sigma,var_delta,var_sigma,mean_y,var_y\n");
    for (label, m) in &result.predicted_moments {
        let s = label.strategy().map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            label.name(),
            s,
            sig9(m.mean_delta),
            sig9(m.mean_sigma),
            sig9(m.var_delta),
            sig9(m.var_sigma),
            sig9(m.mean_y()),
            sig9(m.var_y())
        );
    }
    write_text(path, &out)
}

/// Missed-detection curve: `s,pmd,log2_pmd`.
pub fn write_pmd_csv(path: &Path, curve: &PmdCurve) -> Result<()> {
    let mut out = String::from("s,pmd,log2_pmd\n");
    for (s, pmd) in curve.iter() {
        let _ = writeln!(out, "{},{},{}", s, sig9(pmd), sig9(pmd.log2()));
    }
    write_text(path, &out)
}

/// Mask export: one `epoch,idx1,idx2,...` line per epoch in the range.
pub fn write_mask_export(
    path: &Path,
    seed: &Seed,
    params: &WatermarkParams,
    epochs: std::ops::Range<u64>,
) -> Result<()> {
    let mut out = String::new();
    for epoch in epochs {
        let mask = derive_mask(&seed.at_epoch(epoch), params);
        out.push_str(&mask.export_line(epoch));
        out.push('\n');
    }
    write_text(path, &out)
}
