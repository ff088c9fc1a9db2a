//! Structured text configuration.
//!
//! Config files are TOML with sections mirroring the domain types:
//! `[watermark]` and `[radio]` carry the design and radio model and are
//! enough for the analysis commands; `[campaign]` adds simulation
//! parameters for the run commands.

use std::path::Path;

use toml::Table;

use crate::channel::{AdversaryStrategy, RadioModel};
use crate::error::{Error, Result};
use crate::watermark::WatermarkParams;

/// Carrier-to-noise profile over a campaign.
#[derive(Debug, Clone, PartialEq)]
pub enum Cn0Profile {
    /// The radio's configured C/N0 throughout.
    Constant,
    /// Piecewise-linear interpolation through `(time_s, dbhz)`
    /// breakpoints, clamped at the ends.
    PiecewiseLinear(Vec<(f64, f64)>),
}

impl Cn0Profile {
    /// C/N0 at `time_s`, falling back to `base_dbhz` for the constant
    /// profile.
    pub fn cn0_at(&self, time_s: f64, base_dbhz: f64) -> f64 {
        match self {
            Cn0Profile::Constant => base_dbhz,
            Cn0Profile::PiecewiseLinear(points) => {
                let first = points.first().expect("validated non-empty");
                let last = points.last().expect("validated non-empty");
                if time_s <= first.0 {
                    return first.1;
                }
                if time_s >= last.0 {
                    return last.1;
                }
                for pair in points.windows(2) {
                    let (t0, v0) = pair[0];
                    let (t1, v1) = pair[1];
                    if time_s <= t1 {
                        let frac = (time_s - t0) / (t1 - t0);
                        return v0 + frac * (v1 - v0);
                    }
                }
                last.1
            }
        }
    }
}

/// Everything a simulation campaign needs.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub params: WatermarkParams,
    pub radio: RadioModel,
    /// Simulated span per label, in seconds.
    pub duration_s: f64,
    /// Forger strategies exercised by a spoof campaign.
    pub strategies: Vec<AdversaryStrategy>,
    /// Aggregation window override, e.g. 50 for scatter illustrations.
    pub w_override: Option<usize>,
    /// Master seed; every random stream in the campaign derives from it.
    pub master_seed: Vec<u8>,
    pub cn0_profile: Cn0Profile,
    /// Base-code family passed to the generator.
    pub code_family: u32,
}

impl CampaignConfig {
    /// Aggregation window in force, honoring the override.
    pub fn effective_w(&self) -> usize {
        self.w_override
            .unwrap_or_else(|| self.params.codes_per_decision())
    }

    /// Code epochs per second of simulated time.
    pub fn epochs_per_second(&self) -> f64 {
        1.0 / self.radio.code_duration_s()
    }

    /// Full decisions per label over the configured duration.
    pub fn decisions_per_label(&self) -> usize {
        let epochs = (self.duration_s * self.epochs_per_second()).round() as usize;
        epochs / self.effective_w()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.duration_s.is_finite() || self.duration_s <= 0.0 {
            return Err(Error::config("campaign duration must be positive"));
        }
        if self.decisions_per_label() == 0 {
            return Err(Error::config(format!(
                "duration {}s holds fewer than one {}-epoch decision window",
                self.duration_s,
                self.effective_w()
            )));
        }
        if let Some(w) = self.w_override {
            if w == 0 {
                return Err(Error::config("w_override must be positive"));
            }
        }
        for strategy in &self.strategies {
            if strategy.inverted_chips() > self.params.chips_per_code() {
                return Err(Error::config(format!(
                    "strategy s={} exceeds the code length n={}",
                    strategy.inverted_chips(),
                    self.params.chips_per_code()
                )));
            }
        }
        if self.master_seed.is_empty() {
            return Err(Error::config("master seed must not be empty"));
        }
        if let Cn0Profile::PiecewiseLinear(points) = &self.cn0_profile {
            if points.is_empty() {
                return Err(Error::config("cn0 profile needs at least one breakpoint"));
            }
            if points.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::config("cn0 profile times must be increasing"));
            }
        }
        // the radio must resolve to integer samples per chip
        self.radio.samples_per_chip(self.params.chips_per_code())?;
        Ok(())
    }
}

/// Design and radio, enough for the analysis commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub params: WatermarkParams,
    pub radio: RadioModel,
}

fn parse_table(text: &str) -> Result<Table> {
    text.parse::<Table>()
        .map_err(|e| Error::config(format!("config parse error: {e}")))
}

fn section<'t>(table: &'t Table, name: &str) -> Result<&'t Table> {
    table
        .get(name)
        .and_then(|v| v.as_table())
        .ok_or_else(|| Error::config(format!("missing [{name}] section")))
}

fn get_f64(section_name: &str, table: &Table, key: &str) -> Result<f64> {
    let value = table
        .get(key)
        .ok_or_else(|| Error::config(format!("missing {key} in [{section_name}]")))?;
    value
        .as_float()
        .or_else(|| value.as_integer().map(|i| i as f64))
        .ok_or_else(|| Error::config(format!("{key} in [{section_name}] must be a number")))
}

fn get_usize(section_name: &str, table: &Table, key: &str) -> Result<usize> {
    let value = table
        .get(key)
        .ok_or_else(|| Error::config(format!("missing {key} in [{section_name}]")))?;
    value
        .as_integer()
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| {
            Error::config(format!(
                "{key} in [{section_name}] must be a non-negative integer"
            ))
        })
}

fn parse_watermark(table: &Table) -> Result<WatermarkParams> {
    let wm = section(table, "watermark")?;
    WatermarkParams::new(
        get_usize("watermark", wm, "chips_per_code")?,
        get_usize("watermark", wm, "inverted_chips")?,
        get_usize("watermark", wm, "codes_per_decision")?,
    )
}

fn parse_radio(table: &Table) -> Result<RadioModel> {
    let radio = section(table, "radio")?;
    RadioModel::new(
        get_f64("radio", radio, "sample_rate_hz")?,
        get_f64("radio", radio, "code_duration_s")?,
        get_f64("radio", radio, "cn0_dbhz")?,
        get_f64("radio", radio, "signal_power")?,
    )
}

/// Decodes a hex string into bytes.
pub fn parse_hex_seed(hex: &str) -> Result<Vec<u8>> {
    let cleaned: String = hex.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() || cleaned.len() % 2 != 0 {
        return Err(Error::config(format!(
            "seed hex must have a positive, even number of digits, got {:?}",
            hex
        )));
    }
    (0..cleaned.len())
        .step_by(2)
        .map(|i| {
            u8::from_str_radix(&cleaned[i..i + 2], 16)
                .map_err(|_| Error::config(format!("bad hex byte {:?}", &cleaned[i..i + 2])))
        })
        .collect()
}

/// Parses analysis sections (`[watermark]`, `[radio]`) from TOML text.
pub fn analysis_config_from_str(text: &str) -> Result<AnalysisConfig> {
    let table = parse_table(text)?;
    Ok(AnalysisConfig {
        params: parse_watermark(&table)?,
        radio: parse_radio(&table)?,
    })
}

/// Parses the full campaign configuration from TOML text.
pub fn campaign_config_from_str(text: &str) -> Result<CampaignConfig> {
    let table = parse_table(text)?;
    let params = parse_watermark(&table)?;
    let radio = parse_radio(&table)?;
    let campaign = section(&table, "campaign")?;

    let duration_s = get_f64("campaign", campaign, "duration_s")?;
    let strategies = match campaign.get("strategies") {
        None => Vec::new(),
        Some(value) => value
            .as_array()
            .ok_or_else(|| Error::config("strategies must be an array of integers"))?
            .iter()
            .map(|v| {
                v.as_integer()
                    .and_then(|i| usize::try_from(i).ok())
                    .map(AdversaryStrategy::new)
                    .ok_or_else(|| Error::config("strategies must be non-negative integers"))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let w_override = match campaign.get("w_override") {
        None => None,
        Some(_) => Some(get_usize("campaign", campaign, "w_override")?),
    };
    let master_seed = campaign
        .get("master_seed")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::config("missing master_seed hex string in [campaign]"))
        .and_then(parse_hex_seed)?;
    let cn0_profile = match campaign.get("cn0_profile") {
        None => Cn0Profile::Constant,
        Some(value) => {
            let rows = value
                .as_array()
                .ok_or_else(|| Error::config("cn0_profile must be an array of [t, dbhz] pairs"))?;
            let points = rows
                .iter()
                .map(|row| {
                    let pair = row.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        Error::config("cn0_profile entries must be [t, dbhz] pairs")
                    })?;
                    let num = |v: &toml::Value| {
                        v.as_float()
                            .or_else(|| v.as_integer().map(|i| i as f64))
                            .ok_or_else(|| Error::config("cn0_profile values must be numbers"))
                    };
                    Ok((num(&pair[0])?, num(&pair[1])?))
                })
                .collect::<Result<Vec<_>>>()?;
            Cn0Profile::PiecewiseLinear(points)
        }
    };
    let code_family = match campaign.get("code_family") {
        None => {
            if params.chips_per_code() == 1023 {
                1
            } else {
                0
            }
        }
        Some(_) => get_usize("campaign", campaign, "code_family")? as u32,
    };

    let config = CampaignConfig {
        params,
        radio,
        duration_s,
        strategies,
        w_override,
        master_seed,
        cn0_profile,
        code_family,
    };
    config.validate()?;
    Ok(config)
}

/// Loads an analysis configuration from a file.
pub fn load_analysis_config(path: &Path) -> Result<AnalysisConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    analysis_config_from_str(&text)
}

/// Loads a campaign configuration from a file.
pub fn load_campaign_config(path: &Path) -> Result<CampaignConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    campaign_config_from_str(&text)
}
