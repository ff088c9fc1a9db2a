//! Reproducible experiment campaigns and their export formats.

mod campaign;
mod config;
pub mod io;

pub use campaign::{
    authentic_campaign, ellipse_3sigma, spoof_campaign, CampaignResult, DecisionRecord, Ellipse,
    Label,
};
pub use config::{
    analysis_config_from_str, campaign_config_from_str, load_analysis_config, load_campaign_config,
    parse_hex_seed, AnalysisConfig, CampaignConfig, Cn0Profile,
};
