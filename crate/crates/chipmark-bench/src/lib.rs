//! Shared fixtures for the benchmark targets.

use chipmark::{RadioModel, WatermarkParams};

/// The reference design: 1023 chips, 21 inversions, 1000-code windows.
pub fn reference_params() -> WatermarkParams {
    WatermarkParams::new(1023, 21, 1000).unwrap()
}

/// The conservative radio floor: Nyquist sampling at 30 dB-Hz.
pub fn reference_radio() -> RadioModel {
    RadioModel::new(2.046e6, 1e-3, 30.0, 1.0).unwrap()
}
