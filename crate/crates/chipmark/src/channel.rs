//! Baseband synthesis for authentic and spoofed transmissions.
//!
//! The model is deliberately conservative and post-tracking: phase and
//! Doppler are assumed perfectly corrected, so blocks are real-valued
//! in-phase samples. Chips become rectangular pulses at an integer
//! number of samples per chip, and zero-mean white Gaussian noise at the
//! configured C/N0 is added immediately before correlation.

use rand::Rng;
use rand_distr::StandardNormal;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::StreamId;
use crate::watermark::RangingCode;

/// Relative slack when checking that `F * T` is an integer.
const SAMPLE_COUNT_TOL: f64 = 1e-9;

/// Receiver-side radio model.
///
/// Noise power per sample is derived, never stored: `sigma^2 =
/// (P / (C/N0)) * (F / 2)` with the C/N0 taken out of dB-Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioModel {
    sample_rate_hz: f64,
    code_duration_s: f64,
    cn0_dbhz: f64,
    signal_power: f64,
}

impl RadioModel {
    pub fn new(
        sample_rate_hz: f64,
        code_duration_s: f64,
        cn0_dbhz: f64,
        signal_power: f64,
    ) -> Result<Self> {
        if !sample_rate_hz.is_finite()
            || sample_rate_hz <= 0.0
            || !code_duration_s.is_finite()
            || code_duration_s <= 0.0
        {
            return Err(Error::config(
                "sample rate and code duration must be positive",
            ));
        }
        if !signal_power.is_finite() || signal_power <= 0.0 {
            return Err(Error::config("signal power must be positive"));
        }
        if !cn0_dbhz.is_finite() {
            return Err(Error::config("C/N0 must be finite"));
        }
        let model = Self {
            sample_rate_hz,
            code_duration_s,
            cn0_dbhz,
            signal_power,
        };
        // must describe an integer number of samples per code
        model.samples_per_code()?;
        Ok(model)
    }

    /// Sampling frequency in Hz.
    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Duration of one ranging code in seconds.
    pub fn code_duration_s(&self) -> f64 {
        self.code_duration_s
    }

    /// Carrier-to-noise density ratio in dB-Hz.
    pub fn cn0_dbhz(&self) -> f64 {
        self.cn0_dbhz
    }

    /// Signal power immediately preceding correlation.
    pub fn signal_power(&self) -> f64 {
        self.signal_power
    }

    /// Number of samples covering one code, `F * T`.
    pub fn samples_per_code(&self) -> Result<usize> {
        let ft = self.sample_rate_hz * self.code_duration_s;
        let rounded = ft.round();
        if rounded < 1.0 || (ft - rounded).abs() > SAMPLE_COUNT_TOL * rounded {
            return Err(Error::config(format!(
                "F*T = {ft} is not a positive integer sample count"
            )));
        }
        Ok(rounded as usize)
    }

    /// Integer samples per chip; fractional ratios are rejected rather
    /// than approximated.
    pub fn samples_per_chip(&self, chips_per_code: usize) -> Result<usize> {
        let ft = self.samples_per_code()?;
        if chips_per_code == 0 || ft % chips_per_code != 0 {
            return Err(Error::config(format!(
                "F*T = {ft} is not divisible by n = {chips_per_code}"
            )));
        }
        Ok(ft / chips_per_code)
    }

    /// Noise power per sample at the current C/N0.
    pub fn sigma2(&self) -> f64 {
        let cn0_linear = 10f64.powf(self.cn0_dbhz / 10.0);
        (self.signal_power / cn0_linear) * (self.sample_rate_hz / 2.0)
    }

    /// Same radio observing a different C/N0.
    pub fn with_cn0(&self, cn0_dbhz: f64) -> Self {
        Self { cn0_dbhz, ..*self }
    }
}

/// One code period of real-valued samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    samples: Vec<f64>,
    epoch: u64,
}

impl SampleBlock {
    pub fn new(samples: Vec<f64>, epoch: u64) -> Self {
        Self { samples, epoch }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Same samples tagged with a different epoch index.
    pub fn at_epoch(mut self, epoch: u64) -> Self {
        self.epoch = epoch;
        self
    }
}

/// A forger's election: how many chips to invert per spoofed code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdversaryStrategy {
    inverted_chips: usize,
}

impl AdversaryStrategy {
    pub fn new(inverted_chips: usize) -> Self {
        Self { inverted_chips }
    }

    /// Number of chips the adversary inverts (`s`).
    pub fn inverted_chips(&self) -> usize {
        self.inverted_chips
    }
}

/// Expands chips to rectangular pulses of amplitude `sqrt(P)`,
/// chip-aligned with zero fractional delay.
pub fn resample(code: &RangingCode, radio: &RadioModel) -> Result<SampleBlock> {
    let per_chip = radio.samples_per_chip(code.len())?;
    let amplitude = radio.signal_power().sqrt();
    let mut samples = Vec::with_capacity(code.len() * per_chip);
    for &chip in code.chips() {
        let value = amplitude * f64::from(chip);
        samples.extend(std::iter::repeat_n(value, per_chip));
    }
    Ok(SampleBlock { samples, epoch: 0 })
}

/// Adds independent zero-mean Gaussian noise of per-sample variance
/// `sigma^2` to every sample. Deterministic for a given stream id.
pub fn add_noise(block: &SampleBlock, radio: &RadioModel, stream: StreamId) -> SampleBlock {
    let sigma = radio.sigma2().sqrt();
    let mut rng = stream.rng();
    let samples = block
        .samples
        .iter()
        .map(|&x| x + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    SampleBlock {
        samples,
        epoch: block.epoch,
    }
}

/// Inverts a uniformly random `s`-subset of chip positions, the
/// random-inversion forger's transmission. Deterministic for a given
/// stream id.
pub fn spoof_code(
    code: &RangingCode,
    strategy: AdversaryStrategy,
    stream: StreamId,
) -> Result<RangingCode> {
    let s = strategy.inverted_chips();
    if s > code.len() {
        return Err(Error::config(format!(
            "adversary cannot invert {s} chips of a {}-chip code",
            code.len()
        )));
    }
    let mut rng = stream.rng();
    let mut chips = code.chips().to_vec();
    for idx in rand::seq::index::sample(&mut rng, code.len(), s) {
        chips[idx] = -chips[idx];
    }
    RangingCode::new(chips)
}

/// Writes a campaign's blocks as little-endian 32-bit floats to
/// `<stem>.f32`, with a `<stem>.meta` sidecar describing the layout.
pub fn write_sample_dump(
    stem: &Path,
    blocks: &[SampleBlock],
    radio: &RadioModel,
    chips_per_code: usize,
) -> Result<()> {
    let data_path = stem.with_extension("f32");
    let meta_path = stem.with_extension("meta");
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(&data_path)
            .map_err(|e| Error::io(data_path.display().to_string(), e))?,
    );
    for block in blocks {
        for &x in block.samples() {
            file.write_all(&(x as f32).to_le_bytes())
                .map_err(|e| Error::io(data_path.display().to_string(), e))?;
        }
    }
    file.flush()
        .map_err(|e| Error::io(data_path.display().to_string(), e))?;
    let header = format!(
        "F={} T={} n={} epochs={}\n",
        radio.sample_rate_hz(),
        radio.code_duration_s(),
        chips_per_code,
        blocks.len()
    );
    std::fs::write(&meta_path, header).map_err(|e| Error::io(meta_path.display().to_string(), e))
}

/// Reads a dump written by [`write_sample_dump`] back into blocks of
/// `samples_per_code` samples, epoch-numbered from zero.
pub fn read_sample_dump(stem: &Path, samples_per_code: usize) -> Result<Vec<SampleBlock>> {
    let data_path = stem.with_extension("f32");
    let mut bytes = Vec::new();
    std::fs::File::open(&data_path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(data_path.display().to_string(), e))?;
    if bytes.len() % (4 * samples_per_code) != 0 {
        return Err(Error::config(format!(
            "{}: {} bytes is not a whole number of {}-sample blocks",
            data_path.display(),
            bytes.len(),
            samples_per_code
        )));
    }
    Ok(bytes
        .chunks_exact(4 * samples_per_code)
        .enumerate()
        .map(|(epoch, chunk)| SampleBlock {
            samples: chunk
                .chunks_exact(4)
                .map(|b| f64::from(f32::from_le_bytes(b.try_into().unwrap())))
                .collect(),
            epoch: epoch as u64,
        })
        .collect())
}
