//! Watermarked ranging codes: base-code generation, keyed mask
//! derivation, chip inversion, and the induced correlation loss.
//!
//! A watermark design is the triple (`n`, `r`, `W`): codes of `n` chips,
//! `r` inverted chips per code, `W` codes aggregated per authentication
//! decision. Masks are derived deterministically from a keyed hash
//! counter so that a transmitter and a verifier holding the same secret
//! reconstruct identical inversion sets for every epoch.

use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Domain-separation tag for the mask derivation stream.
const MASK_STREAM_TAG: &[u8] = b"chipmark/mask/v1";

/// Watermark design parameters.
///
/// Invariants enforced at construction: `0 < inverted_chips <
/// chips_per_code` and `codes_per_decision >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WatermarkParams {
    chips_per_code: usize,
    inverted_chips: usize,
    codes_per_decision: usize,
}

impl WatermarkParams {
    pub fn new(
        chips_per_code: usize,
        inverted_chips: usize,
        codes_per_decision: usize,
    ) -> Result<Self> {
        if inverted_chips == 0 || inverted_chips >= chips_per_code {
            return Err(Error::config(format!(
                "inverted chip count must satisfy 0 < r < n, got r={inverted_chips}, n={chips_per_code}"
            )));
        }
        if codes_per_decision == 0 {
            return Err(Error::config("codes per decision must be at least 1"));
        }
        Ok(Self {
            chips_per_code,
            inverted_chips,
            codes_per_decision,
        })
    }

    /// Number of chips in one ranging code (`n`).
    pub fn chips_per_code(&self) -> usize {
        self.chips_per_code
    }

    /// Number of inverted chips per code (`r`).
    pub fn inverted_chips(&self) -> usize {
        self.inverted_chips
    }

    /// Number of codes aggregated into one decision (`W`).
    pub fn codes_per_decision(&self) -> usize {
        self.codes_per_decision
    }

    /// Same design with a different aggregation window.
    pub fn with_codes_per_decision(&self, codes_per_decision: usize) -> Result<Self> {
        Self::new(self.chips_per_code, self.inverted_chips, codes_per_decision)
    }

    /// Same design with a different inverted-chip count.
    pub fn with_inverted_chips(&self, inverted_chips: usize) -> Result<Self> {
        Self::new(self.chips_per_code, inverted_chips, self.codes_per_decision)
    }
}

/// A ±1 chip sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangingCode {
    chips: Vec<i8>,
}

impl RangingCode {
    /// Wraps a chip vector, rejecting anything that is not ±1.
    pub fn new(chips: Vec<i8>) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::config("ranging code must not be empty"));
        }
        if let Some(pos) = chips.iter().position(|&c| c != 1 && c != -1) {
            return Err(Error::config(format!(
                "chip {pos} is {}, expected +1 or -1",
                chips[pos]
            )));
        }
        Ok(Self { chips })
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn chips(&self) -> &[i8] {
        &self.chips
    }

    /// Code with every chip inverted.
    pub fn negated(&self) -> Self {
        Self {
            chips: self.chips.iter().map(|&c| -c).collect(),
        }
    }

    /// One line of space-separated ±1, the code export format.
    pub fn export_line(&self) -> String {
        let mut line = String::with_capacity(self.chips.len() * 3);
        for (i, &c) in self.chips.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{c}");
        }
        line
    }

    /// Parses the export format back into a code.
    pub fn parse_export_line(line: &str) -> Result<Self> {
        let chips = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i8>()
                    .map_err(|_| Error::config(format!("bad chip token {tok:?}")))
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(chips)
    }

    /// Reads a code from the first non-empty line of a text file, so
    /// externally specified codes can stand in for the built-in families.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::config(format!("{}: no code line found", path.display())))?;
        Self::parse_export_line(line)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.export_line() + "\n")
            .map_err(|e| Error::io(path.display().to_string(), e))
    }
}

/// The set of chip positions inverted in one code period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkMask {
    /// Sorted, distinct positions, each `< code length`.
    indices: Vec<usize>,
}

impl WatermarkMask {
    /// Builds a mask from positions, enforcing distinctness and range.
    pub fn new(mut indices: Vec<usize>, chips_per_code: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("mask indices must be distinct"));
        }
        if let Some(&last) = indices.last() {
            if last >= chips_per_code {
                return Err(Error::config(format!(
                    "mask index {last} out of range for {chips_per_code}-chip code"
                )));
            }
        }
        if indices.is_empty() {
            return Err(Error::config("mask must invert at least one chip"));
        }
        Ok(Self { indices })
    }

    /// Sorted inverted positions.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Mask export format: `epoch,idx1,idx2,...`, indices ascending.
    pub fn export_line(&self, epoch: u64) -> String {
        let mut line = epoch.to_string();
        for idx in &self.indices {
            let _ = write!(line, ",{idx}");
        }
        line
    }

    /// Parses one line of the mask export format.
    pub fn parse_export_line(line: &str, chips_per_code: usize) -> Result<(u64, Self)> {
        let mut fields = line.trim().split(',');
        let epoch = fields
            .next()
            .and_then(|f| f.parse::<u64>().ok())
            .ok_or_else(|| Error::config(format!("bad epoch field in mask line {line:?}")))?;
        let indices = fields
            .map(|f| {
                f.parse::<usize>()
                    .map_err(|_| Error::config(format!("bad mask index {f:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok((epoch, Self::new(indices, chips_per_code)?))
    }
}

/// Keyed seed for mask derivation. The same `(key, epoch)` pair always
/// derives the same mask for a given design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    key: Vec<u8>,
    epoch: u64,
}

impl Seed {
    /// Minimum key length in bytes.
    pub const MIN_KEY_LEN: usize = 16;

    pub fn new(key: impl Into<Vec<u8>>, epoch: u64) -> Result<Self> {
        let key = key.into();
        if key.len() < Self::MIN_KEY_LEN {
            return Err(Error::config(format!(
                "seed key must be at least {} bytes, got {}",
                Self::MIN_KEY_LEN,
                key.len()
            )));
        }
        Ok(Self { key, epoch })
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Same key at a different epoch.
    pub fn at_epoch(&self, epoch: u64) -> Self {
        Self {
            key: self.key.clone(),
            epoch,
        }
    }
}

/// Generator polynomial taps (1-based, Fibonacci convention) for the two
/// length-1023 m-sequences combined into Gold codes.
const GOLD_G1_TAPS: &[usize] = &[3, 10];
const GOLD_G2_TAPS: &[usize] = &[2, 3, 6, 8, 9, 10];

/// Per-family delay applied to the second m-sequence. Families are
/// numbered 1..=32.
const GOLD_FAMILY_DELAYS: &[usize] = &[
    5, 6, 7, 8, 17, 18, 139, 140, 141, 251, 252, 254, 255, 256, 257, 258, 469, 470, 471, 472, 473,
    474, 509, 512, 513, 514, 515, 516, 859, 860, 861, 862,
];

/// Maximal-length LFSR taps (1-based) per register degree, used by the
/// fallback family for code lengths other than 1023.
const MSEQ_TAPS: &[(u32, &[usize])] = &[
    (3, &[3, 2]),
    (4, &[4, 3]),
    (5, &[5, 3]),
    (6, &[6, 5]),
    (7, &[7, 6]),
    (8, &[8, 6, 5, 4]),
    (9, &[9, 5]),
    (10, &[10, 7]),
    (11, &[11, 9]),
    (12, &[12, 11, 10, 4]),
    (13, &[13, 12, 11, 8]),
    (14, &[14, 13, 12, 2]),
    (15, &[15, 14]),
    (16, &[16, 15, 13, 4]),
];

fn msequence(degree: u32, taps: &[usize]) -> Vec<u8> {
    let length = (1usize << degree) - 1;
    let mut reg = vec![1u8; degree as usize];
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        out.push(reg[degree as usize - 1]);
        let fb = taps.iter().fold(0u8, |acc, &t| acc ^ reg[t - 1]);
        reg.rotate_right(1);
        reg[0] = fb;
    }
    out
}

/// Generates a fixed ±1 base code, deterministic in `(family_id, n)`.
///
/// * `family_id` 1..=32 with `n = 1023` selects a Gold code built from
///   the registers `1 + x^3 + x^10` and `1 + x^2 + x^3 + x^6 + x^8 + x^9
///   + x^10`, the second delayed by a per-family constant.
/// * `family_id` 0 selects a single maximal-length sequence for any
///   `n = 2^k - 1` with `3 <= k <= 16`.
///
/// Bit 0 maps to chip +1 and bit 1 to chip -1.
pub fn generate_base_code(family_id: u32, chips_per_code: usize) -> Result<RangingCode> {
    let bits = match family_id {
        0 => {
            let degree = (usize::BITS - chips_per_code.leading_zeros()).saturating_sub(1);
            let (deg, taps) = MSEQ_TAPS
                .iter()
                .find(|(d, _)| (1usize << d) - 1 == chips_per_code)
                .copied()
                .ok_or_else(|| {
                    Error::config(format!(
                        "family 0 requires n = 2^k - 1 with 3 <= k <= 16, got n={chips_per_code} \
                         (nearest degree {degree})"
                    ))
                })?;
            msequence(deg, taps)
        }
        1..=32 => {
            if chips_per_code != 1023 {
                return Err(Error::config(format!(
                    "family {family_id} generates 1023-chip Gold codes, got n={chips_per_code}"
                )));
            }
            let g1 = msequence(10, GOLD_G1_TAPS);
            let g2 = msequence(10, GOLD_G2_TAPS);
            let delay = GOLD_FAMILY_DELAYS[family_id as usize - 1];
            (0..1023)
                .map(|i| g1[i] ^ g2[(i + 1023 - delay) % 1023])
                .collect()
        }
        _ => {
            return Err(Error::config(format!(
                "unsupported family id {family_id}, expected 0..=32"
            )));
        }
    };
    RangingCode::new(bits.into_iter().map(|b| 1 - 2 * b as i8).collect())
}

/// Derives the inversion mask for one epoch from a keyed hash counter.
///
/// The stream is SHA-256 over `tag || len(key) || key || epoch ||
/// counter` (64-bit little-endian integers); each digest yields eight
/// little-endian 32-bit words. Words are rejection-sampled into chip
/// positions, discarding values that would bias the modulus and
/// positions already chosen, until `r` distinct positions remain.
/// Conditioned on an ideal stream every r-subset of positions is equally
/// likely.
pub fn derive_mask(seed: &Seed, params: &WatermarkParams) -> WatermarkMask {
    let n = params.chips_per_code() as u64;
    let zone = u64::from(u32::MAX) + 1 - ((u64::from(u32::MAX) + 1) % n);
    let mut chosen = vec![false; params.chips_per_code()];
    let mut indices = Vec::with_capacity(params.inverted_chips());
    let mut counter = 0u64;
    'fill: loop {
        let mut hasher = Sha256::new();
        hasher.update(MASK_STREAM_TAG);
        hasher.update((seed.key().len() as u64).to_le_bytes());
        hasher.update(seed.key());
        hasher.update(seed.epoch().to_le_bytes());
        hasher.update(counter.to_le_bytes());
        let digest = hasher.finalize();
        counter += 1;
        for word in digest.chunks_exact(4) {
            let v = u64::from(u32::from_le_bytes(word.try_into().unwrap()));
            if v >= zone {
                continue;
            }
            let idx = (v % n) as usize;
            if chosen[idx] {
                continue;
            }
            chosen[idx] = true;
            indices.push(idx);
            if indices.len() == params.inverted_chips() {
                break 'fill;
            }
        }
    }
    WatermarkMask::new(indices, params.chips_per_code())
        .expect("rejection sampling yields distinct in-range indices")
}

/// Returns the code with the masked chips inverted.
///
/// Panics if the mask addresses a position beyond the code length; the
/// mask and code are expected to come from the same design.
pub fn apply_watermark(code: &RangingCode, mask: &WatermarkMask) -> RangingCode {
    let max = *mask.indices().last().expect("mask is non-empty");
    assert!(
        max < code.len(),
        "mask index {max} out of range for {}-chip code",
        code.len()
    );
    let mut chips = code.chips().to_vec();
    for &idx in mask.indices() {
        chips[idx] = -chips[idx];
    }
    RangingCode { chips }
}

/// Correlation-amplitude loss, in dB, seen by a receiver that tracks a
/// watermarked signal with the plain replica: `20 log10((n - 2r) / n)`.
///
/// `r = 0` is allowed and yields 0 dB; `n <= 2r` leaves no positive
/// correlation and is rejected.
pub fn degradation_db(chips_per_code: usize, inverted_chips: usize) -> Result<f64> {
    if chips_per_code == 0 {
        return Err(Error::config("chip count must be positive"));
    }
    if chips_per_code <= 2 * inverted_chips {
        return Err(Error::config(format!(
            "degradation undefined for n <= 2r (n={chips_per_code}, r={inverted_chips})"
        )));
    }
    let n = chips_per_code as f64;
    let r = inverted_chips as f64;
    Ok(20.0 * ((n - 2.0 * r) / n).log10())
}
