//! Binary-input AWGN channel with unit-power BPSK.
//!
//! Bit `c` is sent as `1 - 2c` and received with additive Gaussian noise of
//! variance `sigma2 = 1 / snr`. Every frame draws from its own ChaCha20
//! stream, selected by the frame index, so a campaign produces the same
//! samples no matter how frames are split across workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("snr must be positive and finite, got {0}")]
    InvalidSnr(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Linear SNR, signal power over noise variance.
    pub snr: f64,
    /// Noise variance, `1 / snr`.
    pub sigma2: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr: f64, seed: u64) -> Result<Self, ChannelError> {
        if !(snr > 0.0 && snr.is_finite()) {
            return Err(ChannelError::InvalidSnr(snr));
        }
        Ok(Self {
            snr,
            sigma2: 1.0 / snr,
            seed,
        })
    }

    /// SNR given in decibels.
    pub fn from_db(snr_db: f64, seed: u64) -> Result<Self, ChannelError> {
        Self::new(10f64.powf(snr_db / 10.0), seed)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Random stream owned by frame `frame`.
    pub fn frame_rng(&self, frame: u64) -> ChaCha20Rng {
        frame_rng(self.seed, frame)
    }
}

/// Independent substream for `(seed, frame)`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Channel output samples `R_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedWord {
    pub samples: Vec<f64>,
}

/// Sends `codeword` through the channel using frame `frame`'s stream.
pub fn transmit(codeword: &[u8], cfg: &ChannelConfig, frame: u64) -> ReceivedWord {
    let mut rng = cfg.frame_rng(frame);
    transmit_with(codeword, cfg, &mut rng)
}

/// Sends `codeword` drawing noise from `rng`.
pub fn transmit_with<R: Rng + ?Sized>(
    codeword: &[u8],
    cfg: &ChannelConfig,
    rng: &mut R,
) -> ReceivedWord {
    let sigma = cfg.sigma();
    let samples = codeword
        .iter()
        .map(|&bit| {
            debug_assert!(bit <= 1);
            let noise: f64 = rng.sample(StandardNormal);
            bpsk(bit) + sigma * noise
        })
        .collect();
    ReceivedWord { samples }
}

#[inline]
fn bpsk(bit: u8) -> f64 {
    1.0 - 2.0 * f64::from(bit)
}

/// Channel LLRs `2 R_n / sigma2`.
pub fn init_llr(received: &ReceivedWord, cfg: &ChannelConfig) -> Vec<f64> {
    let scale = 2.0 / cfg.sigma2;
    received.samples.iter().map(|&r| scale * r).collect()
}

/// Gaussian channel capacity in bits per real symbol.
pub fn capacity(snr: f64) -> f64 {
    0.5 * (1.0 + snr).log2()
}

/// Reconciliation efficiency: code rate over the capacity at `snr`.
pub fn beta(rate: f64, snr: f64) -> f64 {
    debug_assert!(snr > 0.0 && rate > 0.0 && rate < 1.0);
    rate / capacity(snr)
}
