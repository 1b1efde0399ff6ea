//! Layered sum-product decoding toward a target syndrome.
//!
//! Each iteration walks the layers of a [`CompactIndex`] in order. For every
//! expanded check `m` of a layer and every adjacent variable `n`:
//!
//! 1. the variable-to-check message is the posterior minus the message this
//!    check sent on its previous visit, `q_nm = L_n - r_mn`;
//! 2. the new check-to-variable message takes the product of the other
//!    incoming signs and `phi(sum of phi(|q|))` over the other incoming
//!    magnitudes, negated when the target syndrome bit `s_m` is one;
//! 3. the posterior becomes `q_nm + r_mn`.
//!
//! Updated posteriors feed the next layer immediately. `phi`'s argument is
//! clamped to `[phi_epsilon, llr_clip]`. The channel LLR of a variable of
//! degree `d` and every message sent to it are clipped to
//! `llr_clip / (d + 1)`, so the posterior, being their sum, stays within
//! `±llr_clip` without being clipped itself. Clipping the posterior directly
//! would break `L_n = channel + sum of r_mn` once it saturates, and the
//! layered update would then drift and flip signs of settled bits.
//!
//! [`FloodingDecoder`] runs the same check kernel with all checks updated
//! from the previous iteration's messages. It serves as a reference.

use rayon::prelude::*;
use thiserror::Error;

use crate::qc_code::{CompactIndex, ParityCheck};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("expected {expected} channel LLRs, got {found}")]
    LlrLength { expected: usize, found: usize },
    #[error("expected a syndrome of {expected} bits, got {found}")]
    SyndromeLength { expected: usize, found: usize },
    #[error("expected a word of {expected} bits, got {found}")]
    WordLength { expected: usize, found: usize },
    #[error("channel LLR {index} is NaN")]
    NanLlr { index: usize },
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    pub early_termination: bool,
    /// Bound on the magnitude of every stored LLR.
    pub llr_clip: f64,
    /// Lower clamp on the argument of `phi`.
    pub phi_epsilon: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            early_termination: true,
            llr_clip: 30.0,
            phi_epsilon: 1e-10,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.max_iterations == 0 {
            return Err(DecodeError::InvalidConfig("max_iterations must be at least 1"));
        }
        if !(self.llr_clip > 0.0 && self.llr_clip.is_finite()) {
            return Err(DecodeError::InvalidConfig("llr_clip must be positive and finite"));
        }
        if !(self.phi_epsilon > 0.0 && self.phi_epsilon < 1.0) {
            return Err(DecodeError::InvalidConfig("phi_epsilon must lie in (0, 1)"));
        }
        if self.phi_epsilon >= self.llr_clip {
            return Err(DecodeError::InvalidConfig("phi_epsilon must be below llr_clip"));
        }
        Ok(())
    }

    fn kernel(&self) -> PhiKernel {
        PhiKernel::new(self.phi_epsilon, self.llr_clip)
    }
}

/// `phi(x) = -ln(tanh(x / 2))` evaluated with the default clamping bounds.
pub fn phi(x: f64) -> f64 {
    let cfg = DecoderConfig::default();
    PhiKernel::new(cfg.phi_epsilon, cfg.llr_clip).eval(x)
}

/// `phi` with its argument clamped to `[epsilon, clip]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiKernel {
    epsilon: f64,
    clip: f64,
}

impl PhiKernel {
    pub fn new(epsilon: f64, clip: f64) -> Self {
        debug_assert!(epsilon > 0.0 && epsilon < clip);
        Self { epsilon, clip }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.epsilon, self.clip);
        // ln(coth(x/2)) = ln(1 + 2 / (e^x - 1)); stays accurate at both ends,
        // unlike -ln(tanh(x/2)) which cancels for large x.
        (2.0 / x.exp_m1()).ln_1p()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn clip(&self) -> f64 {
        self.clip
    }
}

/// Target syndrome, one bit per expanded check.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub bits: Vec<u8>,
}

impl Syndrome {
    pub fn zeros(n_checks: usize) -> Self {
        Self {
            bits: vec![0; n_checks],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }
}

/// `s_m` = XOR of the word bits adjacent to check `m`.
pub fn syndrome_of(word: &[u8], h: &ParityCheck) -> Result<Syndrome, DecodeError> {
    if word.len() != h.n_vars() {
        return Err(DecodeError::WordLength {
            expected: h.n_vars(),
            found: word.len(),
        });
    }
    let bits = h
        .rows()
        .map(|row| row.iter().fold(0u8, |acc, &n| acc ^ (word[n] & 1)))
        .collect();
    Ok(Syndrome { bits })
}

/// Result of decoding one frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecodeOutcome {
    pub word: Vec<u8>,
    /// The hard decision satisfies the target syndrome.
    pub converged: bool,
    pub iterations_used: usize,
}

/// Per-frame decoder memory.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderState {
    /// Posterior LLR of every variable.
    pub posterior: Vec<f64>,
    /// Check-to-variable messages, in the owning decoder's edge order.
    pub edge_messages: Vec<f64>,
    /// Completed iterations.
    pub iteration: usize,
    /// Last layer processed within the current iteration.
    pub layer: usize,
}

/// Per-variable bound `clip / (degree + 1)` on the channel LLR and on each
/// incoming check message.
fn share_bounds(degrees: impl Iterator<Item = usize>, clip: f64) -> Vec<f64> {
    degrees.map(|d| clip / (d + 1) as f64).collect()
}

impl DecoderState {
    fn new(llr0: &[f64], n_edges: usize, bounds: &[f64]) -> Self {
        Self {
            posterior: llr0.iter().zip(bounds).map(|(&l, &b)| l.clamp(-b, b)).collect(),
            edge_messages: vec![0.0; n_edges],
            iteration: 0,
            layer: 0,
        }
    }

    /// Hard decision: bit 0 iff the posterior is `>= 0`.
    pub fn hard_decision(&self) -> Vec<u8> {
        hard_decision(&self.posterior)
    }
}

pub fn hard_decision(llrs: &[f64]) -> Vec<u8> {
    llrs.iter().map(|&l| u8::from(l < 0.0 || l.is_nan())).collect()
}

/// Scratch buffers for one check update, sized for the largest check degree.
#[derive(Debug, Clone, Default)]
struct CheckScratch {
    incoming: Vec<f64>,
    phis: Vec<f64>,
    suffix: Vec<f64>,
    vars: Vec<usize>,
}

impl CheckScratch {
    fn with_degree(d: usize) -> Self {
        Self {
            incoming: vec![0.0; d],
            phis: vec![0.0; d],
            suffix: vec![0.0; d + 1],
            vars: vec![0; d],
        }
    }
}

#[inline]
fn sign_bit(x: f64) -> u64 {
    x.to_bits() >> 63
}

/// Sum-product check update. Reads the variable-to-check messages in
/// `incoming` and writes the outgoing check-to-variable messages to `out`.
///
/// Signs are combined as XORed sign bits and the exclusive `phi` sums come
/// from prefix and suffix sums, so each output excludes its own input exactly.
#[inline]
fn check_update(
    incoming: &[f64],
    flip: u8,
    kernel: &PhiKernel,
    phis: &mut [f64],
    suffix: &mut [f64],
    out: &mut [f64],
) {
    let d = incoming.len();
    let mut parity = u64::from(flip & 1);
    for (p, &q) in phis.iter_mut().zip(incoming) {
        parity ^= sign_bit(q);
        *p = kernel.eval(q.abs());
    }
    suffix[d] = 0.0;
    for j in (0..d).rev() {
        suffix[j] = suffix[j + 1] + phis[j];
    }
    let clip = kernel.clip();
    let mut prefix = 0.0;
    for j in 0..d {
        let magnitude = kernel.eval(prefix + suffix[j + 1]);
        let sign = (parity ^ sign_bit(incoming[j])) << 63;
        let r = f64::from_bits(magnitude.to_bits() | sign);
        debug_assert!(r.is_finite());
        out[j] = r.clamp(-clip, clip);
        prefix += phis[j];
    }
}

fn check_inputs(
    llr0: &[f64],
    syndrome: &Syndrome,
    n_vars: usize,
    n_checks: usize,
) -> Result<(), DecodeError> {
    if llr0.len() != n_vars {
        return Err(DecodeError::LlrLength {
            expected: n_vars,
            found: llr0.len(),
        });
    }
    if syndrome.len() != n_checks {
        return Err(DecodeError::SyndromeLength {
            expected: n_checks,
            found: syndrome.len(),
        });
    }
    if let Some(index) = llr0.iter().position(|l| l.is_nan()) {
        return Err(DecodeError::NanLlr { index });
    }
    Ok(())
}

/// Layered decoder bound to one code. Reusable across frames; a single
/// instance decodes one frame at a time.
#[derive(Debug, Clone)]
pub struct LayeredDecoder<'a> {
    index: &'a CompactIndex,
    cfg: DecoderConfig,
    kernel: PhiKernel,
    scratch: CheckScratch,
    bounds: Vec<f64>,
}

impl<'a> LayeredDecoder<'a> {
    pub fn new(index: &'a CompactIndex, cfg: DecoderConfig) -> Result<Self, DecodeError> {
        cfg.validate()?;
        Ok(Self {
            index,
            cfg,
            kernel: cfg.kernel(),
            scratch: CheckScratch::with_degree(index.max_row_degree()),
            bounds: share_bounds(
                index
                    .col_degrees()
                    .iter()
                    .flat_map(|&d| std::iter::repeat_n(d, index.z())),
                cfg.llr_clip,
            ),
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    /// Fresh state: posterior = clipped channel LLRs, all messages zero.
    pub fn init_state(&self, llr0: &[f64]) -> DecoderState {
        DecoderState::new(llr0, self.index.expanded_edges(), &self.bounds)
    }

    /// Updates every check of `layer` and the posteriors they touch.
    pub fn layer_update(&mut self, state: &mut DecoderState, layer: usize, syndrome: &Syndrome) {
        let index = self.index;
        let z = index.z();
        let clip = self.cfg.llr_clip;
        let CheckScratch {
            incoming,
            phis,
            suffix,
            vars,
        } = &mut self.scratch;
        for slot in index.layer_slots(layer) {
            let row = index.slot_row(slot);
            let edges = index.slot_edges(slot);
            let d = edges.len();
            let first = index.message_offset(slot);
            for k in 0..z {
                let messages = &mut state.edge_messages[first + k * d..first + (k + 1) * d];
                for (j, edge) in edges.iter().enumerate() {
                    let n = index.variable(edge, k);
                    vars[j] = n;
                    incoming[j] = (state.posterior[n] - messages[j]).clamp(-clip, clip);
                }
                check_update(
                    &incoming[..d],
                    syndrome.bits[row * z + k],
                    &self.kernel,
                    &mut phis[..d],
                    &mut suffix[..=d],
                    messages,
                );
                for j in 0..d {
                    let b = self.bounds[vars[j]];
                    messages[j] = messages[j].clamp(-b, b);
                    state.posterior[vars[j]] = (incoming[j] + messages[j]).clamp(-clip, clip);
                }
            }
        }
        state.layer = layer;
    }

    /// One full sweep over all layers.
    pub fn iterate(&mut self, state: &mut DecoderState, syndrome: &Syndrome) {
        for layer in 0..self.index.n_layers() {
            self.layer_update(state, layer, syndrome);
        }
        state.iteration += 1;
    }

    pub fn decode(&mut self, llr0: &[f64], syndrome: &Syndrome) -> Result<DecodeOutcome, DecodeError> {
        check_inputs(llr0, syndrome, self.index.block_length(), self.index.n_checks())?;
        let mut state = self.init_state(llr0);
        let max = self.cfg.max_iterations;
        for t in 1..=max {
            self.iterate(&mut state, syndrome);
            if self.cfg.early_termination || t == max {
                let word = state.hard_decision();
                let converged = self.index.satisfies(&word, &syndrome.bits);
                if converged && self.cfg.early_termination || t == max {
                    return Ok(DecodeOutcome {
                        word,
                        converged,
                        iterations_used: t,
                    });
                }
            }
        }
        unreachable!("max_iterations is at least one")
    }
}

/// Decodes one frame with a freshly built [`LayeredDecoder`].
pub fn decode(
    llr0: &[f64],
    syndrome: &Syndrome,
    index: &CompactIndex,
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    LayeredDecoder::new(index, *cfg)?.decode(llr0, syndrome)
}

/// Decodes independent frames in parallel on the current rayon pool.
/// Outcomes come back in input order and equal per-frame [`decode`] results.
pub fn decode_batch(
    frames: &[(Vec<f64>, Syndrome)],
    index: &CompactIndex,
    cfg: &DecoderConfig,
) -> Vec<Result<DecodeOutcome, DecodeError>> {
    if let Err(e) = cfg.validate() {
        return frames.iter().map(|_| Err(e.clone())).collect();
    }
    frames
        .par_iter()
        .map_init(
            || LayeredDecoder::new(index, *cfg).expect("validated above"),
            |dec, (llr0, syndrome)| dec.decode(llr0, syndrome),
        )
        .collect()
}

/// Batch decoder with a dedicated worker pool.
pub struct BatchDecoder<'a> {
    index: &'a CompactIndex,
    cfg: DecoderConfig,
    pool: rayon::ThreadPool,
}

impl<'a> BatchDecoder<'a> {
    pub fn new(index: &'a CompactIndex, cfg: DecoderConfig, workers: usize) -> Result<Self, DecodeError> {
        cfg.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|_| DecodeError::InvalidConfig("could not start worker pool"))?;
        Ok(Self { index, cfg, pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn decode_batch(&self, frames: &[(Vec<f64>, Syndrome)]) -> Vec<Result<DecodeOutcome, DecodeError>> {
        self.pool
            .install(|| decode_batch(frames, self.index, &self.cfg))
    }
}

/// Flooding-schedule decoder over an explicit parity-check matrix.
#[derive(Debug, Clone)]
pub struct FloodingDecoder<'a> {
    h: &'a ParityCheck,
    cfg: DecoderConfig,
    kernel: PhiKernel,
    scratch: CheckScratch,
    intrinsic: Vec<f64>,
    bounds: Vec<f64>,
}

impl<'a> FloodingDecoder<'a> {
    pub fn new(h: &'a ParityCheck, cfg: DecoderConfig) -> Result<Self, DecodeError> {
        cfg.validate()?;
        let max_degree = h.rows().map(<[usize]>::len).max().unwrap_or(0);
        Ok(Self {
            h,
            cfg,
            kernel: cfg.kernel(),
            scratch: CheckScratch::with_degree(max_degree),
            intrinsic: vec![0.0; h.n_vars()],
            bounds: share_bounds(h.var_degrees().into_iter(), cfg.llr_clip),
        })
    }

    pub fn init_state(&self, llr0: &[f64]) -> DecoderState {
        DecoderState::new(llr0, self.h.n_edges(), &self.bounds)
    }

    /// Updates all checks from the previous messages, then all posteriors.
    pub fn iterate(&mut self, state: &mut DecoderState, syndrome: &Syndrome) {
        let h = self.h;
        let clip = self.cfg.llr_clip;
        let CheckScratch {
            incoming,
            phis,
            suffix,
            ..
        } = &mut self.scratch;

        self.intrinsic.copy_from_slice(&state.posterior);
        for m in 0..h.n_checks() {
            let start = h.row_start(m);
            for (j, &n) in h.row(m).iter().enumerate() {
                self.intrinsic[n] -= state.edge_messages[start + j];
            }
        }
        for v in self.intrinsic.iter_mut() {
            *v = v.clamp(-clip, clip);
        }

        for m in 0..h.n_checks() {
            let row = h.row(m);
            let d = row.len();
            let start = h.row_start(m);
            let messages = &mut state.edge_messages[start..start + d];
            for (j, &n) in row.iter().enumerate() {
                incoming[j] = (state.posterior[n] - messages[j]).clamp(-clip, clip);
            }
            check_update(
                &incoming[..d],
                syndrome.bits[m],
                &self.kernel,
                &mut phis[..d],
                &mut suffix[..=d],
                messages,
            );
            for (r, &n) in messages.iter_mut().zip(row) {
                *r = r.clamp(-self.bounds[n], self.bounds[n]);
            }
        }

        state.posterior.copy_from_slice(&self.intrinsic);
        for m in 0..h.n_checks() {
            let start = h.row_start(m);
            for (j, &n) in h.row(m).iter().enumerate() {
                state.posterior[n] += state.edge_messages[start + j];
            }
        }
        for v in state.posterior.iter_mut() {
            *v = v.clamp(-clip, clip);
        }
        state.iteration += 1;
    }

    pub fn decode(&mut self, llr0: &[f64], syndrome: &Syndrome) -> Result<DecodeOutcome, DecodeError> {
        check_inputs(llr0, syndrome, self.h.n_vars(), self.h.n_checks())?;
        let mut state = self.init_state(llr0);
        let max = self.cfg.max_iterations;
        for t in 1..=max {
            self.iterate(&mut state, syndrome);
            if self.cfg.early_termination || t == max {
                let word = state.hard_decision();
                let converged = syndrome_of(&word, self.h).expect("length checked") == *syndrome;
                if converged && self.cfg.early_termination || t == max {
                    return Ok(DecodeOutcome {
                        word,
                        converged,
                        iterations_used: t,
                    });
                }
            }
        }
        unreachable!("max_iterations is at least one")
    }
}

/// Decodes one frame with the flooding schedule.
pub fn flooding_decode(
    llr0: &[f64],
    syndrome: &Syndrome,
    h: &ParityCheck,
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    FloodingDecoder::new(h, *cfg)?.decode(llr0, syndrome)
}
