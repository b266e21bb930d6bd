//! Encoder and decoder.
//!
//! Frames are coded in IPPP order with one luma plane each. Every P-frame
//! macroblock chooses between skip, two inter partitions (each optionally
//! refined by the deblocking kernel), and DC intra prediction. The residual
//! goes through the 4x4 integer transform and is coded with Exp-Golomb
//! run/level pairs.
//!
//! Stream layout after the [`StreamHeader`], MSB first:
//!
//! ```text
//! frame      := type:1 macroblock*
//! I-mb       := residual[16]
//! P-mb       := ue(mode) [refine:1] (se(dx) se(dy))* residual[16]?
//! residual   := (ue(run) se(level != 0))* ue(zeros_left) se(0)
//! ```
//!
//! The refine bit is present only for inter modes of streams with
//! refinement enabled. Skip carries no vectors and no residual. The payload
//! is zero-padded to a whole byte.

pub mod bits;
mod decision;
mod decoder;
mod encoder;
mod inloop;
mod intra;
mod macroblock;
pub mod residual;
mod stream;
pub mod transform;

use std::time::Duration;

pub use decision::{mode_decide, rd_lambda, Candidate, CandidateKind};
pub use decoder::decode_sequence;
pub use encoder::encode_sequence;
pub use inloop::inloop_deblock;
pub use intra::intra_dc_predict;
pub use stream::{StreamHeader, HEADER_LEN, MAGIC, VERSION};

use crate::frame::Sequence;
use crate::metrics::Psnr;
use crate::refine::GridStep;
use crate::{Error, Result};

/// Default filter strength of the refinement kernel.
pub const DEFAULT_REFINE_H: u8 = 28;
/// Default full-pel search range.
pub const DEFAULT_SEARCH_RANGE: u32 = 16;

/// Macroblock mode as coded in P-frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Skip = 0,
    Inter16 = 1,
    Inter8 = 2,
    IntraDc = 3,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Skip, Mode::Inter16, Mode::Inter8, Mode::IntraDc];

    pub fn code(self) -> u32 {
        self as u32
    }

    pub fn from_code(code: u32) -> Option<Mode> {
        Mode::ALL.get(code as usize).copied()
    }

    pub fn is_inter(self) -> bool {
        matches!(self, Mode::Inter16 | Mode::Inter8)
    }
}

impl From<CandidateKind> for Mode {
    fn from(kind: CandidateKind) -> Self {
        match kind {
            CandidateKind::Skip => Mode::Skip,
            CandidateKind::Inter16 | CandidateKind::Inter16Refined => Mode::Inter16,
            CandidateKind::Inter8 | CandidateKind::Inter8Refined => Mode::Inter8,
            CandidateKind::IntraDc => Mode::IntraDc,
        }
    }
}

/// How the encoder sets the refinement flag when refinement is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlagPolicy {
    /// Refined candidates compete in the mode decision.
    #[default]
    RateDistortion,
    /// Every flag is coded as 0 and decisions are made exactly as with
    /// refinement disabled. Isolates the signalling cost.
    ForceZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodecConfig {
    pub qp: u8,
    pub refine_enabled: bool,
    pub refine_h: u8,
    pub inloop_deblock: bool,
    pub grid: GridStep,
    pub search_range: u32,
    /// I-frame interval; `None` codes only frame 0 as intra.
    pub gop: Option<usize>,
    pub flag_policy: FlagPolicy,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig {
            qp: 28,
            refine_enabled: true,
            refine_h: DEFAULT_REFINE_H,
            inloop_deblock: true,
            grid: GridStep::Four,
            search_range: DEFAULT_SEARCH_RANGE,
            gop: None,
            flag_policy: FlagPolicy::RateDistortion,
        }
    }
}

impl CodecConfig {
    pub fn validate(&self) -> Result<()> {
        if self.qp > 51 {
            return Err(Error::Qp(self.qp.into()));
        }
        if self.refine_h > 51 {
            return Err(Error::FilterStrength(self.refine_h.into()));
        }
        if self.gop == Some(0) {
            return Err(Error::Config("GOP length must be positive".into()));
        }
        if self.search_range > 1024 {
            return Err(Error::Config(format!(
                "search range {} exceeds 1024",
                self.search_range
            )));
        }
        Ok(())
    }

    fn is_intra_frame(&self, index: usize) -> bool {
        index == 0 || self.gop.is_some_and(|g| index.is_multiple_of(g))
    }
}

/// Per-frame encoder statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameStats {
    pub index: usize,
    pub intra: bool,
    /// Payload bits of this frame, including the frame type bit.
    pub bits: u64,
    /// Luma PSNR of the final (post in-loop filter) reconstruction.
    pub psnr: Psnr,
    /// Macroblock counts indexed by [`Mode::code`].
    pub modes: [usize; 4],
    /// Refinement flags coded.
    pub flags_coded: usize,
    /// Refinement flags set to 1.
    pub refined: usize,
    pub refine_calls: u64,
    pub refine_time: Duration,
}

impl FrameStats {
    pub fn refine_us_per_mb(&self) -> f64 {
        mean_us(self.refine_time, self.refine_calls)
    }
}

fn mean_us(total: Duration, calls: u64) -> f64 {
    if calls == 0 {
        0.0
    } else {
        total.as_secs_f64() * 1e6 / calls as f64
    }
}

/// The trial costs behind one P-frame macroblock decision.
#[derive(Debug, Clone, PartialEq)]
pub struct MbDecision {
    pub frame: usize,
    pub mb: usize,
    pub chosen: CandidateKind,
    pub candidates: Vec<Candidate>,
}

impl MbDecision {
    pub fn chosen_cost(&self, lambda: f64) -> f64 {
        self.candidates
            .iter()
            .find(|c| c.kind == self.chosen)
            .map(|c| c.cost(lambda))
            .expect("chosen candidate is among the evaluated ones")
    }

    /// Lowest cost among the candidates available without refinement.
    pub fn best_unrefined_cost(&self, lambda: f64) -> f64 {
        self.candidates
            .iter()
            .filter(|c| c.kind.is_unrefined())
            .map(|c| c.cost(lambda))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsLog {
    pub lambda: f64,
    pub frames: Vec<FrameStats>,
    pub decisions: Vec<MbDecision>,
    /// Payload bits before byte padding.
    pub payload_bits: u64,
}

impl StatsLog {
    pub fn total_bits(&self) -> u64 {
        self.frames.iter().map(|f| f.bits).sum()
    }

    pub fn inter_macroblocks(&self) -> usize {
        self.frames
            .iter()
            .map(|f| f.modes[Mode::Inter16 as usize] + f.modes[Mode::Inter8 as usize])
            .sum()
    }

    pub fn refine_calls(&self) -> u64 {
        self.frames.iter().map(|f| f.refine_calls).sum()
    }

    pub fn refine_time(&self) -> Duration {
        self.frames.iter().map(|f| f.refine_time).sum()
    }

    /// Mean wall time of one macroblock refinement, in microseconds.
    pub fn refine_us_per_mb(&self) -> f64 {
        mean_us(self.refine_time(), self.refine_calls())
    }
}

#[derive(Debug, Clone)]
pub struct EncodeOutput {
    pub bitstream: Vec<u8>,
    /// The encoder's local reconstruction, as the decoder will output it.
    pub recon: Sequence,
    pub stats: StatsLog,
}
