//! A compact hybrid video codec whose inter prediction can be spatially
//! refined by an unclipped strong deblocking filter.
//!
//! Motion-compensated macroblock predictions are filtered across every
//! sub-block boundary, starting at the edges shared with the already
//! reconstructed left and top neighbours, so that spatial context
//! propagates into the temporal predictor. One raw bit per inter
//! macroblock tells the decoder whether the refined predictor is used.
//!
//! The crate also carries the measurement tooling around the codec:
//! luma PSNR, RD curves and Bjøntegaard deltas.

pub mod codec;
pub mod deblock;
mod error;
pub mod frame;
pub mod metrics;
pub mod motion;
pub mod refine;

pub use codec::{
    decode_sequence, encode_sequence, CodecConfig, EncodeOutput, FlagPolicy, FrameStats, Mode,
    StatsLog, StreamHeader,
};
pub use deblock::{derive_thresholds, filter_edge, EdgeOctet, FilterParams};
pub use error::{Error, Result, StreamFault};
pub use frame::{read_y4m, write_y4m, Frame, Plane, Rational, Sequence};
pub use metrics::{bd_metrics, psnr_plane, psnr_sequence, BdResult, Psnr, RdCurve, RdPoint};
pub use motion::{MotionVector, Partition};
pub use refine::{
    boundary_schedule, refine_block, EdgeTask, GridStep, NeighborContext, Orientation, PredBlock,
};

/// Macroblock edge length in luma samples.
pub const MB_SIZE: usize = 16;
