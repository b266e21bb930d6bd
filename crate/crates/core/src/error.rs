use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed Y4M header: {0}")]
    Y4mHeader(String),
    #[error("truncated Y4M payload in frame {frame}")]
    Y4mTruncated { frame: usize },
    #[error("{axis} {value} is not a positive multiple of 16")]
    Dimension { axis: &'static str, value: usize },
    #[error("sequence contains no frames")]
    EmptySequence,
    #[error("frame {index} is {width}x{height}, expected {expected_width}x{expected_height}")]
    FrameSize {
        index: usize,
        width: usize,
        height: usize,
        expected_width: usize,
        expected_height: usize,
    },

    #[error("filter strength h = {0} outside [0, 51]")]
    FilterStrength(i32),
    #[error("grid step {0} is not 4 or 8")]
    GridStep(usize),
    #[error("qp {0} outside [0, 51]")]
    Qp(i32),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("block size mismatch: {0}x{1} vs {2}x{3}")]
    BlockSize(usize, usize, usize, usize),
    #[error("no candidates to choose from")]
    NoCandidates,

    #[error("unexpected end of bitstream")]
    EndOfStream,
    #[error("invalid Exp-Golomb codeword")]
    Codeword,
    #[error("bad stream magic")]
    BadMagic,
    #[error("unsupported stream version {0}")]
    Version(u8),
    #[error("invalid stream header: {0}")]
    Header(String),
    #[error("frame {frame}, macroblock {mb}: {kind}")]
    Stream {
        frame: usize,
        mb: usize,
        kind: StreamFault,
    },
    #[error("frame {frame}: truncated frame header")]
    FrameTruncated { frame: usize },
    #[error("{0} unexpected bits after the last frame")]
    TrailingData(usize),

    #[error("RD curve needs at least 4 points, got {0}")]
    InsufficientPoints(usize),
    #[error("RD curve is not strictly increasing in {0}")]
    NonMonotonic(&'static str),
    #[error("RD point has non-positive rate or non-finite PSNR")]
    InvalidPoint,
    #[error("curves do not overlap")]
    NoOverlap,
    #[error("degenerate cubic fit (fewer than 4 distinct abscissae)")]
    DegenerateFit,
    #[error("CSV line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

/// What went wrong inside a macroblock while decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFault {
    Truncated,
    InvalidCodeword,
    MissingReference,
    InvalidMode(u32),
    InvalidResidual,
    LevelOutOfRange,
}

impl std::fmt::Display for StreamFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StreamFault::Truncated => f.write_str("truncated"),
            StreamFault::InvalidCodeword => f.write_str("invalid Exp-Golomb codeword"),
            StreamFault::MissingReference => f.write_str("P-frame without a reference frame"),
            StreamFault::InvalidMode(code) => write!(f, "invalid mode codeword {code}"),
            StreamFault::InvalidResidual => f.write_str("malformed residual block"),
            StreamFault::LevelOutOfRange => f.write_str("coefficient level out of range"),
        }
    }
}
