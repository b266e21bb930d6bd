//! Run/level coding of quantized 4x4 blocks.
//!
//! Each block is scanned in zigzag order and coded as `ue(run) se(level)`
//! pairs with non-zero levels. The pair `(zeros_left, 0)` closes the block,
//! so an all-zero block is `ue(16) se(0)`.

use super::bits::{se_len, ue_len, BitReader, BitWriter};
use super::transform::Block4;
use crate::{Error, Result};

/// Zigzag scan order as raster indices into a 4x4 block.
pub const ZIGZAG: [usize; 16] = [0, 1, 4, 8, 5, 2, 3, 6, 9, 12, 13, 10, 7, 11, 14, 15];

/// Largest level magnitude accepted by the decoder. The encoder never
/// produces more than 14688 (qp 0, worst-case residual).
pub const MAX_LEVEL: i32 = 1 << 15;

fn scan(levels: &Block4) -> [i32; 16] {
    ZIGZAG.map(|i| levels[i / 4][i % 4])
}

fn for_each_pair(levels: &Block4, mut f: impl FnMut(u32, i32)) {
    let mut run = 0;
    for v in scan(levels) {
        if v == 0 {
            run += 1;
        } else {
            f(run, v);
            run = 0;
        }
    }
    f(run, 0);
}

pub fn write_block(w: &mut BitWriter, levels: &Block4) {
    for_each_pair(levels, |run, level| {
        w.put_ue(run);
        w.put_se(level);
    });
}

/// Bits [`write_block`] would emit.
pub fn block_bits(levels: &Block4) -> u32 {
    let mut bits = 0;
    for_each_pair(levels, |run, level| bits += ue_len(run) + se_len(level));
    bits
}

/// Decodes one block written by [`write_block`].
pub fn read_block(r: &mut BitReader<'_>) -> Result<Block4, ResidualError> {
    let mut coeffs = [0i32; 16];
    let mut pos = 0usize;
    loop {
        let run = r.get_ue()? as usize;
        let level = r.get_se()?;
        if level == 0 {
            if pos + run != 16 {
                return Err(ResidualError::Structure);
            }
            break;
        }
        if level.abs() > MAX_LEVEL {
            return Err(ResidualError::Level);
        }
        pos += run;
        if pos >= 16 {
            return Err(ResidualError::Structure);
        }
        coeffs[ZIGZAG[pos]] = level;
        pos += 1;
    }
    let mut out = [[0i32; 4]; 4];
    for (i, v) in coeffs.into_iter().enumerate() {
        out[i / 4][i % 4] = v;
    }
    Ok(out)
}

#[derive(Debug)]
pub enum ResidualError {
    Bits(Error),
    Structure,
    Level,
}

impl From<Error> for ResidualError {
    fn from(e: Error) -> Self {
        ResidualError::Bits(e)
    }
}
