//! Residual coding and reconstruction of one macroblock, shared by the
//! encoder and the decoder.

use super::residual::block_bits;
use super::transform::{dequantize_inverse, transform_quantize, Block4};
use crate::refine::PredBlock;
use crate::MB_SIZE;

/// Quantized residual of the sixteen 4x4 blocks, raster order.
pub(crate) type MbLevels = [Block4; 16];

pub(crate) struct Coded {
    pub levels: MbLevels,
    pub recon: [u8; 256],
    pub residual_bits: u32,
    pub ssd: u64,
}

pub(crate) fn code_residual(orig: &[u8; 256], pred: &PredBlock, qp: u8) -> Coded {
    let mut levels = [[[0i32; 4]; 4]; 16];
    let mut residual_bits = 0;
    for (k, block) in levels.iter_mut().enumerate() {
        let (bx, by) = ((k % 4) * 4, (k / 4) * 4);
        let mut diff = [[0i32; 4]; 4];
        for (y, row) in diff.iter_mut().enumerate() {
            for (x, d) in row.iter_mut().enumerate() {
                let i = (by + y) * MB_SIZE + bx + x;
                *d = i32::from(orig[i]) - i32::from(pred.0[i]);
            }
        }
        *block = transform_quantize(&diff, qp);
        residual_bits += block_bits(block);
    }
    let recon = reconstruct(pred, &levels, qp);
    Coded {
        levels,
        ssd: ssd(orig, &recon),
        recon,
        residual_bits,
    }
}

pub(crate) fn reconstruct(pred: &PredBlock, levels: &MbLevels, qp: u8) -> [u8; 256] {
    let mut recon = pred.0;
    for (k, block) in levels.iter().enumerate() {
        if block.iter().flatten().all(|&l| l == 0) {
            continue;
        }
        let (bx, by) = ((k % 4) * 4, (k / 4) * 4);
        let res = dequantize_inverse(block, qp);
        for (y, row) in res.iter().enumerate() {
            for (x, &r) in row.iter().enumerate() {
                let i = (by + y) * MB_SIZE + bx + x;
                recon[i] = (i32::from(pred.0[i]) + r).clamp(0, 255) as u8;
            }
        }
    }
    recon
}

pub(crate) fn ssd(a: &[u8; 256], b: &[u8; 256]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum()
}
