use crate::refine::{NeighborContext, PredBlock};

/// DC prediction from the row above and the column to the left.
///
/// The block is filled with the rounded mean of the available neighbour
/// samples adjacent to the macroblock, or 128 when there are none.
pub fn intra_dc_predict(ctx: &NeighborContext) -> PredBlock {
    let mut sum = 0u32;
    let mut count = 0u32;
    if let Some(top) = &ctx.top {
        sum += top[3].iter().map(|&v| u32::from(v)).sum::<u32>();
        count += 16;
    }
    if let Some(left) = &ctx.left {
        sum += left.iter().map(|row| u32::from(row[3])).sum::<u32>();
        count += 16;
    }
    if count == 0 {
        return PredBlock::filled(128);
    }
    PredBlock::filled(((sum + count / 2) / count) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dc_examples() {
        let both = NeighborContext {
            left: Some([[100; 4]; 16]),
            top: Some([[100; 16]; 4]),
        };
        assert_eq!(intra_dc_predict(&both), PredBlock::filled(100));
        assert_eq!(
            intra_dc_predict(&NeighborContext::default()),
            PredBlock::filled(128)
        );
        let split = NeighborContext {
            left: Some([[104; 4]; 16]),
            top: Some([[96; 16]; 4]),
        };
        assert_eq!(intra_dc_predict(&split), PredBlock::filled(100));
    }

    #[test]
    fn uses_only_adjacent_samples() {
        let mut left = [[0u8; 4]; 16];
        for row in &mut left {
            row[3] = 60;
        }
        let mut top = [[255u8; 16]; 4];
        top[3] = [61; 16];
        let ctx = NeighborContext {
            left: Some(left),
            top: Some(top),
        };
        // (16 * 60 + 16 * 61 + 16) / 32 = 61
        assert_eq!(intra_dc_predict(&ctx), PredBlock::filled(61));
    }
}
