//! 4x4 integer core transform with exact-rational quantization.

/// Forward core transform matrix.
pub const CORE: [[i32; 4]; 4] = [[1, 1, 1, 1], [2, 1, -1, -2], [1, -1, -1, 1], [1, -2, 2, -1]];

/// Squared row norms of [`CORE`]; `CORE * CORE^T = diag(ROW_NORM)`.
const ROW_NORM: [i64; 4] = [4, 10, 4, 10];

/// Quantizer step numerators in sixteenths for `qp % 6`.
const QBASE: [i64; 6] = [10, 11, 13, 14, 16, 18];

/// Common multiple of every `ROW_NORM[i] * ROW_NORM[j]`.
const NORM_LCM: i64 = 400;

pub type Block4 = [[i32; 4]; 4];

/// Rounded division for `b > 0`: `floor((a + b/2) / b)`.
#[inline]
pub fn rdiv(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b / 2).div_euclid(b)
}

/// `qbase[qp % 6] * 2^(qp / 6)`, i.e. sixteen times the quantizer step.
#[inline]
pub fn qstep16(qp: u8) -> i64 {
    QBASE[qp as usize % 6] << (qp / 6)
}

#[inline]
fn weight(i: usize, j: usize) -> i64 {
    ROW_NORM[i] * ROW_NORM[j]
}

/// `C * X * C^T`.
pub fn forward(x: &Block4) -> Block4 {
    let mut tmp = [[0i32; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            tmp[i][j] = (0..4).map(|k| CORE[i][k] * x[k][j]).sum();
        }
    }
    let mut out = [[0i32; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| tmp[i][k] * CORE[j][k]).sum();
        }
    }
    out
}

/// Exact inverse of [`forward`] up to the final rounding:
/// `X = C^T * (T / w) * C` with `w_ij = ROW_NORM[i] * ROW_NORM[j]`.
pub fn inverse(t: &Block4) -> Block4 {
    let mut scaled = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            scaled[i][j] = i64::from(t[i][j]) * (NORM_LCM / weight(i, j));
        }
    }
    let mut tmp = [[0i64; 4]; 4];
    for k in 0..4 {
        for j in 0..4 {
            tmp[k][j] = (0..4).map(|i| i64::from(CORE[i][k]) * scaled[i][j]).sum();
        }
    }
    let mut out = [[0i32; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            let m: i64 = (0..4).map(|j| tmp[k][j] * i64::from(CORE[j][l])).sum();
            out[k][l] = rdiv(m, NORM_LCM) as i32;
        }
    }
    out
}

/// Transforms and quantizes a residual block with entries in `[-255, 255]`.
pub fn transform_quantize(residual: &Block4, qp: u8) -> Block4 {
    let t = forward(residual);
    let q = qstep16(qp);
    let mut levels = [[0i32; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            levels[i][j] = rdiv(i64::from(t[i][j]) * 256, q * weight(i, j)) as i32;
        }
    }
    levels
}

/// Scales levels back to transform coefficients.
pub fn dequantize(levels: &Block4, qp: u8) -> Block4 {
    let q = qstep16(qp);
    let mut t = [[0i32; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = rdiv(i64::from(levels[i][j]) * q * weight(i, j), 256) as i32;
        }
    }
    t
}

/// Dequantizes and inverse-transforms, clamping to `[-255, 255]`.
pub fn dequantize_inverse(levels: &Block4, qp: u8) -> Block4 {
    inverse(&dequantize(levels, qp)).map(|row| row.map(|v| v.clamp(-255, 255)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_residual_has_only_dc() {
        for v in [-255, -3, 0, 7, 255] {
            let t = forward(&[[v; 4]; 4]);
            assert_eq!(t[0][0], 16 * v);
            assert!(t.iter().flatten().skip(1).all(|&c| c == 0));
        }
    }

    #[test]
    fn dc_level_at_qp0() {
        // T = 256 comes from a constant residual of 16
        let levels = transform_quantize(&[[16; 4]; 4], 0);
        assert_eq!(levels[0][0], rdiv(256 * 256, 10 * 16) as i32);
        assert_eq!(levels[0][0], 410);
    }

    #[test]
    fn zero_in_zero_out() {
        for qp in 0..=51 {
            assert_eq!(transform_quantize(&[[0; 4]; 4], qp), [[0; 4]; 4]);
            assert_eq!(dequantize_inverse(&[[0; 4]; 4], qp), [[0; 4]; 4]);
        }
    }

    #[test]
    fn inverse_undoes_forward_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let x: Block4 =
                std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-255..=255)));
            assert_eq!(inverse(&forward(&x)), x);
        }
    }

    #[test]
    fn qp0_round_trip_error_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst = 0;
        for _ in 0..100_000 {
            let x: Block4 = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-8..=8)));
            let y = dequantize_inverse(&transform_quantize(&x, 0), 0);
            for (a, b) in x.iter().flatten().zip(y.iter().flatten()) {
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst <= 1, "worst error {worst}");
    }

    #[test]
    fn step_doubles_every_six() {
        for qp in 0..46u8 {
            assert_eq!(qstep16(qp + 6), 2 * qstep16(qp));
        }
    }

    #[test]
    fn rounding_convention() {
        assert_eq!(rdiv(5, 2), 3);
        assert_eq!(rdiv(-5, 2), -2);
        assert_eq!(rdiv(-6, 4), -1);
        assert_eq!(rdiv(7, 4), 2);
    }
}
