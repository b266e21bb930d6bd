//! Deterministic inputs shared by the kernel benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stpc_core::{NeighborContext, Plane, PredBlock};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Octets around a common level, so that most of them take a filter branch.
pub fn octets(n: usize, seed: u64) -> Vec<[u8; 8]> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let base: i32 = rng.gen_range(16..240);
            std::array::from_fn(|_| (base + rng.gen_range(-8..=8)) as u8)
        })
        .collect()
}

/// Smooth blocks with full left and top context.
pub fn refine_cases(n: usize, seed: u64) -> Vec<(PredBlock, NeighborContext)> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let base: i32 = rng.gen_range(32..224);
            let mut sample = || (base + rng.gen_range(-10..=10)) as u8;
            let pred = PredBlock(std::array::from_fn(|_| sample()));
            let left = std::array::from_fn(|_| std::array::from_fn(|_| sample()));
            let top = std::array::from_fn(|_| std::array::from_fn(|_| sample()));
            (
                pred,
                NeighborContext {
                    left: Some(left),
                    top: Some(top),
                },
            )
        })
        .collect()
}

/// Textured plane and a copy shifted by `(dx, dy)`.
pub fn shifted_pair(width: usize, height: usize, dx: usize, dy: usize) -> (Plane, Plane) {
    let texture = |x: usize, y: usize| {
        let (x, y) = (x as f64, y as f64);
        (128.0 + 60.0 * (x / 5.0).sin() * (y / 7.0).cos() + 20.0 * ((x + y) / 3.0).sin()) as u8
    };
    let cur = Plane::from_fn(width, height, texture);
    let reference = Plane::from_fn(width, height, |x, y| texture(x + dx, y + dy));
    (cur, reference)
}
