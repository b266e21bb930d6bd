//! Reference implementations written without looking at the library code
//! paths they check. Threshold comparisons are done exactly on integers,
//! so the oracles do not depend on floating point at all.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stpc_core::{Plane, Rational, Sequence};

/// `d < 0.8 * (2^(h/6) - 1)` for an integer `d >= 0`.
///
/// Rearranged: `(5d + 4) / 4 < 2^(h/6)`, raised to the sixth power.
pub fn below_alpha(d: i64, h: i32) -> bool {
    if d < 0 {
        return true;
    }
    let lhs = (5 * d as u128 + 4).pow(6);
    lhs < (4u128.pow(6)) << h
}

/// `floor(0.8 * (2^(h/6) - 1))`.
pub fn alpha_floor(h: i32) -> i64 {
    let rhs = 4u128.pow(6) << h;
    let mut f = 0i64;
    while (5 * (f + 1) as u128 + 4).pow(6) <= rhs {
        f += 1;
    }
    f
}

/// `d < 0.5 * h - 7` for an integer `d`.
pub fn below_beta(d: i64, h: i32) -> bool {
    2 * d < i64::from(h) - 14
}

/// `d < (alpha >> 2) + 2`, with the shift taken on the integer part.
pub fn below_strong(d: i64, h: i32) -> bool {
    d < (alpha_floor(h) >> 2) + 2
}

/// Largest integer `t >= -1` satisfying `pred(t)`, for a monotone predicate.
fn largest(pred: impl Fn(i64) -> bool) -> i64 {
    let mut t = -1;
    while pred(t + 1) {
        t += 1;
    }
    t
}

/// (t_alpha, t_beta, t_strong) from the exact predicates.
pub fn oracle_thresholds(h: i32) -> (i32, i32, i32) {
    let ta = largest(|d| below_alpha(d, h));
    let tb = largest(|d| d >= 0 && below_beta(d, h));
    let ts = largest(|d| d >= 0 && below_strong(d, h));
    (ta as i32, tb as i32, ts as i32)
}

/// Threshold table computed independently with 50-digit arithmetic, one
/// row per h = 0..=51.
pub const FROZEN_TABLE: [(i32, i32, i32); 52] = [
    (-1, -1, 1),
    (0, -1, 1),
    (0, -1, 1),
    (0, -1, 1),
    (0, -1, 1),
    (0, -1, 1),
    (0, -1, 1),
    (0, -1, 1),
    (1, -1, 1),
    (1, -1, 1),
    (1, -1, 1),
    (2, -1, 1),
    (2, -1, 1),
    (2, -1, 1),
    (3, -1, 1),
    (3, 0, 1),
    (4, 0, 2),
    (4, 1, 2),
    (5, 1, 2),
    (6, 2, 2),
    (7, 2, 2),
    (8, 3, 3),
    (9, 3, 3),
    (10, 4, 3),
    (11, 4, 4),
    (13, 5, 4),
    (15, 5, 4),
    (17, 6, 5),
    (19, 6, 5),
    (22, 7, 6),
    (24, 7, 7),
    (27, 8, 7),
    (31, 8, 8),
    (35, 9, 9),
    (39, 9, 10),
    (44, 10, 12),
    (50, 10, 13),
    (56, 11, 15),
    (63, 11, 16),
    (71, 12, 18),
    (80, 12, 21),
    (90, 13, 23),
    (101, 13, 26),
    (114, 14, 29),
    (128, 14, 33),
    (144, 15, 37),
    (161, 15, 41),
    (181, 16, 46),
    (203, 16, 52),
    (229, 17, 58),
    (257, 17, 65),
    (288, 18, 73),
];

/// Line-by-line transcription of the refinement filter. Input and output
/// are in spatial order: p3 p2 p1 p0 | q0 q1 q2 q3.
pub fn oracle_filter(line: [u8; 8], h: i32) -> [u8; 8] {
    oracle_filter_unclamped(line, h).map(|v| v.clamp(0, 255) as u8)
}

/// The filter before the final range clamp.
pub fn oracle_filter_unclamped(line: [u8; 8], h: i32) -> [i64; 8] {
    let s: [i64; 8] = line.map(i64::from);
    let (p3, p2, p1, p0) = (s[0], s[1], s[2], s[3]);
    let (q0, q1, q2, q3) = (s[4], s[5], s[6], s[7]);
    let (mut pp0, mut pp1, mut pp2) = (p0, p1, p2);
    let (mut qq0, mut qq1, mut qq2) = (q0, q1, q2);

    // `>>` on i64 is an arithmetic shift
    if below_alpha((p0 - q0).abs(), h)
        && below_beta((p0 - p1).abs(), h)
        && below_beta((q0 - q1).abs(), h)
    {
        pp0 = p0 + ((4 * (q0 - p0) + (p1 - q1) + 4) >> 3);
        qq0 = q0 - ((4 * (q0 - p0) + (p1 - q1) + 4) >> 3);
        if below_beta((p0 - p2).abs(), h) {
            pp1 = p1 + ((p2 + ((p0 + q0 + 1) >> 1) - 2 * p1) >> 1);
        }
        if below_beta((q0 - q2).abs(), h) {
            qq1 = q1 + ((q2 + ((q0 + p0 + 1) >> 1) - 2 * q1) >> 1);
        }
    }

    if below_strong((p0 - q0).abs(), h) {
        if below_beta((p0 - p2).abs(), h) {
            pp0 = (p2 + 2 * p1 + 2 * p0 + 2 * q0 + q1 + 4) >> 3;
            pp1 = (p2 + p1 + p0 + q0 + 2) >> 2;
            pp2 = (2 * p3 + 3 * p2 + p1 + p0 + q0 + 4) >> 3;
        } else {
            pp0 = (2 * p1 + p0 + q1 + 2) >> 2;
        }
        if below_beta((q0 - q2).abs(), h) {
            qq0 = (q2 + 2 * q1 + 2 * q0 + 2 * p0 + p1 + 4) >> 3;
            qq1 = (q2 + q1 + q0 + p0 + 2) >> 2;
            qq2 = (2 * q3 + 3 * q2 + q1 + q0 + p0 + 4) >> 3;
        } else {
            qq0 = (2 * q1 + q0 + p1 + 2) >> 2;
        }
    }

    [p3, pp2, pp1, pp0, qq0, qq1, qq2, q3]
}

/// Refinement replayed on a 20x20 buffer: block at (4, 4), left context in
/// columns 0..4, top context in rows 0..4.
pub fn oracle_refine(
    pred: &[u8; 256],
    left: Option<&[[u8; 4]; 16]>,
    top: Option<&[[u8; 16]; 4]>,
    h: i32,
    grid: usize,
) -> [u8; 256] {
    let mut buf = [[0u8; 20]; 20];
    for y in 0..16 {
        for x in 0..16 {
            buf[4 + y][4 + x] = pred[y * 16 + x];
        }
    }
    if let Some(left) = left {
        for y in 0..16 {
            buf[4 + y][..4].copy_from_slice(&left[y]);
        }
    }
    if let Some(top) = top {
        for y in 0..4 {
            buf[y][4..].copy_from_slice(&top[y]);
        }
    }

    let offsets = |has_neighbour: bool| {
        (0..16)
            .step_by(grid)
            .filter(move |&o| o > 0 || has_neighbour)
            .collect::<Vec<_>>()
    };
    for o in offsets(left.is_some()) {
        for line in 0..16 {
            let (y, x) = (4 + line, 4 + o);
            let octet: [u8; 8] = std::array::from_fn(|i| buf[y][x - 4 + i]);
            let out = oracle_filter(octet, h);
            let first = if o == 0 { 4 } else { 0 };
            for i in first..8 {
                buf[y][x - 4 + i] = out[i];
            }
        }
    }
    for o in offsets(top.is_some()) {
        for line in 0..16 {
            let (y, x) = (4 + o, 4 + line);
            let octet: [u8; 8] = std::array::from_fn(|i| buf[y - 4 + i][x]);
            let out = oracle_filter(octet, h);
            let first = if o == 0 { 4 } else { 0 };
            for i in first..8 {
                buf[y - 4 + i][x] = out[i];
            }
        }
    }

    std::array::from_fn(|i| buf[4 + i / 16][4 + i % 16])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random octet that lands near the filter's decision boundaries often:
/// a base level plus small offsets, occasionally a wide random sample.
pub fn random_octet(rng: &mut impl Rng) -> [u8; 8] {
    let base: i32 = rng.gen_range(0..=255);
    let spread: i32 = *[2, 6, 16, 48, 255].get(rng.gen_range(0..5)).unwrap();
    std::array::from_fn(|_| (base + rng.gen_range(-spread..=spread)).clamp(0, 255) as u8)
}

/// Smooth random block with optional steps on the 4-pel grid, plus random
/// contexts around it.
pub type RefineCase = ([u8; 256], Option<[[u8; 4]; 16]>, Option<[[u8; 16]; 4]>);

pub fn random_refine_case<R: Rng>(rng: &mut R) -> RefineCase {
    let base: i32 = rng.gen_range(20..=235);
    let spread: i32 = *[1, 3, 8, 24].get(rng.gen_range(0..4)).unwrap();
    let step: i32 = rng.gen_range(-12..=12);
    let sample = |rng: &mut R, bias: i32| {
        (base + bias + rng.gen_range(-spread..=spread)).clamp(0, 255) as u8
    };
    let pred = std::array::from_fn(|i| sample(rng, if (i % 16) >= 8 { step } else { 0 }));
    let left = rng.gen_bool(0.75).then(|| {
        let shift = rng.gen_range(-15..=15);
        std::array::from_fn(|_| std::array::from_fn(|_| sample(rng, shift)))
    });
    let top = rng.gen_bool(0.75).then(|| {
        let shift = rng.gen_range(-15..=15);
        std::array::from_fn(|_| std::array::from_fn(|_| sample(rng, shift)))
    });
    (pred, left, top)
}

/// Moving texture over a smooth gradient, panned by a fractional amount
/// per frame, with a second object moving the other way.
pub fn panning_sequence(width: usize, height: usize, frames: usize, seed: u64) -> Sequence {
    let mut r = rng(seed);
    let phases: Vec<f64> = (0..6)
        .map(|_| r.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let planes = (0..frames)
        .map(|t| {
            let t = t as f64;
            let pan = 0.75 * t;
            Plane::from_fn(width, height, |x, y| {
                let (x, y) = (x as f64 + pan, y as f64 + 0.25 * t);
                let gradient = 60.0 + 0.45 * x + 0.35 * y + 18.0 * ((x + 2.0 * y) / 53.0).sin();
                let texture = 14.0 * (x / 3.1 + phases[0]).sin() * (y / 4.3 + phases[1]).cos()
                    + 7.0 * ((x + y) / 2.3 + phases[2]).sin();
                // an object drifting against the pan
                let (ox, oy) = (x - 1.8 * t - 40.0, y - 50.0);
                let object = if ox.rem_euclid(120.0) < 36.0 && oy.rem_euclid(90.0) < 28.0 {
                    30.0 * (ox / 5.0 + phases[3]).cos() + 20.0 * (oy / 6.5 + phases[4]).sin()
                } else {
                    0.0
                };
                (gradient + texture + object).round().clamp(0.0, 255.0) as u8
            })
        })
        .collect();
    Sequence::from_planes(planes, Rational::new(30, 1)).unwrap()
}

/// Short sequence with integer motion, texture and noise for round trips.
pub fn textured_sequence(width: usize, height: usize, frames: usize, seed: u64) -> Sequence {
    let mut r = rng(seed);
    let noise: Vec<i32> = (0..width * height * frames)
        .map(|_| r.gen_range(-3..=3))
        .collect();
    let planes = (0..frames)
        .map(|t| {
            Plane::from_fn(width, height, |x, y| {
                let (xs, ys) = ((x + 2 * t) as f64, (y + t) as f64);
                let v = 128.0
                    + 50.0 * (xs / 7.0).sin() * (ys / 9.0).cos()
                    + 30.0 * ((xs + ys) / 13.0).sin()
                    + f64::from(noise[(t * height + y) * width + x]);
                v.round().clamp(0.0, 255.0) as u8
            })
        })
        .collect();
    Sequence::from_planes(planes, Rational::new(25, 1)).unwrap()
}
