//! Full-pel block motion estimation and compensation.

use crate::codec::bits::se_len;
use crate::frame::Plane;
use crate::refine::PredBlock;
use crate::{Error, Result, MB_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MotionVector {
    pub dx: i32,
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dx: 0, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        MotionVector { dx, dy }
    }

    /// Bits spent on this vector in the stream: `se(dx) + se(dy)`.
    pub fn bits(self) -> u32 {
        se_len(self.dx) + se_len(self.dy)
    }

    /// Ordering key for equal-cost candidates: shorter vectors first, then
    /// smaller `dy`, then smaller `dx`.
    fn tie_key(self) -> (u32, i32, i32) {
        (
            self.dx.unsigned_abs() + self.dy.unsigned_abs(),
            self.dy,
            self.dx,
        )
    }
}

/// Motion partition of a macroblock. Quadrant vectors are in raster order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partition {
    Whole(MotionVector),
    Quad([MotionVector; 4]),
}

impl Partition {
    pub fn vectors(&self) -> &[MotionVector] {
        match self {
            Partition::Whole(mv) => std::slice::from_ref(mv),
            Partition::Quad(mvs) => mvs,
        }
    }

    pub fn mv_bits(&self) -> u32 {
        self.vectors().iter().map(|mv| mv.bits()).sum()
    }
}

/// Sum of absolute differences of two equally sized blocks.
pub fn sad(a: &Plane, b: &Plane) -> Result<u32> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::BlockSize(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(sad_slices(a.data(), b.data()))
}

#[inline]
fn sad_slices(a: &[u8], b: &[u8]) -> u32 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y) as u32).sum()
}

/// Exhaustive search of `cur` (placed at `origin`) over all displacements
/// within `range` in `reference`. Returns the best vector and its SAD.
pub fn full_search(
    cur: &Plane,
    reference: &Plane,
    origin: (i32, i32),
    range: u32,
) -> (MotionVector, u32) {
    let r = range as i32;
    let mut best = (MotionVector::ZERO, u32::MAX);
    for dy in -r..=r {
        for dx in -r..=r {
            let mut cost = 0u32;
            for y in 0..cur.height() {
                for x in 0..cur.width() {
                    let s = reference.sample_at(origin.0 + dx + x as i32, origin.1 + dy + y as i32);
                    cost += cur.get(x, y).abs_diff(s) as u32;
                }
            }
            let mv = MotionVector::new(dx, dy);
            if better(cost, mv, best) {
                best = (mv, cost);
            }
        }
    }
    best
}

#[inline]
fn better(cost: u32, mv: MotionVector, best: (MotionVector, u32)) -> bool {
    cost < best.1 || (cost == best.1 && mv.tie_key() < best.0.tie_key())
}

/// Reference plane surrounded by a replicated border, so that every
/// candidate of a bounded search can be read without clamping.
#[derive(Debug, Clone)]
pub struct PaddedPlane {
    data: Vec<u8>,
    stride: usize,
    border: usize,
    width: usize,
    height: usize,
}

impl PaddedPlane {
    pub fn new(plane: &Plane, border: usize) -> Self {
        let stride = plane.width() + 2 * border;
        let rows = plane.height() + 2 * border;
        let mut data = Vec::with_capacity(stride * rows);
        for y in 0..rows {
            let sy = y as i32 - border as i32;
            for x in 0..stride {
                data.push(plane.sample_at(x as i32 - border as i32, sy));
            }
        }
        PaddedPlane {
            data,
            stride,
            border,
            width: plane.width(),
            height: plane.height(),
        }
    }

    #[inline]
    fn offset(&self, x: i32, y: i32) -> usize {
        let b = self.border as i32;
        debug_assert!(x >= -b && y >= -b);
        debug_assert!(x + MB_SIZE as i32 <= self.width as i32 + b);
        debug_assert!(y + MB_SIZE as i32 <= self.height as i32 + b);
        (y + b) as usize * self.stride + (x + b) as usize
    }
}

/// Best vector and SAD for one search block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchResult {
    pub mv: MotionVector,
    pub sad: u32,
}

/// Joint result of the 16x16 search and the four 8x8 quadrant searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroblockSearch {
    pub whole: SearchResult,
    pub quads: [SearchResult; 4],
}

/// Searches the macroblock at `(x0, y0)` and its four quadrants in one pass.
/// Equivalent to five calls of [`full_search`]. The reference border must be
/// at least `range + 16`.
pub fn search_macroblock(
    cur: &[u8; 256],
    reference: &PaddedPlane,
    x0: usize,
    y0: usize,
    range: u32,
) -> MacroblockSearch {
    assert!(reference.border >= range as usize + MB_SIZE);
    let r = range as i32;
    let init = SearchResult {
        mv: MotionVector::ZERO,
        sad: u32::MAX,
    };
    let mut whole = init;
    let mut quads = [init; 4];
    for dy in -r..=r {
        for dx in -r..=r {
            let base = reference.offset(x0 as i32 + dx, y0 as i32 + dy);
            let mut q = [0u32; 4];
            for y in 0..MB_SIZE {
                let row = &reference.data[base + y * reference.stride..][..MB_SIZE];
                let cur_row = &cur[y * MB_SIZE..(y + 1) * MB_SIZE];
                let half = (y / 8) * 2;
                q[half] += sad_slices(&cur_row[..8], &row[..8]);
                q[half + 1] += sad_slices(&cur_row[8..], &row[8..]);
            }
            let mv = MotionVector::new(dx, dy);
            let total = q.iter().sum();
            if better(total, mv, (whole.mv, whole.sad)) {
                whole = SearchResult { mv, sad: total };
            }
            for (best, &cost) in quads.iter_mut().zip(&q) {
                if better(cost, mv, (best.mv, best.sad)) {
                    *best = SearchResult { mv, sad: cost };
                }
            }
        }
    }
    MacroblockSearch { whole, quads }
}

impl MacroblockSearch {
    pub fn whole_partition(&self) -> Partition {
        Partition::Whole(self.whole.mv)
    }

    pub fn quad_partition(&self) -> Partition {
        Partition::Quad(self.quads.map(|q| q.mv))
    }

    /// Picks the partition with the lower `SAD + lambda_motion * mv_bits`,
    /// preferring the whole block on ties.
    pub fn choose(&self, lambda_motion: f64) -> Partition {
        let whole = self.whole.sad as f64 + lambda_motion * self.whole.mv.bits() as f64;
        let quad_sad: u32 = self.quads.iter().map(|q| q.sad).sum();
        let quad_bits: u32 = self.quads.iter().map(|q| q.mv.bits()).sum();
        let quad = quad_sad as f64 + lambda_motion * quad_bits as f64;
        if quad < whole {
            self.quad_partition()
        } else {
            self.whole_partition()
        }
    }
}

/// Chooses between a single 16x16 vector and four 8x8 vectors for the
/// macroblock of `cur` at `origin`.
pub fn choose_partition(
    cur: &Plane,
    reference: &Plane,
    origin: (usize, usize),
    range: u32,
    lambda_motion: f64,
) -> Partition {
    let block = cur.macroblock(origin.0, origin.1);
    let padded = PaddedPlane::new(reference, range as usize + MB_SIZE);
    search_macroblock(&block, &padded, origin.0, origin.1, range).choose(lambda_motion)
}

/// Builds the temporal predictor of the macroblock at `origin`.
pub fn motion_compensate(
    reference: &Plane,
    origin: (usize, usize),
    partition: &Partition,
) -> PredBlock {
    let mut out = PredBlock([0; 256]);
    let mut copy = |bx: usize, by: usize, size: usize, mv: MotionVector| {
        // vectors read from a damaged stream can be arbitrarily large
        let sx = ((origin.0 + bx) as i32).saturating_add(mv.dx);
        let sy = ((origin.1 + by) as i32).saturating_add(mv.dy);
        let inside = sx >= 0
            && sy >= 0
            && sx as usize + size <= reference.width()
            && sy as usize + size <= reference.height();
        for y in 0..size {
            let dst = &mut out.0[(by + y) * MB_SIZE + bx..][..size];
            if inside {
                let start = (sy as usize + y) * reference.width() + sx as usize;
                dst.copy_from_slice(&reference.data()[start..start + size]);
            } else {
                for (x, d) in dst.iter_mut().enumerate() {
                    *d = reference
                        .sample_at(sx.saturating_add(x as i32), sy.saturating_add(y as i32));
                }
            }
        }
    };
    match partition {
        Partition::Whole(mv) => copy(0, 0, MB_SIZE, *mv),
        Partition::Quad(mvs) => {
            for (i, mv) in mvs.iter().enumerate() {
                copy((i % 2) * 8, (i / 2) * 8, 8, *mv);
            }
        }
    }
    out
}
