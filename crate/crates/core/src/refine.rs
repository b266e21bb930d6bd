//! Spatial refinement of a motion-compensated macroblock.
//!
//! The deblocking kernel is run over every sub-block boundary of the
//! predicted block on a fixed grid, vertical boundaries first and then
//! horizontal ones. Each pass starts at the boundary shared with the
//! reconstructed neighbour (left or top), so neighbouring samples are pulled
//! into the predictor and then carried further inward by the following
//! boundaries, which read the already filtered samples.
//!
//! Neighbour samples are read-only: outputs that would land on the
//! neighbour side of an outer boundary are dropped. The right and bottom
//! boundaries are never filtered because those neighbours are not decoded
//! yet.

use crate::deblock::{filter_line, FilterParams};
use crate::frame::Plane;
use crate::{Error, MB_SIZE};

/// 16x16 predictor samples in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PredBlock(pub [u8; 256]);

impl PredBlock {
    pub fn filled(v: u8) -> Self {
        PredBlock([v; 256])
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.0[y * MB_SIZE + x]
    }
}

/// The already reconstructed samples next to a macroblock.
///
/// `left[r][c]` is the sample at `(x0 - 4 + c, y0 + r)`; `top[r][c]` is the
/// sample at `(x0 + c, y0 - 4 + r)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NeighborContext {
    pub left: Option<[[u8; 4]; 16]>,
    pub top: Option<[[u8; 16]; 4]>,
}

impl NeighborContext {
    /// Collects the context of the macroblock at `(x0, y0)` from a
    /// (partially) reconstructed frame. Patches are absent at frame borders.
    pub fn gather(recon: &Plane, x0: usize, y0: usize) -> Self {
        let left = (x0 >= MB_SIZE).then(|| {
            let mut patch = [[0u8; 4]; 16];
            for (r, row) in patch.iter_mut().enumerate() {
                let start = (y0 + r) * recon.width() + x0 - 4;
                row.copy_from_slice(&recon.data()[start..start + 4]);
            }
            patch
        });
        let top = (y0 >= MB_SIZE).then(|| {
            let mut patch = [[0u8; 16]; 4];
            for (r, row) in patch.iter_mut().enumerate() {
                let start = (y0 - 4 + r) * recon.width() + x0;
                row.copy_from_slice(&recon.data()[start..start + 16]);
            }
            patch
        });
        NeighborContext { left, top }
    }
}

/// Spacing of the refinement boundary grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GridStep {
    #[default]
    Four,
    Eight,
}

impl GridStep {
    pub fn pixels(self) -> usize {
        match self {
            GridStep::Four => 4,
            GridStep::Eight => 8,
        }
    }
}

impl TryFrom<usize> for GridStep {
    type Error = Error;

    fn try_from(step: usize) -> Result<Self, Error> {
        match step {
            4 => Ok(GridStep::Four),
            8 => Ok(GridStep::Eight),
            other => Err(Error::GridStep(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// A vertical boundary; the octets run horizontally along one row.
    Vertical,
    /// A horizontal boundary; the octets run vertically along one column.
    Horizontal,
}

/// One application of the kernel: the boundary at `offset` pixels from the
/// macroblock origin, crossed along row or column `line`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeTask {
    pub orientation: Orientation,
    pub offset: u8,
    pub line: u8,
}

/// The ordered list of kernel applications for one macroblock.
pub fn boundary_schedule(grid: GridStep, has_left: bool, has_top: bool) -> Vec<EdgeTask> {
    schedule_iter(grid, has_left, has_top).collect()
}

fn schedule_iter(grid: GridStep, has_left: bool, has_top: bool) -> impl Iterator<Item = EdgeTask> {
    let step = grid.pixels();
    let pass = move |orientation, has_neighbor: bool| {
        let first = if has_neighbor { 0 } else { step };
        (first..MB_SIZE).step_by(step).flat_map(move |offset| {
            (0..MB_SIZE as u8).map(move |line| EdgeTask {
                orientation,
                offset: offset as u8,
                line,
            })
        })
    };
    pass(Orientation::Vertical, has_left).chain(pass(Orientation::Horizontal, has_top))
}

const PAD: usize = 4;
const WORK: usize = MB_SIZE + PAD;

/// Refines `pred` in schedule order and returns the new predictor.
pub fn refine_block(
    pred: &PredBlock,
    ctx: &NeighborContext,
    params: &FilterParams,
    grid: GridStep,
) -> PredBlock {
    // 20x20 working area with the block at (4, 4); row/column 0..4 hold context
    let mut work = [0u8; WORK * WORK];
    for r in 0..MB_SIZE {
        let dst = (r + PAD) * WORK + PAD;
        work[dst..dst + MB_SIZE].copy_from_slice(&pred.0[r * MB_SIZE..(r + 1) * MB_SIZE]);
    }
    if let Some(left) = &ctx.left {
        for (r, row) in left.iter().enumerate() {
            let dst = (r + PAD) * WORK;
            work[dst..dst + 4].copy_from_slice(row);
        }
    }
    if let Some(top) = &ctx.top {
        for (r, row) in top.iter().enumerate() {
            let dst = r * WORK + PAD;
            work[dst..dst + MB_SIZE].copy_from_slice(row);
        }
    }

    for task in schedule_iter(grid, ctx.left.is_some(), ctx.top.is_some()) {
        let offset = task.offset as usize + PAD;
        let line = task.line as usize + PAD;
        // index of p3 and distance between consecutive samples of the octet
        let (start, stride) = match task.orientation {
            Orientation::Vertical => (line * WORK + offset - 4, 1),
            Orientation::Horizontal => ((offset - 4) * WORK + line, WORK),
        };
        let mut samples = [0u8; 8];
        for (i, s) in samples.iter_mut().enumerate() {
            *s = work[start + i * stride];
        }
        let out = filter_line(samples, params);
        let first_written = if task.offset == 0 { 4 } else { 0 };
        for (i, &v) in out.iter().enumerate().skip(first_written) {
            work[start + i * stride] = v;
        }
    }

    let mut refined = PredBlock([0; 256]);
    for r in 0..MB_SIZE {
        let src = (r + PAD) * WORK + PAD;
        refined.0[r * MB_SIZE..(r + 1) * MB_SIZE].copy_from_slice(&work[src..src + MB_SIZE]);
    }
    refined
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_sizes() {
        assert_eq!(boundary_schedule(GridStep::Four, true, true).len(), 128);
        assert_eq!(boundary_schedule(GridStep::Four, false, false).len(), 96);
        assert_eq!(boundary_schedule(GridStep::Eight, true, true).len(), 64);
        assert_eq!(boundary_schedule(GridStep::Eight, true, false).len(), 48);
        assert!(matches!(GridStep::try_from(5), Err(Error::GridStep(5))));
    }

    #[test]
    fn schedule_order() {
        let tasks = boundary_schedule(GridStep::Four, true, false);
        let first_h = tasks
            .iter()
            .position(|t| t.orientation == Orientation::Horizontal)
            .unwrap();
        assert!(tasks[..first_h]
            .iter()
            .all(|t| t.orientation == Orientation::Vertical));
        assert!(tasks[first_h..]
            .iter()
            .all(|t| t.orientation == Orientation::Horizontal));
        let offsets: Vec<_> = tasks[first_h..]
            .iter()
            .map(|t| t.offset)
            .step_by(16)
            .collect();
        assert_eq!(offsets, [4, 8, 12]);
        let offsets: Vec<_> = tasks[..first_h]
            .iter()
            .map(|t| t.offset)
            .step_by(16)
            .collect();
        assert_eq!(offsets, [0, 4, 8, 12]);
        assert!(tasks[..16]
            .iter()
            .enumerate()
            .all(|(i, t)| t.line as usize == i));
    }

    #[test]
    fn flat_block_with_matching_neighbours() {
        let ctx = NeighborContext {
            left: Some([[110; 4]; 16]),
            top: Some([[110; 16]; 4]),
        };
        let out = refine_block(
            &PredBlock::filled(110),
            &ctx,
            &FilterParams::for_strength(28),
            GridStep::Four,
        );
        assert_eq!(out, PredBlock::filled(110));
    }

    #[test]
    fn flat_block_without_neighbours() {
        let out = refine_block(
            &PredBlock::filled(110),
            &NeighborContext::default(),
            &FilterParams::for_strength(28),
            GridStep::Eight,
        );
        assert_eq!(out, PredBlock::filled(110));
    }

    #[test]
    fn left_neighbour_pulls_first_columns() {
        let ctx = NeighborContext {
            left: Some([[100; 4]; 16]),
            top: None,
        };
        let params = FilterParams::for_strength(28);
        let out = refine_block(&PredBlock::filled(110), &ctx, &params, GridStep::Four);
        // columns 0..3 first receive the kernel's q-side [106, 107, 110, 110];
        // the boundary at 4 then reads those and its strong branch rewrites
        // column 1 to (2*106 + 3*107 + 110 + 110 + 110 + 4) >> 3 = 108
        for y in 0..16 {
            assert_eq!(out.get(0, y), 106);
            assert_eq!(out.get(1, y), 108);
            assert_eq!(out.get(15, y), 110);
        }
    }

    #[test]
    fn gather_reads_reconstruction() {
        let plane = Plane::from_fn(48, 32, |x, y| (x + 3 * y) as u8);
        let ctx = NeighborContext::gather(&plane, 16, 16);
        assert_eq!(ctx.left.unwrap()[0], [12 + 48, 13 + 48, 14 + 48, 15 + 48]);
        assert_eq!(ctx.top.unwrap()[3][0], (16 + 3 * 15) as u8);
        let ctx = NeighborContext::gather(&plane, 0, 16);
        assert!(ctx.left.is_none() && ctx.top.is_some());
    }
}
