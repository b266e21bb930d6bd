//! In-loop deblocking of reconstructed frames.
//!
//! Reuses the unclipped kernel with `h = qp` on every 4x4 boundary. Both
//! sides of each edge are written, and macroblocks are visited in raster
//! order so that the outer boundaries see already filtered neighbours.

use crate::deblock::{filter_line, FilterParams};
use crate::frame::Plane;
use crate::MB_SIZE;

const GRID: usize = 4;

pub fn inloop_deblock(frame: &Plane, qp: u8) -> Plane {
    let params = FilterParams::for_strength(i32::from(qp));
    let mut out = frame.clone();
    let w = out.width();
    for y0 in (0..out.height()).step_by(MB_SIZE) {
        for x0 in (0..w).step_by(MB_SIZE) {
            let data = out.data_mut();
            for bx in (0..MB_SIZE).step_by(GRID) {
                let x = x0 + bx;
                if x == 0 {
                    continue;
                }
                for y in y0..y0 + MB_SIZE {
                    filter_at(data, y * w + x - 4, 1, &params);
                }
            }
            for by in (0..MB_SIZE).step_by(GRID) {
                let y = y0 + by;
                if y == 0 {
                    continue;
                }
                for x in x0..x0 + MB_SIZE {
                    filter_at(data, (y - 4) * w + x, w, &params);
                }
            }
        }
    }
    out
}

#[inline]
fn filter_at(data: &mut [u8], start: usize, stride: usize, params: &FilterParams) {
    let samples: [u8; 8] = std::array::from_fn(|i| data[start + i * stride]);
    let out = filter_line(samples, params);
    for (i, v) in out.into_iter().enumerate() {
        data[start + i * stride] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_frame_unchanged() {
        for qp in [0, 28, 51] {
            let flat = Plane::new(48, 32, 77);
            assert_eq!(inloop_deblock(&flat, qp), flat);
        }
    }

    #[test]
    fn step_across_block_boundary_is_smoothed() {
        // vertical step at x = 20 (a 4x4 boundary inside the second macroblock)
        let step = Plane::from_fn(32, 16, |x, _| if x < 20 { 100 } else { 110 });
        let out = inloop_deblock(&step, 28);
        // the boundary at 20 gives [.., 102, 104 | 106, 107, 110, 110]; the
        // boundary at 24 then reads those outputs and pulls 21..23 further
        for y in 0..16 {
            let row: Vec<u8> = (16..28).map(|x| out.get(x, y)).collect();
            assert_eq!(
                row,
                [100, 100, 102, 104, 106, 108, 109, 110, 110, 110, 110, 110]
            );
        }
    }

    #[test]
    fn column_constant_frame_only_sees_vertical_edges() {
        let cols = Plane::from_fn(32, 32, |x, _| (90 + 3 * (x % 7)) as u8);
        let out = inloop_deblock(&cols, 30);
        for y in 1..32 {
            assert_eq!(out.row(y), out.row(0));
        }
        // the frame edge itself is never filtered
        for y in 0..32 {
            assert_eq!(out.get(0, y), cols.get(0, y));
        }
    }
}
