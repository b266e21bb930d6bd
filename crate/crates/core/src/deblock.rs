//! Unclipped strong deblocking kernel.
//!
//! The kernel works on the eight samples straddling one block edge,
//! `p3 p2 p1 p0 | q0 q1 q2 q3`, and follows the H.264 strong/normal filter
//! arithmetic except that filtered values are never limited by a
//! `tc`-style clipping table. The only limit applied is the final range
//! clamp to 8 bits.
//!
//! Both the weak and the strong branch are evaluated in sequence. The strong
//! branch always reads the unfiltered input and overwrites whatever the weak
//! branch produced for the samples it touches.

use crate::{Error, Result};

/// Largest accepted filter strength.
pub const MAX_H: i32 = 51;

/// Integer thresholds derived from the filter strength `h`.
///
/// All real-valued strict comparisons of the kernel are folded into
/// inclusive integer bounds, so that `|d| < alpha` becomes `|d| <= t_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilterParams {
    pub h: i32,
    /// `ceil(alpha) - 1`, `-1` when alpha is zero.
    pub t_alpha: i32,
    /// `ceil(beta) - 1` for positive beta, otherwise `-1` (never satisfied).
    pub t_beta: i32,
    /// Bound for the strong branch: `(floor(alpha) >> 2) + 1`.
    pub t_strong: i32,
}

/// Derives the kernel thresholds for `h` in `[0, 51]` from
/// `alpha = 0.8 * (2^(h/6) - 1)` and `beta = 0.5 * h - 7`.
pub fn derive_thresholds(h: i32) -> Result<FilterParams> {
    if !(0..=MAX_H).contains(&h) {
        return Err(Error::FilterStrength(h));
    }
    let (alpha_ceil, alpha_floor) = alpha_ceil_floor(h);
    // beta = (h - 14) / 2, so ceil(beta) = ceil((h - 14) / 2)
    let t_beta = if h > 14 { (h - 14 + 1) / 2 - 1 } else { -1 };
    Ok(FilterParams {
        h,
        t_alpha: alpha_ceil - 1,
        t_beta,
        t_strong: alpha_floor / 4 + 1,
    })
}

fn alpha_ceil_floor(h: i32) -> (i32, i32) {
    if h % 6 == 0 {
        // alpha = 4 * (2^k - 1) / 5 is rational here and may be an integer
        let num = 4 * ((1i64 << (h / 6)) - 1);
        let floor = num.div_euclid(5);
        let ceil = floor + i64::from(num.rem_euclid(5) != 0);
        (ceil as i32, floor as i32)
    } else {
        // irrational; no value for h <= 51 lies within 1e-3 of an integer
        let alpha = 0.8 * ((h as f64 / 6.0).exp2() - 1.0);
        (alpha.ceil() as i32, alpha.floor() as i32)
    }
}

impl FilterParams {
    /// Thresholds for `h`, panicking on out-of-range strength.
    pub fn for_strength(h: i32) -> Self {
        derive_thresholds(h).expect("filter strength in [0, 51]")
    }
}

/// The eight samples across one edge. `p` is stored outward-in
/// (`[p3, p2, p1, p0]`), `q` inward-out (`[q0, q1, q2, q3]`), so that
/// `p` followed by `q` is the spatial order of the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeOctet {
    pub p: [u8; 4],
    pub q: [u8; 4],
}

impl EdgeOctet {
    pub fn from_line(line: [u8; 8]) -> Self {
        EdgeOctet {
            p: [line[0], line[1], line[2], line[3]],
            q: [line[4], line[5], line[6], line[7]],
        }
    }

    pub fn to_line(self) -> [u8; 8] {
        let [p3, p2, p1, p0] = self.p;
        let [q0, q1, q2, q3] = self.q;
        [p3, p2, p1, p0, q0, q1, q2, q3]
    }

    /// The same edge seen from the other side.
    pub fn mirrored(self) -> Self {
        let mut line = self.to_line();
        line.reverse();
        EdgeOctet::from_line(line)
    }
}

pub fn filter_edge(octet: EdgeOctet, params: &FilterParams) -> EdgeOctet {
    EdgeOctet::from_line(filter_line(octet.to_line(), params))
}

/// Filters one line of eight samples in spatial order.
#[inline]
pub fn filter_line(s: [u8; 8], params: &FilterParams) -> [u8; 8] {
    filter_line_wide(s, params).map(|v| v.clamp(0, 255) as u8)
}

#[inline(always)]
fn filter_line_wide(s: [u8; 8], params: &FilterParams) -> [i32; 8] {
    let [p3, p2, p1, p0, q0, q1, q2, q3] = s.map(i32::from);
    let mut out = [p3, p2, p1, p0, q0, q1, q2, q3];

    let edge = (p0 - q0).abs();
    let p_flat = (p0 - p2).abs() <= params.t_beta;
    let q_flat = (q0 - q2).abs() <= params.t_beta;

    if edge <= params.t_alpha
        && (p0 - p1).abs() <= params.t_beta
        && (q0 - q1).abs() <= params.t_beta
    {
        let delta = (4 * (q0 - p0) + (p1 - q1) + 4) >> 3;
        out[3] = p0 + delta;
        out[4] = q0 - delta;
        if p_flat {
            out[2] = p1 + ((p2 + ((p0 + q0 + 1) >> 1) - 2 * p1) >> 1);
        }
        if q_flat {
            out[5] = q1 + ((q2 + ((q0 + p0 + 1) >> 1) - 2 * q1) >> 1);
        }
    }

    if edge <= params.t_strong {
        if p_flat {
            out[3] = (p2 + 2 * p1 + 2 * p0 + 2 * q0 + q1 + 4) >> 3;
            out[2] = (p2 + p1 + p0 + q0 + 2) >> 2;
            out[1] = (2 * p3 + 3 * p2 + p1 + p0 + q0 + 4) >> 3;
        } else {
            out[3] = (2 * p1 + p0 + q1 + 2) >> 2;
        }
        if q_flat {
            out[4] = (q2 + 2 * q1 + 2 * q0 + 2 * p0 + p1 + 4) >> 3;
            out[5] = (q2 + q1 + q0 + p0 + 2) >> 2;
            out[6] = (2 * q3 + 3 * q2 + q1 + q0 + p0 + 4) >> 3;
        } else {
            out[4] = (2 * q1 + q0 + p1 + 2) >> 2;
        }
    }

    out
}
