//! Luma PSNR, rate-distortion curves and Bjøntegaard deltas.

use std::fmt::Write as _;

use crate::frame::{Plane, Sequence};
use crate::{Error, Result};

/// PSNR of a reconstruction. Identical inputs have no finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Lossless,
    Db(f64),
}

impl Psnr {
    pub fn db(self) -> Option<f64> {
        match self {
            Psnr::Lossless => None,
            Psnr::Db(v) => Some(v),
        }
    }
}

impl std::fmt::Display for Psnr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Psnr::Lossless => f.write_str("inf"),
            Psnr::Db(v) => write!(f, "{v:.4}"),
        }
    }
}

fn squared_error(a: &Plane, b: &Plane) -> Result<u64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::BlockSize(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(a.data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum())
}

/// `10 * log10(255^2 / MSE)` over all samples.
pub fn psnr_plane(a: &Plane, b: &Plane) -> Result<Psnr> {
    let sse = squared_error(a, b)?;
    if sse == 0 {
        return Ok(Psnr::Lossless);
    }
    let mse = sse as f64 / a.data().len() as f64;
    Ok(Psnr::Db(10.0 * (255.0 * 255.0 / mse).log10()))
}

/// Mean of the per-frame PSNR values. Lossless frames are left out of the
/// mean; the result is [`Psnr::Lossless`] only if every frame is.
pub fn psnr_sequence(a: &Sequence, b: &Sequence) -> Result<Psnr> {
    if a.len() != b.len() {
        return Err(Error::Config(format!(
            "frame count mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (fa, fb) in a.frames().iter().zip(b.frames()) {
        if let Psnr::Db(v) = psnr_plane(&fa.luma, &fb.luma)? {
            sum += v;
            count += 1;
        }
    }
    Ok(if count == 0 {
        Psnr::Lossless
    } else {
        Psnr::Db(sum / count as f64)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdPoint {
    /// Bits per second.
    pub rate: f64,
    pub psnr: f64,
}

impl RdPoint {
    pub fn new(rate: f64, psnr: f64) -> Self {
        RdPoint { rate, psnr }
    }
}

/// At least four points, strictly increasing in both rate and PSNR.
#[derive(Debug, Clone, PartialEq)]
pub struct RdCurve {
    points: Vec<RdPoint>,
}

impl RdCurve {
    /// Validates and sorts the points by rate.
    pub fn new(mut points: Vec<RdPoint>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InsufficientPoints(points.len()));
        }
        if points
            .iter()
            .any(|p| !(p.rate > 0.0 && p.rate.is_finite() && p.psnr.is_finite()))
        {
            return Err(Error::InvalidPoint);
        }
        points.sort_by(|a, b| a.rate.total_cmp(&b.rate));
        for w in points.windows(2) {
            if w[1].rate <= w[0].rate {
                return Err(Error::NonMonotonic("rate"));
            }
            if w[1].psnr <= w[0].psnr {
                return Err(Error::NonMonotonic("psnr"));
            }
        }
        Ok(RdCurve { points })
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rate_bps,psnr_db\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.rate, p.psnr);
        }
        out
    }

    /// Reads the `rate_bps` and `psnr_db` columns, located by header name;
    /// other columns are ignored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let header: Vec<&str> = match lines.next() {
            Some((_, h)) => h.split(',').map(str::trim).collect(),
            None => Vec::new(),
        };
        let column = |name: &str| {
            header
                .iter()
                .position(|c| *c == name)
                .ok_or_else(|| Error::Csv {
                    line: 1,
                    msg: format!("missing column {name}"),
                })
        };
        let (rate_col, psnr_col) = (column("rate_bps")?, column("psnr_db")?);
        let mut points = Vec::new();
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let field = |col: usize, what: &str| -> Result<f64> {
                fields
                    .get(col)
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| Error::Csv {
                        line: i + 1,
                        msg: format!("bad {what}"),
                    })
            };
            points.push(RdPoint::new(
                field(rate_col, "rate")?,
                field(psnr_col, "psnr")?,
            ));
        }
        RdCurve::new(points)
    }
}

/// Bjøntegaard deltas of a test curve against an anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdResult {
    /// Average rate difference at equal quality, in percent. Negative means
    /// the test curve needs fewer bits.
    pub bd_rate_percent: f64,
    /// Average PSNR difference at equal rate, in dB.
    pub bd_psnr_db: f64,
}

pub fn bd_metrics(anchor: &RdCurve, test: &RdCurve) -> Result<BdResult> {
    let log_rates = |c: &RdCurve| c.points.iter().map(|p| p.rate.log10()).collect::<Vec<_>>();
    let psnrs = |c: &RdCurve| c.points.iter().map(|p| p.psnr).collect::<Vec<_>>();
    let (a_lr, t_lr) = (log_rates(anchor), log_rates(test));
    let (a_q, t_q) = (psnrs(anchor), psnrs(test));

    let bd_psnr_db = mean_difference(&a_lr, &a_q, &t_lr, &t_q)?;
    let log_rate_diff = mean_difference(&a_q, &a_lr, &t_q, &t_lr)?;
    Ok(BdResult {
        bd_rate_percent: (10f64.powf(log_rate_diff) - 1.0) * 100.0,
        bd_psnr_db,
    })
}

/// Average of `test(x) - anchor(x)` over the common range of `x`, each side
/// modelled by a least-squares cubic.
fn mean_difference(ax: &[f64], ay: &[f64], tx: &[f64], ty: &[f64]) -> Result<f64> {
    let lo = min(ax).max(min(tx));
    let hi = max(ax).min(max(tx));
    if hi <= lo {
        return Err(Error::NoOverlap);
    }
    let anchor = Cubic::fit(ax, ay)?;
    let test = Cubic::fit(tx, ty)?;
    Ok((test.integral(lo, hi) - anchor.integral(lo, hi)) / (hi - lo))
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `sum c[k] * u^k` with `u = (x - center) / scale`.
#[derive(Debug, Clone, Copy)]
struct Cubic {
    center: f64,
    scale: f64,
    coeffs: [f64; 4],
}

impl Cubic {
    /// Least-squares fit by modified Gram-Schmidt QR on the normalized
    /// Vandermonde matrix.
    fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        let center = xs.iter().sum::<f64>() / n as f64;
        let scale = xs.iter().map(|x| (x - center).abs()).fold(0.0, f64::max);
        if scale <= 0.0 {
            return Err(Error::DegenerateFit);
        }
        let u: Vec<f64> = xs.iter().map(|x| (x - center) / scale).collect();
        let mut q: Vec<Vec<f64>> = (0..4)
            .map(|k| u.iter().map(|&v| v.powi(k)).collect())
            .collect();
        let mut r = [[0.0f64; 4]; 4];
        for k in 0..4 {
            for j in 0..k {
                let d: f64 = q[j].iter().zip(&q[k]).map(|(a, b)| a * b).sum();
                r[j][k] = d;
                let (qj, qk) = (q[j].clone(), &mut q[k]);
                for (x, y) in qk.iter_mut().zip(&qj) {
                    *x -= d * y;
                }
            }
            let norm = q[k].iter().map(|v| v * v).sum::<f64>().sqrt();
            // fewer than four distinct abscissae leave a column with no
            // independent component
            if norm < 1e-9 * (n as f64).sqrt() {
                return Err(Error::DegenerateFit);
            }
            r[k][k] = norm;
            q[k].iter_mut().for_each(|v| *v /= norm);
        }
        let qty: Vec<f64> = q
            .iter()
            .map(|col| col.iter().zip(ys).map(|(a, b)| a * b).sum())
            .collect();
        let mut coeffs = [0.0; 4];
        for k in (0..4).rev() {
            let tail: f64 = (k + 1..4).map(|j| r[k][j] * coeffs[j]).sum();
            coeffs[k] = (qty[k] - tail) / r[k][k];
        }
        Ok(Cubic {
            center,
            scale,
            coeffs,
        })
    }

    fn antiderivative(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.scale;
        let c = self.coeffs;
        self.scale * u * (c[0] + u * (c[1] / 2.0 + u * (c[2] / 3.0 + u * c[3] / 4.0)))
    }

    fn integral(&self, lo: f64, hi: f64) -> f64 {
        self.antiderivative(hi) - self.antiderivative(lo)
    }

    #[cfg(test)]
    fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.scale;
        let c = self.coeffs;
        c[0] + u * (c[1] + u * (c[2] + u * c[3]))
    }
}
