use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use stpc_core::{
    bd_metrics, decode_sequence, encode_sequence, psnr_sequence, Psnr, RdCurve, RdPoint, Sequence,
};

use crate::CodingArgs;

#[derive(Clone, Copy)]
struct Scenario {
    refine: bool,
    deblock: bool,
}

impl Scenario {
    const ALL: [Scenario; 4] = [
        Scenario {
            refine: false,
            deblock: false,
        },
        Scenario {
            refine: true,
            deblock: false,
        },
        Scenario {
            refine: false,
            deblock: true,
        },
        Scenario {
            refine: true,
            deblock: true,
        },
    ];

    fn name(self) -> String {
        format!(
            "refine-{}_deblock-{}",
            crate::on_off(self.refine),
            crate::on_off(self.deblock)
        )
    }
}

struct Cell {
    qp: u8,
    bits: u64,
    point: RdPoint,
    refine_calls: u64,
    refine_time: Duration,
}

pub fn run(
    seq: &Sequence,
    qps: &[u8],
    coding: &CodingArgs,
    out: &Path,
    jobs: Option<usize>,
) -> Result<()> {
    anyhow::ensure!(!qps.is_empty(), "QP list is empty");
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    let tasks: Vec<(usize, u8)> = (0..Scenario::ALL.len())
        .flat_map(|s| qps.iter().map(move |&qp| (s, qp)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .context("cannot start worker threads")?;
    let cells: Vec<Cell> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(s, qp)| {
                let scenario = Scenario::ALL[s];
                encode_cell(seq, qp, scenario, coding)
                    .with_context(|| format!("cell {} qp {qp} failed", scenario.name()))
            })
            .collect::<Result<_>>()
    })?;

    let mut curves = Vec::new();
    for (s, scenario) in Scenario::ALL.iter().enumerate() {
        let cells = &cells[s * qps.len()..(s + 1) * qps.len()];
        let mut csv = String::from("qp,rate_bps,psnr_db,bits\n");
        for c in cells {
            let _ = writeln!(csv, "{},{},{},{}", c.qp, c.point.rate, c.point.psnr, c.bits);
        }
        let path = out.join(format!("{}.csv", scenario.name()));
        fs::write(&path, csv).with_context(|| format!("cannot write {}", path.display()))?;
        curves.push(cells);
    }

    let mut summary = String::from("scenario,bd_rate_percent,bd_psnr_db,refine_us_per_mb\n");
    for (deblock, anchor_idx, test_idx) in [(false, 0, 1), (true, 2, 3)] {
        let curve = |cells: &[Cell]| {
            RdCurve::new(cells.iter().map(|c| c.point).collect()).map_err(|e| {
                anyhow!(
                    "scenario deblock-{} has an unusable RD curve: {e}",
                    crate::on_off(deblock)
                )
            })
        };
        let bd = bd_metrics(&curve(curves[anchor_idx])?, &curve(curves[test_idx])?)?;
        let (calls, time) = curves[test_idx]
            .iter()
            .fold((0, Duration::ZERO), |(n, t), c| {
                (n + c.refine_calls, t + c.refine_time)
            });
        let us = if calls == 0 {
            0.0
        } else {
            time.as_secs_f64() * 1e6 / calls as f64
        };
        let _ = writeln!(
            summary,
            "deblock-{},{:.6},{:.6},{us:.3}",
            crate::on_off(deblock),
            bd.bd_rate_percent,
            bd.bd_psnr_db
        );
    }
    let path = out.join("summary.csv");
    fs::write(&path, &summary).with_context(|| format!("cannot write {}", path.display()))?;
    print!("{summary}");
    Ok(())
}

fn encode_cell(seq: &Sequence, qp: u8, scenario: Scenario, coding: &CodingArgs) -> Result<Cell> {
    let cfg = coding.config(qp, scenario.refine, scenario.deblock);
    let out = encode_sequence(seq, &cfg)?;
    let (_, decoded) = decode_sequence(&out.bitstream)?;
    anyhow::ensure!(
        decoded == out.recon,
        "decoder output differs from the encoder reconstruction"
    );
    let psnr = match psnr_sequence(seq, &out.recon)? {
        Psnr::Db(v) => v,
        Psnr::Lossless => anyhow::bail!("lossless reconstruction has no finite PSNR"),
    };
    let bits = out.bitstream.len() as u64 * 8;
    let rate = bits as f64 * seq.frame_rate.as_f64() / seq.len() as f64;
    Ok(Cell {
        qp,
        bits,
        point: RdPoint::new(rate, psnr),
        refine_calls: out.stats.refine_calls(),
        refine_time: out.stats.refine_time(),
    })
}
