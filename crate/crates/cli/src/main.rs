//! `stpc`: encode, decode and measure with the spatially refined codec.

mod sweep;

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use stpc_core::{
    bd_metrics, decode_sequence, encode_sequence, psnr_plane, psnr_sequence, read_y4m, write_y4m,
    CodecConfig, GridStep, Mode, RdCurve, Sequence, StatsLog,
};

#[derive(Parser)]
#[command(
    name = "stpc",
    version,
    about = "Hybrid video codec with deblocking-based spatial refinement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl From<Switch> for bool {
    fn from(s: Switch) -> bool {
        s == Switch::On
    }
}

#[derive(clap::Args)]
struct CodingArgs {
    /// Refinement filter strength h.
    #[arg(long = "h", default_value_t = 28, value_parser = clap::value_parser!(u8).range(0..=51))]
    refine_h: u8,
    /// Refinement grid in pixels.
    #[arg(long, default_value_t = 4, value_parser = parse_grid)]
    grid: usize,
    /// Full-pel motion search range.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(0..=1024))]
    range: u32,
    /// Intra period in frames; omitted means only the first frame is intra.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    gop: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a Y4M clip (luma only) into a bitstream.
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=51))]
        qp: u8,
        #[arg(long, value_enum, default_value = "on")]
        refine: Switch,
        #[arg(long, value_enum, default_value = "on")]
        deblock: Switch,
        #[command(flatten)]
        coding: CodingArgs,
        /// Per-frame statistics CSV.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Also write the encoder reconstruction as Y4M.
        #[arg(long)]
        recon: Option<PathBuf>,
    },
    /// Decode a bitstream. Without --output only the header is printed.
    Decode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Luma PSNR between two Y4M clips.
    Psnr {
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Bjøntegaard deltas of a test RD curve against an anchor.
    Bdrate {
        #[arg(long)]
        anchor: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Encode every QP under the four refine/deblock scenarios.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated QP list.
        #[arg(long, value_delimiter = ',', default_value = "24,28,32,36",
              value_parser = clap::value_parser!(u8).range(0..=51))]
        qps: Vec<u8>,
        #[command(flatten)]
        coding: CodingArgs,
        /// Output directory for the curve and summary CSVs.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 1 gives the cleanest refinement timing.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("{s} is not a number"))?;
    GridStep::try_from(v).map(|_| v).map_err(|e| e.to_string())
}

impl CodingArgs {
    fn config(&self, qp: u8, refine: bool, deblock: bool) -> CodecConfig {
        CodecConfig {
            qp,
            refine_enabled: refine,
            refine_h: self.refine_h,
            inloop_deblock: deblock,
            grid: GridStep::try_from(self.grid).expect("validated by clap"),
            search_range: self.range,
            gop: self.gop.map(|g| g as usize),
            ..CodecConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Encode {
            input,
            output,
            qp,
            refine,
            deblock,
            coding,
            stats,
            recon,
        } => {
            let seq = load_y4m(&input)?;
            let cfg = coding.config(qp, refine.into(), deblock.into());
            let out = encode_sequence(&seq, &cfg).context("encoding failed")?;
            fs::write(&output, &out.bitstream)
                .with_context(|| format!("cannot write {}", output.display()))?;
            if let Some(path) = stats {
                fs::write(&path, stats_csv(&out.stats))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            if let Some(path) = recon {
                save_y4m(&path, &out.recon)?;
            }
            let psnr = psnr_sequence(&seq, &out.recon)?;
            println!(
                "{} frames, {} bytes, mean PSNR {psnr} dB, refinement {:.3} us/MB",
                seq.len(),
                out.bitstream.len(),
                out.stats.refine_us_per_mb()
            );
        }
        Command::Decode { input, output } => {
            let stream =
                fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
            let (header, seq) = decode_sequence(&stream).context("decoding failed")?;
            println!(
                "{}x{} {} frames @ {} fps, qp {}, refinement {} (h {}, grid {}), in-loop deblocking {}",
                header.width,
                header.height,
                header.frame_count,
                header.frame_rate(),
                header.qp,
                on_off(header.refine_enabled),
                header.refine_h,
                header.grid.pixels(),
                on_off(header.inloop_deblock),
            );
            if let Some(path) = output {
                save_y4m(&path, &seq)?;
            }
        }
        Command::Psnr { reference, test } => {
            let (a, b) = (load_y4m(&reference)?, load_y4m(&test)?);
            anyhow::ensure!(
                a.len() == b.len(),
                "frame counts differ: {} vs {}",
                a.len(),
                b.len()
            );
            for (fa, fb) in a.frames().iter().zip(b.frames()) {
                println!("frame {}: {} dB", fa.index, psnr_plane(&fa.luma, &fb.luma)?);
            }
            println!("mean: {} dB", psnr_sequence(&a, &b)?);
        }
        Command::Bdrate { anchor, test } => {
            let (a, t) = (load_curve(&anchor)?, load_curve(&test)?);
            let bd = bd_metrics(&a, &t)?;
            println!("bd_rate_percent,bd_psnr_db");
            println!("{:.6},{:.6}", bd.bd_rate_percent, bd.bd_psnr_db);
        }
        Command::Sweep {
            input,
            qps,
            coding,
            out,
            jobs,
        } => {
            let seq = load_y4m(&input)?;
            sweep::run(&seq, &qps, &coding, &out, jobs)?;
        }
    }
    Ok(())
}

fn on_off(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

fn load_y4m(path: &Path) -> Result<Sequence> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_y4m(BufReader::new(file)).with_context(|| format!("cannot read {}", path.display()))
}

fn save_y4m(path: &Path, seq: &Sequence) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write_y4m(seq, &mut w)?;
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

fn load_curve(path: &Path) -> Result<RdCurve> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    RdCurve::from_csv(&text).with_context(|| format!("invalid RD curve in {}", path.display()))
}

fn stats_csv(stats: &StatsLog) -> String {
    let mut out = String::from(
        "frame,type,bits,psnr_db,skip,inter16,inter8,intra_dc,refine_flags,refined,refine_us_per_mb\n",
    );
    for f in &stats.frames {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{:.3}",
            f.index,
            if f.intra { "I" } else { "P" },
            f.bits,
            f.psnr,
            f.modes[Mode::Skip as usize],
            f.modes[Mode::Inter16 as usize],
            f.modes[Mode::Inter8 as usize],
            f.modes[Mode::IntraDc as usize],
            f.flags_coded,
            f.refined,
            f.refine_us_per_mb(),
        );
    }
    out
}
