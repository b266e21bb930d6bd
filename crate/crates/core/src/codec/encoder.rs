use std::time::{Duration, Instant};

use super::bits::{ue_len, BitWriter};
use super::decision::{mode_decide, rd_lambda, Candidate, CandidateKind};
use super::inloop::inloop_deblock;
use super::intra::intra_dc_predict;
use super::macroblock::{code_residual, ssd, Coded};
use super::residual::write_block;
use super::stream::StreamHeader;
use super::{CodecConfig, EncodeOutput, FlagPolicy, FrameStats, MbDecision, Mode, StatsLog};
use crate::deblock::FilterParams;
use crate::frame::{Plane, Sequence};
use crate::metrics::psnr_plane;
use crate::motion::{motion_compensate, search_macroblock, MotionVector, PaddedPlane, Partition};
use crate::refine::{refine_block, NeighborContext, PredBlock};
use crate::{Error, Result, MB_SIZE};

struct Trial {
    candidate: Candidate,
    partition: Option<Partition>,
    /// `None` for skip, which carries no residual.
    coded: Option<Coded>,
    recon: [u8; 256],
}

struct Encoder<'a> {
    cfg: &'a CodecConfig,
    lambda: f64,
    params: FilterParams,
    /// Whether refined candidates are evaluated.
    try_refined: bool,
    /// Bits charged for the refinement flag in the mode decision.
    flag_rate: u32,
}

/// Encodes `seq` and returns the stream with the encoder-side
/// reconstruction and statistics.
pub fn encode_sequence(seq: &Sequence, cfg: &CodecConfig) -> Result<EncodeOutput> {
    cfg.validate()?;
    let (width, height) = seq.dimensions().ok_or(Error::EmptySequence)?;
    let header = StreamHeader {
        width: fit_u16(width, "width")?,
        height: fit_u16(height, "height")?,
        frame_count: u32::try_from(seq.len())
            .map_err(|_| Error::Config("too many frames".into()))?,
        qp: cfg.qp,
        refine_enabled: cfg.refine_enabled,
        inloop_deblock: cfg.inloop_deblock,
        refine_h: cfg.refine_h,
        grid: cfg.grid,
        fps_num: fit_u16(seq.frame_rate.num as usize, "frame rate numerator")?,
        fps_den: fit_u16(seq.frame_rate.den as usize, "frame rate denominator")?,
    };

    let try_refined = cfg.refine_enabled && cfg.flag_policy == FlagPolicy::RateDistortion;
    let enc = Encoder {
        cfg,
        lambda: rd_lambda(cfg.qp),
        params: FilterParams::for_strength(cfg.refine_h.into()),
        try_refined,
        flag_rate: u32::from(try_refined),
    };

    let mut w = BitWriter::new();
    let mut reference: Option<Plane> = None;
    let mut recons = Vec::with_capacity(seq.len());
    let mut frames = Vec::with_capacity(seq.len());
    let mut decisions = Vec::new();

    for frame in seq.frames() {
        let start_bits = w.bit_len();
        let intra = cfg.is_intra_frame(frame.index);
        w.put_bit(!intra);
        let mut stats = FrameStats {
            index: frame.index,
            intra,
            bits: 0,
            psnr: crate::metrics::Psnr::Lossless,
            modes: [0; 4],
            flags_coded: 0,
            refined: 0,
            refine_calls: 0,
            refine_time: Duration::ZERO,
        };
        let mut recon = Plane::new(width, height, 0);
        let padded = match (&reference, intra) {
            (Some(r), false) => Some(PaddedPlane::new(r, cfg.search_range as usize + MB_SIZE)),
            _ => None,
        };

        let mbs_x = width / MB_SIZE;
        for mb in 0..(width / MB_SIZE) * (height / MB_SIZE) {
            let (x0, y0) = ((mb % mbs_x) * MB_SIZE, (mb / mbs_x) * MB_SIZE);
            let orig = frame.luma.macroblock(x0, y0);
            let ctx = NeighborContext::gather(&recon, x0, y0);
            let block = match (&reference, &padded) {
                (Some(reference), Some(padded)) => {
                    let trials = enc.p_trials(&orig, &ctx, reference, padded, (x0, y0), &mut stats);
                    let candidates: Vec<Candidate> = trials.iter().map(|t| t.candidate).collect();
                    let chosen = &trials[mode_decide(&candidates, enc.lambda)?];
                    enc.write_p(&mut w, chosen, &mut stats);
                    decisions.push(MbDecision {
                        frame: frame.index,
                        mb,
                        chosen: chosen.candidate.kind,
                        candidates,
                    });
                    chosen.recon
                }
                _ => {
                    let coded = code_residual(&orig, &intra_dc_predict(&ctx), cfg.qp);
                    for levels in &coded.levels {
                        write_block(&mut w, levels);
                    }
                    stats.modes[Mode::IntraDc as usize] += 1;
                    coded.recon
                }
            };
            recon.put_macroblock(x0, y0, &block);
        }

        let recon = if cfg.inloop_deblock {
            inloop_deblock(&recon, cfg.qp)
        } else {
            recon
        };
        stats.bits = w.bit_len() - start_bits;
        stats.psnr = psnr_plane(&frame.luma, &recon)?;
        frames.push(stats);
        recons.push(recon.clone());
        reference = Some(recon);
    }

    let payload_bits = w.bit_len();
    let mut bitstream = header.to_bytes().to_vec();
    bitstream.extend(w.finish());
    Ok(EncodeOutput {
        bitstream,
        recon: Sequence::from_planes(recons, seq.frame_rate)?,
        stats: StatsLog {
            lambda: enc.lambda,
            frames,
            decisions,
            payload_bits,
        },
    })
}

fn fit_u16(v: usize, what: &str) -> Result<u16> {
    u16::try_from(v).map_err(|_| Error::Config(format!("{what} {v} does not fit 16 bits")))
}

impl Encoder<'_> {
    /// Trial-codes every candidate of a P-frame macroblock, in tie-break
    /// order.
    fn p_trials(
        &self,
        orig: &[u8; 256],
        ctx: &NeighborContext,
        reference: &Plane,
        padded: &PaddedPlane,
        origin: (usize, usize),
        stats: &mut FrameStats,
    ) -> Vec<Trial> {
        let mut trials = Vec::with_capacity(6);

        let skip = motion_compensate(reference, origin, &Partition::Whole(MotionVector::ZERO));
        trials.push(Trial {
            candidate: Candidate {
                kind: CandidateKind::Skip,
                distortion: ssd(orig, &skip.0),
                rate: ue_len(Mode::Skip.code()),
            },
            partition: None,
            coded: None,
            recon: skip.0,
        });

        let search = search_macroblock(orig, padded, origin.0, origin.1, self.cfg.search_range);
        let partitions = [
            (
                search.whole_partition(),
                CandidateKind::Inter16,
                CandidateKind::Inter16Refined,
            ),
            (
                search.quad_partition(),
                CandidateKind::Inter8,
                CandidateKind::Inter8Refined,
            ),
        ];
        for (partition, plain, refined) in partitions {
            let mode = Mode::from(plain);
            let side_bits = ue_len(mode.code()) + self.flag_rate + partition.mv_bits();
            let pred = motion_compensate(reference, origin, &partition);
            trials.push(self.residual_trial(plain, orig, &pred, side_bits, Some(partition)));
            if self.try_refined {
                let started = Instant::now();
                let pred = refine_block(&pred, ctx, &self.params, self.cfg.grid);
                stats.refine_time += started.elapsed();
                stats.refine_calls += 1;
                trials.push(self.residual_trial(refined, orig, &pred, side_bits, Some(partition)));
            }
        }

        let intra = intra_dc_predict(ctx);
        trials.push(self.residual_trial(
            CandidateKind::IntraDc,
            orig,
            &intra,
            ue_len(Mode::IntraDc.code()),
            None,
        ));
        trials
    }

    fn residual_trial(
        &self,
        kind: CandidateKind,
        orig: &[u8; 256],
        pred: &PredBlock,
        side_bits: u32,
        partition: Option<Partition>,
    ) -> Trial {
        let coded = code_residual(orig, pred, self.cfg.qp);
        Trial {
            candidate: Candidate {
                kind,
                distortion: coded.ssd,
                rate: side_bits + coded.residual_bits,
            },
            partition,
            recon: coded.recon,
            coded: Some(coded),
        }
    }

    fn write_p(&self, w: &mut BitWriter, trial: &Trial, stats: &mut FrameStats) {
        let start = w.bit_len();
        let kind = trial.candidate.kind;
        let mode = Mode::from(kind);
        w.put_ue(mode.code());
        if mode.is_inter() && self.cfg.refine_enabled {
            w.put_bit(kind.is_refined());
            stats.flags_coded += 1;
            stats.refined += usize::from(kind.is_refined());
        }
        if let Some(partition) = &trial.partition {
            for mv in partition.vectors() {
                w.put_se(mv.dx);
                w.put_se(mv.dy);
            }
        }
        if let Some(coded) = &trial.coded {
            for levels in &coded.levels {
                write_block(w, levels);
            }
        }
        stats.modes[mode as usize] += 1;

        let unpriced_flag = mode.is_inter() && self.cfg.refine_enabled && self.flag_rate == 0;
        debug_assert_eq!(
            w.bit_len() - start,
            u64::from(trial.candidate.rate) + u64::from(unpriced_flag)
        );
    }
}
