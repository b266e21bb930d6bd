use super::bits::BitReader;
use super::inloop::inloop_deblock;
use super::intra::intra_dc_predict;
use super::macroblock::{reconstruct, MbLevels};
use super::residual::{read_block, ResidualError};
use super::stream::{StreamHeader, HEADER_LEN};
use super::Mode;
use crate::deblock::FilterParams;
use crate::error::StreamFault;
use crate::frame::{Plane, Sequence};
use crate::motion::{motion_compensate, MotionVector, Partition};
use crate::refine::{refine_block, NeighborContext};
use crate::{Error, Result, MB_SIZE};

/// Decodes a complete stream. The output equals the encoder's
/// reconstruction sample for sample.
pub fn decode_sequence(stream: &[u8]) -> Result<(StreamHeader, Sequence)> {
    let header = StreamHeader::parse(stream)?;
    let (width, height) = (usize::from(header.width), usize::from(header.height));
    let mbs_x = width / MB_SIZE;
    let mb_count = mbs_x * (height / MB_SIZE);
    let params = FilterParams::for_strength(header.refine_h.into());

    let mut r = BitReader::new(&stream[HEADER_LEN..]);
    let mut frames: Vec<Plane> = Vec::new();
    for index in 0..header.frame_count as usize {
        // every macroblock takes at least one bit; refuse to allocate
        // frames the remaining payload cannot describe
        if r.remaining() < 1 + mb_count as u64 {
            return Err(Error::Stream {
                frame: index,
                mb: 0,
                kind: StreamFault::Truncated,
            });
        }
        let predicted = r
            .get_bit()
            .map_err(|_| Error::FrameTruncated { frame: index })?;
        let reference = match (predicted, frames.last()) {
            (true, None) => {
                return Err(Error::Stream {
                    frame: index,
                    mb: 0,
                    kind: StreamFault::MissingReference,
                })
            }
            (true, Some(r)) => Some(r),
            (false, _) => None,
        };

        let mut recon = Plane::new(width, height, 0);
        for mb in 0..mb_count {
            let (x0, y0) = ((mb % mbs_x) * MB_SIZE, (mb / mbs_x) * MB_SIZE);
            let fault = |kind| Error::Stream {
                frame: index,
                mb,
                kind,
            };
            let ctx = NeighborContext::gather(&recon, x0, y0);
            let coding = match reference {
                None => MbCoding::Intra,
                Some(_) => read_p_header(&mut r, header.refine_enabled).map_err(fault)?,
            };
            let pred = match (&coding, reference) {
                (MbCoding::Intra, _) => intra_dc_predict(&ctx),
                (MbCoding::Skip, Some(reference)) => {
                    motion_compensate(reference, (x0, y0), &Partition::Whole(MotionVector::ZERO))
                }
                (MbCoding::Inter { partition, refined }, Some(reference)) => {
                    let pred = motion_compensate(reference, (x0, y0), partition);
                    if *refined {
                        refine_block(&pred, &ctx, &params, header.grid)
                    } else {
                        pred
                    }
                }
                (_, None) => unreachable!("P-frame coding without reference"),
            };
            let block = match coding {
                MbCoding::Skip => pred.0,
                _ => {
                    let levels = read_residual(&mut r).map_err(fault)?;
                    reconstruct(&pred, &levels, header.qp)
                }
            };
            recon.put_macroblock(x0, y0, &block);
        }
        let recon = if header.inloop_deblock {
            inloop_deblock(&recon, header.qp)
        } else {
            recon
        };
        frames.push(recon);
    }

    let rest = r.remaining();
    if rest >= 8 || (rest > 0 && r.get_bits(rest as u32)? != 0) {
        return Err(Error::TrailingData(rest as usize));
    }
    Ok((header, Sequence::from_planes(frames, header.frame_rate())?))
}

enum MbCoding {
    Intra,
    Skip,
    Inter { partition: Partition, refined: bool },
}

fn bit_fault(e: Error) -> StreamFault {
    match e {
        Error::Codeword => StreamFault::InvalidCodeword,
        _ => StreamFault::Truncated,
    }
}

fn read_p_header(r: &mut BitReader<'_>, refine_enabled: bool) -> Result<MbCoding, StreamFault> {
    let code = r.get_ue().map_err(bit_fault)?;
    let mode = Mode::from_code(code).ok_or(StreamFault::InvalidMode(code))?;
    let refined = if mode.is_inter() && refine_enabled {
        r.get_bit().map_err(bit_fault)?
    } else {
        false
    };
    let mut mv = || -> Result<MotionVector, StreamFault> {
        let dx = r.get_se().map_err(bit_fault)?;
        let dy = r.get_se().map_err(bit_fault)?;
        Ok(MotionVector::new(dx, dy))
    };
    Ok(match mode {
        Mode::Skip => MbCoding::Skip,
        Mode::IntraDc => MbCoding::Intra,
        Mode::Inter16 => MbCoding::Inter {
            partition: Partition::Whole(mv()?),
            refined,
        },
        Mode::Inter8 => MbCoding::Inter {
            partition: Partition::Quad([mv()?, mv()?, mv()?, mv()?]),
            refined,
        },
    })
}

fn read_residual(r: &mut BitReader<'_>) -> Result<MbLevels, StreamFault> {
    let mut levels = [[[0i32; 4]; 4]; 16];
    for block in &mut levels {
        *block = read_block(r).map_err(|e| match e {
            ResidualError::Bits(e) => bit_fault(e),
            ResidualError::Structure => StreamFault::InvalidResidual,
            ResidualError::Level => StreamFault::LevelOutOfRange,
        })?;
    }
    Ok(levels)
}
