//! Fixed 21-byte stream header, big-endian.

use crate::frame::Rational;
use crate::refine::GridStep;
use crate::{Error, Result};

pub const MAGIC: [u8; 4] = *b"STPC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 21;

const FLAG_REFINE: u8 = 1;
const FLAG_DEBLOCK: u8 = 1 << 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamHeader {
    pub width: u16,
    pub height: u16,
    pub frame_count: u32,
    pub qp: u8,
    pub refine_enabled: bool,
    pub inloop_deblock: bool,
    pub refine_h: u8,
    pub grid: GridStep,
    pub fps_num: u16,
    pub fps_den: u16,
}

impl StreamHeader {
    pub fn frame_rate(&self) -> Rational {
        Rational::new(u32::from(self.fps_num), u32::from(self.fps_den))
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5..7].copy_from_slice(&self.width.to_be_bytes());
        out[7..9].copy_from_slice(&self.height.to_be_bytes());
        out[9..13].copy_from_slice(&self.frame_count.to_be_bytes());
        out[13] = self.qp;
        out[14] = if self.refine_enabled { FLAG_REFINE } else { 0 }
            | if self.inloop_deblock { FLAG_DEBLOCK } else { 0 };
        out[15] = self.refine_h;
        out[16] = self.grid.pixels() as u8;
        out[17..19].copy_from_slice(&self.fps_num.to_be_bytes());
        out[19..21].copy_from_slice(&self.fps_den.to_be_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || bytes[..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Header("truncated header".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::Version(bytes[4]));
        }
        let be16 = |i: usize| u16::from_be_bytes([bytes[i], bytes[i + 1]]);
        let header = StreamHeader {
            width: be16(5),
            height: be16(7),
            frame_count: u32::from_be_bytes([bytes[9], bytes[10], bytes[11], bytes[12]]),
            qp: bytes[13],
            refine_enabled: bytes[14] & FLAG_REFINE != 0,
            inloop_deblock: bytes[14] & FLAG_DEBLOCK != 0,
            refine_h: bytes[15],
            grid: GridStep::try_from(usize::from(bytes[16]))
                .map_err(|_| Error::Header(format!("grid step {}", bytes[16])))?,
            fps_num: be16(17),
            fps_den: be16(19),
        };
        if bytes[14] & !(FLAG_REFINE | FLAG_DEBLOCK) != 0 {
            return Err(Error::Header(format!("unknown flags {:#04x}", bytes[14])));
        }
        if header.qp > 51 || header.refine_h > 51 {
            return Err(Error::Header("qp or h outside [0, 51]".into()));
        }
        if header.fps_num == 0 || header.fps_den == 0 {
            return Err(Error::Header("zero frame rate".into()));
        }
        crate::frame::check_dimensions(header.width.into(), header.height.into())?;
        Ok(header)
    }
}
