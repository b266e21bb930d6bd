//! Planar luma storage and YUV4MPEG2 input/output.
//!
//! Only the luma plane is kept. Chroma is skipped when reading and written
//! back as mid-gray when emitting a stream.

use std::io::{BufRead, Write};

use crate::{Error, Result, MB_SIZE};

/// A 2-D grid of 8-bit samples in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Plane")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl Plane {
    pub fn new(width: usize, height: usize, fill: u8) -> Self {
        Plane {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    /// Wraps row-major samples. Returns `None` if the length does not match.
    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Option<Self> {
        (data.len() == width * height).then_some(Plane {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Plane {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Sample at `(x, y)` with coordinates clamped into the plane, i.e. the
    /// border samples are replicated infinitely outward.
    #[inline]
    pub fn sample_at(&self, x: i32, y: i32) -> u8 {
        let cx = x.clamp(0, self.width as i32 - 1) as usize;
        let cy = y.clamp(0, self.height as i32 - 1) as usize;
        self.data[cy * self.width + cx]
    }

    /// Copies the 16x16 macroblock whose top-left corner is `(x0, y0)`.
    pub fn macroblock(&self, x0: usize, y0: usize) -> [u8; 256] {
        let mut out = [0u8; 256];
        for (r, dst) in out.chunks_exact_mut(MB_SIZE).enumerate() {
            let start = (y0 + r) * self.width + x0;
            dst.copy_from_slice(&self.data[start..start + MB_SIZE]);
        }
        out
    }

    pub fn put_macroblock(&mut self, x0: usize, y0: usize, block: &[u8; 256]) {
        for (r, src) in block.chunks_exact(MB_SIZE).enumerate() {
            let start = (y0 + r) * self.width + x0;
            self.data[start..start + MB_SIZE].copy_from_slice(src);
        }
    }
}

/// A luma frame together with its position in the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub luma: Plane,
    pub index: usize,
}

impl Frame {
    /// Builds a frame, rejecting dimensions that are not whole macroblocks.
    pub fn new(luma: Plane, index: usize) -> Result<Self> {
        check_dimensions(luma.width(), luma.height())?;
        Ok(Frame { luma, index })
    }

    pub fn width(&self) -> usize {
        self.luma.width()
    }

    pub fn height(&self) -> usize {
        self.luma.height()
    }
}

pub(crate) fn check_dimensions(width: usize, height: usize) -> Result<()> {
    if width == 0 || !width.is_multiple_of(MB_SIZE) {
        return Err(Error::Dimension {
            axis: "width",
            value: width,
        });
    }
    if height == 0 || !height.is_multiple_of(MB_SIZE) {
        return Err(Error::Dimension {
            axis: "height",
            value: height,
        });
    }
    Ok(())
}

/// Frame rate as a ratio `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: u32,
    pub den: u32,
}

impl Rational {
    pub const fn new(num: u32, den: u32) -> Self {
        Rational { num, den }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    frames: Vec<Frame>,
    pub frame_rate: Rational,
}

impl Sequence {
    /// Assembles a sequence from planes; frames are indexed from zero.
    pub fn from_planes(planes: Vec<Plane>, frame_rate: Rational) -> Result<Self> {
        let mut frames = Vec::with_capacity(planes.len());
        for (index, luma) in planes.into_iter().enumerate() {
            if let Some(first) = frames.first() {
                let first: &Frame = first;
                if luma.width() != first.width() || luma.height() != first.height() {
                    return Err(Error::FrameSize {
                        index,
                        width: luma.width(),
                        height: luma.height(),
                        expected_width: first.width(),
                        expected_height: first.height(),
                    });
                }
            }
            frames.push(Frame::new(luma, index)?);
        }
        Ok(Sequence { frames, frame_rate })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// `(width, height)` of the frames, or `None` for an empty sequence.
    pub fn dimensions(&self) -> Option<(usize, usize)> {
        self.frames.first().map(|f| (f.width(), f.height()))
    }

    pub fn into_planes(self) -> Vec<Plane> {
        self.frames.into_iter().map(|f| f.luma).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Chroma {
    Yuv420,
    Mono,
}

/// Parses a YUV4MPEG2 stream, keeping the luma of every frame.
pub fn read_y4m<R: BufRead>(mut reader: R) -> Result<Sequence> {
    let mut line = Vec::new();
    reader.read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(Error::Y4mHeader("missing header line".into()));
    }
    line.pop();
    let header =
        std::str::from_utf8(&line).map_err(|_| Error::Y4mHeader("header is not ASCII".into()))?;
    let mut tokens = header.split(' ').filter(|t| !t.is_empty());
    if tokens.next() != Some("YUV4MPEG2") {
        return Err(Error::Y4mHeader("missing YUV4MPEG2 signature".into()));
    }

    let mut width = None;
    let mut height = None;
    let mut rate = None;
    let mut chroma = Chroma::Yuv420;
    for token in tokens {
        let (tag, value) = token.split_at(1);
        match tag {
            "W" => width = Some(parse_num(value, "width")?),
            "H" => height = Some(parse_num(value, "height")?),
            "F" => {
                let (n, d) = value
                    .split_once(':')
                    .ok_or_else(|| Error::Y4mHeader(format!("bad frame rate {value:?}")))?;
                let num = parse_num(n, "frame rate")? as u32;
                let den = parse_num(d, "frame rate")? as u32;
                if num == 0 || den == 0 {
                    return Err(Error::Y4mHeader(format!("bad frame rate {value:?}")));
                }
                rate = Some(Rational::new(num, den));
            }
            "C" => {
                chroma = match value {
                    "420" | "420jpeg" | "420paldv" | "420mpeg2" => Chroma::Yuv420,
                    "mono" => Chroma::Mono,
                    other => {
                        return Err(Error::Y4mHeader(format!("unsupported colorspace C{other}")))
                    }
                }
            }
            "I" | "A" | "X" => {}
            _ => return Err(Error::Y4mHeader(format!("unknown header field {token:?}"))),
        }
    }
    let width = width.ok_or_else(|| Error::Y4mHeader("missing W".into()))?;
    let height = height.ok_or_else(|| Error::Y4mHeader("missing H".into()))?;
    let frame_rate = rate.ok_or_else(|| Error::Y4mHeader("missing F".into()))?;
    check_dimensions(width, height)?;

    let luma_len = width * height;
    let chroma_len = match chroma {
        Chroma::Yuv420 => 2 * width.div_ceil(2) * height.div_ceil(2),
        Chroma::Mono => 0,
    };
    let mut planes = Vec::new();
    let mut chroma_buf = vec![0u8; chroma_len];
    loop {
        line.clear();
        reader.read_until(b'\n', &mut line)?;
        if line.is_empty() {
            break;
        }
        let frame = planes.len();
        if !line.starts_with(b"FRAME") || line.last() != Some(&b'\n') {
            return Err(Error::Y4mTruncated { frame });
        }
        let mut data = vec![0u8; luma_len];
        reader
            .read_exact(&mut data)
            .and_then(|_| reader.read_exact(&mut chroma_buf))
            .map_err(|e| match e.kind() {
                std::io::ErrorKind::UnexpectedEof => Error::Y4mTruncated { frame },
                _ => Error::Io(e),
            })?;
        planes.push(Plane::from_vec(width, height, data).expect("length checked"));
    }
    Sequence::from_planes(planes, frame_rate)
}

fn parse_num(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Y4mHeader(format!("bad {what} {s:?}")))
}

/// Emits a 4:2:0 YUV4MPEG2 stream with constant mid-gray chroma.
pub fn write_y4m<W: Write>(seq: &Sequence, mut out: W) -> Result<()> {
    let (width, height) = seq.dimensions().ok_or(Error::EmptySequence)?;
    writeln!(
        out,
        "YUV4MPEG2 W{width} H{height} F{} Ip A1:1 C420jpeg",
        seq.frame_rate
    )?;
    let chroma = vec![128u8; 2 * width.div_ceil(2) * height.div_ceil(2)];
    for frame in seq.frames() {
        out.write_all(b"FRAME\n")?;
        out.write_all(frame.luma.data())?;
        out.write_all(&chroma)?;
    }
    out.flush()?;
    Ok(())
}
