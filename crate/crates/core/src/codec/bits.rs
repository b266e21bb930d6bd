//! MSB-first bit writer/reader with Exp-Golomb codes.

use crate::{Error, Result};

/// Longest accepted run of leading zeros in a `ue` codeword.
const MAX_PREFIX: u32 = 32;

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    pending: u32,
    written: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn bit_len(&self) -> u64 {
        self.written
    }

    pub fn put_bit(&mut self, bit: bool) {
        self.put_bits(u32::from(bit), 1);
    }

    /// Appends the low `n` bits of `value`, most significant first.
    pub fn put_bits(&mut self, value: u32, n: u32) {
        debug_assert!(n <= 32);
        if n == 0 {
            return;
        }
        let value = u64::from(value) & ((1u64 << n) - 1);
        self.acc = (self.acc << n) | value;
        self.pending += n;
        self.written += u64::from(n);
        while self.pending >= 8 {
            self.pending -= 8;
            self.bytes.push((self.acc >> self.pending) as u8);
        }
        self.acc &= (1u64 << self.pending) - 1;
    }

    pub fn put_ue(&mut self, v: u32) {
        let code = u64::from(v) + 1;
        let k = 63 - code.leading_zeros();
        self.put_bits(0, k);
        // value bits include the leading one
        if k + 1 > 32 {
            self.put_bits((code >> 32) as u32, k + 1 - 32);
            self.put_bits(code as u32, 32);
        } else {
            self.put_bits(code as u32, k + 1);
        }
    }

    pub fn put_se(&mut self, v: i32) {
        self.put_ue(se_to_ue(v));
    }

    /// Pads with zero bits to a byte boundary and returns the bytes.
    pub fn finish(mut self) -> Vec<u8> {
        if self.pending > 0 {
            let pad = 8 - self.pending;
            self.put_bits(0, pad);
        }
        self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader { data, pos: 0 }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn remaining(&self) -> u64 {
        self.data.len() as u64 * 8 - self.pos
    }

    pub fn get_bit(&mut self) -> Result<bool> {
        if self.remaining() == 0 {
            return Err(Error::EndOfStream);
        }
        let byte = self.data[(self.pos / 8) as usize];
        let bit = (byte >> (7 - self.pos % 8)) & 1;
        self.pos += 1;
        Ok(bit == 1)
    }

    pub fn get_bits(&mut self, n: u32) -> Result<u32> {
        debug_assert!(n <= 32);
        if self.remaining() < u64::from(n) {
            return Err(Error::EndOfStream);
        }
        let mut v = 0u64;
        for _ in 0..n {
            v = (v << 1) | u64::from(self.get_bit()?);
        }
        Ok(v as u32)
    }

    pub fn get_ue(&mut self) -> Result<u32> {
        let mut zeros = 0;
        while !self.get_bit()? {
            zeros += 1;
            if zeros > MAX_PREFIX {
                return Err(Error::Codeword);
            }
        }
        let suffix = u64::from(self.get_bits(zeros)?);
        let v = (1u64 << zeros) - 1 + suffix;
        u32::try_from(v).map_err(|_| Error::Codeword)
    }

    pub fn get_se(&mut self) -> Result<i32> {
        match self.get_ue()? {
            u32::MAX => Err(Error::Codeword),
            u => Ok(ue_to_se(u)),
        }
    }
}

/// `k > 0 -> 2k - 1`, `k <= 0 -> -2k`. `i32::MIN` has no codeword.
#[inline]
pub fn se_to_ue(v: i32) -> u32 {
    debug_assert!(v != i32::MIN);
    if v > 0 {
        2 * v as u32 - 1
    } else {
        2 * v.unsigned_abs()
    }
}

#[inline]
pub fn ue_to_se(u: u32) -> i32 {
    if u % 2 == 1 {
        ((u as i64 + 1) / 2) as i32
    } else {
        -((u / 2) as i64) as i32
    }
}

/// Length in bits of `ue(v)`.
#[inline]
pub fn ue_len(v: u32) -> u32 {
    let k = 63 - (u64::from(v) + 1).leading_zeros();
    2 * k + 1
}

#[inline]
pub fn se_len(v: i32) -> u32 {
    ue_len(se_to_ue(v))
}
