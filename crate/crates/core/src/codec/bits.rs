use crate::algebra::BitVector;
use crate::error::{Error, Result};

/// Appends bits LSB-first into bytes, matching the `BitVector` packing.
#[derive(Default)]
pub(crate) struct BitWriter {
    bytes: Vec<u8>,
    nbits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bit_len(&self) -> usize {
        self.nbits
    }

    pub fn push_bit(&mut self, bit: bool) {
        if self.nbits % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << (self.nbits % 8);
        }
        self.nbits += 1;
    }

    pub fn push_vector(&mut self, v: &BitVector) {
        if self.nbits % 8 == 0 {
            v.write_bytes(&mut self.bytes);
            self.nbits += v.len();
            return;
        }
        for b in v.iter() {
            self.push_bit(b);
        }
    }

    pub fn push_bytes(&mut self, data: &[u8]) {
        if self.nbits % 8 == 0 {
            self.bytes.extend_from_slice(data);
            self.nbits += 8 * data.len();
            return;
        }
        for &byte in data {
            for i in 0..8 {
                self.push_bit(byte >> i & 1 == 1);
            }
        }
    }

    /// The stream padded with zero bits to a whole byte.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

pub(crate) struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader { data, pos: 0 }
    }

    fn ensure(&self, nbits: usize) -> Result<()> {
        if self.pos + nbits > 8 * self.data.len() {
            return Err(Error::Decode(format!(
                "truncated: needed {nbits} more bits at bit offset {}",
                self.pos
            )));
        }
        Ok(())
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        self.ensure(1)?;
        let b = self.data[self.pos / 8] >> (self.pos % 8) & 1 == 1;
        self.pos += 1;
        Ok(b)
    }

    pub fn read_vector(&mut self, n: usize) -> Result<BitVector> {
        self.ensure(n)?;
        if self.pos % 8 == 0 {
            let start = self.pos / 8;
            let nbytes = n.div_ceil(8);
            let mut chunk = self.data[start..start + nbytes].to_vec();
            if n % 8 != 0 {
                chunk[nbytes - 1] &= (1u8 << (n % 8)) - 1;
            }
            self.pos += n;
            return BitVector::from_bytes(&chunk, n);
        }
        let mut v = BitVector::zeros(n);
        for i in 0..n {
            if self.read_bit()? {
                v.set(i, true);
            }
        }
        Ok(v)
    }

    pub fn read_bytes(&mut self, len: usize) -> Result<Vec<u8>> {
        self.ensure(8 * len)?;
        if self.pos % 8 == 0 {
            let start = self.pos / 8;
            self.pos += 8 * len;
            return Ok(self.data[start..start + len].to_vec());
        }
        let mut out = vec![0u8; len];
        for byte in out.iter_mut() {
            for i in 0..8 {
                if self.read_bit()? {
                    *byte |= 1 << i;
                }
            }
        }
        Ok(out)
    }

    /// Requires that only zero padding bits remain.
    pub fn finish(mut self) -> Result<()> {
        if self.data.len() != self.pos.div_ceil(8) {
            return Err(Error::Decode(format!(
                "{} trailing bytes after the last field",
                self.data.len() - self.pos.div_ceil(8)
            )));
        }
        while self.pos % 8 != 0 {
            if self.read_bit()? {
                return Err(Error::Decode("nonzero padding bits".into()));
            }
        }
        Ok(())
    }
}
