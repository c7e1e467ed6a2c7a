//! Packed vectors over F2.
//!
//! Bits are stored little-endian in `u64` words: bit `i` lives in word
//! `i / 64` at position `i % 64`. Bits past `len` in the last word are
//! always zero, so equality and hashing can compare words directly.
//!
//! The canonical byte form packs bit `i` into byte `i / 8` at position
//! `i % 8` (little-endian bit-within-byte, bytes in ascending order). That
//! byte string is what goes into commitments and signatures.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector of `len` bits over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// The all-zero vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The all-one vector of length `len`.
    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from a slice of booleans, index 0 first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `'0'`/`'1'` characters, index 0 first.
    ///
    /// Mostly useful for writing test vectors: `"1000"` has bit 0 set.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '|')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Decode(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }

    /// Builds a vector of length `len` with exactly the listed positions set.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(Error::Range {
                    what: "support index",
                    value: i as u64,
                    bound: len as u64,
                });
            }
            v.set(i, true);
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of the set bits in ascending order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let tz = w.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + tz);
                w &= w - 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub(crate) fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Splits into `(self[..at], self[at..])`.
    pub fn split_at(&self, at: usize) -> (BitVector, BitVector) {
        assert!(at <= self.len);
        (self.slice(0, at), self.slice(at, self.len))
    }

    /// Copies bits `start..end` into a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        let mut out = BitVector::zeros(end - start);
        let shift = start % WORD_BITS;
        let first = start / WORD_BITS;
        for (j, slot) in out.words.iter_mut().enumerate() {
            let lo = self.words.get(first + j).copied().unwrap_or(0);
            let hi = self.words.get(first + j + 1).copied().unwrap_or(0);
            *slot = if shift == 0 {
                lo
            } else {
                (lo >> shift) | (hi << (WORD_BITS - shift))
            };
        }
        out.clear_tail();
        out
    }

    /// Concatenates `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        let shift = self.len % WORD_BITS;
        let base = self.len / WORD_BITS;
        for (j, &w) in other.words.iter().enumerate() {
            if shift == 0 {
                out.words[base + j] |= w;
            } else {
                out.words[base + j] |= w << shift;
                if let Some(next) = out.words.get_mut(base + j + 1) {
                    *next |= w >> (WORD_BITS - shift);
                }
            }
        }
        out.clear_tail();
        out
    }

    /// Number of bytes in the canonical packing.
    pub fn byte_len(&self) -> usize {
        self.len.div_ceil(8)
    }

    /// Canonical packing: bit `i` in byte `i / 8`, position `i % 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.byte_len());
        self.write_bytes(&mut out);
        out
    }

    /// Appends the canonical packing to `out`.
    pub fn write_bytes(&self, out: &mut Vec<u8>) {
        let n = self.byte_len();
        let mut written = 0;
        for &w in &self.words {
            for b in w.to_le_bytes() {
                if written == n {
                    return;
                }
                out.push(b);
                written += 1;
            }
        }
    }

    /// Inverse of [`to_bytes`](Self::to_bytes). Rejects inputs of the wrong
    /// size and inputs with nonzero padding bits.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Decode(format!(
                "expected {} bytes for a {len}-bit vector, got {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let mut v = BitVector::zeros(len);
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            v.words[i] = u64::from_le_bytes(buf);
        }
        let raw = v.words.clone();
        v.clear_tail();
        if raw != v.words {
            return Err(Error::Decode("nonzero padding bits in packed vector".into()));
        }
        Ok(v)
    }

    fn check_same_len(&self, other: &BitVector) {
        assert_eq!(
            self.len, other.len,
            "vector length mismatch: {} vs {}",
            self.len, other.len
        );
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        self.check_same_len(rhs);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitXor<&BitVector> for BitVector {
    type Output = BitVector;

    fn bitxor(mut self, rhs: &BitVector) -> BitVector {
        self ^= rhs;
        self
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({}; ", self.len)?;
        if self.len <= 128 {
            for b in self.iter() {
                f.write_str(if b { "1" } else { "0" })?;
            }
        } else {
            write!(f, "weight {}", self.weight())?;
        }
        f.write_str(")")
    }
}
