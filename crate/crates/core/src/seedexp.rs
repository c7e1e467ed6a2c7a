//! Deterministic expansion of short seeds into protocol objects.
//!
//! Every expansion reads from one SHAKE256 stream keyed as
//!
//! ```text
//! SHAKE256(tag (1 byte) ‖ index (4 bytes, big-endian) ‖ seed bytes)
//! ```
//!
//! and consumes it as a byte stream. Integers in `[0, bound)` are drawn by
//! masking a 4-byte big-endian word down to the bit length of `bound - 1`
//! and rejecting values `>= bound`; a bound of 1 consumes nothing. This
//! framing is part of the signature format: both sides must expand
//! identically.

use std::fmt;

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Shake256, Shake256Reader};

use crate::algebra::{BitVector, CirculantBlock, Permutation, QCParityCheck};
use crate::error::{Error, Result};

/// Domain separation labels. Each expansion carries exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum DomainTag {
    Secret = 0x01,
    Matrix = 0x02,
    Perm = 0x03,
    Vector = 0x04,
    PairLeft = 0x05,
    PairRight = 0x06,
    Commit = 0x07,
    Chal1 = 0x08,
    Chal2 = 0x09,
    Msg = 0x0a,
}

impl DomainTag {
    pub const ALL: [DomainTag; 10] = [
        DomainTag::Secret,
        DomainTag::Matrix,
        DomainTag::Perm,
        DomainTag::Vector,
        DomainTag::PairLeft,
        DomainTag::PairRight,
        DomainTag::Commit,
        DomainTag::Chal1,
        DomainTag::Chal2,
        DomainTag::Msg,
    ];

    pub fn byte(self) -> u8 {
        self as u8
    }
}

/// A λ-bit seed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Seed(Vec<u8>);

impl Seed {
    pub fn new(bytes: Vec<u8>) -> Self {
        Seed(bytes)
    }

    pub fn from_slice(bytes: &[u8]) -> Self {
        Seed(bytes.to_vec())
    }

    /// Fresh seed from the operating system's entropy source.
    pub fn random(len: usize) -> Result<Self> {
        let mut buf = vec![0u8; len];
        getrandom::getrandom(&mut buf).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(Seed(buf))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({})", hex::encode(&self.0))
    }
}

/// A cursor over one domain-separated SHAKE256 output stream.
pub struct XofStream {
    reader: Shake256Reader,
}

impl XofStream {
    pub fn new(tag: DomainTag, index: u32, input: &[u8]) -> Self {
        Self::with_parts(tag, index, &[input])
    }

    /// Same framing as [`new`](Self::new) with the input given in pieces;
    /// the pieces are simply concatenated.
    pub fn with_parts(tag: DomainTag, index: u32, parts: &[&[u8]]) -> Self {
        let mut h = Shake256::default();
        h.update(&[tag.byte()]);
        h.update(&index.to_be_bytes());
        for p in parts {
            h.update(p);
        }
        XofStream {
            reader: h.finalize_xof(),
        }
    }

    pub fn fill(&mut self, buf: &mut [u8]) {
        self.reader.read(buf);
    }

    pub fn next_u32(&mut self) -> u32 {
        let mut b = [0u8; 4];
        self.fill(&mut b);
        u32::from_be_bytes(b)
    }

    /// Uniform integer in `[0, bound)` by masked rejection sampling.
    pub fn sample_below(&mut self, bound: u32) -> u32 {
        assert!(bound > 0, "empty sampling range");
        if bound == 1 {
            return 0;
        }
        let mask = u32::MAX >> (bound - 1).leading_zeros();
        loop {
            let x = self.next_u32() & mask;
            if x < bound {
                return x;
            }
        }
    }

    pub fn seed(&mut self, len: usize) -> Seed {
        let mut buf = vec![0u8; len];
        self.fill(&mut buf);
        Seed(buf)
    }

    pub fn vector(&mut self, n: usize) -> BitVector {
        let mut buf = vec![0u8; n.div_ceil(8)];
        self.fill(&mut buf);
        if n % 8 != 0 {
            let last = buf.len() - 1;
            buf[last] &= (1u8 << (n % 8)) - 1;
        }
        BitVector::from_bytes(&buf, n).expect("padding was masked")
    }

    /// Uniform `w`-subset of `[0, n)` via a partial Fisher–Yates shuffle.
    pub fn weight_w_vector(&mut self, n: usize, w: usize) -> BitVector {
        assert!(w <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..w {
            let j = i + self.sample_below((n - i) as u32) as usize;
            pool.swap(i, j);
        }
        BitVector::from_support(n, &pool[..w]).expect("indices below n")
    }

    /// Uniform permutation via a full Fisher–Yates shuffle.
    pub fn permutation(&mut self, n: usize) -> Permutation {
        let mut images: Vec<u16> = (0..n as u32).map(|i| i as u16).collect();
        for i in (1..n).rev() {
            let j = self.sample_below(i as u32 + 1) as usize;
            images.swap(i, j);
        }
        Permutation::from_images_unchecked(images)
    }
}

/// A child seed of the same length as `seed`.
pub fn expand_seed(seed: &Seed, tag: DomainTag, index: u32) -> Seed {
    XofStream::new(tag, index, seed.as_bytes()).seed(seed.len())
}

pub fn expand_vector(seed: &Seed, tag: DomainTag, index: u32, n: usize) -> BitVector {
    XofStream::new(tag, index, seed.as_bytes()).vector(n)
}

/// A vector of weight exactly `w`, uniform over the weight-`w` sphere.
pub fn expand_weight_w(seed: &Seed, tag: DomainTag, index: u32, n: usize, w: usize) -> Result<BitVector> {
    if w > n {
        return Err(Error::Range {
            what: "weight",
            value: w as u64,
            bound: n as u64 + 1,
        });
    }
    Ok(XofStream::new(tag, index, seed.as_bytes()).weight_w_vector(n, w))
}

pub fn expand_permutation(seed: &Seed, tag: DomainTag, index: u32, n: usize) -> Permutation {
    XofStream::new(tag, index, seed.as_bytes()).permutation(n)
}

/// `H = [I_k | A]` with the first row of `A` drawn uniformly.
pub fn expand_circulant(seed: &Seed, tag: DomainTag, k: usize) -> Result<QCParityCheck> {
    let row = expand_vector(seed, tag, 0, k);
    Ok(QCParityCheck::new(CirculantBlock::new(row)?))
}

/// The two child seeds of a pair master.
pub fn derive_pair(master: &Seed, pair_index: u32) -> (Seed, Seed) {
    (
        expand_seed(master, DomainTag::PairLeft, pair_index),
        expand_seed(master, DomainTag::PairRight, pair_index),
    )
}
