//! Cyclic rotations, circulant blocks and the systematic index-2
//! quasi-cyclic parity-check matrix `H = [I_k | A]`.
//!
//! Rotation convention: `rotate(v, r)[i] = v[(i - r) mod k]`, i.e. bits
//! move towards higher indices (`1000` rotated by 1 is `0100`). Row `i` of
//! a circulant block is its first row rotated by `i`, so
//! `A[i][j] = a[(j - i) mod k]`. Circulant matrices commute with cyclic
//! shifts, which gives `H · rot_r(x) = rot_r(H · x)` for every `r`.

use super::bitvec::BitVector;
use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn check_shift(r: usize, k: usize) -> Result<()> {
    if r >= k {
        return Err(Error::Range {
            what: "rotation",
            value: r as u64,
            bound: k as u64,
        });
    }
    Ok(())
}

/// XORs `rotate(src, r)` into `acc`. Both must have length `k` and `r < k`.
/// Leaves garbage above bit `k` in the last word; callers clear it.
fn xor_rotated_into(acc: &mut [u64], src: &[u64], k: usize, r: usize) {
    if r == 0 {
        for (a, s) in acc.iter_mut().zip(src) {
            *a ^= s;
        }
        return;
    }
    let nw = src.len();
    // Bits i < k - r move up by r.
    let (ws, bs) = (r / WORD_BITS, r % WORD_BITS);
    for j in ws..nw {
        let lo = src[j - ws];
        let mut w = lo << bs;
        if bs != 0 && j > ws {
            w |= src[j - ws - 1] >> (WORD_BITS - bs);
        }
        acc[j] ^= w;
    }
    // Bits i >= k - r wrap down by k - r.
    let down = k - r;
    let (ws, bs) = (down / WORD_BITS, down % WORD_BITS);
    for j in 0..nw.saturating_sub(ws) {
        let mut w = src[j + ws] >> bs;
        if bs != 0 {
            if let Some(&hi) = src.get(j + ws + 1) {
                w |= hi << (WORD_BITS - bs);
            }
        }
        acc[j] ^= w;
    }
}

/// Cyclic rotation of a length-`k` vector by `r ∈ [0, k)` positions.
pub fn rotate(v: &BitVector, r: usize) -> Result<BitVector> {
    let k = v.len();
    check_shift(r, k)?;
    let mut out = BitVector::zeros(k);
    xor_rotated_into(out.words_mut(), v.words(), k, r);
    out.clear_tail();
    Ok(out)
}

/// Rotates both halves of a length-`2k` vector independently by `r`.
pub fn rotate_pair(v: &BitVector, r: usize) -> Result<BitVector> {
    if v.len() % 2 != 0 {
        return Err(Error::Shape(format!(
            "rotate_pair needs an even length, got {}",
            v.len()
        )));
    }
    let k = v.len() / 2;
    check_shift(r, k)?;
    let (a, b) = v.split_at(k);
    Ok(rotate(&a, r)?.concat(&rotate(&b, r)?))
}

/// A `k × k` circulant matrix stored by its first row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantBlock {
    first_row: BitVector,
}

impl CirculantBlock {
    pub fn new(first_row: BitVector) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::Shape("circulant block of size 0".into()));
        }
        Ok(CirculantBlock { first_row })
    }

    pub fn k(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &BitVector {
        &self.first_row
    }

    /// Row `i`, i.e. the first row rotated by `i`.
    pub fn row(&self, i: usize) -> Result<BitVector> {
        rotate(&self.first_row, i)
    }

    /// `A · v` over F2.
    ///
    /// `(A v)[i] = Σ_t a[t] · v[(i + t) mod k]`, so the product is the XOR
    /// of `v` rotated by `-t` for every set bit `t` of the first row.
    pub fn mul(&self, v: &BitVector) -> Result<BitVector> {
        let k = self.k();
        if v.len() != k {
            return Err(Error::Shape(format!(
                "circulant of size {k} applied to a vector of length {}",
                v.len()
            )));
        }
        let mut out = BitVector::zeros(k);
        for t in self.first_row.support() {
            xor_rotated_into(out.words_mut(), v.words(), k, (k - t) % k);
        }
        out.clear_tail();
        Ok(out)
    }
}

/// `H = [I_k | A]` with `A` circulant; an `k × 2k` parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCParityCheck {
    block: CirculantBlock,
}

impl QCParityCheck {
    pub fn new(block: CirculantBlock) -> Self {
        QCParityCheck { block }
    }

    pub fn k(&self) -> usize {
        self.block.k()
    }

    pub fn n(&self) -> usize {
        2 * self.block.k()
    }

    pub fn block(&self) -> &CirculantBlock {
        &self.block
    }

    /// `H xᵀ = x1 + A x2` for `x = (x1, x2)`.
    pub fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.n() {
            return Err(Error::Shape(format!(
                "syndrome of a length-{} vector under a {}-column matrix",
                x.len(),
                self.n()
            )));
        }
        let (x1, x2) = x.split_at(self.k());
        Ok(self.block.mul(&x2)? ^ &x1)
    }

    /// Some `x` with `H xᵀ = target`, given the free right half `x2`.
    pub fn preimage(&self, target: &BitVector, x2: &BitVector) -> Result<BitVector> {
        if target.len() != self.k() {
            return Err(Error::Shape(format!(
                "target syndrome has length {}, expected {}",
                target.len(),
                self.k()
            )));
        }
        let x1 = self.block.mul(x2)? ^ target;
        Ok(x1.concat(x2))
    }
}
