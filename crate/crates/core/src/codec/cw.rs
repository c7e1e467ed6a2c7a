//! Constant-weight coding through the combinatorial number system.
//!
//! A weight-`w` vector of length `n` is identified with its support, and
//! supports are ranked in lexicographic order: `{0,1,…,w-1}` has rank 0 and
//! `{n-w,…,n-1}` has rank `C(n,w) - 1`. The rank is written as a fixed-width
//! big-endian integer (bit 0 of the code is the most significant bit).
//!
//! Ranking walks the positions once, carrying `C(m, r-1)` for the current
//! suffix length `m` and remaining weight `r`, and updates it with one small
//! multiplication and one exact division per step.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::BitVector;
use crate::error::{Error, Result};
use crate::params::binomial;

/// `C(n, w) ≤ 2^width`.
pub fn cw_capacity_ok(n: usize, w: usize, width: usize) -> bool {
    let c = binomial(n as u64, w as u64);
    if c.is_zero() {
        return false;
    }
    (c - 1u32).bits() <= width as u64
}

/// Moves the running binomial `C(m, r-1)` one position to the right.
fn step(b: &mut BigUint, m: usize, r: usize, taken: bool) {
    if m == 0 {
        return;
    }
    if taken {
        *b *= (r - 1) as u64;
    } else {
        *b *= (m + 1 - r) as u64;
    }
    *b /= m as u64;
}

/// Lexicographic rank of the support of `v`, which must have weight `w`.
pub fn cw_rank(v: &BitVector, w: usize) -> Result<BigUint> {
    let n = v.len();
    if v.weight() != w {
        return Err(Error::Contract(format!(
            "constant-weight encoder expects weight {w}, got {}",
            v.weight()
        )));
    }
    let mut rank = BigUint::zero();
    if w == 0 {
        return Ok(rank);
    }
    let mut r = w;
    let mut b = binomial(n as u64 - 1, w as u64 - 1);
    for j in 0..n {
        if r == 0 {
            break;
        }
        let m = n - 1 - j;
        let taken = v.get(j);
        if !taken {
            rank += &b;
        }
        step(&mut b, m, r, taken);
        if taken {
            r -= 1;
        }
    }
    Ok(rank)
}

/// Inverse of [`cw_rank`].
pub fn cw_unrank(rank: &BigUint, n: usize, w: usize) -> Result<BitVector> {
    if w > n {
        return Err(Error::Range {
            what: "weight",
            value: w as u64,
            bound: n as u64 + 1,
        });
    }
    if *rank >= binomial(n as u64, w as u64) {
        return Err(Error::Decode(format!("constant-weight rank exceeds C({n}, {w})")));
    }
    let mut v = BitVector::zeros(n);
    if w == 0 {
        return Ok(v);
    }
    let mut rank = rank.clone();
    let mut r = w;
    let mut b = binomial(n as u64 - 1, w as u64 - 1);
    for j in 0..n {
        if r == 0 {
            break;
        }
        let m = n - 1 - j;
        let taken = rank < b;
        if taken {
            v.set(j, true);
        } else {
            rank -= &b;
        }
        step(&mut b, m, r, taken);
        if taken {
            r -= 1;
        }
    }
    Ok(v)
}

/// Encodes a weight-`w` vector as a `width`-bit big-endian rank.
pub fn cw_encode(v: &BitVector, w: usize, width: usize) -> Result<BitVector> {
    if !cw_capacity_ok(v.len(), w, width) {
        return Err(Error::Parameter(format!(
            "C({}, {w}) does not fit in {width} bits",
            v.len()
        )));
    }
    let rank = cw_rank(v, w)?;
    let mut code = BitVector::zeros(width);
    for i in 0..width {
        if rank.bit((width - 1 - i) as u64) {
            code.set(i, true);
        }
    }
    Ok(code)
}

/// Decodes a big-endian rank back into a weight-`w` vector of length `n`.
pub fn cw_decode(code: &BitVector, n: usize, w: usize) -> Result<BitVector> {
    let mut rank = BigUint::zero();
    for bit in code.iter() {
        rank <<= 1u32;
        if bit {
            rank += BigUint::one();
        }
    }
    cw_unrank(&rank, n, w)
}
