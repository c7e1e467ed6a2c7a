//! Hash commitments of length 2λ.
//!
//! `Com(tag, m) = SHAKE256(tag ‖ 0u32 ‖ m)` truncated to 2λ bits. There is
//! no commitment randomness: every committed message in the protocol
//! already contains a fresh uniform vector or permutation, which is what
//! hiding relies on.

use std::fmt;

use crate::seedexp::{DomainTag, XofStream};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Commitment(Vec<u8>);

impl Commitment {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Commitment(bytes.to_vec())
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

impl fmt::Debug for Commitment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Commitment({})", hex::encode(&self.0))
    }
}

/// Commitment byte length for security level `lambda` (in bits).
pub const fn commitment_len(lambda: usize) -> usize {
    2 * lambda / 8
}

pub fn commit(tag: DomainTag, payload: &[u8], lambda: usize) -> Commitment {
    commit_parts(tag, &[payload], lambda)
}

/// Commits to the concatenation of `parts` (no length framing).
pub fn commit_parts(tag: DomainTag, parts: &[&[u8]], lambda: usize) -> Commitment {
    let mut out = vec![0u8; commitment_len(lambda)];
    XofStream::with_parts(tag, 0, parts).fill(&mut out);
    Commitment(out)
}

/// Accepts iff `c` is the commitment to `(tag, payload)`.
pub fn open(c: &Commitment, tag: DomainTag, payload: &[u8], lambda: usize) -> bool {
    commit(tag, payload, lambda) == *c
}
