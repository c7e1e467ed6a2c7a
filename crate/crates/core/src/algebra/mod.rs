//! Bit-packed F2 linear algebra for index-2 quasi-cyclic codes.

mod bitvec;
mod circulant;
mod perm;

pub use bitvec::BitVector;
pub use circulant::{rotate, rotate_pair, CirculantBlock, QCParityCheck};
pub use perm::Permutation;

/// Hamming weight.
pub fn weight(v: &BitVector) -> usize {
    v.weight()
}
