use crate::algebra::BitVector;
use crate::error::{Error, Result};

/// A bijection on `{0, …, n-1}`.
///
/// Applied to a vector, coordinate `i` moves to position `π(i)`:
/// `π[v][π(i)] = v[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 1 << 16, "permutations are limited to 2^16 points");
        Permutation {
            images: (0..n).map(|i| i as u16).collect(),
        }
    }

    /// Checks that `images` is a bijection.
    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            let p = p as usize;
            if p >= n || seen[p] {
                return Err(Error::Decode("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u16>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    /// `π[v]`.
    pub fn apply(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len(), "permutation/vector size mismatch");
        let mut out = BitVector::zeros(v.len());
        for i in v.support() {
            out.set(self.images[i] as usize, true);
        }
        out
    }

    /// `π⁻¹[v]` without materialising the inverse.
    pub fn apply_inverse(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len(), "permutation/vector size mismatch");
        let mut out = BitVector::zeros(v.len());
        for (i, &p) in self.images.iter().enumerate() {
            if v.get(p as usize) {
                out.set(i, true);
            }
        }
        out
    }

    /// Images as 2-byte big-endian integers, the form committed to.
    pub fn write_bytes(&self, out: &mut Vec<u8>) {
        out.reserve(2 * self.len());
        for &p in &self.images {
            out.extend_from_slice(&p.to_be_bytes());
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_bytes(&mut out);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() % 2 != 0 {
            return Err(Error::Decode("odd permutation byte length".into()));
        }
        let images = bytes
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect();
        Self::from_images(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_moves_coordinates_to_images() {
        let p = Permutation::from_images(vec![2, 0, 1]).unwrap();
        let v = BitVector::from_bit_str("100").unwrap();
        assert_eq!(p.apply(&v), BitVector::from_bit_str("001").unwrap());
        assert_eq!(p.apply_inverse(&p.apply(&v)), v);
        assert_eq!(p.inverse().apply(&p.apply(&v)), v);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let p = Permutation::from_images(vec![3, 1, 0, 2]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
        assert_eq!(p.inverse().compose(&p), Permutation::identity(4));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
        assert!(Permutation::from_bytes(&[0, 1, 0]).is_err());
    }

    #[test]
    fn bytes_roundtrip() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(p.to_bytes(), vec![0, 1, 0, 2, 0, 0]);
        assert_eq!(Permutation::from_bytes(&p.to_bytes()).unwrap(), p);
    }
}
