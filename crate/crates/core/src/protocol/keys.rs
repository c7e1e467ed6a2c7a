use std::fmt;

use crate::algebra::{BitVector, QCParityCheck};
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::seedexp::{expand_circulant, expand_seed, expand_weight_w, DomainTag, Seed};

/// Index under which `φ1` and `φ2` are expanded from the root seed.
const ROOT_INDEX: u32 = u32::MAX;

/// `sk = φ1`; the `s` secrets are re-expanded on demand.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey {
    phi1: Seed,
}

impl SecretKey {
    pub fn from_seed(phi1: Seed) -> Self {
        SecretKey { phi1 }
    }

    pub fn seed(&self) -> &Seed {
        &self.phi1
    }

    /// `x^i = expand_weight_w(φ1, SECRET, i, n, w)` for `i < s`.
    pub fn secrets(&self, params: &ParameterSet) -> Result<Vec<BitVector>> {
        if self.phi1.len() != params.seed_len() {
            return Err(Error::Shape(format!(
                "secret seed is {} bytes, parameter set wants {}",
                self.phi1.len(),
                params.seed_len()
            )));
        }
        (0..params.s())
            .map(|i| expand_weight_w(&self.phi1, DomainTag::Secret, i as u32, params.n(), params.w()))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.phi1.as_bytes().to_vec()
    }

    pub fn from_bytes(params: &ParameterSet, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != params.secret_key_bytes() {
            return Err(Error::Decode(format!(
                "secret key is {} bytes, expected {}",
                bytes.len(),
                params.secret_key_bytes()
            )));
        }
        Ok(SecretKey::from_seed(Seed::from_slice(bytes)))
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SecretKey(..)")
    }
}

/// `pk = (φ2, y^0, …, y^{s-1})` together with the expanded `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    phi2: Seed,
    syndromes: Vec<BitVector>,
    h: QCParityCheck,
}

impl PublicKey {
    pub fn new(params: &ParameterSet, phi2: Seed, syndromes: Vec<BitVector>) -> Result<Self> {
        if phi2.len() != params.seed_len() {
            return Err(Error::Shape(format!("φ2 is {} bytes", phi2.len())));
        }
        if syndromes.len() != params.s() || syndromes.iter().any(|y| y.len() != params.k()) {
            return Err(Error::Shape(format!(
                "public key needs {} syndromes of {} bits",
                params.s(),
                params.k()
            )));
        }
        let h = expand_circulant(&phi2, DomainTag::Matrix, params.k())?;
        Ok(PublicKey { phi2, syndromes, h })
    }

    pub fn matrix_seed(&self) -> &Seed {
        &self.phi2
    }

    pub fn matrix(&self) -> &QCParityCheck {
        &self.h
    }

    pub fn syndromes(&self) -> &[BitVector] {
        &self.syndromes
    }

    pub fn syndrome(&self, i: usize) -> &BitVector {
        &self.syndromes[i]
    }

    /// `φ2 ‖ y^0 ‖ … ‖ y^{s-1}`, each syndrome byte-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.phi2.as_bytes().to_vec();
        for y in &self.syndromes {
            y.write_bytes(&mut out);
        }
        out
    }

    pub fn from_bytes(params: &ParameterSet, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != params.public_key_bytes() {
            return Err(Error::Decode(format!(
                "public key is {} bytes, expected {}",
                bytes.len(),
                params.public_key_bytes()
            )));
        }
        let (phi2, rest) = bytes.split_at(params.seed_len());
        let yb = params.k().div_ceil(8);
        let syndromes = rest
            .chunks_exact(yb)
            .map(|c| BitVector::from_bytes(c, params.k()))
            .collect::<Result<Vec<_>>>()?;
        PublicKey::new(params, Seed::from_slice(phi2), syndromes)
    }
}

/// Derives `φ1` and `φ2` from `root` and computes `y^i = H x^i`.
pub fn keygen(params: &ParameterSet, root: &Seed) -> Result<(SecretKey, PublicKey)> {
    if root.len() != params.seed_len() {
        return Err(Error::Shape(format!(
            "root seed is {} bytes, expected {}",
            root.len(),
            params.seed_len()
        )));
    }
    let sk = SecretKey::from_seed(expand_seed(root, DomainTag::Secret, ROOT_INDEX));
    let phi2 = expand_seed(root, DomainTag::Matrix, ROOT_INDEX);
    let h = expand_circulant(&phi2, DomainTag::Matrix, params.k())?;
    let syndromes = sk
        .secrets(params)?
        .iter()
        .map(|x| h.syndrome(x))
        .collect::<Result<Vec<_>>>()?;
    let pk = PublicKey::new(params, phi2, syndromes)?;
    Ok((sk, pk))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(b: u8) -> Seed {
        Seed::new(vec![b; 16])
    }

    #[test]
    fn deterministic_and_consistent() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &root(1)).unwrap();
        let (sk2, pk2) = keygen(&p, &root(1)).unwrap();
        assert_eq!(sk, sk2);
        assert_eq!(pk, pk2);
        for (x, y) in sk.secrets(&p).unwrap().iter().zip(pk.syndromes()) {
            assert_eq!(x.weight(), p.w());
            assert_eq!(pk.matrix().syndrome(x).unwrap(), *y);
        }
        assert_ne!(keygen(&p, &root(2)).unwrap().1, pk);
    }

    #[test]
    fn s20_secrets_have_weight_w() {
        let p = ParameterSet::by_name("QCS-128-s20").unwrap();
        let (sk, pk) = keygen(&p, &root(7)).unwrap();
        let xs = sk.secrets(&p).unwrap();
        assert_eq!(xs.len(), 20);
        assert!(xs.iter().all(|x| x.weight() == 137 && x.len() == 1306));
        assert_eq!(sk.to_bytes().len(), 16);
        assert_eq!(pk.to_bytes().len(), 16 + 20 * 82);
    }

    #[test]
    fn key_bytes_roundtrip_and_reject() {
        let p = ParameterSet::by_name("QCS-128-s4").unwrap();
        let (sk, pk) = keygen(&p, &root(3)).unwrap();
        assert_eq!(SecretKey::from_bytes(&p, &sk.to_bytes()).unwrap(), sk);
        let bytes = pk.to_bytes();
        assert_eq!(PublicKey::from_bytes(&p, &bytes).unwrap(), pk);
        assert!(PublicKey::from_bytes(&p, &bytes[1..]).is_err());
        // 653 bits leave 3 padding bits in the last byte of each syndrome.
        let mut bad = bytes.clone();
        bad[16 + 81] |= 0x80;
        assert!(matches!(PublicKey::from_bytes(&p, &bad), Err(Error::Decode(_))));
    }
}
