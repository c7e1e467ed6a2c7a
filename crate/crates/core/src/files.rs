//! On-disk formats for keys, signatures and interactive transcripts.
//!
//! ```text
//! magic (4) ‖ version (1) ‖ set id (1) ‖ payload
//! ```
//!
//! The low nibble of the id byte names a built-in parameter set; the high
//! nibble is the mask of disabled optimizations, so signatures made with
//! `--no-opt` stay self-describing. Keys always carry a zero mask.

use crate::error::{Error, Result};
use crate::fiatshamir::Signature;
use crate::params::{Optimizations, ParameterSet};
use crate::protocol::{PublicKey, SecretKey, Transcript};

pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    SecretKey,
    PublicKey,
    Signature,
    Transcript,
}

impl FileKind {
    pub fn magic(self) -> [u8; 4] {
        match self {
            FileKind::SecretKey => *b"QCSS",
            FileKind::PublicKey => *b"QCSP",
            FileKind::Signature => *b"QCSG",
            FileKind::Transcript => *b"QCST",
        }
    }
}

fn id_byte(params: &ParameterSet, with_opts: bool) -> Result<u8> {
    let id = params.id().ok_or_else(|| {
        Error::Parameter(format!(
            "{} is not a built-in set and cannot be stored",
            params.name()
        ))
    })?;
    let mask = if with_opts {
        params.optimizations().disabled_mask()
    } else {
        0
    };
    Ok(mask << 4 | id)
}

fn encode(kind: FileKind, params: &ParameterSet, with_opts: bool, payload: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(&kind.magic());
    out.push(FORMAT_VERSION);
    out.push(id_byte(params, with_opts)?);
    out.extend_from_slice(payload);
    Ok(out)
}

/// Checks magic and version, resolves the parameter set and returns the payload.
pub fn decode_header(kind: FileKind, bytes: &[u8]) -> Result<(ParameterSet, &[u8])> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Decode(format!(
            "file of {} bytes has no header",
            bytes.len()
        )));
    }
    if bytes[..4] != kind.magic() {
        return Err(Error::Decode(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&bytes[..4]),
            String::from_utf8_lossy(&kind.magic())
        )));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(Error::Decode(format!("unsupported format version {}", bytes[4])));
    }
    let id = bytes[5];
    let opts = Optimizations::from_disabled_mask(id >> 4).map_err(|e| Error::Decode(e.to_string()))?;
    let params = ParameterSet::by_id(id & 0x0f)
        .and_then(|p| p.set_optimizations(opts))
        .map_err(|e| Error::Decode(e.to_string()))?;
    Ok((params, &bytes[HEADER_LEN..]))
}

pub fn encode_secret_key(params: &ParameterSet, sk: &SecretKey) -> Result<Vec<u8>> {
    encode(FileKind::SecretKey, params, false, &sk.to_bytes())
}

pub fn decode_secret_key(bytes: &[u8]) -> Result<(ParameterSet, SecretKey)> {
    let (p, payload) = decode_header(FileKind::SecretKey, bytes)?;
    let sk = SecretKey::from_bytes(&p, payload)?;
    Ok((p, sk))
}

pub fn encode_public_key(params: &ParameterSet, pk: &PublicKey) -> Result<Vec<u8>> {
    encode(FileKind::PublicKey, params, false, &pk.to_bytes())
}

pub fn decode_public_key(bytes: &[u8]) -> Result<(ParameterSet, PublicKey)> {
    let (p, payload) = decode_header(FileKind::PublicKey, bytes)?;
    let pk = PublicKey::from_bytes(&p, payload)?;
    Ok((p, pk))
}

pub fn encode_signature(params: &ParameterSet, sig: &Signature) -> Result<Vec<u8>> {
    encode(FileKind::Signature, params, true, &sig.to_bytes())
}

pub fn decode_signature(bytes: &[u8]) -> Result<(ParameterSet, Signature)> {
    let (p, payload) = decode_header(FileKind::Signature, bytes)?;
    let sig = Signature::from_bytes(&p, payload)?;
    Ok((p, sig))
}

pub fn encode_transcript(params: &ParameterSet, t: &Transcript) -> Result<Vec<u8>> {
    encode(FileKind::Transcript, params, true, &t.to_bytes())
}

pub fn decode_transcript(bytes: &[u8]) -> Result<(ParameterSet, Transcript)> {
    let (p, payload) = decode_header(FileKind::Transcript, bytes)?;
    let t = Transcript::from_bytes(&p, payload)?;
    Ok((p, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiatshamir::sign;
    use crate::protocol::keygen;
    use crate::seedexp::Seed;

    #[test]
    fn key_files_roundtrip_and_reject_corruption() {
        let p = ParameterSet::by_name("QCS-128-s1").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
        let skf = encode_secret_key(&p, &sk).unwrap();
        assert_eq!(skf.len(), HEADER_LEN + 16);
        assert_eq!(decode_secret_key(&skf).unwrap(), (p.clone(), sk));
        let pkf = encode_public_key(&p, &pk).unwrap();
        assert_eq!(decode_public_key(&pkf).unwrap().1, pk);

        let mut bad = pkf.clone();
        bad[0] ^= 1;
        assert!(decode_public_key(&bad).is_err());
        let mut bad = pkf.clone();
        bad[4] = 2;
        assert!(decode_public_key(&bad).is_err());
        let mut bad = pkf.clone();
        bad[5] = 9;
        assert!(decode_public_key(&bad).is_err());
        assert!(decode_secret_key(&pkf).is_err());
    }

    #[test]
    fn signature_file_keeps_optimization_mask() {
        let mut o = Optimizations::all();
        o.disable("cw").unwrap();
        let p = ParameterSet::by_name("TOY")
            .unwrap()
            .set_optimizations(o)
            .unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
        let sig = sign(&sk, &pk, &p, b"m", &Seed::new(vec![2; 16])).unwrap();
        let f = encode_signature(&p, &sig).unwrap();
        let (q, s) = decode_signature(&f).unwrap();
        assert_eq!(q, p);
        assert_eq!(s, sig);
    }

    #[test]
    fn custom_sets_are_not_storable() {
        let p = ParameterSet::new(128, 8, 2, 3, 1).unwrap();
        let (sk, _) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
        assert!(matches!(encode_secret_key(&p, &sk), Err(Error::Parameter(_))));
    }
}
