//! The five protocol messages and their byte encodings.

use crate::algebra::BitVector;
use crate::codec::PackedResponse;
use crate::commit::Commitment;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::seedexp::XofStream;

/// `(s_i, r_i)` for every iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Challenge1 {
    entries: Vec<(u16, u16)>,
}

impl Challenge1 {
    pub fn new(params: &ParameterSet, entries: Vec<(u16, u16)>) -> Result<Self> {
        if entries.len() != params.delta() {
            return Err(Error::Shape(format!(
                "first challenge has {} entries, expected {}",
                entries.len(),
                params.delta()
            )));
        }
        for &(s, r) in &entries {
            if s as usize >= params.s() {
                return Err(Error::Range {
                    what: "key index s_i",
                    value: s as u64,
                    bound: params.s() as u64,
                });
            }
            if r as usize >= params.k() {
                return Err(Error::Range {
                    what: "rotation r_i",
                    value: r as u64,
                    bound: params.k() as u64,
                });
            }
        }
        Ok(Challenge1 { entries })
    }

    /// Uniform challenge drawn from `stream` (`s_i` then `r_i`, per iteration).
    pub fn sample(params: &ParameterSet, stream: &mut XofStream) -> Self {
        let entries = (0..params.delta())
            .map(|_| {
                let s = stream.sample_below(params.s() as u32) as u16;
                let r = stream.sample_below(params.k() as u32) as u16;
                (s, r)
            })
            .collect();
        Challenge1 { entries }
    }

    pub fn entries(&self) -> &[(u16, u16)] {
        &self.entries
    }

    pub fn key_index(&self, i: usize) -> usize {
        self.entries[i].0 as usize
    }

    pub fn rotation(&self, i: usize) -> usize {
        self.entries[i].1 as usize
    }

    /// `δ × (s_i: u16 BE, r_i: u16 BE)`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * self.entries.len());
        for &(s, r) in &self.entries {
            out.extend_from_slice(&s.to_be_bytes());
            out.extend_from_slice(&r.to_be_bytes());
        }
        out
    }

    pub fn from_bytes(params: &ParameterSet, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != 4 * params.delta() {
            return Err(Error::Decode(format!(
                "first challenge is {} bytes, expected {}",
                bytes.len(),
                4 * params.delta()
            )));
        }
        let entries = bytes
            .chunks_exact(4)
            .map(|c| (u16::from_be_bytes([c[0], c[1]]), u16::from_be_bytes([c[2], c[3]])))
            .collect();
        Challenge1::new(params, entries).map_err(|e| Error::Decode(e.to_string()))
    }
}

/// The branch bits `b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Challenge2 {
    bits: Vec<bool>,
}

impl Challenge2 {
    pub fn new(params: &ParameterSet, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != params.delta() {
            return Err(Error::Shape(format!(
                "second challenge has {} bits, expected {}",
                bits.len(),
                params.delta()
            )));
        }
        Ok(Challenge2 { bits })
    }

    pub fn sample(params: &ParameterSet, stream: &mut XofStream) -> Self {
        let v = stream.vector(params.delta());
        Challenge2 {
            bits: v.iter().collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Packed LSB-first like any other bit vector.
    pub fn to_bytes(&self) -> Vec<u8> {
        BitVector::from_bits(&self.bits).to_bytes()
    }

    pub fn from_bytes(params: &ParameterSet, bytes: &[u8]) -> Result<Self> {
        let v = BitVector::from_bytes(bytes, params.delta())?;
        Ok(Challenge2 {
            bits: v.iter().collect(),
        })
    }
}

/// `Cmt1` or `Cmt2`: one aggregate digest, or every child commitment when
/// aggregation is disabled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommitmentMsg {
    Aggregated(Commitment),
    Expanded(Vec<Commitment>),
}

impl CommitmentMsg {
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            CommitmentMsg::Aggregated(c) => c.as_bytes().to_vec(),
            CommitmentMsg::Expanded(cs) => cs.iter().flat_map(|c| c.as_bytes().to_vec()).collect(),
        }
    }

    /// Parses a message that expands to `children` commitments.
    pub fn from_bytes(params: &ParameterSet, bytes: &[u8], children: usize) -> Result<Self> {
        let cl = params.commit_len();
        let aggregated = params.optimizations().commitment_aggregation;
        let expected = if aggregated { cl } else { children * cl };
        if bytes.len() != expected {
            return Err(Error::Decode(format!(
                "commitment message is {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        Ok(if aggregated {
            CommitmentMsg::Aggregated(Commitment::from_bytes(bytes))
        } else {
            CommitmentMsg::Expanded(bytes.chunks_exact(cl).map(Commitment::from_bytes).collect())
        })
    }

    pub fn byte_len(&self) -> usize {
        match self {
            CommitmentMsg::Aggregated(c) => c.len(),
            CommitmentMsg::Expanded(cs) => cs.iter().map(Commitment::len).sum(),
        }
    }
}

/// Number of child commitments behind `Cmt1` (`c_{i,1}, c_{i,2}`) and `Cmt2`.
pub fn cmt1_children(params: &ParameterSet) -> usize {
    2 * params.delta()
}

pub fn cmt2_children(params: &ParameterSet) -> usize {
    params.delta()
}

/// Byte length of `Cmt1` / `Cmt2` under `params`.
pub fn cmt1_len(params: &ParameterSet) -> usize {
    if params.optimizations().commitment_aggregation {
        params.commit_len()
    } else {
        cmt1_children(params) * params.commit_len()
    }
}

pub fn cmt2_len(params: &ParameterSet) -> usize {
    if params.optimizations().commitment_aggregation {
        params.commit_len()
    } else {
        cmt2_children(params) * params.commit_len()
    }
}

/// A complete interactive run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub cmt1: CommitmentMsg,
    pub ch1: Challenge1,
    pub cmt2: CommitmentMsg,
    pub ch2: Challenge2,
    pub rsp: PackedResponse,
}

impl Transcript {
    /// Each message as a 4-byte big-endian length followed by its bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for part in [
            self.cmt1.to_bytes(),
            self.ch1.to_bytes(),
            self.cmt2.to_bytes(),
            self.ch2.to_bytes(),
            self.rsp.as_bytes().to_vec(),
        ] {
            out.extend_from_slice(&(part.len() as u32).to_be_bytes());
            out.extend_from_slice(&part);
        }
        out
    }

    pub fn from_bytes(params: &ParameterSet, bytes: &[u8]) -> Result<Self> {
        let mut rest = bytes;
        let mut parts = Vec::with_capacity(5);
        for _ in 0..5 {
            if rest.len() < 4 {
                return Err(Error::Decode("truncated transcript".into()));
            }
            let (len, tail) = rest.split_at(4);
            let len = u32::from_be_bytes(len.try_into().unwrap()) as usize;
            if tail.len() < len {
                return Err(Error::Decode("truncated transcript".into()));
            }
            let (part, tail) = tail.split_at(len);
            parts.push(part);
            rest = tail;
        }
        if !rest.is_empty() {
            return Err(Error::Decode(format!("{} trailing transcript bytes", rest.len())));
        }
        Ok(Transcript {
            cmt1: CommitmentMsg::from_bytes(params, parts[0], cmt1_children(params))?,
            ch1: Challenge1::from_bytes(params, parts[1])?,
            cmt2: CommitmentMsg::from_bytes(params, parts[2], cmt2_children(params))?,
            ch2: Challenge2::from_bytes(params, parts[3])?,
            rsp: PackedResponse::from_bytes(parts[4].to_vec()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seedexp::DomainTag;

    #[test]
    fn challenge_encodings_roundtrip() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let mut xs = XofStream::new(DomainTag::Chal1, 0, b"t");
        let ch1 = Challenge1::sample(&p, &mut xs);
        assert!(ch1.entries().iter().all(|&(s, r)| s == 0 && r < 8));
        assert_eq!(Challenge1::from_bytes(&p, &ch1.to_bytes()).unwrap(), ch1);
        let ch2 = Challenge2::sample(&p, &mut xs);
        assert_eq!(ch2.to_bytes().len(), 1);
        assert_eq!(Challenge2::from_bytes(&p, &ch2.to_bytes()).unwrap(), ch2);
        assert!(Challenge2::from_bytes(&p, &[0x10]).is_err());
    }

    #[test]
    fn challenge1_ranges_enforced() {
        let p = ParameterSet::by_name("TOY").unwrap();
        assert!(Challenge1::new(&p, vec![(0, 8); 4]).is_err());
        assert!(Challenge1::new(&p, vec![(1, 0); 4]).is_err());
        assert!(Challenge1::new(&p, vec![(0, 7); 3]).is_err());
        let mut bytes = Challenge1::new(&p, vec![(0, 7); 4]).unwrap().to_bytes();
        bytes[3] = 8;
        assert!(matches!(
            Challenge1::from_bytes(&p, &bytes),
            Err(Error::Decode(_))
        ));
    }
}
