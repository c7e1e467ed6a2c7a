//! Signatures: both challenges are derived by hashing the transcript prefix.
//!
//! ```text
//! pk_digest = Com(MSG, pk bytes)
//! μ         = Com(MSG, pk_digest ‖ message)
//! Ch1       = sample from XOF(CHAL1 ‖ 0 ‖ μ ‖ Cmt1)
//! Ch2       = sample from XOF(CHAL2 ‖ 0 ‖ μ ‖ Cmt1 ‖ Ch1 ‖ Cmt2)
//! σ         = Cmt1 ‖ Cmt2 ‖ Rsp
//! ```

use crate::codec::{expected_response_bits, PackedResponse};
use crate::commit::{commit, commit_parts, Commitment};
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::protocol::{
    check_transcript, cmt1_children, cmt1_len, cmt2_children, cmt2_len, Challenge1, Challenge2,
    CommitmentMsg, ProverState, PublicKey, SecretKey,
};
use crate::seedexp::{DomainTag, Seed, XofStream};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub cmt1: CommitmentMsg,
    pub cmt2: CommitmentMsg,
    pub response: PackedResponse,
}

impl Signature {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.cmt1.to_bytes();
        out.extend_from_slice(&self.cmt2.to_bytes());
        out.extend_from_slice(self.response.as_bytes());
        out
    }

    /// Splits off the commitments; the response length is checked when it
    /// is unpacked against the re-derived `Ch2`.
    pub fn from_bytes(params: &ParameterSet, bytes: &[u8]) -> Result<Self> {
        let (l1, l2) = (cmt1_len(params), cmt2_len(params));
        if bytes.len() < l1 + l2 {
            return Err(Error::Decode(format!(
                "signature of {} bytes is truncated",
                bytes.len()
            )));
        }
        Ok(Signature {
            cmt1: CommitmentMsg::from_bytes(params, &bytes[..l1], cmt1_children(params))?,
            cmt2: CommitmentMsg::from_bytes(params, &bytes[l1..l1 + l2], cmt2_children(params))?,
            response: PackedResponse::from_bytes(bytes[l1 + l2..].to_vec()),
        })
    }

    pub fn byte_len(&self) -> usize {
        self.cmt1.byte_len() + self.cmt2.byte_len() + self.response.len()
    }
}

pub fn pk_digest(pk: &PublicKey, params: &ParameterSet) -> Commitment {
    commit(DomainTag::Msg, &pk.to_bytes(), params.lambda())
}

fn message_digest(pk_digest: &Commitment, message: &[u8], params: &ParameterSet) -> Commitment {
    commit_parts(DomainTag::Msg, &[pk_digest.as_bytes(), message], params.lambda())
}

pub fn derive_challenge1(
    pk_digest: &Commitment,
    message: &[u8],
    cmt1: &CommitmentMsg,
    params: &ParameterSet,
) -> Challenge1 {
    let mu = message_digest(pk_digest, message, params);
    let mut xs = XofStream::with_parts(DomainTag::Chal1, 0, &[mu.as_bytes(), &cmt1.to_bytes()]);
    Challenge1::sample(params, &mut xs)
}

pub fn derive_challenge2(
    pk_digest: &Commitment,
    message: &[u8],
    cmt1: &CommitmentMsg,
    ch1: &Challenge1,
    cmt2: &CommitmentMsg,
    params: &ParameterSet,
) -> Challenge2 {
    let mu = message_digest(pk_digest, message, params);
    let mut xs = XofStream::with_parts(
        DomainTag::Chal2,
        0,
        &[mu.as_bytes(), &cmt1.to_bytes(), &ch1.to_bytes(), &cmt2.to_bytes()],
    );
    Challenge2::sample(params, &mut xs)
}

pub fn sign(
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    message: &[u8],
    randomness: &Seed,
) -> Result<Signature> {
    let digest = pk_digest(pk, params);
    let (mut prover, cmt1) = ProverState::commit1(sk, pk, params, randomness)?;
    let ch1 = derive_challenge1(&digest, message, &cmt1, params);
    let cmt2 = prover.commit2(&ch1)?;
    let ch2 = derive_challenge2(&digest, message, &cmt1, &ch1, &cmt2, params);
    let response = prover.respond(&ch2)?;
    Ok(Signature { cmt1, cmt2, response })
}

/// Re-derives both challenges and runs the protocol check; `Ok(())` accepts.
pub fn check_signature(pk: &PublicKey, params: &ParameterSet, message: &[u8], sig: &Signature) -> Result<()> {
    let digest = pk_digest(pk, params);
    let ch1 = derive_challenge1(&digest, message, &sig.cmt1, params);
    let ch2 = derive_challenge2(&digest, message, &sig.cmt1, &ch1, &sig.cmt2, params);
    check_transcript(pk, params, &sig.cmt1, &ch1, &sig.cmt2, &ch2, &sig.response)
}

pub fn verify_signature(pk: &PublicKey, params: &ParameterSet, message: &[u8], sig: &Signature) -> bool {
    check_signature(pk, params, message, sig).is_ok()
}

/// Verifies a serialized signature; malformed bytes simply reject.
pub fn verify_signature_bytes(pk: &PublicKey, params: &ParameterSet, message: &[u8], sig: &[u8]) -> bool {
    Signature::from_bytes(params, sig).is_ok_and(|s| verify_signature(pk, params, message, &s))
}

/// `4λ + δ(2.75λ + 0.75n)`: the average size with every optimization on,
/// treating every iteration as paired.
pub fn closed_form_signature_bits(lambda: u64, delta: u64, n: u64) -> f64 {
    let (l, d, n) = (lambda as f64, delta as f64, n as f64);
    4.0 * l + d * (2.75 * l + 0.75 * n)
}

/// Average signature size in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectedSize {
    /// The closed form above (only meaningful with every optimization on).
    pub closed_form: f64,
    /// Exact mean over uniform `Ch2` for the active optimizations, counting
    /// an unpaired last iteration at its full seed cost.
    pub exact: f64,
}

pub fn expected_signature_bits(params: &ParameterSet) -> ExpectedSize {
    let header = 8.0 * (cmt1_len(params) + cmt2_len(params)) as f64;
    ExpectedSize {
        closed_form: closed_form_signature_bits(
            params.lambda() as u64,
            params.delta() as u64,
            params.n() as u64,
        ),
        exact: header + expected_response_bits(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::keygen;

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_signature_bits(128, 151, 1306), 201_568.5);
        assert_eq!(closed_form_signature_bits(128, 145, 1306), 193_579.5);
        assert_eq!(closed_form_signature_bits(128, 141, 1306), 188_253.5);
    }

    #[test]
    fn exact_adds_a_quarter_seed_for_odd_delta() {
        let p = ParameterSet::by_name("QCS-128-s1").unwrap();
        let e = expected_signature_bits(&p);
        assert_eq!(e.exact - e.closed_form, 32.0);
        let even = p.with_delta(150).unwrap();
        let e = expected_signature_bits(&even);
        assert_eq!(e.exact, e.closed_form);
    }

    #[test]
    fn sign_verify_and_message_binding() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
        let sig = sign(&sk, &pk, &p, b"hello", &Seed::new(vec![2; 16])).unwrap();
        assert!(verify_signature(&pk, &p, b"hello", &sig));
        assert!(!verify_signature(&pk, &p, b"hellp", &sig));
        let bytes = sig.to_bytes();
        assert_eq!(bytes.len(), sig.byte_len());
        assert!(verify_signature_bytes(&pk, &p, b"hello", &bytes));
        assert!(!verify_signature_bytes(
            &pk,
            &p,
            b"hello",
            &bytes[..bytes.len() - 1]
        ));
        let other = sign(&sk, &pk, &p, b"hello", &Seed::new(vec![3; 16])).unwrap();
        assert_ne!(other, sig);
    }

    #[test]
    fn singleton_key_range_gives_zero_indices() {
        let p = ParameterSet::by_name("QCS-128-s1").unwrap();
        let d = Commitment::from_bytes(&[0; 32]);
        let c = CommitmentMsg::Aggregated(Commitment::from_bytes(&[1; 32]));
        let ch1 = derive_challenge1(&d, b"m", &c, &p);
        assert!(ch1.entries().iter().all(|&(s, r)| s == 0 && r < 653));
        assert_eq!(ch1, derive_challenge1(&d, b"m", &c, &p));
    }
}
