//! The verifier: challenge generation and the final check.

use crate::algebra::{rotate, BitVector};
use crate::codec::{decompress_response, IterationResponse, PackedResponse, VectorReveal};
use crate::commit::Commitment;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::protocol::keys::{PublicKey, SecretKey};
use crate::protocol::messages::{
    cmt1_children, cmt2_children, Challenge1, Challenge2, CommitmentMsg, Transcript,
};
use crate::protocol::prover::{aggregate, commit_c1, commit_vector, ProverState};
use crate::seedexp::{expand_permutation, expand_vector, DomainTag, Seed, XofStream};

fn reject(reason: impl Into<String>) -> Error {
    Error::Protocol(reason.into())
}

fn check_commitment_shape(
    params: &ParameterSet,
    m: &CommitmentMsg,
    children: usize,
    what: &str,
) -> Result<()> {
    let cl = params.commit_len();
    let ok = match (m, params.optimizations().commitment_aggregation) {
        (CommitmentMsg::Aggregated(c), true) => c.len() == cl,
        (CommitmentMsg::Expanded(cs), false) => cs.len() == children && cs.iter().all(|c| c.len() == cl),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(reject(format!(
            "{what} has the wrong shape for this parameter set"
        )))
    }
}

fn child(m: &CommitmentMsg, i: usize) -> Option<&Commitment> {
    match m {
        CommitmentMsg::Expanded(cs) => cs.get(i),
        CommitmentMsg::Aggregated(_) => None,
    }
}

/// Runs every per-iteration recomputation and both openings. `Ok(())` means
/// accept; any error is a rejection carrying its reason.
pub fn check_transcript(
    pk: &PublicKey,
    params: &ParameterSet,
    cmt1: &CommitmentMsg,
    ch1: &Challenge1,
    cmt2: &CommitmentMsg,
    ch2: &Challenge2,
    rsp: &PackedResponse,
) -> Result<()> {
    if pk.syndromes().len() != params.s() || pk.matrix().k() != params.k() {
        return Err(reject("public key does not match the parameter set"));
    }
    let ch1 = Challenge1::new(params, ch1.entries().to_vec())?;
    Challenge2::new(params, ch2.bits().to_vec())?;
    check_commitment_shape(params, cmt1, cmt1_children(params), "Cmt1")?;
    check_commitment_shape(params, cmt2, cmt2_children(params), "Cmt2")?;

    let responses = decompress_response(params, rsp, ch2.bits())?;
    let h = pk.matrix();
    let n = params.n();
    let mut first = Vec::with_capacity(cmt1_children(params));
    let mut second = Vec::with_capacity(cmt2_children(params));
    for (i, d) in responses.iter().enumerate() {
        let y_rot = rotate(pk.syndrome(ch1.key_index(i)), ch1.rotation(i))?;
        let missing = |given: &Option<Commitment>, index: usize| -> Result<Commitment> {
            given
                .clone()
                .or_else(|| child(cmt1, index).cloned())
                .ok_or_else(|| reject("missing commitment unavailable"))
        };
        let (c1, c2, c3) = match d {
            IterationResponse::Zero { theta, masked, c2 } => {
                let pi = expand_permutation(theta, DomainTag::Perm, i as u32, n);
                let c1 = commit_c1(params, &pi, &(h.syndrome(masked)? ^ &y_rot));
                let c3 = commit_vector(params, &pi.apply(masked));
                (c1, missing(c2, 2 * i + 1)?, c3)
            }
            IterationResponse::One { reveal, permuted, c1 } => {
                if permuted.weight() != params.w() {
                    return Err(reject(format!(
                        "iteration {i}: revealed vector has weight {}, expected {}",
                        permuted.weight(),
                        params.w()
                    )));
                }
                let v: BitVector = match reveal {
                    VectorReveal::Seed(xi) => expand_vector(xi, DomainTag::Vector, i as u32, n),
                    VectorReveal::Raw(v) => v.clone(),
                };
                let c2 = commit_vector(params, &v);
                let c3 = commit_vector(params, &(v ^ permuted));
                (missing(c1, 2 * i)?, c2, c3)
            }
        };
        first.push(c1);
        first.push(c2);
        second.push(c3);
    }
    if aggregate(params, first) != *cmt1 {
        return Err(reject("Cmt1 does not open"));
    }
    if aggregate(params, second) != *cmt2 {
        return Err(reject("Cmt2 does not open"));
    }
    Ok(())
}

/// Accept/reject form of [`check_transcript`].
pub fn verify(
    pk: &PublicKey,
    params: &ParameterSet,
    cmt1: &CommitmentMsg,
    ch1: &Challenge1,
    cmt2: &CommitmentMsg,
    ch2: &Challenge2,
    rsp: &PackedResponse,
) -> bool {
    check_transcript(pk, params, cmt1, ch1, cmt2, ch2, rsp).is_ok()
}

pub fn verify_transcript(pk: &PublicKey, params: &ParameterSet, t: &Transcript) -> bool {
    verify(pk, params, &t.cmt1, &t.ch1, &t.cmt2, &t.ch2, &t.rsp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    AwaitingCmt1,
    AwaitingCmt2,
    AwaitingResponse,
    Finished,
}

/// Interactive verifier for one run; challenges come from `entropy`.
pub struct VerifierSession {
    params: ParameterSet,
    pk: PublicKey,
    stream: XofStream,
    phase: Phase,
    cmt1: Option<CommitmentMsg>,
    ch1: Option<Challenge1>,
    cmt2: Option<CommitmentMsg>,
    ch2: Option<Challenge2>,
    transcript: Option<Transcript>,
}

impl VerifierSession {
    pub fn new(pk: &PublicKey, params: &ParameterSet, entropy: &Seed) -> Self {
        VerifierSession {
            params: params.clone(),
            pk: pk.clone(),
            stream: XofStream::new(DomainTag::Chal1, 0, entropy.as_bytes()),
            phase: Phase::AwaitingCmt1,
            cmt1: None,
            ch1: None,
            cmt2: None,
            ch2: None,
            transcript: None,
        }
    }

    fn expect(&self, phase: Phase) -> Result<()> {
        if self.phase != phase {
            return Err(Error::Contract(format!(
                "verifier expected {phase:?}, is in {:?}",
                self.phase
            )));
        }
        Ok(())
    }

    pub fn receive_cmt1(&mut self, cmt1: CommitmentMsg) -> Result<Challenge1> {
        self.expect(Phase::AwaitingCmt1)?;
        let ch1 = Challenge1::sample(&self.params, &mut self.stream);
        self.cmt1 = Some(cmt1);
        self.ch1 = Some(ch1.clone());
        self.phase = Phase::AwaitingCmt2;
        Ok(ch1)
    }

    pub fn receive_cmt2(&mut self, cmt2: CommitmentMsg) -> Result<Challenge2> {
        self.expect(Phase::AwaitingCmt2)?;
        let ch2 = Challenge2::sample(&self.params, &mut self.stream);
        self.cmt2 = Some(cmt2);
        self.ch2 = Some(ch2.clone());
        self.phase = Phase::AwaitingResponse;
        Ok(ch2)
    }

    /// Final decision; the full transcript stays available afterwards.
    pub fn receive_response(&mut self, rsp: PackedResponse) -> Result<bool> {
        self.expect(Phase::AwaitingResponse)?;
        let t = Transcript {
            cmt1: self.cmt1.take().unwrap(),
            ch1: self.ch1.take().unwrap(),
            cmt2: self.cmt2.take().unwrap(),
            ch2: self.ch2.take().unwrap(),
            rsp,
        };
        let ok = verify_transcript(&self.pk, &self.params, &t);
        self.transcript = Some(t);
        self.phase = Phase::Finished;
        Ok(ok)
    }

    pub fn transcript(&self) -> Option<&Transcript> {
        self.transcript.as_ref()
    }
}

/// Runs prover and verifier in-process.
pub fn run_interactive(
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    prover_randomness: &Seed,
    verifier_entropy: &Seed,
) -> Result<(bool, Transcript)> {
    let mut verifier = VerifierSession::new(pk, params, verifier_entropy);
    let (mut prover, cmt1) = ProverState::commit1(sk, pk, params, prover_randomness)?;
    let ch1 = verifier.receive_cmt1(cmt1)?;
    let cmt2 = prover.commit2(&ch1)?;
    let ch2 = verifier.receive_cmt2(cmt2)?;
    let rsp = prover.respond(&ch2)?;
    let ok = verifier.receive_response(rsp)?;
    Ok((ok, verifier.transcript.take().unwrap()))
}
