//! Honest-verifier simulator: produces accepting transcripts for given
//! challenges without the secret key.

use crate::algebra::rotate;
use crate::codec::PackedResponse;
use crate::error::Result;
use crate::params::ParameterSet;
use crate::protocol::keys::PublicKey;
use crate::protocol::messages::{Challenge1, Challenge2, CommitmentMsg};
use crate::protocol::prover::{build_iterations, build_response, commit_second};
use crate::seedexp::{expand_vector, expand_weight_w, DomainTag, Seed};

/// Index offset for the simulator's stand-in secrets.
const SIM_INDEX: u32 = 0x4000_0000;

/// `(Cmt1, Cmt2, Rsp)` accepted by `verify` under `(ch1, ch2)`.
///
/// Where `b_i = 0` the stand-in `x̃` only satisfies `H x̃ = rot(y, r_i)` (any
/// weight); where `b_i = 1` it is a random weight-`w` vector with no relation
/// to `y`.
pub fn simulate_transcript(
    pk: &PublicKey,
    params: &ParameterSet,
    ch1: &Challenge1,
    ch2: &Challenge2,
    randomness: &Seed,
) -> Result<(CommitmentMsg, CommitmentMsg, PackedResponse)> {
    let ch1 = Challenge1::new(params, ch1.entries().to_vec())?;
    let ch2 = Challenge2::new(params, ch2.bits().to_vec())?;
    let (mut iters, masters, cmt1) = build_iterations(params, pk.matrix(), randomness)?;
    let mut fake = Vec::with_capacity(params.delta());
    for (i, &b) in ch2.bits().iter().enumerate() {
        let idx = SIM_INDEX + i as u32;
        fake.push(if b {
            expand_weight_w(randomness, DomainTag::Vector, idx, params.n(), params.w())?
        } else {
            let target = rotate(pk.syndrome(ch1.key_index(i)), ch1.rotation(i))?;
            let x2 = expand_vector(randomness, DomainTag::Vector, idx, params.k());
            pk.matrix().preimage(&target, &x2)?
        });
    }
    let cmt2 = commit_second(params, &mut iters, fake);
    let rsp = build_response(params, &iters, &masters, &ch2)?;
    Ok((cmt1, cmt2, rsp))
}
