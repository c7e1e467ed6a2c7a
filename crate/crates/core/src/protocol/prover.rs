//! The prover side: `P1` (Cmt1), `P2` (Cmt2) and `P3` (Rsp).

use crate::algebra::{rotate_pair, BitVector, Permutation, QCParityCheck};
use crate::codec::{compress_response, IterationResponse, PackedResponse, PairMasters, VectorReveal};
use crate::commit::{commit, commit_parts, Commitment};
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::protocol::keys::{PublicKey, SecretKey};
use crate::protocol::messages::{Challenge1, Challenge2, CommitmentMsg};
use crate::seedexp::{derive_pair, expand_permutation, expand_seed, expand_vector, DomainTag, Seed};

/// Offset of the per-iteration indices used for unpaired seeds.
pub(crate) const STANDALONE_INDEX: u32 = 0x8000_0000;

pub(crate) struct Iteration {
    pub theta: Seed,
    pub xi: Seed,
    pub pi: Permutation,
    pub u: BitVector,
    pub v: BitVector,
    pub c1: Commitment,
    pub c2: Commitment,
    pub c3: Option<Commitment>,
    pub x_rot: Option<BitVector>,
}

/// `(θ_i, ξ_i)` for every iteration plus the pair masters they came from.
///
/// Pairs always derive from masters; the seed-pairing flag only decides
/// whether masters are ever transmitted, so the same randomness produces the
/// same protocol run under every flag combination.
pub(crate) fn iteration_seeds(
    params: &ParameterSet,
    randomness: &Seed,
) -> (Vec<(Seed, Seed)>, Vec<PairMasters>) {
    let delta = params.delta();
    let mut seeds = Vec::with_capacity(delta);
    let mut masters = Vec::with_capacity(delta / 2);
    for p in 0..delta / 2 {
        let m = PairMasters {
            theta: expand_seed(randomness, DomainTag::Perm, p as u32),
            xi: expand_seed(randomness, DomainTag::Vector, p as u32),
        };
        let (t0, t1) = derive_pair(&m.theta, p as u32);
        let (x0, x1) = derive_pair(&m.xi, p as u32);
        seeds.push((t0, x0));
        seeds.push((t1, x1));
        masters.push(m);
    }
    if delta % 2 == 1 {
        let i = STANDALONE_INDEX + (delta - 1) as u32;
        seeds.push((
            expand_seed(randomness, DomainTag::Perm, i),
            expand_seed(randomness, DomainTag::Vector, i),
        ));
    }
    (seeds, masters)
}

pub(crate) fn commit_c1(params: &ParameterSet, pi: &Permutation, syndrome: &BitVector) -> Commitment {
    commit_parts(
        DomainTag::Commit,
        &[&pi.to_bytes(), &syndrome.to_bytes()],
        params.lambda(),
    )
}

pub(crate) fn commit_vector(params: &ParameterSet, v: &BitVector) -> Commitment {
    commit(DomainTag::Commit, &v.to_bytes(), params.lambda())
}

/// `Com(child_1 ‖ child_2 ‖ …)`, or the children themselves when aggregation
/// is off.
pub(crate) fn aggregate(params: &ParameterSet, children: Vec<Commitment>) -> CommitmentMsg {
    if params.optimizations().commitment_aggregation {
        let parts: Vec<&[u8]> = children.iter().map(Commitment::as_bytes).collect();
        CommitmentMsg::Aggregated(commit_parts(DomainTag::Commit, &parts, params.lambda()))
    } else {
        CommitmentMsg::Expanded(children)
    }
}

pub(crate) fn build_iterations(
    params: &ParameterSet,
    h: &QCParityCheck,
    randomness: &Seed,
) -> Result<(Vec<Iteration>, Vec<PairMasters>, CommitmentMsg)> {
    if randomness.len() != params.seed_len() {
        return Err(Error::Shape(format!(
            "prover randomness is {} bytes, expected {}",
            randomness.len(),
            params.seed_len()
        )));
    }
    let n = params.n();
    let (seeds, masters) = iteration_seeds(params, randomness);
    let mut iters = Vec::with_capacity(params.delta());
    let mut children = Vec::with_capacity(2 * params.delta());
    for (i, (theta, xi)) in seeds.into_iter().enumerate() {
        let pi = expand_permutation(&theta, DomainTag::Perm, i as u32, n);
        let v = expand_vector(&xi, DomainTag::Vector, i as u32, n);
        let u = pi.apply_inverse(&v);
        let c1 = commit_c1(params, &pi, &h.syndrome(&u)?);
        let c2 = commit_vector(params, &v);
        children.push(c1.clone());
        children.push(c2.clone());
        iters.push(Iteration {
            theta,
            xi,
            pi,
            u,
            v,
            c1,
            c2,
            c3: None,
            x_rot: None,
        });
    }
    Ok((iters, masters, aggregate(params, children)))
}

/// Commits `c_{i,3} = Com(π_i[u_i + x_i])` for the given per-iteration vectors.
pub(crate) fn commit_second(
    params: &ParameterSet,
    iters: &mut [Iteration],
    x_rot: Vec<BitVector>,
) -> CommitmentMsg {
    let mut children = Vec::with_capacity(iters.len());
    for (it, x) in iters.iter_mut().zip(x_rot) {
        let c3 = commit_vector(params, &(it.pi.apply(&x) ^ &it.v));
        children.push(c3.clone());
        it.c3 = Some(c3);
        it.x_rot = Some(x);
    }
    aggregate(params, children)
}

pub(crate) fn build_response(
    params: &ParameterSet,
    iters: &[Iteration],
    masters: &[PairMasters],
    ch2: &Challenge2,
) -> Result<PackedResponse> {
    let o = params.optimizations();
    let responses = iters
        .iter()
        .zip(ch2.bits())
        .map(|(it, &b)| {
            let x = it.x_rot.as_ref().expect("second commitment computed");
            if !b {
                IterationResponse::Zero {
                    theta: it.theta.clone(),
                    masked: &it.u ^ x,
                    c2: o.commitment_aggregation.then(|| it.c2.clone()),
                }
            } else {
                IterationResponse::One {
                    reveal: if o.seed_for_vector {
                        VectorReveal::Seed(it.xi.clone())
                    } else {
                        VectorReveal::Raw(it.v.clone())
                    },
                    permuted: it.pi.apply(x),
                    c1: o.commitment_aggregation.then(|| it.c1.clone()),
                }
            }
        })
        .collect::<Vec<_>>();
    compress_response(params, &responses, ch2.bits(), masters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    AwaitingChallenge1,
    AwaitingChallenge2,
    Finished,
}

/// Single-use prover state for one protocol run.
pub struct ProverState {
    params: ParameterSet,
    phase: Phase,
    secrets: Vec<BitVector>,
    iters: Vec<Iteration>,
    masters: Vec<PairMasters>,
}

impl ProverState {
    /// `P1`: draws every per-iteration seed from `randomness` and returns `Cmt1`.
    pub fn commit1(
        sk: &SecretKey,
        pk: &PublicKey,
        params: &ParameterSet,
        randomness: &Seed,
    ) -> Result<(Self, CommitmentMsg)> {
        if pk.syndromes().len() != params.s() || pk.matrix().k() != params.k() {
            return Err(Error::Contract(
                "public key does not match the parameter set".into(),
            ));
        }
        let secrets = sk.secrets(params)?;
        let (iters, masters, cmt1) = build_iterations(params, pk.matrix(), randomness)?;
        let state = ProverState {
            params: params.clone(),
            phase: Phase::AwaitingChallenge1,
            secrets,
            iters,
            masters,
        };
        Ok((state, cmt1))
    }

    /// `P2`: absorbs `Ch1` and returns `Cmt2`.
    pub fn commit2(&mut self, ch1: &Challenge1) -> Result<CommitmentMsg> {
        if self.phase != Phase::AwaitingChallenge1 {
            return Err(Error::Contract(format!(
                "commit2 called in state {:?}",
                self.phase
            )));
        }
        let ch1 = Challenge1::new(&self.params, ch1.entries().to_vec())?;
        let x_rot = (0..self.params.delta())
            .map(|i| rotate_pair(&self.secrets[ch1.key_index(i)], ch1.rotation(i)))
            .collect::<Result<Vec<_>>>()?;
        let cmt2 = commit_second(&self.params, &mut self.iters, x_rot);
        self.phase = Phase::AwaitingChallenge2;
        Ok(cmt2)
    }

    /// `P3`: answers `Ch2` and erases the state.
    pub fn respond(&mut self, ch2: &Challenge2) -> Result<PackedResponse> {
        if self.phase != Phase::AwaitingChallenge2 {
            return Err(Error::Contract(format!(
                "respond called in state {:?}",
                self.phase
            )));
        }
        Challenge2::new(&self.params, ch2.bits().to_vec())?;
        let rsp = build_response(&self.params, &self.iters, &self.masters, ch2);
        self.erase();
        rsp
    }

    pub fn is_finished(&self) -> bool {
        self.phase == Phase::Finished
    }

    fn erase(&mut self) {
        self.iters.clear();
        self.masters.clear();
        self.secrets.clear();
        self.phase = Phase::Finished;
    }
}

pub fn prover_commit1(
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    randomness: &Seed,
) -> Result<(ProverState, CommitmentMsg)> {
    ProverState::commit1(sk, pk, params, randomness)
}

pub fn prover_commit2(state: &mut ProverState, ch1: &Challenge1) -> Result<CommitmentMsg> {
    state.commit2(ch1)
}

pub fn prover_respond(state: &mut ProverState, ch2: &Challenge2) -> Result<PackedResponse> {
    state.respond(ch2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::keys::keygen;

    fn toy() -> (ParameterSet, SecretKey, PublicKey) {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![9; 16])).unwrap();
        (p, sk, pk)
    }

    #[test]
    fn state_is_single_use() {
        let (p, sk, pk) = toy();
        let (mut st, _) = ProverState::commit1(&sk, &pk, &p, &Seed::new(vec![1; 16])).unwrap();
        let ch2 = Challenge2::new(&p, vec![false; 4]).unwrap();
        assert!(matches!(st.respond(&ch2), Err(Error::Contract(_))));
        let ch1 = Challenge1::new(&p, vec![(0, 1); 4]).unwrap();
        st.commit2(&ch1).unwrap();
        assert!(matches!(st.commit2(&ch1), Err(Error::Contract(_))));
        st.respond(&ch2).unwrap();
        assert!(st.is_finished());
        assert!(matches!(st.respond(&ch2), Err(Error::Contract(_))));
    }

    #[test]
    fn deterministic_given_randomness() {
        let (p, sk, pk) = toy();
        let r = Seed::new(vec![5; 16]);
        let a = ProverState::commit1(&sk, &pk, &p, &r).unwrap().1;
        let b = ProverState::commit1(&sk, &pk, &p, &r).unwrap().1;
        assert_eq!(a, b);
        assert_eq!(a.byte_len(), 32);
        let c = ProverState::commit1(&sk, &pk, &p, &Seed::new(vec![6; 16]))
            .unwrap()
            .1;
        assert_ne!(a, c);
    }

    #[test]
    fn v_is_permuted_u() {
        let (p, _, pk) = toy();
        let (iters, _, _) = build_iterations(&p, pk.matrix(), &Seed::new(vec![2; 16])).unwrap();
        for it in &iters {
            assert_eq!(it.pi.apply(&it.u), it.v);
            assert_eq!(commit_vector(&p, &it.v), it.c2);
        }
    }

    #[test]
    fn paired_seeds_derive_from_masters() {
        let p = ParameterSet::by_name("QCS-128-s1").unwrap();
        let (seeds, masters) = iteration_seeds(&p, &Seed::new(vec![3; 16]));
        assert_eq!(seeds.len(), 151);
        assert_eq!(masters.len(), 75);
        let (t0, t1) = derive_pair(&masters[10].theta, 10);
        assert_eq!((&seeds[20].0, &seeds[21].0), (&t0, &t1));
        let distinct: std::collections::HashSet<_> = seeds.iter().map(|s| s.0.clone()).collect();
        assert_eq!(distinct.len(), 151);
    }
}
