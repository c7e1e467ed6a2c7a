//! The classic three-challenge Stern round and the three ways a prover
//! without the secret can pass two of its three challenges.
//!
//! The instance is the first key of a quasi-cyclic public key (`H`, `y^0`).

use crate::algebra::{BitVector, Permutation};
use crate::commit::Commitment;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::protocol::keys::{PublicKey, SecretKey};
use crate::protocol::prover::{commit_c1, commit_vector};
use crate::seedexp::{expand_permutation, expand_vector, expand_weight_w, DomainTag, Seed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SternCommitments {
    pub c1: Commitment,
    pub c2: Commitment,
    pub c3: Commitment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SternResponse {
    /// Challenge 0: `(π, u)`.
    Zero { pi: Permutation, u: BitVector },
    /// Challenge 1: `(π, u + x)`.
    One { pi: Permutation, masked: BitVector },
    /// Challenge 2: `(π[u], π[x])`.
    Two { pu: BitVector, px: BitVector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SternTranscript {
    pub commitments: SternCommitments,
    pub challenge: u8,
    pub response: SternResponse,
}

fn check_challenge(ch: u8) -> Result<()> {
    if ch > 2 {
        return Err(Error::Range {
            what: "Stern challenge",
            value: ch as u64,
            bound: 3,
        });
    }
    Ok(())
}

fn mask(params: &ParameterSet, randomness: &Seed) -> (Permutation, BitVector) {
    (
        expand_permutation(randomness, DomainTag::Perm, 0, params.n()),
        expand_vector(randomness, DomainTag::Vector, 0, params.n()),
    )
}

/// One honest round answering challenge `ch`.
pub fn stern_baseline_round(
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    ch: u8,
    randomness: &Seed,
) -> Result<SternTranscript> {
    check_challenge(ch)?;
    let x = sk.secrets(params)?.swap_remove(0);
    let (pi, u) = mask(params, randomness);
    let ux = &u ^ &x;
    let commitments = SternCommitments {
        c1: commit_c1(params, &pi, &pk.matrix().syndrome(&u)?),
        c2: commit_vector(params, &pi.apply(&u)),
        c3: commit_vector(params, &pi.apply(&ux)),
    };
    let response = match ch {
        0 => SternResponse::Zero { pi, u },
        1 => SternResponse::One { pi, masked: ux },
        _ => SternResponse::Two {
            pu: pi.apply(&u),
            px: pi.apply(&x),
        },
    };
    Ok(SternTranscript {
        commitments,
        challenge: ch,
        response,
    })
}

/// Checks a round against `(H, y^0)`.
pub fn stern_baseline_verify(pk: &PublicKey, params: &ParameterSet, t: &SternTranscript) -> bool {
    let n = params.n();
    let h = pk.matrix();
    let c = &t.commitments;
    match (&t.response, t.challenge) {
        (SternResponse::Zero { pi, u }, 0) => {
            if pi.len() != n || u.len() != n {
                return false;
            }
            let Ok(hu) = h.syndrome(u) else { return false };
            c.c1 == commit_c1(params, pi, &hu) && c.c2 == commit_vector(params, &pi.apply(u))
        }
        (SternResponse::One { pi, masked }, 1) => {
            if pi.len() != n || masked.len() != n {
                return false;
            }
            let Ok(hm) = h.syndrome(masked) else { return false };
            c.c1 == commit_c1(params, pi, &(hm ^ pk.syndrome(0)))
                && c.c3 == commit_vector(params, &pi.apply(masked))
        }
        (SternResponse::Two { pu, px }, 2) => {
            pu.len() == n
                && px.len() == n
                && px.weight() == params.w()
                && c.c2 == commit_vector(params, pu)
                && c.c3 == commit_vector(params, &(pu ^ px))
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheatStrategy {
    /// Knows some `x'` with `H x' = y` but `wt(x') ≠ w`.
    Pass01,
    /// Uses some weight-`w` `x̃` with `H x̃ ≠ y`, committing honestly to `H u`.
    Pass02,
    /// Uses the same `x̃` but commits to `H(x̃ + u) - y` in place of `H u`.
    Pass12,
}

impl CheatStrategy {
    pub const ALL: [CheatStrategy; 3] = [
        CheatStrategy::Pass01,
        CheatStrategy::Pass02,
        CheatStrategy::Pass12,
    ];

    /// The two challenges this strategy answers correctly.
    pub fn passes(self) -> [u8; 2] {
        match self {
            CheatStrategy::Pass01 => [0, 1],
            CheatStrategy::Pass02 => [0, 2],
            CheatStrategy::Pass12 => [1, 2],
        }
    }
}

/// A prover holding only the public key.
pub struct SternCheater {
    strategy: CheatStrategy,
    pi: Permutation,
    u: BitVector,
    fake: BitVector,
    commitments: SternCommitments,
}

/// Some `x'` with `H x' = y` and weight ≠ `w`: `(y ‖ 0)`, or with one bit of
/// the right half set if that happens to have weight `w`.
fn wrong_weight_solution(pk: &PublicKey, params: &ParameterSet) -> Result<BitVector> {
    let k = params.k();
    let candidates = std::iter::once(None).chain((0..k).map(Some));
    for c in candidates {
        let mut x2 = BitVector::zeros(k);
        if let Some(j) = c {
            x2.set(j, true);
        }
        let x = pk.matrix().preimage(pk.syndrome(0), &x2)?;
        if x.weight() != params.w() {
            return Ok(x);
        }
    }
    Err(Error::Contract(
        "no wrong-weight preimage among the candidates".into(),
    ))
}

/// A weight-`w` vector that is not a solution.
fn wrong_syndrome_vector(pk: &PublicKey, params: &ParameterSet, randomness: &Seed) -> Result<BitVector> {
    for j in 0..1024 {
        let x = expand_weight_w(randomness, DomainTag::Secret, j, params.n(), params.w())?;
        if pk.matrix().syndrome(&x)? != *pk.syndrome(0) {
            return Ok(x);
        }
    }
    Err(Error::Contract(
        "every sampled weight-w vector solves the instance".into(),
    ))
}

/// Commits according to `strategy`.
pub fn stern_cheat(
    strategy: CheatStrategy,
    pk: &PublicKey,
    params: &ParameterSet,
    randomness: &Seed,
) -> Result<SternCheater> {
    let h = pk.matrix();
    let (pi, u) = mask(params, randomness);
    let fake = match strategy {
        CheatStrategy::Pass01 => wrong_weight_solution(pk, params)?,
        CheatStrategy::Pass02 | CheatStrategy::Pass12 => wrong_syndrome_vector(pk, params, randomness)?,
    };
    let uf = &u ^ &fake;
    let first = match strategy {
        CheatStrategy::Pass12 => h.syndrome(&uf)? ^ pk.syndrome(0),
        _ => h.syndrome(&u)?,
    };
    let commitments = SternCommitments {
        c1: commit_c1(params, &pi, &first),
        c2: commit_vector(params, &pi.apply(&u)),
        c3: commit_vector(params, &pi.apply(&uf)),
    };
    Ok(SternCheater {
        strategy,
        pi,
        u,
        fake,
        commitments,
    })
}

impl SternCheater {
    pub fn strategy(&self) -> CheatStrategy {
        self.strategy
    }

    pub fn commitments(&self) -> &SternCommitments {
        &self.commitments
    }

    /// The cheater answers every challenge as an honest prover would with
    /// its fake secret; exactly one of the three answers fails.
    pub fn respond(&self, ch: u8) -> Result<SternTranscript> {
        check_challenge(ch)?;
        let response = match ch {
            0 => SternResponse::Zero {
                pi: self.pi.clone(),
                u: self.u.clone(),
            },
            1 => SternResponse::One {
                pi: self.pi.clone(),
                masked: &self.u ^ &self.fake,
            },
            _ => SternResponse::Two {
                pu: self.pi.apply(&self.u),
                px: self.pi.apply(&self.fake),
            },
        };
        Ok(SternTranscript {
            commitments: self.commitments.clone(),
            challenge: ch,
            response,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::keys::keygen;

    fn setup() -> (ParameterSet, SecretKey, PublicKey) {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![6; 16])).unwrap();
        (p, sk, pk)
    }

    #[test]
    fn honest_rounds_accept() {
        let (p, sk, pk) = setup();
        for r in 0..30u8 {
            for ch in 0..3 {
                let t = stern_baseline_round(&sk, &pk, &p, ch, &Seed::new(vec![r; 16])).unwrap();
                assert!(stern_baseline_verify(&pk, &p, &t));
            }
        }
        assert!(stern_baseline_round(&sk, &pk, &p, 3, &Seed::new(vec![0; 16])).is_err());
    }

    #[test]
    fn challenge_two_checks_weight() {
        let (p, sk, pk) = setup();
        let mut t = stern_baseline_round(&sk, &pk, &p, 2, &Seed::new(vec![1; 16])).unwrap();
        if let SternResponse::Two { pu, px } = &mut t.response {
            // Moving a bit of π[x] into π[u] keeps the sum but drops the weight.
            let i = px.support()[0];
            px.flip(i);
            pu.flip(i);
        }
        assert!(!stern_baseline_verify(&pk, &p, &t));
    }

    #[test]
    fn mismatched_response_kind_rejects() {
        let (p, sk, pk) = setup();
        let mut t = stern_baseline_round(&sk, &pk, &p, 0, &Seed::new(vec![1; 16])).unwrap();
        t.challenge = 1;
        assert!(!stern_baseline_verify(&pk, &p, &t));
    }

    #[test]
    fn each_cheater_passes_exactly_its_two_challenges() {
        let (p, _, pk) = setup();
        for s in CheatStrategy::ALL {
            for r in 0..20u8 {
                let cheater = stern_cheat(s, &pk, &p, &Seed::new(vec![r; 16])).unwrap();
                for ch in 0..3 {
                    let ok = stern_baseline_verify(&pk, &p, &cheater.respond(ch).unwrap());
                    assert_eq!(ok, s.passes().contains(&ch), "{s:?} ch {ch}");
                }
            }
        }
    }
}
