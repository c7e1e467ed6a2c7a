//! Knowledge extraction from rewound transcripts.
//!
//! A run is rewound after `Cmt1`: for each rotation `r_j` the verifier asks
//! `Ch1 = (s, r_j)` and then both `b = 0` and `b = 1`. Binding of the
//! commitments pins `π`, `v = π[u]` and `H u` across all runs, and the
//! openings then yield a solution of the differential syndrome decoding
//! instance: `rot(y_s, r_j) = c3 + H z_j` with `wt(z_j) = w` for every `j`.

use std::collections::HashSet;

use crate::algebra::{rotate, rotate_pair, BitVector, Permutation};
use crate::codec::{decompress_response, IterationResponse, PackedResponse, VectorReveal};
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::protocol::keys::{PublicKey, SecretKey};
use crate::protocol::messages::{Challenge1, Challenge2, CommitmentMsg};
use crate::protocol::prover::ProverState;
use crate::protocol::verifier::check_transcript;
use crate::seedexp::{expand_permutation, expand_vector, DomainTag, Seed};

/// One rewinding branch: a `Ch1` with its `Cmt2`, answered under both `b`.
#[derive(Clone, Debug)]
pub struct RewoundRun {
    pub ch1: Challenge1,
    pub cmt2: CommitmentMsg,
    pub zero: (Challenge2, PackedResponse),
    pub one: (Challenge2, PackedResponse),
}

/// `(c3, z_1 … z_α)` for key `y_s` and rotations `r_1 … r_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsdSolution {
    pub key_index: usize,
    pub rotations: Vec<usize>,
    pub c3: BitVector,
    pub z: Vec<BitVector>,
}

fn fail(m: impl Into<String>) -> Error {
    Error::Extraction(m.into())
}

fn all_equal<T: PartialEq>(items: &[T], what: &str) -> Result<()> {
    if items.windows(2).any(|w| w[0] != w[1]) {
        return Err(fail(format!(
            "{what} differs between runs: commitment binding broken"
        )));
    }
    Ok(())
}

/// Extracts a DSD solution from iteration `iteration` of the given runs.
pub fn extract_dsd(
    pk: &PublicKey,
    params: &ParameterSet,
    cmt1: &CommitmentMsg,
    runs: &[RewoundRun],
    iteration: usize,
) -> Result<DsdSolution> {
    if runs.is_empty() {
        return Err(fail("no transcripts"));
    }
    if iteration >= params.delta() {
        return Err(fail(format!("iteration {iteration} out of range")));
    }
    let n = params.n();
    let h = pk.matrix();
    let key_index = runs[0].ch1.key_index(iteration);
    let mut rotations = Vec::with_capacity(runs.len());
    let mut perms: Vec<Permutation> = Vec::new();
    let mut vs: Vec<BitVector> = Vec::new();
    let mut hus: Vec<BitVector> = Vec::new();
    let mut es: Vec<BitVector> = Vec::new();

    for (j, run) in runs.iter().enumerate() {
        for (ch2, rsp) in [&run.zero, &run.one] {
            check_transcript(pk, params, cmt1, &run.ch1, &run.cmt2, ch2, rsp)
                .map_err(|e| fail(format!("run {j} does not verify: {e}")))?;
        }
        if run.ch1.key_index(iteration) != key_index {
            return Err(fail("runs target different keys"));
        }
        let r = run.ch1.rotation(iteration);
        if rotations.contains(&r) {
            return Err(fail(format!("rotation {r} repeated")));
        }
        rotations.push(r);
        if run.zero.0.bits()[iteration] || !run.one.0.bits()[iteration] {
            return Err(fail(format!(
                "run {j} does not open both branches of iteration {iteration}"
            )));
        }

        let d0 = decompress_response(params, &run.zero.1, run.zero.0.bits())?;
        let d1 = decompress_response(params, &run.one.1, run.one.0.bits())?;
        // Steps 1 and 3: π from θ, and H u = H(u + x_r) - rot(y, r).
        let IterationResponse::Zero { theta, masked, .. } = &d0[iteration] else {
            unreachable!("branch bit checked above")
        };
        let pi = expand_permutation(theta, DomainTag::Perm, iteration as u32, n);
        let y_rot = rotate(pk.syndrome(key_index), r)?;
        hus.push(h.syndrome(masked)? ^ &y_rot);
        perms.push(pi);
        // Step 2: v from ξ (or as sent), and π[x_r] from the b = 1 opening.
        let IterationResponse::One { reveal, permuted, .. } = &d1[iteration] else {
            unreachable!("branch bit checked above")
        };
        vs.push(match reveal {
            VectorReveal::Seed(xi) => expand_vector(xi, DomainTag::Vector, iteration as u32, n),
            VectorReveal::Raw(v) => v.clone(),
        });
        es.push(permuted.clone());
    }
    all_equal(&perms, "π")?;
    all_equal(&vs, "v")?;
    all_equal(&hus, "H u")?;

    let pi = &perms[0];
    // Step 4: c3 = H π⁻¹[v] - H u (zero for an honest prover).
    let c3 = h.syndrome(&pi.apply_inverse(&vs[0]))? ^ &hus[0];
    // Step 5: z_j = π⁻¹[π[x_{r_j}]].
    let z = es.iter().map(|e| pi.apply_inverse(e)).collect();
    Ok(DsdSolution {
        key_index,
        rotations,
        c3,
        z,
    })
}

/// Checks `rot(y_s, r_j) = c3 + H z_j` and `wt(z_j) = w` for every `j`; with a
/// secret supplied, also `H rot(x, r_j) = c3 + H z_j`.
pub fn verify_dsd_solution(
    pk: &PublicKey,
    params: &ParameterSet,
    sol: &DsdSolution,
    x_check: Option<&BitVector>,
) -> bool {
    let distinct: HashSet<_> = sol.rotations.iter().collect();
    if sol.z.is_empty()
        || sol.z.len() != sol.rotations.len()
        || distinct.len() != sol.rotations.len()
        || sol.key_index >= pk.syndromes().len()
        || sol.c3.len() != params.k()
    {
        return false;
    }
    let h = pk.matrix();
    sol.z.iter().zip(&sol.rotations).all(|(z, &r)| {
        if z.len() != params.n() || z.weight() != params.w() || r >= params.k() {
            return false;
        }
        let Ok(hz) = h.syndrome(z) else { return false };
        let rhs = hz ^ &sol.c3;
        let Ok(y_rot) = rotate(pk.syndrome(sol.key_index), r) else {
            return false;
        };
        let secret_ok = x_check.map_or(true, |x| {
            rotate_pair(x, r)
                .and_then(|xr| h.syndrome(&xr))
                .is_ok_and(|hx| hx == rhs)
        });
        y_rot == rhs && secret_ok
    })
}

/// Rewinds an honest prover: one `Cmt1` from `randomness`, then for each
/// rotation a fresh `Ch1` targeting key `key_index` in every iteration,
/// answered under `Ch2 = 0…0` and `Ch2 = 1…1`.
pub fn rewind_honest_prover(
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    randomness: &Seed,
    key_index: usize,
    rotations: &[usize],
) -> Result<(CommitmentMsg, Vec<RewoundRun>)> {
    let zeros = Challenge2::new(params, vec![false; params.delta()])?;
    let ones = Challenge2::new(params, vec![true; params.delta()])?;
    let mut cmt1 = None;
    let mut runs = Vec::with_capacity(rotations.len());
    for &r in rotations {
        let ch1 = Challenge1::new(params, vec![(key_index as u16, r as u16); params.delta()])?;
        let answer = |ch2: &Challenge2| -> Result<(CommitmentMsg, CommitmentMsg, PackedResponse)> {
            let (mut st, c1) = ProverState::commit1(sk, pk, params, randomness)?;
            let c2 = st.commit2(&ch1)?;
            Ok((c1, c2, st.respond(ch2)?))
        };
        let (c1, cmt2, rsp0) = answer(&zeros)?;
        let (_, _, rsp1) = answer(&ones)?;
        cmt1.get_or_insert(c1);
        runs.push(RewoundRun {
            ch1,
            cmt2,
            zero: (zeros.clone(), rsp0),
            one: (ones.clone(), rsp1),
        });
    }
    let cmt1 = cmt1.ok_or_else(|| fail("no rotations given"))?;
    Ok((cmt1, runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Optimizations;
    use crate::protocol::keys::keygen;

    #[test]
    fn honest_extraction_recovers_rotated_secret() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![8; 16])).unwrap();
        let x = sk.secrets(&p).unwrap().remove(0);
        let rot = [1, 4, 6];
        let (cmt1, runs) = rewind_honest_prover(&sk, &pk, &p, &Seed::new(vec![1; 16]), 0, &rot).unwrap();
        for it in 0..p.delta() {
            let sol = extract_dsd(&pk, &p, &cmt1, &runs, it).unwrap();
            assert_eq!(sol.c3, BitVector::zeros(p.k()));
            for (z, &r) in sol.z.iter().zip(&rot) {
                assert_eq!(*z, rotate_pair(&x, r).unwrap());
            }
            assert!(verify_dsd_solution(&pk, &p, &sol, Some(&x)));
        }
    }

    #[test]
    fn k5_hand_trace() {
        // k = 5, w = 2, δ = 1; cw off because C(10, 2) = 45 > 2^5.
        let opts = Optimizations {
            cw_compression: false,
            ..Optimizations::all()
        };
        let p = ParameterSet::with_optimizations(128, 5, 2, 1, 1, opts).unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![2; 16])).unwrap();
        let x = sk.secrets(&p).unwrap().remove(0);
        let (cmt1, runs) = rewind_honest_prover(&sk, &pk, &p, &Seed::new(vec![3; 16]), 0, &[0, 2]).unwrap();
        let sol = extract_dsd(&pk, &p, &cmt1, &runs, 0).unwrap();
        // r = 0 gives x back; r = 2 moves bit i of each half to (i + 2) mod 5.
        assert_eq!(sol.z[0], x);
        let mut expected = BitVector::zeros(10);
        for i in x.support() {
            let (half, j) = (i / 5, i % 5);
            expected.set(5 * half + (j + 2) % 5, true);
        }
        assert_eq!(sol.z[1], expected);
        assert!(verify_dsd_solution(&pk, &p, &sol, Some(&x)));
    }

    #[test]
    fn tampered_solutions_rejected() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![8; 16])).unwrap();
        let (cmt1, runs) = rewind_honest_prover(&sk, &pk, &p, &Seed::new(vec![1; 16]), 0, &[2]).unwrap();
        let sol = extract_dsd(&pk, &p, &cmt1, &runs, 0).unwrap();
        assert!(verify_dsd_solution(&pk, &p, &sol, None));
        let mut bad = sol.clone();
        bad.c3.flip(0);
        assert!(!verify_dsd_solution(&pk, &p, &bad, None));
        let mut bad = sol.clone();
        let off = (0..p.n()).find(|&i| !bad.z[0].get(i)).unwrap();
        bad.z[0].flip(off);
        assert!(!verify_dsd_solution(&pk, &p, &bad, None));
    }

    #[test]
    fn inconsistent_runs_fail() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![8; 16])).unwrap();
        let (cmt1, mut runs) =
            rewind_honest_prover(&sk, &pk, &p, &Seed::new(vec![1; 16]), 0, &[2, 3]).unwrap();
        let (_, other) = rewind_honest_prover(&sk, &pk, &p, &Seed::new(vec![2; 16]), 0, &[3]).unwrap();
        runs[1] = other[0].clone();
        assert!(matches!(
            extract_dsd(&pk, &p, &cmt1, &runs, 0),
            Err(Error::Extraction(_))
        ));
    }
}
