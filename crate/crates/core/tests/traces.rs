//! Hand-computed traces at k = 4, n = 8, w = 2.
//!
//! Root seed [1; 16] gives first row a = 1110, so with A[i][j] = a[(j - i) mod 4]
//!
//! ```text
//!       1 1 1 0
//!   A = 0 1 1 1      H = [I | A]
//!       1 0 1 1
//!       1 1 0 1
//! ```
//!
//! and x = 0010|1000, y = x1 + A x2 = 0010 + col0 = 1001.

use qcstern::codec::{decompress_response, IterationResponse, VectorReveal};
use qcstern::commit::commit;
use qcstern::protocol::{
    keygen, stern_baseline_round, stern_baseline_verify, Challenge1, Challenge2, CommitmentMsg, ProverState,
    PublicKey, SecretKey, SternResponse,
};
use qcstern::seedexp::{expand_permutation, expand_vector, DomainTag};
use qcstern::{BitVector, Optimizations, ParameterSet, Seed};

fn bits(s: &str) -> BitVector {
    BitVector::from_bit_str(s).unwrap()
}

fn k4() -> (ParameterSet, SecretKey, PublicKey) {
    // C(8, 2) = 28 > 2^4, so cw is off
    let mut o = Optimizations::all();
    o.cw_compression = false;
    let p = ParameterSet::with_optimizations(128, 4, 2, 1, 1, o).unwrap();
    let (sk, pk) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
    (p, sk, pk)
}

fn perm_bytes(images: &[u16]) -> Vec<u8> {
    images.iter().flat_map(|i| i.to_be_bytes()).collect()
}

#[test]
fn key_matches_hand_computation() {
    let (p, sk, pk) = k4();
    assert_eq!(pk.matrix().block().first_row(), &bits("1110"));
    assert_eq!(sk.secrets(&p).unwrap()[0], bits("00101000"));
    assert_eq!(pk.syndrome(0), &bits("1001"));
}

#[test]
fn stern_round_k4() {
    let (p, sk, pk) = k4();
    let rand = Seed::new(vec![2; 16]);
    let pi = [6u16, 4, 7, 3, 0, 2, 5, 1];
    // u = 0000|1001: Hu = A·(1001) = col0 + col3 = 1011 + 0111 = 1100, packed 0x03
    let mut c1 = perm_bytes(&pi);
    c1.push(0x03);
    // π[u]: bits 4, 7 land on π(4) = 0, π(7) = 1
    let pu = bits("11000000");
    // π[x]: bits 2, 4 land on 7, 0
    let px = bits("10000001");
    for ch in 0..3 {
        let t = stern_baseline_round(&sk, &pk, &p, ch, &rand).unwrap();
        assert_eq!(t.commitments.c1, commit(DomainTag::Commit, &c1, 128));
        assert_eq!(t.commitments.c2, commit(DomainTag::Commit, &pu.to_bytes(), 128));
        // π[u + x] = 11000000 + 10000001
        assert_eq!(
            t.commitments.c3,
            commit(DomainTag::Commit, &bits("01000001").to_bytes(), 128)
        );
        match &t.response {
            SternResponse::Zero { pi: got, u } => {
                assert_eq!(got.images(), &pi);
                assert_eq!(u, &bits("00001001"));
            }
            SternResponse::One { masked, .. } => assert_eq!(masked, &bits("00100001")),
            SternResponse::Two { pu: a, px: b } => assert_eq!((a, b), (&pu, &px)),
        }
        assert!(stern_baseline_verify(&pk, &p, &t));
    }
}

#[test]
fn five_round_iteration_k4() {
    let (p, sk, pk) = k4();
    let rand = Seed::new(vec![2; 16]);
    let ch1 = Challenge1::new(&p, vec![(0, 1)]).unwrap();
    let run = |b: bool| {
        let (mut st, cmt1) = ProverState::commit1(&sk, &pk, &p, &rand).unwrap();
        let cmt2 = st.commit2(&ch1).unwrap();
        let rsp = st.respond(&Challenge2::new(&p, vec![b]).unwrap()).unwrap();
        (cmt1, cmt2, decompress_response(&p, &rsp, &[b]).unwrap().remove(0))
    };

    // rot(x, 1) halfwise: 0010 → 0001, 1000 → 0100
    let x_rot = bits("00010100");
    let (cmt1, cmt2, zero) = run(false);
    let IterationResponse::Zero { theta, masked, c2 } = zero else {
        panic!()
    };
    let pi = expand_permutation(&theta, DomainTag::Perm, 0, 8);
    assert_eq!(pi.images(), &[2, 3, 0, 6, 1, 5, 4, 7]);
    assert_eq!(masked, bits("11010011"));
    // u = masked + rot(x) = 1100|0111; Hu = 1100 + A·(0111) = 1100 + 0100 = 1000
    // and verifier side: H(masked) + rot(y, 1) = (1101 + 1001) + 1100 = 1000
    let mut c1_payload = perm_bytes(pi.images());
    c1_payload.push(0x01);
    let c1 = commit(DomainTag::Commit, &c1_payload, 128);
    // v = π[u]: bits 0,1,5,6,7 → 2,3,5,4,7 = 00111101 = 0xbc
    assert_eq!(c2, Some(commit(DomainTag::Commit, &[0xbc], 128)));

    let (cmt1_b, cmt2_b, one) = run(true);
    assert_eq!((&cmt1, &cmt2), (&cmt1_b, &cmt2_b));
    let IterationResponse::One {
        reveal,
        permuted,
        c1: got_c1,
    } = one
    else {
        panic!()
    };
    let VectorReveal::Seed(xi) = reveal else { panic!() };
    assert_eq!(expand_vector(&xi, DomainTag::Vector, 0, 8), bits("00111101"));
    // π[rot(x)]: bits 3, 5 → 6, 5
    assert_eq!(permuted, pi.apply(&x_rot));
    assert_eq!(permuted, bits("00000110"));
    assert_eq!(got_c1, Some(c1.clone()));

    // aggregates over the hand values: Cmt1 = Com(c1 ‖ c2), Cmt2 = Com(c3)
    let c2 = commit(DomainTag::Commit, &[0xbc], 128);
    let both = [c1.as_bytes(), c2.as_bytes()].concat();
    assert_eq!(
        cmt1,
        CommitmentMsg::Aggregated(commit(DomainTag::Commit, &both, 128))
    );
    // v + π[rot(x)] = 00111011 = 0xdc
    let c3 = commit(DomainTag::Commit, &[0xdc], 128);
    assert_eq!(
        cmt2,
        CommitmentMsg::Aggregated(commit(DomainTag::Commit, c3.as_bytes(), 128))
    );
}
