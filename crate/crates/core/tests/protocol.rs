use qcstern::codec::{compress_response, decompress_response, IterationResponse, VectorReveal};
use qcstern::protocol::{
    check_transcript, keygen, run_interactive, simulate_transcript, verify, verify_transcript, Challenge1,
    Challenge2, CommitmentMsg, ProverState,
};
use qcstern::seedexp::{DomainTag, XofStream};
use qcstern::{BitVector, Error, Optimizations, ParameterSet, Seed};

fn seed(b: u8) -> Seed {
    Seed::new(vec![b; 16])
}

fn masks() -> impl Iterator<Item = Optimizations> {
    (0u8..16).map(|m| Optimizations::from_disabled_mask(m).unwrap())
}

#[test]
fn flags_change_sizes_not_decisions() {
    let base = ParameterSet::by_name("QCS-128-s4").unwrap();
    let (sk, pk) = keygen(&base, &seed(1)).unwrap();
    let (_, other) = keygen(&base, &seed(2)).unwrap();
    let mut sizes = Vec::new();
    let mut reference: Option<(Challenge1, Challenge2)> = None;
    for o in masks() {
        let p = base.set_optimizations(o).unwrap();
        let (ok, t) = run_interactive(&sk, &pk, &p, &seed(3), &seed(4)).unwrap();
        assert!(ok, "{o:?}");
        assert!(!verify_transcript(&other, &p, &t), "{o:?}");
        // identical randomness gives identical challenges whatever the flags
        match &reference {
            None => reference = Some((t.ch1.clone(), t.ch2.clone())),
            Some((c1, c2)) if o.commitment_aggregation => assert_eq!((&t.ch1, &t.ch2), (c1, c2)),
            Some(_) => {}
        }
        sizes.push(t.rsp.len() + t.cmt1.byte_len() + t.cmt2.byte_len());
    }
    // all flags on is the smallest, all off the largest
    assert_eq!(sizes.iter().min(), Some(&sizes[0]));
    assert_eq!(sizes.iter().max(), Some(&sizes[15]));
}

#[test]
fn every_builtin_set_completes() {
    for name in ["TOY", "QCS-128-s1", "QCS-128-s4", "QCS-128-s20"] {
        let p = ParameterSet::by_name(name).unwrap();
        for i in 0..5 {
            let (sk, pk) = keygen(&p, &seed(i)).unwrap();
            assert!(
                run_interactive(&sk, &pk, &p, &seed(10 + i), &seed(20 + i))
                    .unwrap()
                    .0,
                "{name}"
            );
        }
    }
}

#[test]
fn branches_reveal_only_their_fields() {
    let base = ParameterSet::by_name("TOY").unwrap();
    let (sk, pk) = keygen(&base, &seed(1)).unwrap();
    for o in masks() {
        let p = base.set_optimizations(o).unwrap();
        let (_, t) = run_interactive(&sk, &pk, &p, &seed(5), &seed(6)).unwrap();
        let items = decompress_response(&p, &t.rsp, t.ch2.bits()).unwrap();
        for (item, &b) in items.iter().zip(t.ch2.bits()) {
            match item {
                IterationResponse::Zero { masked, c2, .. } => {
                    assert!(!b);
                    assert_eq!(masked.len(), p.n());
                    assert_eq!(c2.is_some(), o.commitment_aggregation);
                }
                IterationResponse::One { reveal, permuted, c1 } => {
                    assert!(b);
                    assert_eq!(permuted.weight(), p.w());
                    assert_eq!(matches!(reveal, VectorReveal::Seed(_)), o.seed_for_vector);
                    assert_eq!(c1.is_some(), o.commitment_aggregation);
                }
            }
        }
        // an extra field is refused by the serializer
        if !o.commitment_aggregation && !o.seed_pairing {
            let mut bad = items.clone();
            let extra = qcstern::commit::commit(DomainTag::Commit, b"x", 128);
            match &mut bad[0] {
                IterationResponse::Zero { c2, .. } => *c2 = Some(extra),
                IterationResponse::One { c1, .. } => *c1 = Some(extra),
            }
            assert!(matches!(
                compress_response(&p, &bad, t.ch2.bits(), &[]),
                Err(Error::Contract(_))
            ));
        }
    }
}

#[test]
fn weight_soundness_exhaustive_at_k5() {
    // C(10, 2) > 2^5: vectors travel raw
    let mut o = Optimizations::all();
    o.cw_compression = false;
    let p = ParameterSet::with_optimizations(128, 5, 2, 1, 1, o).unwrap();
    let (sk, pk) = keygen(&p, &seed(1)).unwrap();
    let ch1 = Challenge1::new(&p, vec![(0, 3)]).unwrap();
    let ch2 = Challenge2::new(&p, vec![true]).unwrap();
    let (mut prover, cmt1) = ProverState::commit1(&sk, &pk, &p, &seed(2)).unwrap();
    let cmt2 = prover.commit2(&ch1).unwrap();
    let rsp = prover.respond(&ch2).unwrap();
    let items = decompress_response(&p, &rsp, &[true]).unwrap();
    let IterationResponse::One {
        reveal,
        permuted: honest,
        c1,
    } = items[0].clone()
    else {
        panic!()
    };
    let mut accepted = 0;
    for m in 0u32..1 << 10 {
        let v = BitVector::from_bits(&(0..10).map(|i| m >> i & 1 == 1).collect::<Vec<_>>());
        let item = IterationResponse::One {
            reveal: reveal.clone(),
            permuted: v.clone(),
            c1: c1.clone(),
        };
        let packed = compress_response(&p, &[item], &[true], &[]).unwrap();
        let r = check_transcript(&pk, &p, &cmt1, &ch1, &cmt2, &ch2, &packed);
        if v.weight() != 2 {
            assert!(r.unwrap_err().to_string().contains("weight"));
        } else if v == honest {
            r.unwrap();
            accepted += 1;
        } else {
            assert!(r.is_err());
        }
    }
    assert_eq!(accepted, 1);
}

#[test]
fn simulator_verifies_under_every_flag_setting() {
    let base = ParameterSet::by_name("TOY").unwrap();
    let (_, pk) = keygen(&base, &seed(1)).unwrap();
    let mut xs = XofStream::new(DomainTag::Msg, 0, b"sim");
    for o in masks() {
        let p = base.set_optimizations(o).unwrap();
        for i in 0..20 {
            let ch1 = Challenge1::sample(&p, &mut xs);
            let ch2 = Challenge2::sample(&p, &mut xs);
            let (c1, c2, rsp) = simulate_transcript(&pk, &p, &ch1, &ch2, &seed(i)).unwrap();
            assert!(verify(&pk, &p, &c1, &ch1, &c2, &ch2, &rsp), "{o:?} {i}");
            if o.commitment_aggregation {
                assert!(matches!(c1, CommitmentMsg::Aggregated(_)));
            }
        }
    }
}

#[test]
fn prover_state_is_single_use() {
    let p = ParameterSet::by_name("TOY").unwrap();
    let (sk, pk) = keygen(&p, &seed(1)).unwrap();
    let (mut prover, _) = ProverState::commit1(&sk, &pk, &p, &seed(2)).unwrap();
    let ch1 = Challenge1::new(&p, vec![(0, 1); 4]).unwrap();
    let ch2 = Challenge2::new(&p, vec![false; 4]).unwrap();
    assert!(prover.respond(&ch2).is_err());
    prover.commit2(&ch1).unwrap();
    assert!(prover.commit2(&ch1).is_err());
    prover.respond(&ch2).unwrap();
    assert!(prover.is_finished());
    assert!(matches!(prover.respond(&ch2), Err(Error::Contract(_))));
}
