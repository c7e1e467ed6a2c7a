//! The interactive protocol over a byte stream.
//!
//! The prover sends CMT1, CMT2 and RSP; the verifier answers with CH1, CH2
//! and finally RESULT (one byte, 1 = accept). Either side sends ERROR with a
//! UTF-8 message on any failure and then gives up.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;
use std::time::Duration;

use crate::codec::PackedResponse;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::protocol::{
    cmt1_children, cmt2_children, Challenge1, Challenge2, CommitmentMsg, ProverState, PublicKey, SecretKey,
    Transcript, VerifierSession,
};
use crate::seedexp::Seed;
use crate::wire::{expect_frame, write_frame, FrameType};

/// Runs `body`; on failure tries to tell the peer before returning the error.
fn or_report<S: Write, T>(stream: &mut S, body: impl FnOnce(&mut S) -> Result<T>) -> Result<T> {
    let r = body(stream);
    if let Err(e) = &r {
        let _ = write_frame(stream, FrameType::Error, e.to_string().as_bytes());
    }
    r
}

/// Prover side. Returns the verifier's verdict.
pub fn run_prover<S: Read + Write>(
    stream: &mut S,
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    randomness: &Seed,
) -> Result<bool> {
    or_report(stream, |s| {
        let (mut prover, cmt1) = ProverState::commit1(sk, pk, params, randomness)?;
        write_frame(s, FrameType::Cmt1, &cmt1.to_bytes())?;
        let ch1 = Challenge1::from_bytes(params, &expect_frame(s, FrameType::Ch1)?)?;
        write_frame(s, FrameType::Cmt2, &prover.commit2(&ch1)?.to_bytes())?;
        let ch2 = Challenge2::from_bytes(params, &expect_frame(s, FrameType::Ch2)?)?;
        write_frame(s, FrameType::Rsp, prover.respond(&ch2)?.as_bytes())?;
        match expect_frame(s, FrameType::Result)?.as_slice() {
            [1] => Ok(true),
            [0] => Ok(false),
            other => Err(Error::Protocol(format!("malformed RESULT payload {other:?}"))),
        }
    })
}

/// Verifier side. Returns the decision and the transcript.
pub fn run_verifier<S: Read + Write>(
    stream: &mut S,
    pk: &PublicKey,
    params: &ParameterSet,
    entropy: &Seed,
) -> Result<(bool, Transcript)> {
    or_report(stream, |s| {
        let mut v = VerifierSession::new(pk, params, entropy);
        let cmt1 =
            CommitmentMsg::from_bytes(params, &expect_frame(s, FrameType::Cmt1)?, cmt1_children(params))?;
        write_frame(s, FrameType::Ch1, &v.receive_cmt1(cmt1)?.to_bytes())?;
        let cmt2 =
            CommitmentMsg::from_bytes(params, &expect_frame(s, FrameType::Cmt2)?, cmt2_children(params))?;
        write_frame(s, FrameType::Ch2, &v.receive_cmt2(cmt2)?.to_bytes())?;
        let rsp = PackedResponse::from_bytes(expect_frame(s, FrameType::Rsp)?);
        let ok = v.receive_response(rsp)?;
        write_frame(s, FrameType::Result, &[ok as u8])?;
        Ok((
            ok,
            v.transcript()
                .cloned()
                .expect("finished session keeps its transcript"),
        ))
    })
}

/// Connects to a verifier and proves knowledge of `sk`.
pub fn prove_to(
    addr: &str,
    sk: &SecretKey,
    pk: &PublicKey,
    params: &ParameterSet,
    randomness: &Seed,
    timeout: Duration,
) -> Result<bool> {
    let mut stream = TcpStream::connect(addr)?;
    stream.set_read_timeout(Some(timeout))?;
    stream.set_write_timeout(Some(timeout))?;
    run_prover(&mut stream, sk, pk, params, randomness)
}

/// Accepts `sessions` connections and verifies each on its own thread with
/// fresh OS entropy. Results come back in connection order.
pub fn serve(
    listener: &TcpListener,
    pk: &PublicKey,
    params: &ParameterSet,
    sessions: usize,
    timeout: Duration,
) -> Result<Vec<Result<(bool, Transcript)>>> {
    let mut handles = Vec::with_capacity(sessions);
    for _ in 0..sessions {
        let (mut stream, _) = listener.accept()?;
        stream.set_read_timeout(Some(timeout))?;
        stream.set_write_timeout(Some(timeout))?;
        let (pk, params) = (pk.clone(), params.clone());
        handles.push(thread::spawn(move || {
            let entropy = Seed::random(32)?;
            run_verifier(&mut stream, &pk, &params, &entropy)
        }));
    }
    Ok(handles
        .into_iter()
        .map(|h| {
            h.join()
                .unwrap_or_else(|_| Err(Error::Protocol("verifier thread panicked".into())))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{keygen, verify_transcript};

    #[test]
    fn tcp_sessions_accept_concurrently() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (sk, pk) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let clients: Vec<_> = (0..4u8)
            .map(|i| {
                let (sk, pk, p, addr) = (sk.clone(), pk.clone(), p.clone(), addr.clone());
                thread::spawn(move || {
                    prove_to(
                        &addr,
                        &sk,
                        &pk,
                        &p,
                        &Seed::new(vec![i; 16]),
                        Duration::from_secs(10),
                    )
                })
            })
            .collect();
        let results = serve(&listener, &pk, &p, 4, Duration::from_secs(10)).unwrap();
        for c in clients {
            assert!(c.join().unwrap().unwrap());
        }
        for r in results {
            let (ok, t) = r.unwrap();
            assert!(ok && verify_transcript(&pk, &p, &t));
        }
    }

    #[test]
    fn out_of_order_frame_gets_error_reply() {
        let p = ParameterSet::by_name("TOY").unwrap();
        let (_, pk) = keygen(&p, &Seed::new(vec![1; 16])).unwrap();
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let client = thread::spawn(move || {
            let mut s = TcpStream::connect(addr).unwrap();
            write_frame(&mut s, FrameType::Rsp, b"x").unwrap();
            crate::wire::read_frame(&mut s, crate::wire::MAX_FRAME).unwrap()
        });
        let results = serve(&listener, &pk, &p, 1, Duration::from_secs(10)).unwrap();
        assert!(results[0].is_err());
        assert_eq!(client.join().unwrap().kind, FrameType::Error);
    }
}
