//! The five-round quasi-cyclic Stern proof of knowledge, its test oracles
//! (simulator and extractor) and the three-challenge Stern baseline.

mod extractor;
mod keys;
mod messages;
mod prover;
mod simulator;
mod stern;
mod verifier;

pub use extractor::{extract_dsd, rewind_honest_prover, verify_dsd_solution, DsdSolution, RewoundRun};
pub use keys::{keygen, PublicKey, SecretKey};
pub use messages::{
    cmt1_children, cmt1_len, cmt2_children, cmt2_len, Challenge1, Challenge2, CommitmentMsg, Transcript,
};
pub use prover::{prover_commit1, prover_commit2, prover_respond, ProverState};
pub use simulator::simulate_transcript;
pub use stern::{
    stern_baseline_round, stern_baseline_verify, stern_cheat, CheatStrategy, SternCheater, SternCommitments,
    SternResponse, SternTranscript,
};
pub use verifier::{check_transcript, run_interactive, verify, verify_transcript, VerifierSession};
