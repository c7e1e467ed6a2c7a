//! C ABI for qcstern.
//!
//! Keys, signatures and public keys cross the boundary in the same
//! self-describing file encodings the command-line tool uses. Every function
//! returns a [`QcsStatus`]; output buffers follow one convention: `*out_len`
//! holds the capacity on entry and the written (or required) length on exit,
//! and a too-small buffer yields `QCS_STATUS_BUFFER_TOO_SMALL` with nothing
//! written.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use qcstern::codec::response_len;
use qcstern::files;
use qcstern::protocol::{
    cmt1_len, cmt2_len, keygen, Challenge1, Challenge2, ProverState, PublicKey, SecretKey,
};
use qcstern::{fiatshamir, Error, ParameterSet, Seed};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcsStatus {
    Ok = 0,
    /// A well-formed signature or transcript that does not verify.
    Reject = 1,
    NullPointer = 2,
    BadParameters = 3,
    BadEncoding = 4,
    BufferTooSmall = 5,
    /// A prover call made out of order, or after the handle was used up.
    WrongPhase = 6,
    Entropy = 7,
    Internal = 8,
}

impl From<&Error> for QcsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Range { .. } => QcsStatus::BadParameters,
            Error::Decode(_) | Error::Shape(_) => QcsStatus::BadEncoding,
            Error::Contract(_) => QcsStatus::WrongPhase,
            Error::Protocol(_) => QcsStatus::Reject,
            Error::Io(_) => QcsStatus::Entropy,
            Error::Extraction(_) => QcsStatus::Internal,
        }
    }
}

/// Opaque key pair.
pub struct QcsKeypair {
    params: ParameterSet,
    sk: SecretKey,
    pk: PublicKey,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Commit1,
    Commit2,
    Respond,
    Done,
}

/// Opaque single-use prover for the interactive protocol.
pub struct QcsProver {
    params: ParameterSet,
    sk: SecretKey,
    pk: PublicKey,
    state: Option<ProverState>,
    next: Step,
    // Output of the last step, kept until it has been copied out.
    pending: Option<(Step, Vec<u8>)>,
}

fn guard(body: impl FnOnce() -> QcsStatus) -> QcsStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(QcsStatus::Internal)
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return QcsStatus::from(&e),
        }
    };
}

unsafe fn bytes<'a>(p: *const u8, len: usize) -> Option<&'a [u8]> {
    if len == 0 {
        Some(&[])
    } else if p.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(p, len))
    }
}

unsafe fn copy_out(src: &[u8], out: *mut u8, out_len: *mut usize) -> QcsStatus {
    let cap = *out_len;
    *out_len = src.len();
    if out.is_null() || cap < src.len() {
        return QcsStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    QcsStatus::Ok
}

/// Generates a key pair for the named parameter set.
///
/// With `seed_len == 0` the root seed comes from the OS; otherwise `seed`
/// must hold exactly λ/8 bytes.
///
/// # Safety
/// `paramset` must be a NUL-terminated string, `seed` must be readable for
/// `seed_len` bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_keypair_generate(
    paramset: *const c_char,
    seed: *const u8,
    seed_len: usize,
    out: *mut *mut QcsKeypair,
) -> QcsStatus {
    guard(|| {
        if paramset.is_null() || out.is_null() {
            return QcsStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Ok(name) = CStr::from_ptr(paramset).to_str() else {
            return QcsStatus::BadParameters;
        };
        let params = tri!(ParameterSet::by_name(name));
        let root = if seed_len == 0 {
            tri!(Seed::random(params.seed_len()))
        } else {
            let Some(s) = bytes(seed, seed_len) else {
                return QcsStatus::NullPointer;
            };
            if s.len() != params.seed_len() {
                return QcsStatus::BadParameters;
            }
            Seed::from_slice(s)
        };
        let (sk, pk) = tri!(keygen(&params, &root));
        *out = Box::into_raw(Box::new(QcsKeypair { params, sk, pk }));
        QcsStatus::Ok
    })
}

/// Rebuilds a key pair from its encoded secret and public keys.
///
/// # Safety
/// The byte arguments must be readable for their lengths and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_keypair_load(
    sk: *const u8,
    sk_len: usize,
    pk: *const u8,
    pk_len: usize,
    out: *mut *mut QcsKeypair,
) -> QcsStatus {
    guard(|| {
        if out.is_null() {
            return QcsStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (Some(sk), Some(pk)) = (bytes(sk, sk_len), bytes(pk, pk_len)) else {
            return QcsStatus::NullPointer;
        };
        let (p_sk, sk) = tri!(files::decode_secret_key(sk));
        let (params, pk) = tri!(files::decode_public_key(pk));
        if p_sk.id() != params.id() {
            return QcsStatus::BadParameters;
        }
        // The public key must belong to this secret key.
        if !tri!(key_matches(&params, &sk, &pk)) {
            return QcsStatus::BadEncoding;
        }
        *out = Box::into_raw(Box::new(QcsKeypair { params, sk, pk }));
        QcsStatus::Ok
    })
}

fn key_matches(params: &ParameterSet, sk: &SecretKey, pk: &PublicKey) -> qcstern::Result<bool> {
    let xs = sk.secrets(params)?;
    for (i, x) in xs.iter().enumerate() {
        if &pk.matrix().syndrome(x)? != pk.syndrome(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// # Safety
/// `kp` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qcs_keypair_free(kp: *mut QcsKeypair) {
    if !kp.is_null() {
        drop(Box::from_raw(kp));
    }
}

/// Copies the encoded public key.
///
/// # Safety
/// `kp` must be a live key pair; `out` writable for `*out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qcs_keypair_pk_bytes(
    kp: *const QcsKeypair,
    out: *mut u8,
    out_len: *mut usize,
) -> QcsStatus {
    guard(|| {
        let (Some(kp), false) = (kp.as_ref(), out_len.is_null()) else {
            return QcsStatus::NullPointer;
        };
        copy_out(&tri!(files::encode_public_key(&kp.params, &kp.pk)), out, out_len)
    })
}

/// Copies the encoded secret key.
///
/// # Safety
/// `kp` must be a live key pair; `out` writable for `*out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qcs_keypair_sk_bytes(
    kp: *const QcsKeypair,
    out: *mut u8,
    out_len: *mut usize,
) -> QcsStatus {
    guard(|| {
        let (Some(kp), false) = (kp.as_ref(), out_len.is_null()) else {
            return QcsStatus::NullPointer;
        };
        copy_out(&tri!(files::encode_secret_key(&kp.params, &kp.sk)), out, out_len)
    })
}

/// Largest encoded signature this key pair can produce.
///
/// # Safety
/// `kp` must be a live key pair and `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_signature_max_len(kp: *const QcsKeypair, out_len: *mut usize) -> QcsStatus {
    guard(|| {
        let (Some(kp), false) = (kp.as_ref(), out_len.is_null()) else {
            return QcsStatus::NullPointer;
        };
        let p = &kp.params;
        let d = p.delta();
        // Pair costs are independent, so the worst case repeats one pair
        // pattern and picks the unpaired last bit freely.
        let mut rsp = 0;
        for pair in [[false, false], [false, true], [true, true]] {
            for last in [false, true] {
                let mut bits: Vec<bool> = (0..d).map(|i| pair[i % 2]).collect();
                if d % 2 == 1 {
                    bits[d - 1] = last;
                }
                rsp = rsp.max(response_len(p, &bits));
            }
        }
        *out_len = files::HEADER_LEN + cmt1_len(p) + cmt2_len(p) + rsp;
        QcsStatus::Ok
    })
}

/// Signs `msg` with fresh OS randomness and writes the encoded signature.
/// Each call produces a new signature whose length varies, so size `out`
/// with [`qcs_signature_max_len`] rather than by probing.
///
/// # Safety
/// `kp` must be a live key pair, `msg` readable for `msg_len` bytes and `out`
/// writable for `*out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qcs_sign(
    kp: *const QcsKeypair,
    msg: *const u8,
    msg_len: usize,
    out: *mut u8,
    out_len: *mut usize,
) -> QcsStatus {
    guard(|| {
        let (Some(kp), Some(msg), false) = (kp.as_ref(), bytes(msg, msg_len), out_len.is_null()) else {
            return QcsStatus::NullPointer;
        };
        let rand = tri!(Seed::random(kp.params.seed_len()));
        let sig = tri!(fiatshamir::sign(&kp.sk, &kp.pk, &kp.params, msg, &rand));
        copy_out(&tri!(files::encode_signature(&kp.params, &sig)), out, out_len)
    })
}

/// Verifies an encoded signature against an encoded public key.
/// Returns `QCS_STATUS_OK` or `QCS_STATUS_REJECT`; malformed keys give
/// `QCS_STATUS_BAD_ENCODING`, malformed signatures are rejected.
///
/// # Safety
/// Each pointer must be readable for its length.
#[no_mangle]
pub unsafe extern "C" fn qcs_verify(
    pk: *const u8,
    pk_len: usize,
    msg: *const u8,
    msg_len: usize,
    sig: *const u8,
    sig_len: usize,
) -> QcsStatus {
    guard(|| {
        let (Some(pk), Some(msg), Some(sig)) = (bytes(pk, pk_len), bytes(msg, msg_len), bytes(sig, sig_len))
        else {
            return QcsStatus::NullPointer;
        };
        let (params, pk) = tri!(files::decode_public_key(pk));
        let Ok((sig_params, sig)) = files::decode_signature(sig) else {
            return QcsStatus::Reject;
        };
        if sig_params.id() != params.id() {
            return QcsStatus::Reject;
        }
        if fiatshamir::verify_signature(&pk, &sig_params, msg, &sig) {
            QcsStatus::Ok
        } else {
            QcsStatus::Reject
        }
    })
}

/// Starts a single-use prover bound to `kp`.
///
/// # Safety
/// `kp` must be a live key pair and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_prover_new(kp: *const QcsKeypair, out: *mut *mut QcsProver) -> QcsStatus {
    guard(|| {
        let (Some(kp), false) = (kp.as_ref(), out.is_null()) else {
            return QcsStatus::NullPointer;
        };
        *out = Box::into_raw(Box::new(QcsProver {
            params: kp.params.clone(),
            sk: kp.sk.clone(),
            pk: kp.pk.clone(),
            state: None,
            next: Step::Commit1,
            pending: None,
        }));
        QcsStatus::Ok
    })
}

/// # Safety
/// `p` must come from `qcs_prover_new` and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qcs_prover_free(p: *mut QcsProver) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Runs `step` once; a repeat after `BUFFER_TOO_SMALL` hands back the same
/// message instead of recomputing.
unsafe fn prover_step(
    p: *mut QcsProver,
    step: Step,
    out: *mut u8,
    out_len: *mut usize,
    body: impl FnOnce(&mut QcsProver) -> qcstern::Result<Vec<u8>>,
) -> QcsStatus {
    guard(|| {
        let (Some(p), false) = (p.as_mut(), out_len.is_null()) else {
            return QcsStatus::NullPointer;
        };
        let msg = match p.pending.take() {
            Some((s, m)) if s == step => m,
            Some(other) => {
                p.pending = Some(other);
                return QcsStatus::WrongPhase;
            }
            None if p.next == step => {
                let m = tri!(body(p));
                p.next = match step {
                    Step::Commit1 => Step::Commit2,
                    Step::Commit2 => Step::Respond,
                    _ => Step::Done,
                };
                m
            }
            None => return QcsStatus::WrongPhase,
        };
        let status = copy_out(&msg, out, out_len);
        if status == QcsStatus::BufferTooSmall {
            p.pending = Some((step, msg));
        }
        status
    })
}

/// First move: fresh OS randomness, writes CMT1.
///
/// # Safety
/// `p` must be a live prover and `out` writable for `*out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qcs_prover_commit1(
    p: *mut QcsProver,
    out: *mut u8,
    out_len: *mut usize,
) -> QcsStatus {
    prover_step(p, Step::Commit1, out, out_len, |p| {
        let rand = Seed::random(p.params.seed_len())?;
        let (state, cmt1) = ProverState::commit1(&p.sk, &p.pk, &p.params, &rand)?;
        p.state = Some(state);
        Ok(cmt1.to_bytes())
    })
}

/// Third move: takes CH1, writes CMT2.
///
/// # Safety
/// `p` must be a live prover, `ch1` readable for `ch1_len` bytes and `out`
/// writable for `*out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qcs_prover_commit2(
    p: *mut QcsProver,
    ch1: *const u8,
    ch1_len: usize,
    out: *mut u8,
    out_len: *mut usize,
) -> QcsStatus {
    let Some(ch1) = bytes(ch1, ch1_len) else {
        return QcsStatus::NullPointer;
    };
    prover_step(p, Step::Commit2, out, out_len, |p| {
        let ch1 = Challenge1::from_bytes(&p.params, ch1)?;
        let state = p
            .state
            .as_mut()
            .ok_or_else(|| Error::Contract("no first commitment".into()))?;
        Ok(state.commit2(&ch1)?.to_bytes())
    })
}

/// Fifth move: takes CH2, writes the packed response. The prover is used up
/// afterwards.
///
/// # Safety
/// `p` must be a live prover, `ch2` readable for `ch2_len` bytes and `out`
/// writable for `*out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qcs_prover_respond(
    p: *mut QcsProver,
    ch2: *const u8,
    ch2_len: usize,
    out: *mut u8,
    out_len: *mut usize,
) -> QcsStatus {
    let Some(ch2) = bytes(ch2, ch2_len) else {
        return QcsStatus::NullPointer;
    };
    prover_step(p, Step::Respond, out, out_len, |p| {
        let ch2 = Challenge2::from_bytes(&p.params, ch2)?;
        let state = p
            .state
            .as_mut()
            .ok_or_else(|| Error::Contract("no second commitment".into()))?;
        Ok(state.respond(&ch2)?.into_bytes())
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn qcs_status_message(status: QcsStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        QcsStatus::Ok => b"ok\0",
        QcsStatus::Reject => b"rejected\0",
        QcsStatus::NullPointer => b"null pointer argument\0",
        QcsStatus::BadParameters => b"invalid or unknown parameters\0",
        QcsStatus::BadEncoding => b"malformed encoding\0",
        QcsStatus::BufferTooSmall => b"output buffer too small\0",
        QcsStatus::WrongPhase => b"call out of order\0",
        QcsStatus::Entropy => b"system randomness unavailable\0",
        QcsStatus::Internal => b"internal error\0",
    };
    s.as_ptr() as *const c_char
}
