#ifndef QCSTERN_H
#define QCSTERN_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum QcsStatus {
  QCS_STATUS_OK = 0,
  // A well-formed signature or transcript that does not verify.
  QCS_STATUS_REJECT = 1,
  QCS_STATUS_NULL_POINTER = 2,
  QCS_STATUS_BAD_PARAMETERS = 3,
  QCS_STATUS_BAD_ENCODING = 4,
  QCS_STATUS_BUFFER_TOO_SMALL = 5,
  // A prover call made out of order, or after the handle was used up.
  QCS_STATUS_WRONG_PHASE = 6,
  QCS_STATUS_ENTROPY = 7,
  QCS_STATUS_INTERNAL = 8,
} QcsStatus;

// Opaque key pair.
typedef struct QcsKeypair QcsKeypair;

// Opaque single-use prover for the interactive protocol.
typedef struct QcsProver QcsProver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Generates a key pair for the named parameter set.
//
// With `seed_len == 0` the root seed comes from the OS; otherwise `seed`
// must hold exactly λ/8 bytes.
//
// # Safety
// `paramset` must be a NUL-terminated string, `seed` must be readable for
// `seed_len` bytes and `out` must be writable.
enum QcsStatus qcs_keypair_generate(const char *paramset,
                                    const uint8_t *seed,
                                    uintptr_t seed_len,
                                    struct QcsKeypair **out);

// Rebuilds a key pair from its encoded secret and public keys.
//
// # Safety
// The byte arguments must be readable for their lengths and `out` writable.
enum QcsStatus qcs_keypair_load(const uint8_t *sk,
                                uintptr_t sk_len,
                                const uint8_t *pk,
                                uintptr_t pk_len,
                                struct QcsKeypair **out);

// # Safety
// `kp` must come from this library and not have been freed; null is ignored.
void qcs_keypair_free(struct QcsKeypair *kp);

// Copies the encoded public key.
//
// # Safety
// `kp` must be a live key pair; `out` writable for `*out_len` bytes.
enum QcsStatus qcs_keypair_pk_bytes(const struct QcsKeypair *kp, uint8_t *out, uintptr_t *out_len);

// Copies the encoded secret key.
//
// # Safety
// `kp` must be a live key pair; `out` writable for `*out_len` bytes.
enum QcsStatus qcs_keypair_sk_bytes(const struct QcsKeypair *kp, uint8_t *out, uintptr_t *out_len);

// Largest encoded signature this key pair can produce.
//
// # Safety
// `kp` must be a live key pair and `out_len` writable.
enum QcsStatus qcs_signature_max_len(const struct QcsKeypair *kp, uintptr_t *out_len);

// Signs `msg` with fresh OS randomness and writes the encoded signature.
// Each call produces a new signature whose length varies, so size `out`
// with [`qcs_signature_max_len`] rather than by probing.
//
// # Safety
// `kp` must be a live key pair, `msg` readable for `msg_len` bytes and `out`
// writable for `*out_len` bytes.
enum QcsStatus qcs_sign(const struct QcsKeypair *kp,
                        const uint8_t *msg,
                        uintptr_t msg_len,
                        uint8_t *out,
                        uintptr_t *out_len);

// Verifies an encoded signature against an encoded public key.
// Returns `QCS_STATUS_OK` or `QCS_STATUS_REJECT`; malformed keys give
// `QCS_STATUS_BAD_ENCODING`, malformed signatures are rejected.
//
// # Safety
// Each pointer must be readable for its length.
enum QcsStatus qcs_verify(const uint8_t *pk,
                          uintptr_t pk_len,
                          const uint8_t *msg,
                          uintptr_t msg_len,
                          const uint8_t *sig,
                          uintptr_t sig_len);

// Starts a single-use prover bound to `kp`.
//
// # Safety
// `kp` must be a live key pair and `out` writable.
enum QcsStatus qcs_prover_new(const struct QcsKeypair *kp, struct QcsProver **out);

// # Safety
// `p` must come from `qcs_prover_new` and not have been freed; null is ignored.
void qcs_prover_free(struct QcsProver *p);

// First move: fresh OS randomness, writes CMT1.
//
// # Safety
// `p` must be a live prover and `out` writable for `*out_len` bytes.
enum QcsStatus qcs_prover_commit1(struct QcsProver *p, uint8_t *out, uintptr_t *out_len);

// Third move: takes CH1, writes CMT2.
//
// # Safety
// `p` must be a live prover, `ch1` readable for `ch1_len` bytes and `out`
// writable for `*out_len` bytes.
enum QcsStatus qcs_prover_commit2(struct QcsProver *p,
                                  const uint8_t *ch1,
                                  uintptr_t ch1_len,
                                  uint8_t *out,
                                  uintptr_t *out_len);

// Fifth move: takes CH2, writes the packed response. The prover is used up
// afterwards.
//
// # Safety
// `p` must be a live prover, `ch2` readable for `ch2_len` bytes and `out`
// writable for `*out_len` bytes.
enum QcsStatus qcs_prover_respond(struct QcsProver *p,
                                  const uint8_t *ch2,
                                  uintptr_t ch2_len,
                                  uint8_t *out,
                                  uintptr_t *out_len);

// Static, NUL-terminated description of a status code.
const char *qcs_status_message(enum QcsStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCSTERN_H */
