#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graad/crypto/bytes.hpp"
#include "graad/crypto/group.hpp"
#include "graad/crypto/rng.hpp"

namespace graad {

// Key-private ElGamal: pk X = g^x, ciphertext (Y, C) = (g^y, M * X^y).
struct KpKeypair {
  mpz_class x;
  G X;
};

struct KpCiphertext {
  G y;
  G c;

  Bytes encode() const;
  static KpCiphertext decode(const PairingGroup& group, ByteView data);
};

struct KpEncryption {
  KpCiphertext ct;
  mpz_class y;  // ephemeral, needed by enc_proof
};

KpKeypair kp_keygen(const PairingGroup& group, Rng& rng);
KpEncryption kp_encrypt(const G& X, const G& message, Rng& rng);
G kp_decrypt(const mpz_class& x, const KpCiphertext& ct);

// Linear encryption under the decision-linear assumption: u^xh = v^yh = h.
struct LinPublicKey {
  G u;
  G v;
  G h;

  Bytes encode() const;
  static LinPublicKey decode(const PairingGroup& group, ByteView data);
};

struct LinSecretKey {
  mpz_class xh;
  mpz_class yh;
};

struct LinKeypair {
  LinPublicKey pk;
  LinSecretKey sk;
};

struct LinCiphertext {
  G c_hat;  // M * h^(b1 + b2)
  G t1;     // u^b1
  G t2;     // v^b2

  Bytes encode() const;
  static LinCiphertext decode(const PairingGroup& group, ByteView data);
};

struct LinEncryption {
  LinCiphertext ct;
  mpz_class beta1;
  mpz_class beta2;
};

LinKeypair lin_keygen(const PairingGroup& group, Rng& rng);
LinEncryption lin_encrypt(const LinPublicKey& pk, const G& message, Rng& rng);
G lin_decrypt(const LinSecretKey& sk, const LinCiphertext& ct);

// Proof that a key-private and a Linear ciphertext carry the same plaintext.
// Serialized as (c, s_b1, s_b2, s_y, R1, R2, R3). A non-empty context is
// hashed into the challenge after the canonical fields, binding the proof to
// it.
struct DualProof {
  mpz_class c;
  mpz_class s_b1;
  mpz_class s_b2;
  mpz_class s_y;
  G r1;
  G r2;
  GT r3;

  Bytes encode() const;
  static DualProof decode(const PairingGroup& group, ByteView data);
};

DualProof enc_proof(const KpCiphertext& c1, const LinCiphertext& c2, const mpz_class& beta1,
                    const mpz_class& beta2, const mpz_class& y, const G& recipient_X,
                    const LinPublicKey& lin_pk, Rng& rng, ByteView context = {});

// Never throws: malformed or mixed-group inputs verify as false.
bool enc_verify(const KpCiphertext& c1, const LinCiphertext& c2, const DualProof& proof,
                const G& recipient_X, const LinPublicKey& lin_pk, ByteView context = {});

// Session payload (scalar || 16-bit group index) embedded as a G element.
// Scalars must lie below payload_scalar_bound, which is min(p, 2^(8(cap-2))).
mpz_class payload_scalar_bound(const PairingGroup& group);
G embed_payload(const PairingGroup& group, const mpz_class& scalar, std::uint16_t index);
std::pair<mpz_class, std::uint16_t> unembed_payload(const PairingGroup& group, const G& element);

namespace detail {

// Challenge input fields in canonical order:
// Y, C, C_hat, T1, T2, R1, R2, R3, T1, T2, X.
std::vector<Bytes> challenge_fields(const KpCiphertext& c1, const LinCiphertext& c2,
                                    const G& r1, const G& r2, const GT& r3, const G& X);
mpz_class challenge_from_fields(const PairingGroup& group, std::span<const Bytes> fields);

// Prover with the challenge fields fed in a caller-chosen order; used to
// check that the verifier pins the canonical order.
DualProof enc_proof_with_order(const KpCiphertext& c1, const LinCiphertext& c2,
                               const mpz_class& beta1, const mpz_class& beta2,
                               const mpz_class& y, const G& recipient_X,
                               const LinPublicKey& lin_pk, Rng& rng,
                               std::span<const std::size_t> order, ByteView context = {});

}  // namespace detail

}  // namespace graad
