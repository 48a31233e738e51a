#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

#include <gmpxx.h>

#include "graad/crypto/bytes.hpp"
#include "graad/crypto/group.hpp"

namespace graad {

// l = 256-bit digest.
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

// H: {0,1}* -> {0,1}^256, plain SHA-256 of the input bytes.
Digest hash_h(ByteView data);
// H over several values, each written as a length-prefixed field.
Digest hash_h(const FieldWriter& fields);

// H1: {0,1}* -> G*, domain tag "H1".
G hash_h1(ByteView data, const PairingGroup& group);

// H2: G_T -> {0,1}^128, domain tag "H2".
Block128 hash_h2(const GT& t);

// f0: Z_p^3 -> {0,1}^256 with tag in {0,1,2,3}. The two-argument form used
// for sigma_0 is f0(a, b, 0).
Digest prf_f0(const PairingGroup& group, const mpz_class& a, const mpz_class& b,
              unsigned tag);

// f1: (N_u, N_v, labels...) -> Z_p, domain tag "f1". The digest is expanded
// to |p| + 128 bits before reduction.
mpz_class prf_f1(const PairingGroup& group, ByteView nonce_u, ByteView nonce_v,
                 std::initializer_list<std::uint64_t> labels);
mpz_class prf_f1(const PairingGroup& group, ByteView nonce_u, ByteView nonce_v,
                 std::span<const std::uint64_t> labels);

}  // namespace graad
