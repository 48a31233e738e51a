#pragma once

#include "graad/crypto/bytes.hpp"
#include "graad/crypto/rng.hpp"

namespace graad {

// E_S: AES-128-GCM. Ciphertext layout is iv(12) || body || tag(16); the IV is
// drawn from the caller's RNG so seeded runs stay reproducible.
using SymKey = Block128;

inline constexpr std::size_t kSymIvBytes = 12;
inline constexpr std::size_t kSymTagBytes = 16;
inline constexpr std::size_t kSymOverhead = kSymIvBytes + kSymTagBytes;

Bytes sym_encrypt(const SymKey& key, ByteView plaintext, Rng& rng);
// Throws VerifyError on a wrong key or any corruption.
Bytes sym_decrypt(const SymKey& key, ByteView ciphertext);

}  // namespace graad
