#pragma once

#include <utility>

#include "graad/crypto/bytes.hpp"
#include "graad/crypto/group.hpp"
#include "graad/crypto/rng.hpp"

namespace graad {

// Boneh-Franklin IBE over a symmetric pairing with message width n = 128.
inline constexpr std::size_t kIbeMessageBytes = 16;

struct IbeParams {
  GroupPtr group;
  G g_pub;  // g^s

  Bytes serialize() const;
  static IbeParams parse(ByteView data);
};

struct IbeMasterKey {
  mpz_class s;

  Bytes serialize(const PairingGroup& group) const;
  static IbeMasterKey parse(const PairingGroup& group, ByteView data);
};

struct IbePrivateKey {
  Bytes id;
  G d;  // H1(id)^s

  Bytes serialize() const;
  static IbePrivateKey parse(const PairingGroup& group, ByteView data);
};

enum class IbeMode {
  basic,  // C = (g^r, M xor H2(e(Q_ID, G_pub)^r))
  fo,     // Fujisaki-Okamoto strengthening; adds W and a re-encryption check
};

struct IbeCiphertext {
  G u;
  Block128 v{};
  Bytes w;  // empty in basic mode

  Bytes encode() const;
  static IbeCiphertext decode(const PairingGroup& group, ByteView data);
};

std::pair<IbeParams, IbeMasterKey> ibe_setup(GroupPtr group, Rng& rng);

// Throws InvalidArgument on an empty identity.
IbePrivateKey ibe_extract(const IbeParams& params, const IbeMasterKey& msk, ByteView id);

// e(d, g) == e(H1(id), G_pub); needs no secrets.
bool ibe_key_valid(const IbeParams& params, const IbePrivateKey& key);

IbeCiphertext ibe_encrypt(const IbeParams& params, ByteView id, ByteView message, Rng& rng,
                          IbeMode mode = IbeMode::basic);

// Basic mode never fails on a well-formed ciphertext (a wrong key yields
// garbage). FO mode throws VerifyError when the re-encryption check fails.
Block128 ibe_decrypt(const IbeParams& params, const IbePrivateKey& key, const IbeCiphertext& c,
                     IbeMode mode = IbeMode::basic);

// Hybrid envelope for payloads longer than n: IBE carries a fresh 128-bit
// key, the payload travels under sym_encrypt with that key.
struct HybridCiphertext {
  IbeCiphertext key;
  Bytes body;

  Bytes encode() const;
  static HybridCiphertext decode(const PairingGroup& group, ByteView data);
};

HybridCiphertext hybrid_encrypt(const IbeParams& params, ByteView id, ByteView payload, Rng& rng);
// Throws VerifyError when the body does not authenticate under the recovered key.
Bytes hybrid_decrypt(const IbeParams& params, const IbePrivateKey& key, const HybridCiphertext& c);

}  // namespace graad
