#pragma once

#include <gmpxx.h>

#include "graad/crypto/group.hpp"

namespace graad {

struct DhKeypair {
  mpz_class exponent;
  G element;  // g^exponent
};

DhKeypair dh_keygen(const PairingGroup& group, Rng& rng);

// peer^x; throws InvalidArgument when the peer is the identity.
G dh_shared(const mpz_class& x, const G& peer);

}  // namespace graad
