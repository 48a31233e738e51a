#include "graad/crypto/dh.hpp"

#include "graad/crypto/error.hpp"

namespace graad {

DhKeypair dh_keygen(const PairingGroup& group, Rng& rng) {
  mpz_class x = group.random_scalar(rng);
  return DhKeypair{x, group.generator().pow(x)};
}

G dh_shared(const mpz_class& x, const G& peer) {
  if (peer.is_identity()) throw InvalidArgument("degenerate DH peer element");
  return peer.pow(x);
}

}  // namespace graad
