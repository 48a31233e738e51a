#pragma once

#include <vector>

#include <gmpxx.h>

#include "graad/crypto/hash.hpp"
#include "graad/handshake/directory.hpp"

namespace graad {

struct Nonces {
  Block128 u{};
  Block128 v{};
};

struct GroupSelection {
  mpz_class theta1;
  Digest sigma_g{};
};

struct UserSelection {
  mpz_class theta2;
  Digest sigma_u{};
};

struct SelectedCandidates {
  std::vector<std::size_t> s;        // selected sub-index per chunk
  std::vector<std::size_t> lambda;   // selected member index per chunk
  std::vector<Bytes> labels;         // X_{z_{s_z}, lambda_z}
};

// gSelect: pins the prover's own group (chunk i, sub-index u) at s_i = u while
// the other chunks get pseudorandom sub-indices.
GroupSelection g_select(const GroupDirectory& dir, const PairingGroup& group,
                        const GroupSlot& self, const Nonces& n, Rng& rng);

// gSelectVer: recomputes s_0..s_{w-1}; throws VerifyError on a digest mismatch.
std::vector<std::size_t> g_select_verify(const GroupDirectory& dir, const PairingGroup& group,
                                         const Nonces& n, const GroupSelection& sel);

// uSelect: pins member lambda of the selected group in chunk a. Requires
// s[a] to be the caller's own sub-index.
UserSelection u_select(const GroupDirectory& dir, const PairingGroup& group,
                       const std::vector<std::size_t>& s, std::size_t a, std::size_t lambda,
                       const Nonces& n, Rng& rng);

// uSelectVer: recomputes lambda_z and returns the w candidate labels.
SelectedCandidates u_select_verify(const GroupDirectory& dir, const PairingGroup& group,
                                   const Nonces& n, const std::vector<std::size_t>& s,
                                   const UserSelection& sel);

// Wire size of (theta1, sigma_g, theta2, sigma_u); independent of w.
Bytes encode_selections(const PairingGroup& group, const GroupSelection& g,
                        const UserSelection& u);

}  // namespace graad
