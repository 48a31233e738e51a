#pragma once

// Shared fixture: m = 4 groups in w = 2 chunks. Eight test UEs sit four
// apiece in groups 0 and 2; groups 1 and 3 each hold one filler member so
// that every group is populated.

#include <string_view>
#include <vector>

#include "graad/protocols/cn.hpp"
#include "graad/protocols/na.hpp"

namespace graad::testing {

inline Block128 test_block(std::uint8_t tag, std::uint8_t n) {
  Block128 b{};
  b[0] = tag;
  b[15] = n;
  return b;
}

struct Deployment {
  GroupPtr group;
  Authorities auth;
  SystemParams params;
  std::vector<UeDevice> ues;
  std::vector<std::size_t> group_of;  // flat group index per test UE
  std::vector<UeCredentials> fillers;

  NaView view() const { return {params, auth.prose.dir, auth.prose.crl}; }
};

inline Deployment make_deployment(std::string_view backend, std::uint64_t seed) {
  GroupPtr group = make_group(backend);
  Rng rng = Rng::seeded(seed);
  std::vector<Block128> gids;
  for (std::uint8_t i = 0; i < 4; ++i) gids.push_back(test_block(0x47, i));
  Deployment d{group, setup_authorities(group, 4, 2, gids, rng), {}, {}, {}, {}};
  d.params = d.auth.params();
  for (std::uint8_t n = 0; n < 8; ++n) {
    std::size_t g = n < 4 ? 0 : 2;
    d.ues.push_back(
        UeDevice{register_ue(d.auth.hss, d.auth.prose, test_block(0x49, n), gids[g], 1, rng),
                 ReplayCache()});
    d.group_of.push_back(g);
  }
  for (std::uint8_t g : {1, 3}) {
    d.fillers.push_back(
        register_ue(d.auth.hss, d.auth.prose, test_block(0x46, g), gids[g], 1, rng));
  }
  return d;
}

}  // namespace graad::testing
