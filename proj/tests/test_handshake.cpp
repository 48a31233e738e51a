#include <array>
#include <map>

#include <gtest/gtest.h>

#include "graad/crypto/error.hpp"
#include "graad/handshake/directory.hpp"
#include "graad/handshake/select.hpp"

using namespace graad;

namespace {

Block128 gid_n(std::size_t i) {
  Block128 g{};
  g[15] = static_cast<std::uint8_t>(i);
  g[14] = static_cast<std::uint8_t>(i >> 8);
  g[0] = 0xa0;
  return g;
}

Bytes label_n(std::size_t group, std::size_t member) {
  Bytes l = to_bytes("ue");
  put_u16(l, static_cast<std::uint16_t>(group));
  put_u16(l, static_cast<std::uint16_t>(member));
  return l;
}

GroupDirectory make_dir(std::size_t m, std::size_t w, const std::vector<std::size_t>& sizes) {
  std::vector<Block128> gids;
  for (std::size_t i = 0; i < m; ++i) gids.push_back(gid_n(i));
  GroupDirectory dir(m, w, gids);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < sizes[i % sizes.size()]; ++k) dir.add_member(gid_n(i), label_n(i, k));
  }
  return dir;
}

Nonces fixed_nonces() {
  Nonces n;
  for (std::uint8_t i = 0; i < 16; ++i) {
    n.u[i] = i;
    n.v[i] = static_cast<std::uint8_t>(16 + i);
  }
  return n;
}

Nonces random_nonces(Rng& rng) { return Nonces{rng.block(), rng.block()}; }

}  // namespace

TEST(Directory, TextRoundtripAndInvariants) {
  auto dir = make_dir(4, 2, {2, 1});
  std::string text = dir.serialize();
  EXPECT_EQ(text.substr(0, text.find('\n')), "graad-dir v1 m=4 w=2");
  auto back = GroupDirectory::parse(text);
  EXPECT_EQ(back.serialize(), text);
  EXPECT_EQ(back.member_count(), 6u);
  auto pos = back.find_member(label_n(2, 1));
  ASSERT_TRUE(pos);
  EXPECT_EQ(pos->group, (GroupSlot{1, 0}));
  EXPECT_EQ(pos->index, 1u);

  EXPECT_THROW(GroupDirectory(5, 2, std::vector<Block128>(5)), InvalidArgument);
  EXPECT_THROW(GroupDirectory::parse("graad-dir v1 m=5 w=2\n"), DecodeError);
  EXPECT_THROW(GroupDirectory::parse("graad-dir v2 m=4 w=2\n"), DecodeError);
  std::string dup = text + "  uid:" + to_hex(label_n(0, 0)) + "\n";
  EXPECT_THROW(GroupDirectory::parse(dup), DecodeError);
  EXPECT_THROW(dir.add_member(gid_n(9), to_bytes("x")), InvalidArgument);
  EXPECT_THROW(dir.add_member(gid_n(0), label_n(1, 0)), InvalidArgument);
}

TEST(Directory, EmptyGroupsLoadButFailPopulationCheck) {
  auto dir = make_dir(4, 2, {1, 0});
  auto back = GroupDirectory::parse(dir.serialize());
  EXPECT_THROW(back.require_populated(), InvalidArgument);
  EXPECT_TRUE(back.remove_member(label_n(0, 0)));
  EXPECT_FALSE(back.remove_member(label_n(0, 0)));
  EXPECT_FALSE(back.find_member(label_n(0, 0)));
}

// Frozen from an independent Python reimplementation of f1 and the
// verifier-side modular equations (m=6, w=3, group sizes 2,3,1,4,2,5).
TEST(Select, VerifierMatchesReferenceArithmetic) {
  auto group = make_group("toy");
  auto dir = make_dir(6, 3, {2, 3, 1, 4, 2, 5});
  Nonces n = fixed_nonces();
  EXPECT_EQ(prf_f1(*group, n.u, n.v, {0}),
            mpz_class("118222376233672404743858625681685734370"));

  GroupSelection gs;
  gs.theta1 = mpz_class("123456789012345678901234567890");
  gs.sigma_g = to_array<32>(from_hex("ae5ddd4a8ab811ab634cf36bc56231ed11a239afb4c8181f659bbd0b2ffe9dc2"));
  auto s = g_select_verify(dir, *group, n, gs);
  EXPECT_EQ(s, (std::vector<std::size_t>{1, 0, 0}));

  UserSelection us;
  us.theta2 = mpz_class("98765432109876543210987654321");
  us.sigma_u = to_array<32>(from_hex("10c56ad47a8ffa50927ba9d594cc3df79e2c4ff3c32949a017f707471ba90a1e"));
  auto cand = u_select_verify(dir, *group, n, s, us);
  EXPECT_EQ(cand.lambda, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(cand.labels[0], label_n(1, 0));
  EXPECT_EQ(cand.labels[1], label_n(2, 0));
  EXPECT_EQ(cand.labels[2], label_n(4, 1));
}

TEST(Select, SmallExamplePinsOwnSlot) {
  auto group = make_group("toy");
  auto dir = make_dir(4, 2, {2});
  auto rng = Rng::seeded(300);
  auto n = random_nonces(rng);
  auto sel = g_select(dir, *group, GroupSlot{0, 1}, n, rng);
  auto s = g_select_verify(dir, *group, n, sel);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], 1u);

  auto r1 = Rng::seeded(9), r2 = Rng::seeded(9);
  EXPECT_EQ(g_select(dir, *group, GroupSlot{0, 1}, n, r1).theta1,
            g_select(dir, *group, GroupSlot{0, 1}, n, r2).theta1);
  EXPECT_THROW(g_select(dir, *group, GroupSlot{0, 2}, n, rng), InvalidArgument);
}

TEST(Select, BindingAndWrongNonces) {
  auto group = make_group("toy");
  auto dir = make_dir(8, 4, {3, 2});
  auto rng = Rng::seeded(301);
  auto n = random_nonces(rng);
  auto sel = g_select(dir, *group, GroupSlot{2, 1}, n, rng);
  auto bumped = sel;
  bumped.theta1 = group->reduce(bumped.theta1 + 1);
  // theta1 + 1 can leave every s_z unchanged only if no residue wraps; with
  // chunk size 2 that never happens.
  EXPECT_THROW(g_select_verify(dir, *group, n, bumped), VerifyError);

  // A wrong nonce re-randomises every s_z; with m=100, w=10 a chance match
  // of the whole vector has probability 10^-10.
  auto wide = make_dir(100, 10, {1});
  auto wide_sel = g_select(wide, *group, GroupSlot{3, 7}, n, rng);
  int false_accepts = 0;
  for (int i = 0; i < 1000; ++i) {
    Nonces other = n;
    other.v = rng.block();
    try {
      g_select_verify(wide, *group, other, wide_sel);
      ++false_accepts;
    } catch (const VerifyError&) {
    }
  }
  EXPECT_EQ(false_accepts, 0);

  auto s = g_select_verify(dir, *group, n, sel);
  auto us = u_select(dir, *group, s, 2, 0, n, rng);
  auto tampered = us;
  tampered.sigma_u[0] ^= 1;
  EXPECT_THROW(u_select_verify(dir, *group, n, s, tampered), VerifyError);
}

// With m=4, w=2 the other chunk's sub-index should be a fair coin.
TEST(Select, OtherChunkIsUniform) {
  auto group = make_group("toy");
  auto dir = make_dir(4, 2, {1});
  auto rng = Rng::seeded(302);
  std::array<int, 2> counts{};
  for (int i = 0; i < 10000; ++i) {
    auto n = random_nonces(rng);
    auto sel = g_select(dir, *group, GroupSlot{0, 0}, n, rng);
    counts[g_select_verify(dir, *group, n, sel)[1]]++;
  }
  double e = 5000.0;
  double chi2 = (counts[0] - e) * (counts[0] - e) / e + (counts[1] - e) * (counts[1] - e) / e;
  EXPECT_LT(chi2, 10.83);  // 1 dof, p = 0.001
}

TEST(Select, PinningIsExactOnRandomConfigurations) {
  auto group = make_group("toy");
  auto rng = Rng::seeded(303);
  for (int i = 0; i < 1000; ++i) {
    std::size_t w = 1 + rng.u64() % 5;
    std::size_t m = w * (1 + rng.u64() % 4);
    std::vector<std::size_t> sizes;
    for (std::size_t k = 0; k < m; ++k) sizes.push_back(1 + rng.u64() % 5);
    auto dir = make_dir(m, w, sizes);
    GroupSlot self{rng.u64() % w, rng.u64() % (m / w)};
    std::size_t lambda = rng.u64() % dir.group(self).members.size();
    auto n = random_nonces(rng);

    auto gs = g_select(dir, *group, self, n, rng);
    auto s = g_select_verify(dir, *group, n, gs);
    ASSERT_EQ(s[self.chunk], self.sub);
    auto us = u_select(dir, *group, s, self.chunk, lambda, n, rng);
    auto cand = u_select_verify(dir, *group, n, s, us);
    ASSERT_EQ(cand.lambda[self.chunk], lambda);
    ASSERT_EQ(cand.labels[self.chunk], dir.group(self).members[lambda]);
  }
}

TEST(Select, SingleMemberGroupForcesZero) {
  auto group = make_group("toy");
  auto dir = make_dir(2, 2, {1});
  auto rng = Rng::seeded(304);
  for (int i = 0; i < 20; ++i) {
    auto n = random_nonces(rng);
    auto s = g_select_verify(dir, *group, n, g_select(dir, *group, GroupSlot{1, 0}, n, rng));
    auto cand = u_select_verify(dir, *group, n, s, u_select(dir, *group, s, 1, 0, n, rng));
    EXPECT_EQ(cand.lambda, (std::vector<std::size_t>{0, 0}));
  }
}

// Two members of the same group: each side's candidate set holds the other's
// label at the shared chunk.
TEST(Select, SameGroupPeersSeeEachOther) {
  auto group = make_group("toy");
  auto dir = make_dir(6, 3, {3});
  auto rng = Rng::seeded(305);
  GroupSlot shared{1, 1};
  for (int i = 0; i < 50; ++i) {
    auto n = random_nonces(rng);
    auto s = g_select_verify(dir, *group, n, g_select(dir, *group, shared, n, rng));
    auto from_u = u_select_verify(dir, *group, n, s, u_select(dir, *group, s, 1, 0, n, rng));
    auto from_v = u_select_verify(dir, *group, n, s, u_select(dir, *group, s, 1, 2, n, rng));
    EXPECT_EQ(from_u.labels[1], dir.group(shared).members[0]);
    EXPECT_EQ(from_v.labels[1], dir.group(shared).members[2]);
  }
}

TEST(Select, TranscriptSizeIsConstantInW) {
  for (const char* backend : {"toy", "a512"}) {
    auto group = make_group(backend);
    auto rng = Rng::seeded(306);
    std::vector<std::size_t> sizes;
    for (std::size_t w : {2, 10, 50}) {
      auto dir = make_dir(100, w, {2});
      auto n = random_nonces(rng);
      auto gs = g_select(dir, *group, GroupSlot{0, 0}, n, rng);
      auto s = g_select_verify(dir, *group, n, gs);
      auto us = u_select(dir, *group, s, 0, 1, n, rng);
      sizes.push_back(encode_selections(*group, gs, us).size());
    }
    EXPECT_EQ(sizes[0], sizes[1]) << backend;
    EXPECT_EQ(sizes[1], sizes[2]) << backend;
    EXPECT_EQ(sizes[0], 2 * group->scalar_width() + 64);
  }
}

// Provers pinned at different true slots: conditioned on the same selected
// groups, theta1 should look the same. Coarse two-sample chi-square on the
// top bits of theta1.
TEST(Select, TranscriptDoesNotRevealTrueSlot) {
  auto group = make_group("toy");
  auto dir = make_dir(4, 2, {1});
  auto rng = Rng::seeded(307);
  constexpr int kBins = 8;
  std::array<int, kBins> a{}, b{};
  int na = 0, nb = 0;
  for (int i = 0; i < 20000; ++i) {
    auto n = random_nonces(rng);
    bool first = i % 2 == 0;
    GroupSlot self = first ? GroupSlot{0, 0} : GroupSlot{1, 0};
    auto gs = g_select(dir, *group, self, n, rng);
    auto s = g_select_verify(dir, *group, n, gs);
    if (s != std::vector<std::size_t>{0, 0}) continue;
    auto bin = mpz_class(gs.theta1 * kBins / group->order()).get_ui();
    if (first) {
      a[bin]++;
      ++na;
    } else {
      b[bin]++;
      ++nb;
    }
  }
  ASSERT_GT(na, 2000);
  ASSERT_GT(nb, 2000);
  double chi2 = 0;
  for (int k = 0; k < kBins; ++k) {
    double tot = a[k] + b[k];
    double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    chi2 += (a[k] - ea) * (a[k] - ea) / ea + (b[k] - eb) * (b[k] - eb) / eb;
  }
  EXPECT_LT(chi2, 24.32);  // 7 dof, p = 0.001
}
