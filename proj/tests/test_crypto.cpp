#include <set>

#include <gtest/gtest.h>

#include "graad/crypto/dh.hpp"
#include "graad/crypto/error.hpp"
#include "graad/crypto/group.hpp"
#include "graad/crypto/hash.hpp"
#include "graad/crypto/sym.hpp"

using namespace graad;

TEST(Hash, EmptyInputMatchesPublishedVector) {
  EXPECT_EQ(to_hex(hash_h(Bytes{})),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(to_hex(hash_h(to_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hash, AppendedZeroChangesDigest) {
  auto rng = Rng::seeded(1);
  for (int i = 0; i < 10000; ++i) {
    Bytes m = rng.bytes(rng.u64() % 64);
    Bytes m0 = m;
    m0.push_back(0);
    ASSERT_NE(hash_h(m), hash_h(m0));
  }
}

TEST(Hash, FieldWriterIsLengthPrefixed) {
  FieldWriter a, b;
  a.add("ab").add("c");
  b.add("a").add("bc");
  EXPECT_NE(a.bytes(), b.bytes());
  EXPECT_EQ(to_hex(a.bytes()), "000000026162000000016" "3");
}

TEST(Sym, RoundtripAcrossLengths) {
  auto rng = Rng::seeded(2);
  for (int i = 0; i < 1000; ++i) {
    SymKey k = rng.block();
    Bytes m = rng.bytes(rng.u64() % 513);
    Bytes c = sym_encrypt(k, m, rng);
    ASSERT_EQ(c.size(), m.size() + kSymOverhead);
    ASSERT_EQ(sym_decrypt(k, c), m);
  }
}

TEST(Sym, WrongKeyAndEveryBitFlipRejected) {
  auto rng = Rng::seeded(3);
  SymKey k = rng.block();
  Bytes m = rng.bytes(16);
  Bytes c = sym_encrypt(k, m, rng);
  SymKey other = k;
  other[0] ^= 1;
  EXPECT_THROW(sym_decrypt(other, c), VerifyError);
  for (std::size_t bit = 0; bit < c.size() * 8; ++bit) {
    Bytes bad = c;
    bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_THROW(sym_decrypt(k, bad), VerifyError) << "bit " << bit;
  }
  EXPECT_THROW(sym_decrypt(k, Bytes(10)), VerifyError);
}

TEST(Sym, SeededIvIsReproducible) {
  auto r1 = Rng::seeded(9);
  auto r2 = Rng::seeded(9);
  SymKey k{};
  EXPECT_EQ(sym_encrypt(k, to_bytes("x"), r1), sym_encrypt(k, to_bytes("x"), r2));
}

class Backend : public ::testing::TestWithParam<std::string> {
 protected:
  void SetUp() override { group = make_group(GetParam()); }
  bool heavy() const { return GetParam() != "toy"; }
  GroupPtr group;
};

TEST_P(Backend, Bilinearity) {
  auto rng = Rng::seeded(10);
  const G& g = group->generator();
  GT egg = group->pair(g, g);
  ASSERT_FALSE(egg.is_identity());
  EXPECT_TRUE(egg.pow(group->order()).is_identity());
  for (int i = 0; i < 100; ++i) {
    mpz_class a = group->random_scalar(rng);
    mpz_class b = group->random_scalar(rng);
    ASSERT_EQ(group->pair(g.pow(a), g.pow(b)), egg.pow(a * b)) << i;
  }
}

TEST_P(Backend, PairingIsSymmetricAndLinearInProducts) {
  auto rng = Rng::seeded(11);
  G x = group->random_element(rng);
  G y = group->random_element(rng);
  G z = group->random_element(rng);
  EXPECT_EQ(group->pair(x, y), group->pair(y, x));
  EXPECT_EQ(group->pair(x * z, y), group->pair(x, y) * group->pair(z, y));
  EXPECT_TRUE(group->pair(group->identity(), y).is_identity());
}

TEST_P(Backend, GroupLaw) {
  auto rng = Rng::seeded(12);
  const G& g = group->generator();
  EXPECT_TRUE(g.pow(group->order()).is_identity());
  EXPECT_FALSE(g.is_identity());
  for (int i = 0; i < 50; ++i) {
    mpz_class a = group->random_scalar(rng);
    mpz_class b = group->random_scalar(rng);
    ASSERT_EQ(g.pow(a) * g.pow(b), g.pow(a + b));
    ASSERT_EQ(g.pow(a) / g.pow(a), group->identity());
    ASSERT_EQ(g.pow(a).pow(b), g.pow(a * b));
  }
  G x = group->random_element(rng);
  EXPECT_EQ(x * x, x.pow(2));
  EXPECT_EQ(x * group->identity(), x);
  EXPECT_EQ(group->identity() * x, x);
}

TEST_P(Backend, EncodingsRoundtripAtFixedWidth) {
  auto rng = Rng::seeded(13);
  for (int i = 0; i < 20; ++i) {
    G x = group->random_element(rng);
    Bytes e = x.encode();
    ASSERT_EQ(e.size(), group->g_width());
    ASSERT_EQ(group->decode_g(e), x);
    GT t = group->pair(x, group->generator());
    Bytes te = t.encode();
    ASSERT_EQ(te.size(), group->gt_width());
    ASSERT_EQ(group->decode_gt(te), t);
  }
  EXPECT_EQ(group->decode_g(group->identity().encode()), group->identity());
  EXPECT_EQ(group->decode_gt(group->gt_identity().encode()), group->gt_identity());
  EXPECT_THROW(group->decode_g(Bytes(group->g_width() + 1)), DecodeError);
  EXPECT_THROW(group->decode_gt(Bytes(group->gt_width())), DecodeError);
  EXPECT_THROW(group->decode_gt(Bytes(group->gt_width(), 0xff)), DecodeError);
}

TEST_P(Backend, DecodeRejectsNonMembers) {
  // Random byte strings of the right width almost never encode a subgroup
  // point (toy accepts anything below p by construction).
  if (!heavy()) GTEST_SKIP();
  auto rng = Rng::seeded(14);
  int rejected = 0;
  for (int i = 0; i < 20; ++i) {
    Bytes b = rng.bytes(group->g_width());
    b[0] = 0x02;
    try {
      group->decode_g(b);
    } catch (const DecodeError&) {
      ++rejected;
    }
  }
  EXPECT_GE(rejected, 15);
  Bytes tag = group->generator().encode();
  tag[0] = 0x07;
  EXPECT_THROW(group->decode_g(tag), DecodeError);
}

TEST_P(Backend, ScalarCodec) {
  Bytes enc = group->encode_scalar(group->order() - 1);
  EXPECT_EQ(enc.size(), group->scalar_width());
  EXPECT_EQ(group->decode_scalar(enc), group->order() - 1);
  EXPECT_THROW(group->decode_scalar(mpz_to_bytes(group->order(), group->scalar_width())),
               DecodeError);
}

TEST_P(Backend, HashToGroup) {
  auto rng = Rng::seeded(15);
  int trials = heavy() ? 200 : 10000;
  Bytes id = to_bytes("alice");
  EXPECT_EQ(hash_h1(id, *group), hash_h1(id, *group));
  for (int i = 0; i < trials; ++i) {
    G h = hash_h1(rng.bytes(16), *group);
    ASSERT_FALSE(h.is_identity());
    if (i < 3) ASSERT_TRUE(h.pow(group->order()).is_identity());
  }
  mpz_class a = group->random_scalar(rng);
  G q = hash_h1(id, *group);
  EXPECT_EQ(group->pair(q.pow(a), group->generator()),
            group->pair(q, group->generator().pow(a)));
}

TEST_P(Backend, H2IsStableAndCollisionFree) {
  auto rng = Rng::seeded(16);
  GT egg = group->pair(group->generator(), group->generator());
  EXPECT_EQ(hash_h2(egg), hash_h2(egg));
  EXPECT_EQ(hash_h2(group->gt_identity()), hash_h2(group->gt_identity()));
  std::set<Block128> seen;
  int trials = heavy() ? 200 : 10000;
  for (int i = 0; i < trials; ++i) seen.insert(hash_h2(egg.pow(group->random_scalar(rng))));
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(trials));
}

TEST_P(Backend, PrfDomainSeparation) {
  auto rng = Rng::seeded(17);
  mpz_class a = group->random_scalar(rng);
  mpz_class b = group->random_scalar(rng);
  EXPECT_NE(prf_f0(*group, a, b, 1), prf_f0(*group, a, b, 2));
  EXPECT_EQ(prf_f0(*group, a, b, 0).size(), 32u);
  EXPECT_THROW(prf_f0(*group, a, b, 4), InvalidArgument);

  Bytes nu = rng.bytes(16), nv = rng.bytes(16);
  EXPECT_NE(prf_f1(*group, nu, nv, {0}), prf_f1(*group, nu, nv, {1}));
  EXPECT_NE(prf_f1(*group, nu, nv, {1, 0}), prf_f1(*group, nu, nv, {1}));
  for (std::uint64_t s = 0; s < 100; ++s) {
    mpz_class v = prf_f1(*group, nu, nv, {3, 1, s});
    ASSERT_LT(v, group->order());
    ASSERT_NE(v, prf_f1(*group, nu, nv, {3, 1, s + 1}));
  }
  EXPECT_THROW(prf_f1(*group, nu, nv, std::span<const std::uint64_t>{}), InvalidArgument);
}

TEST_P(Backend, EmbeddingIsInvertible) {
  auto rng = Rng::seeded(18);
  for (int i = 0; i < (heavy() ? 10 : 200); ++i) {
    Bytes payload = rng.bytes(group->embed_capacity());
    G m = group->embed(payload);
    ASSERT_FALSE(m.is_identity());
    ASSERT_TRUE(m.pow(group->order()).is_identity());
    ASSERT_EQ(group->unembed(m), payload);
  }
  EXPECT_THROW(group->embed(Bytes(group->embed_capacity() + 1)), InvalidArgument);
}

TEST_P(Backend, DiffieHellman) {
  auto rng = Rng::seeded(19);
  auto a = dh_keygen(*group, rng);
  auto b = dh_keygen(*group, rng);
  EXPECT_EQ(a.element, group->generator().pow(a.exponent));
  EXPECT_EQ(dh_shared(a.exponent, b.element), dh_shared(b.exponent, a.element));
  EXPECT_EQ(dh_shared(1, b.element), b.element);
  EXPECT_THROW(dh_shared(a.exponent, group->identity()), InvalidArgument);
}

INSTANTIATE_TEST_SUITE_P(All, Backend, ::testing::Values("toy", "a512"),
                         [](const auto& info) { return info.param; });
