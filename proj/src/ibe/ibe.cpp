#include "graad/ibe/ibe.hpp"

#include "graad/crypto/error.hpp"
#include "graad/crypto/hash.hpp"
#include "graad/crypto/sym.hpp"

namespace graad {

namespace {

constexpr std::uint8_t kParamsTag = 0x01;
constexpr std::uint8_t kMasterTag = 0x02;
constexpr std::uint8_t kPrivateTag = 0x03;

void expect_tag(FieldReader& r, std::uint8_t tag) {
  ByteView t = r.next();
  if (t.size() != 1 || t[0] != tag) throw DecodeError("unexpected IBE format tag");
}

void expect_group(FieldReader& r, const PairingGroup& group) {
  if (r.next_string() != group.name()) throw DecodeError("IBE object is for another backend");
}

Bytes tag_field(std::uint8_t tag) { return Bytes{tag}; }

// H3: {0,1}^n x {0,1}^n -> Z_p*, H4: {0,1}^n -> {0,1}^n, used by FO mode.
mpz_class fo_h3(const PairingGroup& group, ByteView sigma, ByteView m) {
  FieldWriter w;
  w.add("H3").add(sigma).add(m);
  mpz_class r = group.reduce(mpz_from_bytes(sha256(w.bytes())));
  return r == 0 ? mpz_class(1) : r;
}

Block128 fo_h4(ByteView sigma) {
  FieldWriter w;
  w.add("H4").add(sigma);
  Digest d = sha256(w.bytes());
  Block128 out{};
  std::copy_n(d.begin(), out.size(), out.begin());
  return out;
}

Block128 mask(const IbeParams& params, ByteView id, const mpz_class& r) {
  const auto& group = *params.group;
  G q = hash_h1(id, group);
  return hash_h2(group.pair(q, params.g_pub).pow(r));
}

}  // namespace

Bytes IbeParams::serialize() const {
  FieldWriter w;
  w.add(tag_field(kParamsTag)).add(group->name()).add(g_pub.encode());
  return w.take();
}

IbeParams IbeParams::parse(ByteView data) {
  FieldReader r(data);
  expect_tag(r, kParamsTag);
  IbeParams out;
  out.group = make_group(r.next_string());
  out.g_pub = out.group->decode_g(r.next());
  r.finish();
  if (out.g_pub.is_identity()) throw DecodeError("G_pub is the identity");
  return out;
}

Bytes IbeMasterKey::serialize(const PairingGroup& group) const {
  FieldWriter w;
  w.add(tag_field(kMasterTag)).add(group.name()).add(group.encode_scalar(s));
  return w.take();
}

IbeMasterKey IbeMasterKey::parse(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  expect_tag(r, kMasterTag);
  expect_group(r, group);
  IbeMasterKey out{group.decode_scalar(r.next())};
  r.finish();
  if (out.s == 0) throw DecodeError("zero master key");
  return out;
}

Bytes IbePrivateKey::serialize() const {
  FieldWriter w;
  w.add(tag_field(kPrivateTag)).add(d.group().name()).add(id).add(d.encode());
  return w.take();
}

IbePrivateKey IbePrivateKey::parse(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  expect_tag(r, kPrivateTag);
  expect_group(r, group);
  IbePrivateKey out;
  out.id = to_bytes(r.next());
  out.d = group.decode_g(r.next());
  r.finish();
  return out;
}

Bytes IbeCiphertext::encode() const {
  FieldWriter f;
  f.add(u.encode()).add(v).add(w);
  return f.take();
}

IbeCiphertext IbeCiphertext::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  IbeCiphertext out;
  out.u = group.decode_g(r.next());
  out.v = to_array<16>(r.next());
  out.w = to_bytes(r.next());
  r.finish();
  if (!out.w.empty() && out.w.size() != kIbeMessageBytes) throw DecodeError("bad FO component");
  return out;
}

std::pair<IbeParams, IbeMasterKey> ibe_setup(GroupPtr group, Rng& rng) {
  mpz_class s = group->random_scalar(rng);
  G g_pub = group->generator().pow(s);
  return {IbeParams{std::move(group), g_pub}, IbeMasterKey{s}};
}

IbePrivateKey ibe_extract(const IbeParams& params, const IbeMasterKey& msk, ByteView id) {
  if (id.empty()) throw InvalidArgument("empty identity");
  return IbePrivateKey{to_bytes(id), hash_h1(id, *params.group).pow(msk.s)};
}

bool ibe_key_valid(const IbeParams& params, const IbePrivateKey& key) {
  if (key.id.empty() || !key.d.valid() || &key.d.group() != params.group.get()) return false;
  const auto& group = *params.group;
  return group.pair(key.d, group.generator()) ==
         group.pair(hash_h1(key.id, group), params.g_pub);
}

IbeCiphertext ibe_encrypt(const IbeParams& params, ByteView id, ByteView message, Rng& rng,
                          IbeMode mode) {
  if (message.size() != kIbeMessageBytes) throw InvalidArgument("IBE message must be 128 bits");
  if (id.empty()) throw InvalidArgument("empty identity");
  const auto& group = *params.group;
  IbeCiphertext out;
  if (mode == IbeMode::basic) {
    mpz_class r = group.random_scalar(rng);
    out.u = group.generator().pow(r);
    out.v = xor_block(to_array<16>(message), mask(params, id, r));
    return out;
  }
  Block128 sigma = rng.block();
  mpz_class r = fo_h3(group, sigma, message);
  out.u = group.generator().pow(r);
  out.v = xor_block(sigma, mask(params, id, r));
  Block128 w = xor_block(to_array<16>(message), fo_h4(sigma));
  out.w.assign(w.begin(), w.end());
  return out;
}

Block128 ibe_decrypt(const IbeParams& params, const IbePrivateKey& key, const IbeCiphertext& c,
                     IbeMode mode) {
  const auto& group = *params.group;
  if (!c.u.valid() || c.u.is_identity()) throw InvalidArgument("IBE ciphertext U is the identity");
  Block128 first = xor_block(c.v, hash_h2(group.pair(key.d, c.u)));
  if (mode == IbeMode::basic) return first;

  if (c.w.size() != kIbeMessageBytes) throw VerifyError("missing FO component");
  Block128 m = xor_block(to_array<16>(c.w), fo_h4(first));
  if (group.generator().pow(fo_h3(group, first, m)) != c.u) {
    throw VerifyError("FO re-encryption check failed");
  }
  return m;
}

Bytes HybridCiphertext::encode() const {
  FieldWriter w;
  w.add(key.encode()).add(body);
  return w.take();
}

HybridCiphertext HybridCiphertext::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  HybridCiphertext out;
  out.key = IbeCiphertext::decode(group, r.next());
  out.body = to_bytes(r.next());
  r.finish();
  return out;
}

HybridCiphertext hybrid_encrypt(const IbeParams& params, ByteView id, ByteView payload, Rng& rng) {
  SymKey k = rng.block();
  HybridCiphertext out;
  out.key = ibe_encrypt(params, id, k, rng);
  out.body = sym_encrypt(k, payload, rng);
  return out;
}

Bytes hybrid_decrypt(const IbeParams& params, const IbePrivateKey& key, const HybridCiphertext& c) {
  SymKey k = ibe_decrypt(params, key, c.key);
  return sym_decrypt(k, c.body);
}

}  // namespace graad
