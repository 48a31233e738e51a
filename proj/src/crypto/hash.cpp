#include "graad/crypto/hash.hpp"

#include <openssl/sha.h>

#include "graad/crypto/error.hpp"

namespace graad {

Digest sha256(ByteView data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest hash_h(ByteView data) { return sha256(data); }

Digest hash_h(const FieldWriter& fields) { return sha256(fields.bytes()); }

G hash_h1(ByteView data, const PairingGroup& group) {
  FieldWriter w;
  w.add("H1").add(data);
  return group.hash_to_group(w.bytes());
}

Block128 hash_h2(const GT& t) {
  FieldWriter w;
  w.add("H2").add(t.encode());
  Digest d = sha256(w.bytes());
  Block128 out{};
  std::copy_n(d.begin(), out.size(), out.begin());
  return out;
}

Digest prf_f0(const PairingGroup& group, const mpz_class& a, const mpz_class& b,
              unsigned tag) {
  if (tag > 3) throw InvalidArgument("f0 tag must be in {0,1,2,3}");
  FieldWriter w;
  w.add("f0")
      .add(group.encode_scalar(a))
      .add(group.encode_scalar(b))
      .add(group.encode_scalar(mpz_class(tag)));
  return sha256(w.bytes());
}

mpz_class prf_f1(const PairingGroup& group, ByteView nonce_u, ByteView nonce_v,
                 std::initializer_list<std::uint64_t> labels) {
  return prf_f1(group, nonce_u, nonce_v,
                std::span<const std::uint64_t>(labels.begin(), labels.size()));
}

mpz_class prf_f1(const PairingGroup& group, ByteView nonce_u, ByteView nonce_v,
                 std::span<const std::uint64_t> labels) {
  if (labels.empty()) throw InvalidArgument("f1 needs at least one label");
  FieldWriter w;
  w.add("f1").add(nonce_u).add(nonce_v).add_u64(labels.size());
  for (auto l : labels) w.add_u64(l);

  std::size_t bits = mpz_sizeinbase(group.order().get_mpz_t(), 2) + 128;
  std::size_t blocks = (bits + 255) / 256;
  Bytes wide;
  for (std::size_t i = 0; i < blocks; ++i) {
    Bytes in = w.bytes();
    put_u32(in, static_cast<std::uint32_t>(i));
    Digest d = sha256(in);
    wide.insert(wide.end(), d.begin(), d.end());
  }
  return group.reduce(mpz_from_bytes(wide));
}

}  // namespace graad
