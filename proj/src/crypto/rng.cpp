#include "graad/crypto/rng.hpp"

#include <openssl/rand.h>
#include <openssl/sha.h>

#include "graad/crypto/error.hpp"

namespace graad {

namespace {

std::array<std::uint8_t, 32> sha256(ByteView data) {
  std::array<std::uint8_t, 32> out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

}  // namespace

Rng::Rng(bool deterministic, const std::array<std::uint8_t, 32>& key)
    : deterministic_(deterministic), key_(key) {}

Rng Rng::system() {
  std::array<std::uint8_t, 32> key{};
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw Error("OS randomness unavailable");
  }
  return Rng(false, key);
}

Rng Rng::seeded(std::uint64_t seed) {
  Bytes s;
  put_u64(s, seed);
  return seeded(s);
}

Rng Rng::seeded(ByteView seed) {
  FieldWriter w;
  w.add("graad/rng/seed").add(seed);
  return Rng(true, sha256(w.bytes()));
}

void Rng::refill() {
  if (deterministic_) {
    Bytes in(key_.begin(), key_.end());
    put_u64(in, counter_++);
    pool_ = sha256(in);
  } else if (RAND_bytes(pool_.data(), static_cast<int>(pool_.size())) != 1) {
    throw Error("OS randomness unavailable");
  }
  pool_used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (pool_used_ == pool_.size()) refill();
    b = pool_[pool_used_++];
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

Block128 Rng::block() {
  Block128 out{};
  fill(out);
  return out;
}

std::uint64_t Rng::u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

mpz_class Rng::below(const mpz_class& bound) {
  if (sgn(bound) <= 0) throw InvalidArgument("Rng::below: bound must be positive");
  std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  std::size_t nbytes = (bits + 7) / 8;
  unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
  Bytes buf(nbytes);
  for (;;) {
    fill(buf);
    buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
    mpz_class v = mpz_from_bytes(buf);
    if (v < bound) return v;
  }
}

mpz_class Rng::nonzero_below(const mpz_class& bound) {
  if (bound <= 1) throw InvalidArgument("Rng::nonzero_below: bound must exceed 1");
  for (;;) {
    mpz_class v = below(bound);
    if (sgn(v) != 0) return v;
  }
}

Rng Rng::fork(std::string_view label) const {
  FieldWriter w;
  w.add("graad/rng/fork").add(key_).add(label);
  if (!deterministic_) {
    Rng fresh = Rng::system();
    w.add(fresh.key_);
  }
  return Rng(deterministic_, sha256(w.bytes()));
}

}  // namespace graad
