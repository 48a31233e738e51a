#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include <gmpxx.h>

#include "graad/crypto/bytes.hpp"

namespace graad {

// Randomness source passed explicitly to every probabilistic operation.
//
// Two flavours: system() draws from the OS CSPRNG via OpenSSL; seeded()
// expands a seed with SHA-256 in counter mode so that whole protocol runs are
// bit-reproducible in tests and in the CLI's deterministic mode.
class Rng {
 public:
  static Rng system();
  static Rng seeded(std::uint64_t seed);
  static Rng seeded(ByteView seed);

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  Block128 block();
  std::uint64_t u64();

  // Uniform in [0, bound) by rejection sampling; bound must be positive.
  mpz_class below(const mpz_class& bound);
  // Uniform in [1, bound).
  mpz_class nonzero_below(const mpz_class& bound);

  // Independent child stream. For seeded generators the child depends only on
  // (parent key, label), not on how much the parent has been consumed.
  Rng fork(std::string_view label) const;

  bool deterministic() const { return deterministic_; }

 private:
  Rng(bool deterministic, const std::array<std::uint8_t, 32>& key);
  void refill();

  bool deterministic_;
  std::array<std::uint8_t, 32> key_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> pool_{};
  std::size_t pool_used_ = 32;
};

}  // namespace graad
