#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "graad/crypto/error.hpp"

namespace graad {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// 128-bit quantities used throughout the protocols (ID, AID, GID, K, sid, R).
using Block128 = std::array<std::uint8_t, 16>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> to_array(ByteView data);

Bytes to_bytes(std::string_view s);
inline Bytes to_bytes(ByteView v) { return Bytes(v.begin(), v.end()); }

// Byte-wise XOR of equal-length inputs.
Bytes xor_bytes(ByteView a, ByteView b);
Block128 xor_block(const Block128& a, const Block128& b);

Bytes concat(std::initializer_list<ByteView> parts);

// Fixed-width big-endian encoding; throws InvalidArgument if the value does
// not fit or is negative.
Bytes mpz_to_bytes(const mpz_class& v, std::size_t width);
mpz_class mpz_from_bytes(ByteView data);
std::size_t byte_width(const mpz_class& modulus);

void put_u16(Bytes& out, std::uint16_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
std::uint16_t get_u16(ByteView in);
std::uint32_t get_u32(ByteView in);

// Length-prefixed field concatenation: every field is written as a 4-byte
// big-endian length followed by its bytes. All hash inputs use this layout.
class FieldWriter {
 public:
  FieldWriter& add(ByteView field);
  FieldWriter& add(std::string_view text);
  FieldWriter& add_u64(std::uint64_t v);
  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Inverse of FieldWriter; throws DecodeError on truncation.
class FieldReader {
 public:
  explicit FieldReader(ByteView data) : data_(data) {}
  ByteView next();
  std::string next_string();
  std::uint64_t next_u64();
  bool done() const { return pos_ == data_.size(); }
  // Throws unless every byte was consumed.
  void finish() const;

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

template <std::size_t N>
std::array<std::uint8_t, N> to_array(ByteView data) {
  std::array<std::uint8_t, N> out{};
  if (data.size() != N) {
    throw DecodeError("expected " + std::to_string(N) + " bytes, got " +
                            std::to_string(data.size()));
  }
  std::copy(data.begin(), data.end(), out.begin());
  return out;
}

}  // namespace graad
