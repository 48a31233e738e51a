#include "graad/crypto/bytes.hpp"

#include <algorithm>

namespace graad {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

Bytes xor_bytes(ByteView a, ByteView b) {
  if (a.size() != b.size()) throw InvalidArgument("xor of unequal lengths");
  Bytes out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Block128 xor_block(const Block128& a, const Block128& b) {
  Block128 out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bytes concat(std::initializer_list<ByteView> parts) {
  Bytes out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Bytes mpz_to_bytes(const mpz_class& v, std::size_t width) {
  if (sgn(v) < 0) throw InvalidArgument("negative integer cannot be encoded");
  std::size_t needed = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (sgn(v) == 0) needed = 0;
  if (needed > width) throw InvalidArgument("integer exceeds encoding width");
  Bytes out(width, 0);
  std::size_t count = 0;
  if (needed > 0) {
    mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0,
               v.get_mpz_t());
  }
  return out;
}

mpz_class mpz_from_bytes(ByteView data) {
  mpz_class v;
  if (!data.empty()) mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  return v;
}

std::size_t byte_width(const mpz_class& modulus) {
  return (mpz_sizeinbase(modulus.get_mpz_t(), 2) + 7) / 8;
}

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint16_t get_u16(ByteView in) {
  if (in.size() < 2) throw DecodeError("truncated u16");
  return static_cast<std::uint16_t>((in[0] << 8) | in[1]);
}

std::uint32_t get_u32(ByteView in) {
  if (in.size() < 4) throw DecodeError("truncated u32");
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) |
         (std::uint32_t{in[2]} << 8) | std::uint32_t{in[3]};
}

FieldWriter& FieldWriter::add(ByteView field) {
  put_u32(buf_, static_cast<std::uint32_t>(field.size()));
  buf_.insert(buf_.end(), field.begin(), field.end());
  return *this;
}

FieldWriter& FieldWriter::add(std::string_view text) {
  return add(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()),
                      text.size()));
}

FieldWriter& FieldWriter::add_u64(std::uint64_t v) {
  Bytes tmp;
  put_u64(tmp, v);
  return add(tmp);
}

ByteView FieldReader::next() {
  std::uint32_t len = get_u32(data_.subspan(pos_));
  pos_ += 4;
  if (data_.size() - pos_ < len) throw DecodeError("truncated field");
  ByteView out = data_.subspan(pos_, len);
  pos_ += len;
  return out;
}

std::string FieldReader::next_string() {
  ByteView v = next();
  return std::string(v.begin(), v.end());
}

std::uint64_t FieldReader::next_u64() {
  ByteView v = next();
  if (v.size() != 8) throw DecodeError("u64 field has wrong width");
  std::uint64_t out = 0;
  for (auto b : v) out = (out << 8) | b;
  return out;
}

void FieldReader::finish() const {
  if (!done()) throw DecodeError("trailing bytes");
}

}  // namespace graad
