#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graad/crypto/bytes.hpp"

namespace graad {

// magic(0x47 0x44) | version | tag | field count | fields, each field a
// 2-byte big-endian length followed by its bytes.
inline constexpr std::uint8_t kWireVersion = 1;

namespace tag {
inline constexpr std::uint8_t cn1 = 0x11;
inline constexpr std::uint8_t cn2 = 0x12;
inline constexpr std::uint8_t cn3 = 0x13;
inline constexpr std::uint8_t cn4 = 0x14;
inline constexpr std::uint8_t cn_res_i = 0x15;
inline constexpr std::uint8_t cn_res_j = 0x16;
inline constexpr std::uint8_t cn_xres = 0x17;
inline constexpr std::uint8_t cn_xres_i = 0x18;
inline constexpr std::uint8_t cn_abort = 0x1f;

inline constexpr std::uint8_t na_nonce_u = 0x21;
inline constexpr std::uint8_t na_nonce_v = 0x22;
inline constexpr std::uint8_t na_select = 0x23;
inline constexpr std::uint8_t na2 = 0x24;
inline constexpr std::uint8_t na3 = 0x25;
inline constexpr std::uint8_t na4 = 0x26;
inline constexpr std::uint8_t na_sigma2 = 0x27;
inline constexpr std::uint8_t na_abort = 0x2f;
}  // namespace tag

struct Message {
  std::uint8_t tag = 0;
  std::vector<Bytes> fields;

  Bytes encode() const;
  // Throws DecodeError on bad magic/version, truncation or trailing bytes.
  static Message decode(ByteView data);

  // Throws DecodeError unless the tag and field count match.
  const Message& expect(std::uint8_t t, std::size_t count) const;
};

// Step label used by fault-injection flags ("1", "5b", ...); empty for
// abort records and unknown tags.
std::string step_label(std::uint8_t tag);

// Reads the tag byte without a full decode; 0 when the header is damaged.
std::uint8_t peek_tag(ByteView data);

}  // namespace graad
