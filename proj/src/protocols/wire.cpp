#include "graad/protocols/wire.hpp"

#include "graad/crypto/error.hpp"

namespace graad {

namespace {
constexpr std::uint8_t kMagic0 = 0x47;
constexpr std::uint8_t kMagic1 = 0x44;
constexpr std::size_t kHeader = 5;
}  // namespace

Bytes Message::encode() const {
  if (fields.size() > 0xff) throw InvalidArgument("too many message fields");
  Bytes out{kMagic0, kMagic1, kWireVersion, tag, static_cast<std::uint8_t>(fields.size())};
  for (const auto& f : fields) {
    if (f.size() > 0xffff) throw InvalidArgument("message field too long");
    put_u16(out, static_cast<std::uint16_t>(f.size()));
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

Message Message::decode(ByteView data) {
  if (data.size() < kHeader) throw DecodeError("message too short");
  if (data[0] != kMagic0 || data[1] != kMagic1) throw DecodeError("bad magic");
  if (data[2] != kWireVersion) throw DecodeError("unsupported wire version");
  Message m;
  m.tag = data[3];
  std::size_t count = data[4];
  std::size_t pos = kHeader;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint16_t len = get_u16(data.subspan(pos));
    pos += 2;
    if (data.size() - pos < len) throw DecodeError("truncated field");
    m.fields.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(pos),
                          data.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  if (pos != data.size()) throw DecodeError("trailing bytes after message");
  return m;
}

const Message& Message::expect(std::uint8_t t, std::size_t count) const {
  if (tag != t) throw DecodeError("unexpected message tag");
  if (fields.size() != count) throw DecodeError("unexpected field count");
  return *this;
}

std::string step_label(std::uint8_t t) {
  switch (t) {
    case tag::cn1: return "1";
    case tag::cn2: return "2";
    case tag::cn3: return "3";
    case tag::cn4: return "4";
    case tag::cn_res_i: return "5";
    case tag::cn_res_j: return "5b";
    case tag::cn_xres: return "6";
    case tag::cn_xres_i: return "6b";
    case tag::na_nonce_u: return "1";
    case tag::na_nonce_v: return "1b";
    case tag::na_select: return "1c";
    case tag::na2: return "2";
    case tag::na3: return "3";
    case tag::na4: return "4";
    case tag::na_sigma2: return "5";
    default: return "";
  }
}

std::uint8_t peek_tag(ByteView data) {
  if (data.size() < kHeader || data[0] != kMagic0 || data[1] != kMagic1) return 0;
  return data[3];
}

}  // namespace graad
