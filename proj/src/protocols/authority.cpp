#include "graad/protocols/authority.hpp"

#include <sstream>

#include "graad/crypto/error.hpp"

namespace graad {

Bytes make_label(const Block128& gid, const Block128& aid, std::uint32_t epoch) {
  Bytes out = concat({gid, aid});
  put_u32(out, epoch);
  return out;
}

LabelParts parse_label(ByteView label) {
  if (label.size() != kLabelBytes) throw DecodeError("identity label has wrong length");
  LabelParts p;
  p.gid = to_array<16>(label.subspan(0, 16));
  p.aid = to_array<16>(label.subspan(16, 16));
  p.epoch = get_u32(label.subspan(32));
  return p;
}

Bytes UeCredentials::uid() const { return concat({gid, aid}); }

Bytes UeCredentials::label() const { return make_label(gid, aid, epoch); }

ReplayCache::ReplayCache(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvalidArgument("replay cache capacity must be positive");
}

bool ReplayCache::insert(const Block128& value) {
  if (index_.count(value)) return false;
  if (order_.size() == capacity_) {
    index_.erase(order_.front());
    order_.pop_front();
  }
  order_.push_back(value);
  index_.emplace(value, std::prev(order_.end()));
  return true;
}

std::optional<Block128> HssState::lookup_aid(const Block128& id) const {
  auto it = table.find(id);
  if (it == table.end()) return std::nullopt;
  return it->second.aid;
}

void Crl::add(ByteView label) {
  parse_label(label);
  labels_.emplace(label.begin(), label.end());
}

std::string Crl::serialize() const {
  std::string out = "graad-crl v1\n";
  for (const auto& l : labels_) out += to_hex(l) + "\n";
  return out;
}

Crl Crl::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "graad-crl v1") {
    throw DecodeError("CRL: missing graad-crl v1 header");
  }
  Crl crl;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    crl.add(from_hex(line));
  }
  return crl;
}

Authorities setup_authorities(GroupPtr group, std::size_t m, std::size_t w,
                              std::vector<Block128> gids, Rng& rng) {
  GroupDirectory dir(m, w, std::move(gids));
  auto [params, msk] = ibe_setup(group, rng);
  LinKeypair lin = lin_keygen(*group, rng);
  Block128 k_p = rng.block();
  return Authorities{HssState{params, msk, {}, 0, ReplayCache()},
                     ProseState{{}, k_p, lin, Crl(), std::move(dir)}};
}

UeCredentials register_ue(HssState& hss, ProseState& prose, const Block128& id,
                          const Block128& gid, std::uint32_t epoch, Rng& rng) {
  if (hss.table.count(id)) throw InvalidArgument("register_ue: id already registered");
  if (!prose.dir.find_gid(gid)) throw InvalidArgument("register_ue: unknown group");

  UeCredentials c;
  c.id = id;
  c.gid = gid;
  c.epoch = epoch;
  c.k = rng.block();
  do {
    c.aid = rng.block();
  } while (prose.groups.count(c.aid));
  c.ak = authorization_key(c.aid, c.gid, prose.k_p);
  c.d = ibe_extract(hss.params, hss.msk, c.label());
  c.kp = kp_keygen(*hss.params.group, rng);

  prose.dir.add_member(gid, c.label());
  prose.groups.emplace(c.aid, gid);
  hss.table.emplace(id, Subscriber{c.aid, c.k});
  return c;
}

void revoke_ue(ProseState& prose, ByteView label) {
  if (!prose.dir.remove_member(label)) throw InvalidArgument("revoke_ue: label not registered");
  prose.crl.add(label);
}

Block128 true_tag() {
  Block128 t{};
  t.back() = 0x01;
  return t;
}

Block128 authorization_key(const Block128& aid, const Block128& gid, const Block128& k_p) {
  return xor_block(xor_block(aid, gid), k_p);
}

Digest ack_value(const Block128& ak, const Block128& sid) {
  return hash_h(xor_block(xor_block(ak, sid), true_tag()));
}

Digest delta_value(const Block128& ak, const Block128& sid) {
  return hash_h(xor_block(ak, sid));
}

GroupCheck prose_group_check(const ProseState& prose, const Block128& sid, const Digest& delta_i,
                             const Digest& delta_j, const Block128& aid_i, const Block128& aid_j) {
  auto gi = prose.groups.find(aid_i);
  auto gj = prose.groups.find(aid_j);
  if (gi == prose.groups.end() || gj == prose.groups.end()) {
    throw InvalidArgument("prose_group_check: unknown AID");
  }
  GroupCheck out;
  if (gi->second != gj->second) return out;
  Block128 ak_i = authorization_key(aid_i, gi->second, prose.k_p);
  Block128 ak_j = authorization_key(aid_j, gj->second, prose.k_p);
  if (delta_value(ak_i, sid) != delta_i || delta_value(ak_j, sid) != delta_j) return out;
  out.same_group = true;
  out.ack_i = ack_value(ak_i, sid);
  out.ack_j = ack_value(ak_j, sid);
  return out;
}

}  // namespace graad
