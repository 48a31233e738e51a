#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "graad/crypto/hash.hpp"
#include "graad/crypto/sym.hpp"
#include "graad/dualenc/dualenc.hpp"
#include "graad/handshake/directory.hpp"
#include "graad/ibe/ibe.hpp"

namespace graad {

// Identity label used as the IBE identity and directory entry:
// GID(16) || AID(16) || epoch(4, big-endian).
inline constexpr std::size_t kLabelBytes = 36;

Bytes make_label(const Block128& gid, const Block128& aid, std::uint32_t epoch);

struct LabelParts {
  Block128 gid{};
  Block128 aid{};
  std::uint32_t epoch = 0;
};
// Throws DecodeError on a wrong length.
LabelParts parse_label(ByteView label);

struct UeCredentials {
  Block128 id{};
  Block128 aid{};
  Block128 gid{};
  SymKey k{};
  Block128 ak{};  // AID ^ GID ^ K_P
  std::uint32_t epoch = 0;
  IbePrivateKey d;
  KpKeypair kp;

  Bytes uid() const;    // GID || AID
  Bytes label() const;  // UID || epoch
};

// Bounded seen-set with least-recently-inserted eviction.
class ReplayCache {
 public:
  explicit ReplayCache(std::size_t capacity = std::size_t{1} << 16);
  // False when the value was already present (the entry is not refreshed).
  bool insert(const Block128& value);
  bool contains(const Block128& value) const { return index_.count(value) != 0; }
  std::size_t size() const { return order_.size(); }
  // Oldest first.
  const std::list<Block128>& entries() const { return order_; }

 private:
  std::size_t capacity_;
  std::list<Block128> order_;
  std::map<Block128, std::list<Block128>::iterator> index_;
};

struct Subscriber {
  Block128 aid{};
  SymKey k{};
};

struct HssState {
  IbeParams params;
  IbeMasterKey msk;
  std::map<Block128, Subscriber> table;  // ID -> (AID, K)
  std::uint32_t epoch = 0;
  ReplayCache seen_sids;

  std::optional<Block128> lookup_aid(const Block128& id) const;
};

// Revocation list of identity labels. Text form: header line
// "graad-crl v1", then one hex label per line.
class Crl {
 public:
  void add(ByteView label);
  bool contains(ByteView label) const { return labels_.count(Bytes(label.begin(), label.end())) != 0; }
  std::size_t size() const { return labels_.size(); }
  const std::set<Bytes>& labels() const { return labels_; }

  std::string serialize() const;
  static Crl parse(std::string_view text);

  bool operator==(const Crl&) const = default;

 private:
  std::set<Bytes> labels_;
};

struct ProseState {
  std::map<Block128, Block128> groups;  // AID -> GID
  Block128 k_p{};
  LinKeypair lin;
  Crl crl;
  GroupDirectory dir;
};

// Public parameters every UE holds.
struct SystemParams {
  IbeParams ibe;
  LinPublicKey prose_pk;

  const PairingGroup& group() const { return *ibe.group; }
};

struct Authorities {
  HssState hss;
  ProseState prose;

  SystemParams params() const { return {hss.params, prose.lin.pk}; }
};

// Fresh HSS and ProSe keys over an empty directory with the given GIDs.
Authorities setup_authorities(GroupPtr group, std::size_t m, std::size_t w,
                              std::vector<Block128> gids, Rng& rng);

// Throws InvalidArgument for a duplicate id or a GID not in the directory.
UeCredentials register_ue(HssState& hss, ProseState& prose, const Block128& id,
                          const Block128& gid, std::uint32_t epoch, Rng& rng);

// Throws InvalidArgument when the label is not a current directory member.
void revoke_ue(ProseState& prose, ByteView label);

// TRUE-TAG: fifteen zero bytes then 0x01.
Block128 true_tag();

Block128 authorization_key(const Block128& aid, const Block128& gid, const Block128& k_p);

// ack = H(AK ^ sid ^ TRUE-TAG).
Digest ack_value(const Block128& ak, const Block128& sid);

// delta = H(AK ^ sid).
Digest delta_value(const Block128& ak, const Block128& sid);

struct GroupCheck {
  bool same_group = false;
  Digest ack_i{};
  Digest ack_j{};
};

// Throws InvalidArgument for unknown AIDs. Besides G(AID_i) == G(AID_j) the
// check also requires each delta to match H(AK ^ sid) for its AID.
GroupCheck prose_group_check(const ProseState& prose, const Block128& sid, const Digest& delta_i,
                             const Digest& delta_j, const Block128& aid_i, const Block128& aid_j);

}  // namespace graad
