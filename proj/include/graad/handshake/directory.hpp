#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graad/crypto/bytes.hpp"

namespace graad {

// Position of a group in the directory: chunk z, sub-index s within it.
struct GroupSlot {
  std::size_t chunk = 0;
  std::size_t sub = 0;
  bool operator==(const GroupSlot&) const = default;
};

struct MemberSlot {
  GroupSlot group;
  std::size_t index = 0;  // position in the group's member list
};

struct GroupEntry {
  Block128 gid{};
  std::vector<Bytes> members;  // raw identity labels, used as IBE identities
};

// Public roster of m groups split into w chunks of m/w groups each. Text form:
//
//   graad-dir v1 m=<m> w=<w>
//   chunk:<z> sub:<s> gid:<hex>
//     uid:<label hex>
//
// Groups may be empty in the file (a fresh workspace has no members yet);
// the selection functions call require_populated() before use.
class GroupDirectory {
 public:
  // Throws InvalidArgument unless w >= 1 and w divides m; gids.size() == m.
  GroupDirectory(std::size_t m, std::size_t w, std::vector<Block128> gids);

  static GroupDirectory parse(std::string_view text);
  std::string serialize() const;

  std::size_t m() const { return groups_.size(); }
  std::size_t w() const { return w_; }
  std::size_t chunk_size() const { return groups_.size() / w_; }

  const GroupEntry& group(const GroupSlot& slot) const;
  const GroupEntry& group(std::size_t index) const { return groups_.at(index); }
  // Flat group index i = chunk * (m/w) + sub.
  std::size_t index_of(const GroupSlot& slot) const;
  GroupSlot slot_of(std::size_t index) const;

  std::optional<GroupSlot> find_gid(const Block128& gid) const;
  std::optional<MemberSlot> find_member(ByteView label) const;

  void add_member(const Block128& gid, ByteView label);
  // Returns false when the label is not listed.
  bool remove_member(ByteView label);

  std::size_t member_count() const;
  // Throws InvalidArgument if any group has no members.
  void require_populated() const;

 private:
  std::size_t w_;
  std::vector<GroupEntry> groups_;
  std::map<Bytes, std::size_t> member_group_;  // label -> flat group index
};

}  // namespace graad
