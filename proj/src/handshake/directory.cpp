#include "graad/handshake/directory.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "graad/crypto/error.hpp"

namespace graad {

namespace {

std::size_t parse_number(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DecodeError("directory: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::string_view strip_prefix(std::string_view token, std::string_view prefix) {
  if (token.substr(0, prefix.size()) != prefix) {
    throw DecodeError("directory: expected '" + std::string(prefix) + "'");
  }
  return token.substr(prefix.size());
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

}  // namespace

GroupDirectory::GroupDirectory(std::size_t m, std::size_t w, std::vector<Block128> gids) : w_(w) {
  if (w == 0 || m == 0 || m % w != 0) throw InvalidArgument("directory: w must divide m");
  if (gids.size() != m) throw InvalidArgument("directory: need exactly m group ids");
  std::set<Block128> unique(gids.begin(), gids.end());
  if (unique.size() != gids.size()) throw InvalidArgument("directory: duplicate group id");
  groups_.reserve(m);
  for (const auto& gid : gids) groups_.push_back(GroupEntry{gid, {}});
}

GroupDirectory GroupDirectory::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw DecodeError("directory: empty file");
  auto head = split_spaces(line);
  if (head.size() != 4 || head[0] != "graad-dir" || head[1] != "v1") {
    throw DecodeError("directory: bad header");
  }
  std::size_t m = parse_number(strip_prefix(head[2], "m="), "m");
  std::size_t w = parse_number(strip_prefix(head[3], "w="), "w");
  if (w == 0 || m == 0 || m % w != 0) throw DecodeError("directory: w must divide m");
  std::size_t cs = m / w;

  std::vector<Block128> gids;
  std::vector<std::vector<Bytes>> members;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == ' ') {
      if (members.empty()) throw DecodeError("directory: member line before any group");
      auto tok = split_spaces(line);
      if (tok.size() != 1) throw DecodeError("directory: bad member line");
      Bytes label = from_hex(strip_prefix(tok[0], "uid:"));
      if (label.empty()) throw DecodeError("directory: empty member label");
      members.back().push_back(std::move(label));
      continue;
    }
    auto tok = split_spaces(line);
    if (tok.size() != 3) throw DecodeError("directory: bad group line");
    std::size_t z = parse_number(strip_prefix(tok[0], "chunk:"), "chunk");
    std::size_t s = parse_number(strip_prefix(tok[1], "sub:"), "sub");
    if (z != gids.size() / cs || s != gids.size() % cs) {
      throw DecodeError("directory: groups out of order");
    }
    gids.push_back(to_array<16>(from_hex(strip_prefix(tok[2], "gid:"))));
    members.emplace_back();
  }
  if (gids.size() != m) throw DecodeError("directory: group count does not match m");

  try {
    GroupDirectory dir(m, w, std::move(gids));
    for (std::size_t i = 0; i < m; ++i) {
      for (auto& label : members[i]) {
        if (!dir.member_group_.emplace(label, i).second) {
          throw DecodeError("directory: duplicate member label");
        }
        dir.groups_[i].members.push_back(std::move(label));
      }
    }
    return dir;
  } catch (const InvalidArgument& e) {
    throw DecodeError(e.what());
  }
}

std::string GroupDirectory::serialize() const {
  std::ostringstream out;
  out << "graad-dir v1 m=" << m() << " w=" << w_ << "\n";
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    auto slot = slot_of(i);
    out << "chunk:" << slot.chunk << " sub:" << slot.sub << " gid:" << to_hex(groups_[i].gid)
        << "\n";
    for (const auto& label : groups_[i].members) out << "  uid:" << to_hex(label) << "\n";
  }
  return out.str();
}

const GroupEntry& GroupDirectory::group(const GroupSlot& slot) const {
  return groups_[index_of(slot)];
}

std::size_t GroupDirectory::index_of(const GroupSlot& slot) const {
  if (slot.chunk >= w_ || slot.sub >= chunk_size()) throw InvalidArgument("group slot out of range");
  return slot.chunk * chunk_size() + slot.sub;
}

GroupSlot GroupDirectory::slot_of(std::size_t index) const {
  if (index >= groups_.size()) throw InvalidArgument("group index out of range");
  return GroupSlot{index / chunk_size(), index % chunk_size()};
}

std::optional<GroupSlot> GroupDirectory::find_gid(const Block128& gid) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].gid == gid) return slot_of(i);
  }
  return std::nullopt;
}

std::optional<MemberSlot> GroupDirectory::find_member(ByteView label) const {
  auto hit = member_group_.find(Bytes(label.begin(), label.end()));
  if (hit == member_group_.end()) return std::nullopt;
  const auto& ms = groups_[hit->second].members;
  auto it = std::find_if(ms.begin(), ms.end(), [&](const Bytes& b) {
    return std::equal(b.begin(), b.end(), label.begin(), label.end());
  });
  return MemberSlot{slot_of(hit->second), static_cast<std::size_t>(it - ms.begin())};
}

void GroupDirectory::add_member(const Block128& gid, ByteView label) {
  if (label.empty()) throw InvalidArgument("empty member label");
  auto slot = find_gid(gid);
  if (!slot) throw InvalidArgument("unknown group id " + to_hex(gid));
  if (find_member(label)) throw InvalidArgument("member label already listed");
  std::size_t i = index_of(*slot);
  groups_[i].members.emplace_back(label.begin(), label.end());
  member_group_.emplace(Bytes(label.begin(), label.end()), i);
}

bool GroupDirectory::remove_member(ByteView label) {
  auto pos = find_member(label);
  if (!pos) return false;
  auto& ms = groups_[index_of(pos->group)].members;
  ms.erase(ms.begin() + static_cast<std::ptrdiff_t>(pos->index));
  member_group_.erase(Bytes(label.begin(), label.end()));
  return true;
}

std::size_t GroupDirectory::member_count() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.members.size();
  return n;
}

void GroupDirectory::require_populated() const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].members.empty()) {
      throw InvalidArgument("directory group " + std::to_string(i) + " has no members");
    }
  }
}

}  // namespace graad
