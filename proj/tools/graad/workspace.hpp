#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "graad/protocols/cn.hpp"

namespace graad::cli {

namespace fs = std::filesystem;

// Anything wrong with the files on disk; maps to exit code 3.
class WorkspaceError : public Error {
 public:
  using Error::Error;
};

struct UeRecord {
  std::string name;
  UeDevice device;
};

// On-disk layout:
//   workspace.json  backend, m, w, seed, op counter
//   params.json     IBE params and ProSe's Linear public key
//   hss.json        msk, subscriber table, seen sids
//   prose.json      K_P, Linear secret key, AID -> GID map
//   directory.txt   graad-dir v1
//   crl.txt         graad-crl v1
//   ues/<name>.json UE credentials
//   transcripts/    run logs
class Workspace {
 public:
  static Workspace create(const fs::path& root, const std::string& backend, std::size_t m,
                          std::size_t w, std::optional<std::uint64_t> seed, bool force);
  static Workspace load(const fs::path& root);
  void save() const;

  const fs::path& root() const { return root_; }
  const std::string& backend() const { return backend_; }
  GroupPtr group() const { return group_; }
  Authorities& auth() { return *auth_; }
  const Authorities& auth() const { return *auth_; }
  SystemParams params() const { return auth_->params(); }

  // Seeded workspaces hand out one reproducible stream per command.
  Rng next_rng(const std::string& label);
  // Number of next_rng calls so far; names transcripts.
  std::uint64_t op_count() const { return counter_; }

  bool has_ue(const std::string& name) const { return ues_.count(name) != 0; }
  UeRecord& ue(const std::string& name);
  void add_ue(UeRecord rec);
  const std::map<std::string, UeRecord>& ues() const { return ues_; }

  fs::path transcript_path(const std::string& stem) const;

 private:
  fs::path root_;
  std::string backend_;
  GroupPtr group_;
  std::optional<std::uint64_t> seed_;
  std::uint64_t counter_ = 0;
  std::optional<Authorities> auth_;
  std::map<std::string, UeRecord> ues_;
};

// Workspace path from --workspace, else $GRAAD_WORKSPACE, else ./graad-ws.
fs::path resolve_workspace(const std::string& flag);

}  // namespace graad::cli
