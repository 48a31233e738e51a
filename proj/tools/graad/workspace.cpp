#include "workspace.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace graad::cli {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "graad-workspace v1";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw WorkspaceError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw WorkspaceError("cannot write " + p.string());
  out << text;
}

json read_json(const fs::path& p, const std::string& format) {
  json j;
  try {
    j = json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw WorkspaceError(p.filename().string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format) {
    throw WorkspaceError(p.filename().string() + ": expected format " + format);
  }
  return j;
}

void write_json(const fs::path& p, const json& j) { write_file(p, j.dump(2) + "\n"); }

std::string hex(ByteView b) { return to_hex(b); }
Bytes unhex(const json& j) { return from_hex(j.get<std::string>()); }
Block128 block(const json& j) { return to_array<16>(unhex(j)); }

json sids(const ReplayCache& c) {
  json a = json::array();
  for (const auto& s : c.entries()) a.push_back(hex(s));
  return a;
}

ReplayCache load_sids(const json& a) {
  ReplayCache c;
  for (const auto& s : a) c.insert(block(s));
  return c;
}

json ue_json(const UeRecord& r, const PairingGroup& g) {
  const UeCredentials& c = r.device.creds;
  return json{{"format", "graad-ue v1"},
              {"name", r.name},
              {"id", hex(c.id)},
              {"aid", hex(c.aid)},
              {"gid", hex(c.gid)},
              {"k", hex(c.k)},
              {"ak", hex(c.ak)},
              {"epoch", c.epoch},
              {"d", hex(c.d.serialize())},
              {"kp_x", hex(g.encode_scalar(c.kp.x))},
              {"seen_sids", sids(r.device.seen_sids)}};
}

UeRecord ue_from_json(const json& j, const PairingGroup& g) {
  UeRecord r;
  r.name = j.at("name").get<std::string>();
  UeCredentials& c = r.device.creds;
  c.id = block(j.at("id"));
  c.aid = block(j.at("aid"));
  c.gid = block(j.at("gid"));
  c.k = block(j.at("k"));
  c.ak = block(j.at("ak"));
  c.epoch = j.at("epoch").get<std::uint32_t>();
  c.d = IbePrivateKey::parse(g, unhex(j.at("d")));
  c.kp.x = g.decode_scalar(unhex(j.at("kp_x")));
  c.kp.X = g.generator().pow(c.kp.x);
  r.device.seen_sids = load_sids(j.at("seen_sids"));
  return r;
}

}  // namespace

fs::path resolve_workspace(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GRAAD_WORKSPACE"); env && *env) return env;
  return "graad-ws";
}

Workspace Workspace::create(const fs::path& root, const std::string& backend, std::size_t m,
                            std::size_t w, std::optional<std::uint64_t> seed, bool force) {
  if (fs::exists(root / "workspace.json") && !force) {
    throw InvalidArgument("workspace already exists at " + root.string() + " (use --force)");
  }
  Workspace ws;
  ws.root_ = root;
  ws.backend_ = backend;
  ws.group_ = make_group(backend);
  ws.seed_ = seed;
  Rng rng = ws.next_rng("init");
  std::vector<Block128> gids;
  for (std::size_t i = 0; i < m; ++i) gids.push_back(rng.block());
  ws.auth_.emplace(setup_authorities(ws.group_, m, w, std::move(gids), rng));
  ws.auth_->hss.epoch = 1;

  if (force && fs::exists(root)) {
    fs::remove_all(root / "ues");
    fs::remove_all(root / "transcripts");
  }
  fs::create_directories(root / "ues");
  fs::create_directories(root / "transcripts");
  ws.save();
  return ws;
}

Workspace Workspace::load(const fs::path& root) {
  if (!fs::exists(root / "workspace.json")) {
    throw WorkspaceError("no workspace at " + root.string() + " (run graad init)");
  }
  try {
    json meta = read_json(root / "workspace.json", kFormat);
    Workspace ws;
    ws.root_ = root;
    ws.backend_ = meta.at("backend").get<std::string>();
    ws.group_ = make_group(ws.backend_);
    if (!meta.at("seed").is_null()) ws.seed_ = meta.at("seed").get<std::uint64_t>();
    ws.counter_ = meta.at("counter").get<std::uint64_t>();
    const PairingGroup& g = *ws.group_;

    json params = read_json(root / "params.json", "graad-params v1");
    IbeParams ibe = IbeParams::parse(unhex(params.at("ibe")));
    if (ibe.group->name() != ws.backend_) throw WorkspaceError("params.json: backend mismatch");

    json hj = read_json(root / "hss.json", "graad-hss v1");
    HssState hss{ibe, IbeMasterKey::parse(g, unhex(hj.at("msk"))), {},
                 hj.at("epoch").get<std::uint32_t>(), load_sids(hj.at("seen_sids"))};
    for (const auto& s : hj.at("subscribers")) {
      hss.table.emplace(block(s.at("id")), Subscriber{block(s.at("aid")), block(s.at("k"))});
    }
    if (hss.params.g_pub != g.generator().pow(hss.msk.s)) {
      throw WorkspaceError("hss.json: master key does not match params");
    }

    json pj = read_json(root / "prose.json", "graad-prose v1");
    LinKeypair lin{LinPublicKey::decode(g, unhex(params.at("prose_pk"))),
                   LinSecretKey{g.decode_scalar(unhex(pj.at("lin_xh"))),
                                g.decode_scalar(unhex(pj.at("lin_yh")))}};
    if (lin.pk.u.pow(lin.sk.xh) != lin.pk.h || lin.pk.v.pow(lin.sk.yh) != lin.pk.h) {
      throw WorkspaceError("prose.json: Linear key does not match params");
    }
    ProseState prose{{}, block(pj.at("k_p")), lin,
                     Crl::parse(read_file(root / "crl.txt")),
                     GroupDirectory::parse(read_file(root / "directory.txt"))};
    for (const auto& e : pj.at("groups")) {
      prose.groups.emplace(block(e.at("aid")), block(e.at("gid")));
    }
    ws.auth_.emplace(Authorities{std::move(hss), std::move(prose)});

    if (fs::exists(root / "ues")) {
      for (const auto& entry : fs::directory_iterator(root / "ues")) {
        if (entry.path().extension() != ".json") continue;
        UeRecord r = ue_from_json(read_json(entry.path(), "graad-ue v1"), g);
        if (entry.path().stem() != r.name) {
          throw WorkspaceError(entry.path().filename().string() + ": name mismatch");
        }
        ws.ues_.emplace(r.name, std::move(r));
      }
    }
    return ws;
  } catch (const WorkspaceError&) {
    throw;
  } catch (const std::exception& e) {
    throw WorkspaceError(std::string("corrupt workspace: ") + e.what());
  }
}

void Workspace::save() const {
  const PairingGroup& g = *group_;
  const Authorities& a = *auth_;
  write_json(root_ / "workspace.json",
             json{{"format", kFormat},
                  {"backend", backend_},
                  {"m", a.prose.dir.m()},
                  {"w", a.prose.dir.w()},
                  {"seed", seed_ ? json(*seed_) : json(nullptr)},
                  {"counter", counter_}});
  write_json(root_ / "params.json", json{{"format", "graad-params v1"},
                                         {"ibe", hex(a.hss.params.serialize())},
                                         {"prose_pk", hex(a.prose.lin.pk.encode())}});
  json subs = json::array();
  for (const auto& [id, s] : a.hss.table) {
    subs.push_back(json{{"id", hex(id)}, {"aid", hex(s.aid)}, {"k", hex(s.k)}});
  }
  write_json(root_ / "hss.json", json{{"format", "graad-hss v1"},
                                      {"msk", hex(a.hss.msk.serialize(g))},
                                      {"epoch", a.hss.epoch},
                                      {"subscribers", subs},
                                      {"seen_sids", sids(a.hss.seen_sids)}});
  json groups = json::array();
  for (const auto& [aid, gid] : a.prose.groups) {
    groups.push_back(json{{"aid", hex(aid)}, {"gid", hex(gid)}});
  }
  write_json(root_ / "prose.json", json{{"format", "graad-prose v1"},
                                        {"k_p", hex(a.prose.k_p)},
                                        {"lin_xh", hex(g.encode_scalar(a.prose.lin.sk.xh))},
                                        {"lin_yh", hex(g.encode_scalar(a.prose.lin.sk.yh))},
                                        {"groups", groups}});
  write_file(root_ / "directory.txt", a.prose.dir.serialize());
  write_file(root_ / "crl.txt", a.prose.crl.serialize());
  fs::create_directories(root_ / "ues");
  for (const auto& [name, r] : ues_) write_json(root_ / "ues" / (name + ".json"), ue_json(r, g));
}

Rng Workspace::next_rng(const std::string& label) {
  std::uint64_t n = counter_++;
  if (!seed_) return Rng::system();
  return Rng::seeded(*seed_).fork(label + "#" + std::to_string(n));
}

UeRecord& Workspace::ue(const std::string& name) {
  auto it = ues_.find(name);
  if (it == ues_.end()) throw InvalidArgument("unknown UE: " + name);
  return it->second;
}

void Workspace::add_ue(UeRecord rec) {
  std::string name = rec.name;
  if (!ues_.emplace(name, std::move(rec)).second) throw InvalidArgument("UE exists: " + name);
}

fs::path Workspace::transcript_path(const std::string& stem) const {
  return root_ / "transcripts" / (stem + ".log");
}

}  // namespace graad::cli
