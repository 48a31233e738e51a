#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "graad/asr/asr.hpp"
#include "graad/protocols/na.hpp"
#include "workspace.hpp"

using namespace graad;
using namespace graad::cli;

namespace {

// Non-zero exit for a protocol or verification outcome, not a bug.
struct Outcome {
  int code;
};

std::string fingerprint(ByteView key) {
  Digest d = sha256(key);
  return to_hex(ByteView(d).first(8));
}

std::string normalize_step(std::string s) {
  if (s.rfind("step", 0) == 0) s = s.substr(4);
  if (s.empty()) throw InvalidArgument("empty step label");
  return s;
}

// step3:byte0[:mask0x80]
FaultPlan::Tamper parse_tamper(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 2 || parts.size() > 3 || parts[1].rfind("byte", 0) != 0) {
    throw InvalidArgument("--tamper expects stepS:byteB[:maskM], got " + spec);
  }
  FaultPlan::Tamper t;
  t.step = normalize_step(parts[0]);
  try {
    t.byte = std::stoul(parts[1].substr(4));
    if (parts.size() == 3) {
      std::string m = parts[2].rfind("mask", 0) == 0 ? parts[2].substr(4) : parts[2];
      unsigned long v = std::stoul(m, nullptr, 0);
      if (v == 0 || v > 0xff) throw InvalidArgument("tamper mask must be 1..255");
      t.mask = static_cast<std::uint8_t>(v);
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("--tamper expects stepS:byteB[:maskM], got " + spec);
  }
  return t;
}

void check_name(const std::string& name) {
  if (name.empty() || name.size() > 64) throw InvalidArgument("UE name must be 1..64 chars");
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      throw InvalidArgument("UE name may only contain letters, digits, '-' and '_'");
    }
  }
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + p.string());
  out << text;
}

std::string describe_group(const GroupDirectory& dir, std::size_t index) {
  GroupSlot s = dir.slot_of(index);
  return "group " + std::to_string(index) + " (chunk " + std::to_string(s.chunk) + ", sub " +
         std::to_string(s.sub) + ", gid " + to_hex(dir.group(index).gid) + ")";
}

// ---- commands ---------------------------------------------------------------

struct Globals {
  std::string workspace;
};

int cmd_init(const Globals& g, const std::string& backend, std::size_t m, std::size_t w,
             std::optional<std::uint64_t> seed, bool force) {
  fs::path root = resolve_workspace(g.workspace);
  Workspace ws = Workspace::create(root, backend, m, w, seed, force);
  std::cout << "initialized " << root.string() << ": backend=" << backend << " m=" << m
            << " w=" << w << (seed ? " seed=" + std::to_string(*seed) : "") << "\n";
  return kAccept;
}

int cmd_register(const Globals& g, const std::string& name, std::size_t group,
                 const std::string& id_hex) {
  check_name(name);
  Workspace ws = Workspace::load(resolve_workspace(g.workspace));
  if (ws.has_ue(name)) throw InvalidArgument("UE already registered: " + name);
  auto& a = ws.auth();
  if (group >= a.prose.dir.m()) throw InvalidArgument("group index out of range");
  Block128 id{};
  if (id_hex.empty()) {
    Digest d = sha256(to_bytes("graad-ue:" + name));
    std::copy_n(d.begin(), id.size(), id.begin());
  } else {
    id = to_array<16>(from_hex(id_hex));
  }
  Rng rng = ws.next_rng("register");
  UeCredentials c =
      register_ue(a.hss, a.prose, id, a.prose.dir.group(group).gid, a.hss.epoch, rng);
  std::string label = to_hex(c.label());
  ws.add_ue(UeRecord{name, UeDevice{std::move(c), ReplayCache()}});
  ws.save();
  std::cout << name << " " << label << "\n";
  return kAccept;
}

int cmd_revoke(const Globals& g, const std::string& name, const std::string& label_hex) {
  Workspace ws = Workspace::load(resolve_workspace(g.workspace));
  Bytes label = name.empty() ? from_hex(label_hex) : ws.ue(name).device.creds.label();
  revoke_ue(ws.auth().prose, label);
  ws.save();
  std::cout << "revoked " << to_hex(label) << "\ncrl size " << ws.auth().prose.crl.size() << "\n";
  return kAccept;
}

int cmd_dir(const Globals& g) {
  Workspace ws = Workspace::load(resolve_workspace(g.workspace));
  std::cout << ws.auth().prose.dir.serialize();
  return kAccept;
}

struct RunOptions {
  std::string mode, a, b;
  std::vector<std::string> drop, replay;
  std::string tamper;
  std::string transcript;
};

int cmd_run(const Globals& g, const RunOptions& o) {
  if (o.a == o.b) throw InvalidArgument("run needs two distinct UEs");
  FaultPlan plan;
  for (const auto& s : o.drop) plan.drop.push_back(normalize_step(s));
  for (const auto& s : o.replay) plan.replay.push_back(normalize_step(s));
  if (!o.tamper.empty()) plan.tamper = parse_tamper(o.tamper);

  Workspace ws = Workspace::load(resolve_workspace(g.workspace));
  UeRecord& ra = ws.ue(o.a);
  UeRecord& rb = ws.ue(o.b);
  Rng rng = ws.next_rng("run");
  SystemParams params = ws.params();
  fs::path out = o.transcript.empty()
                     ? ws.transcript_path(std::to_string(ws.op_count()) + "-" + o.mode + "-" +
                                          o.a + "-" + o.b)
                     : fs::path(o.transcript);

  bool ok = false;
  std::string text;
  if (o.mode == "cn") {
    CnOutcome r = run_cn(params, ws.auth(), ra.device, rb.device, rng, plan);
    ok = r.accepted();
    text = r.transcript.text();
    if (ok) {
      std::cout << "session: accepted\n";
    } else {
      std::cout << "session: aborted (" << r.reason << ")\n";
    }
    if (r.key_i) std::cout << "key " << o.a << ": " << fingerprint(r.key_i->encode()) << "\n";
    if (r.key_j) std::cout << "key " << o.b << ": " << fingerprint(r.key_j->encode()) << "\n";
  } else if (o.mode == "na") {
    const auto& p = ws.auth().prose;
    NaView view{params, p.dir, p.crl};
    NaOutcome r = run_na(view, ra.device.creds, view, rb.device.creds, rng, plan);
    ok = r.accepted();
    text = r.transcript.text();
    if (ok) {
      std::cout << "session: accepted\n";
      std::cout << "key " << o.a << ": " << fingerprint(*r.key_u) << "\n";
      std::cout << "key " << o.b << ": " << fingerprint(*r.key_v) << "\n";
      text += "! evidence " + to_hex(r.evidence->encode()) + "\n";
    } else {
      // Both sides only ever see the generic abort record.
      std::cout << "session: aborted\n";
    }
  } else {
    throw InvalidArgument("mode must be cn or na");
  }
  fs::create_directories(out.parent_path().empty() ? fs::path(".") : out.parent_path());
  write_text(out, text);
  ws.save();
  std::cout << "transcript: " << out.string() << "\n";
  return ok ? kAccept : kFailure;
}

// Evidence comes from the "! evidence <hex>" line of an NA transcript, or a
// file holding only the hex.
Bytes read_evidence(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InvalidArgument("cannot read " + p.string());
  std::string line, hex;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  for (const auto& l : lines) {
    if (l.rfind("! evidence ", 0) == 0) hex = l.substr(11);
  }
  if (hex.empty() && lines.size() == 1) hex = lines[0];
  if (hex.empty()) throw VerifyError("no evidence in " + p.string());
  try {
    return from_hex(hex);
  } catch (const Error&) {
    throw VerifyError("evidence is not valid hex");
  }
}

int cmd_trace(const Globals& g, const std::string& file) {
  Workspace ws = Workspace::load(resolve_workspace(g.workspace));
  Bytes raw = read_evidence(file);
  TraceEvidence ev;
  try {
    ev = TraceEvidence::decode(*ws.group(), raw);
  } catch (const Error& e) {
    std::cout << "trace: rejected (malformed: " << e.what() << ")\n";
    return kFailure;
  }
  TraceOutcome t = trace_session(ws.auth().prose, ev);
  if (!t.accepted()) {
    std::cout << "trace: rejected (" << to_string(t.reject) << ")\n";
    return kFailure;
  }
  const auto& dir = ws.auth().prose.dir;
  const auto& grp = *ws.group();
  std::cout << "trace: accepted\n"
            << "gamma " << to_hex(grp.encode_scalar(t.result->gamma)) << "\n"
            << "delta " << to_hex(grp.encode_scalar(t.result->delta)) << "\n"
            << "U " << describe_group(dir, t.result->i_u) << "\n"
            << "V " << describe_group(dir, t.result->i_v) << "\n";
  return kAccept;
}

struct AsrOptions {
  std::string mode = "na";
  double c_t = 2, c_rd = 10, c_r = 0;
  bool analytic = false, sim = false, reneging = false;
  std::uint64_t arrivals = 100000, seed = 1;
  std::string sweep, out;
  double service_ms = 0;
};

std::vector<asr::SweepPoint> read_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read grid file " + path);
  std::vector<asr::SweepPoint> grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("mode", 0) == 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    if (f.size() < 3 || f.size() > 4) throw InvalidArgument("grid line: mode,c_t,c_rd[,c_r]");
    try {
      asr::SweepPoint p{asr::parse_mode(f[0]), std::stod(f[1]), std::stod(f[2]),
                        f.size() == 4 && !f[3].empty() ? std::stod(f[3]) : 0};
      if (p.mode == asr::Mode::cn && !(p.c_r > 0)) throw InvalidArgument("CN point needs c_r");
      grid.push_back(p);
    } catch (const std::logic_error&) {
      throw InvalidArgument("grid line not numeric: " + line);
    }
  }
  if (grid.empty()) throw InvalidArgument("grid file has no points");
  return grid;
}

int cmd_asr(const AsrOptions& o) {
  std::vector<asr::SweepRow> rows;
  int code = kAccept;
  if (!o.sweep.empty()) {
    rows = asr::asr_sweep(read_grid(o.sweep), o.arrivals, o.seed);
    auto bad = asr::monotonicity_violations(rows);
    if (bad.empty()) {
      std::cerr << "monotonicity audit: pass (" << rows.size() << " points)\n";
    } else {
      std::cerr << "monotonicity audit: FAIL, " << bad.size() << " inverted pairs\n";
      code = kFailure;
    }
  } else {
    asr::Mode mode = asr::parse_mode(o.mode);
    if (mode == asr::Mode::cn && !(o.c_r > 0)) throw InvalidArgument("CN mode needs --c-r");
    asr::QueueModel m = asr::QueueModel::from_ratios(o.c_t, o.c_rd, mode == asr::Mode::cn ? o.c_r : 0);
    asr::SweepRow row{{mode, o.c_t, o.c_rd, o.c_r}, asr::asr_analytic(mode, m), 0, 0, 0, o.seed};
    if (o.sim || !o.analytic) {
      if (auto w = asr::stability_warning(m); !w.empty()) std::cerr << w << "\n";
      asr::SimResult s = asr::simulate_asr({m, mode, o.arrivals, o.seed, o.reneging});
      row.sim = s.asr;
      row.ci_half = s.ci_half;
      row.arrivals = o.arrivals;
    }
    rows.push_back(row);
    if (o.service_ms > 0) {
      std::cerr << "service capacity: " << asr::format_g6(1000.0 / o.service_ms)
                << " requests/s; arrival rate: "
                << asr::format_g6(1000.0 / (o.c_t * o.service_ms)) << " requests/s\n";
    }
  }
  std::string csv = asr::sweep_csv(rows);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out, csv);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graad: group-anonymous D2D authentication toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--workspace,-C", g.workspace, "workspace directory (default $GRAAD_WORKSPACE or ./graad-ws)");

  std::function<int()> action;

  auto* init = app.add_subcommand("init", "create params, authority keys and an empty directory");
  std::string backend = "a512";
  std::size_t m = 4, w = 2;
  std::optional<std::uint64_t> seed;
  bool force = false;
  init->add_option("--backend,--security", backend, "pairing backend")
      ->check(CLI::IsMember({"toy", "a512"}));
  init->add_option("--m", m, "number of groups")->check(CLI::PositiveNumber);
  init->add_option("--w", w, "number of chunks (must divide m)")->check(CLI::PositiveNumber);
  init->add_option("--seed", seed, "deterministic mode seed");
  init->add_flag("--force", force, "overwrite an existing workspace");
  init->callback([&] {
    action = [&] {
      if (m % w != 0) throw InvalidArgument("w must divide m");
      return cmd_init(g, backend, m, w, seed, force);
    };
  });

  auto* reg = app.add_subcommand("register", "register a UE into a group");
  std::string name, id_hex;
  std::size_t group = 0;
  reg->add_option("name", name)->required();
  reg->add_option("--group", group, "flat group index")->required();
  reg->add_option("--id", id_hex, "128-bit identity (hex); default derived from name");
  reg->callback([&] { action = [&] { return cmd_register(g, name, group, id_hex); }; });

  auto* rev = app.add_subcommand("revoke", "revoke a UE and add its label to the CRL");
  std::string rev_name, rev_label;
  auto* rev_n = rev->add_option("name", rev_name);
  auto* rev_l = rev->add_option("--label", rev_label, "label (hex) instead of a UE name");
  rev_n->excludes(rev_l);
  rev->callback([&] {
    action = [&] {
      if (rev_name.empty() && rev_label.empty()) throw InvalidArgument("revoke needs a name or --label");
      return cmd_revoke(g, rev_name, rev_label);
    };
  });

  auto* dir = app.add_subcommand("dir", "print the group directory");
  dir->callback([&] { action = [&] { return cmd_dir(g); }; });

  auto* run = app.add_subcommand("run", "run one CN or NA session between two UEs");
  RunOptions ro;
  run->add_option("mode", ro.mode)->required()->check(CLI::IsMember({"cn", "na"}));
  run->add_option("ue_a", ro.a)->required();
  run->add_option("ue_b", ro.b)->required();
  run->add_option("--drop", ro.drop, "drop the message of a step (e.g. step3)");
  run->add_option("--replay", ro.replay, "deliver the message of a step twice");
  run->add_option("--tamper", ro.tamper, "flip bits: stepS:byteB[:maskM]");
  run->add_option("--transcript", ro.transcript, "transcript output path");
  run->callback([&] { action = [&] { return cmd_run(g, ro); }; });

  auto* trace = app.add_subcommand("trace", "attribute an NA session from its evidence");
  std::string trace_file;
  trace->add_option("file", trace_file, "NA transcript or evidence hex file")->required();
  trace->callback([&] { action = [&] { return cmd_trace(g, trace_file); }; });

  auto* asr_cmd = app.add_subcommand("asr", "authentication success rate: closed form and simulation");
  AsrOptions ao;
  asr_cmd->add_option("--mode", ao.mode)->check(CLI::IsMember({"na", "cn", "NA", "CN"}));
  asr_cmd->add_option("--c-t", ao.c_t, "mean inter-arrival time / T_s");
  asr_cmd->add_option("--c-rd", ao.c_rd, "mean D2D residence / T_s");
  asr_cmd->add_option("--c-r", ao.c_r, "mean eNB residence / T_s (cn)");
  asr_cmd->add_flag("--analytic", ao.analytic, "closed form only");
  asr_cmd->add_flag("--sim", ao.sim, "also simulate");
  asr_cmd->add_flag("--reneging", ao.reneging, "customers leave when their clock expires in queue");
  asr_cmd->add_option("--arrivals", ao.arrivals)->check(CLI::PositiveNumber);
  asr_cmd->add_option("--seed", ao.seed);
  asr_cmd->add_option("--sweep", ao.sweep, "grid file: mode,c_t,c_rd[,c_r] per line");
  asr_cmd->add_option("--out", ao.out, "write CSV here instead of stdout");
  asr_cmd->add_option("--service-ms", ao.service_ms, "report capacities for this T_s");
  asr_cmd->callback([&] { action = [&] { return cmd_asr(ao); }; });

  auto* bench = app.add_subcommand("bench", "time the primitives behind the protocol cost model");
  BenchOptions bo;
  bench->add_option("--reps", bo.reps)->check(CLI::PositiveNumber);
  bench->add_option("--backend", bo.backend, "default: the workspace backend, else a512")
      ->check(CLI::IsMember({"toy", "a512"}));
  bench->callback([&] {
    action = [&] {
      if (bo.backend.empty()) {
        fs::path root = resolve_workspace(g.workspace);
        bo.backend = fs::exists(root / "workspace.json") ? Workspace::load(root).backend() : "a512";
      }
      return run_bench(bo, std::cout, std::cerr);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    return action();
  } catch (const WorkspaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCorrupt;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
