// Python bindings: the ASR model and an in-memory deployment that can run
// CN and NA sessions and trace NA evidence.

#include <map>
#include <optional>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graad/asr/asr.hpp"
#include "graad/crypto/error.hpp"
#include "graad/protocols/cn.hpp"
#include "graad/protocols/na.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace graad;

namespace {

py::bytes to_py(ByteView b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

Bytes from_py(const py::bytes& b) {
  std::string_view s = b;
  return Bytes(s.begin(), s.end());
}

py::int_ to_int(const mpz_class& v) {
  return py::int_(py::reinterpret_steal<py::object>(
      PyLong_FromString(v.get_str(16).c_str(), nullptr, 16)));
}

class PyDeployment {
 public:
  PyDeployment(const std::string& backend, std::size_t m, std::size_t w,
               std::optional<std::uint64_t> seed)
      : rng_(seed ? Rng::seeded(*seed) : Rng::system()),
        auth_(setup(backend, m, w)),
        params_(auth_.params()) {}

  std::string register_ue(const std::string& name, std::size_t group) {
    if (ues_.count(name)) throw InvalidArgument("UE already registered: " + name);
    auto& dir = auth_.prose.dir;
    if (group >= dir.m()) throw InvalidArgument("group index out of range");
    UeCredentials c = graad::register_ue(auth_.hss, auth_.prose, rng_.block(),
                                         dir.group(group).gid, auth_.hss.epoch, rng_);
    std::string label = to_hex(c.label());
    ues_.emplace(name, UeDevice{std::move(c), ReplayCache()});
    return label;
  }

  void revoke(const std::string& name) { revoke_ue(auth_.prose, ue(name).creds.label()); }

  py::dict run_cn(const std::string& a, const std::string& b) {
    CnOutcome o = graad::run_cn(params_, auth_, ue(a), ue(b), rng_);
    py::dict d("accepted"_a = o.accepted(), "reason"_a = o.reason,
               "transcript"_a = o.transcript.text());
    d["key_a"] = o.key_i ? py::object(to_py(o.key_i->encode())) : py::none();
    d["key_b"] = o.key_j ? py::object(to_py(o.key_j->encode())) : py::none();
    return d;
  }

  py::dict run_na(const std::string& a, const std::string& b) {
    NaView view{params_, auth_.prose.dir, auth_.prose.crl};
    NaOutcome o = graad::run_na(view, ue(a).creds, view, ue(b).creds, rng_);
    py::dict d("accepted"_a = o.accepted(), "reason_a"_a = o.reason_u,
               "reason_b"_a = o.reason_v, "transcript"_a = o.transcript.text());
    d["key_a"] = o.key_u ? py::object(to_py(*o.key_u)) : py::none();
    d["key_b"] = o.key_v ? py::object(to_py(*o.key_v)) : py::none();
    d["evidence"] = o.evidence ? py::object(to_py(o.evidence->encode())) : py::none();
    return d;
  }

  py::dict trace(const py::bytes& evidence) {
    TraceOutcome t;
    try {
      t = trace_session(auth_.prose, TraceEvidence::decode(params_.group(), from_py(evidence)));
    } catch (const DecodeError&) {
      t.reject = TraceReject::malformed;
    }
    py::dict d("accepted"_a = t.accepted(), "reject"_a = to_string(t.reject));
    if (t.result) {
      d["gamma"] = to_int(t.result->gamma);
      d["delta"] = to_int(t.result->delta);
      d["group_a"] = t.result->i_u;
      d["group_b"] = t.result->i_v;
    }
    return d;
  }

  std::size_t m() const { return auth_.prose.dir.m(); }
  std::size_t w() const { return auth_.prose.dir.w(); }
  std::string directory() const { return auth_.prose.dir.serialize(); }

 private:
  Authorities setup(const std::string& backend, std::size_t m, std::size_t w) {
    std::vector<Block128> gids;
    for (std::size_t i = 0; i < m; ++i) gids.push_back(rng_.block());
    return setup_authorities(make_group(backend), m, w, std::move(gids), rng_);
  }

  UeDevice& ue(const std::string& name) {
    auto it = ues_.find(name);
    if (it == ues_.end()) throw InvalidArgument("unknown UE: " + name);
    return it->second;
  }

  Rng rng_;
  Authorities auth_;
  SystemParams params_;
  std::map<std::string, UeDevice> ues_;
};

asr::QueueModel model(const std::string& mode, double c_t, double c_rd, double c_r) {
  asr::Mode md = asr::parse_mode(mode);
  if (md == asr::Mode::cn && !(c_r > 0)) throw InvalidArgument("cn mode needs c_r > 0");
  return asr::QueueModel::from_ratios(c_t, c_rd, md == asr::Mode::cn ? c_r : 0);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "graad core: authentication success rate model and D2D sessions";

  py::register_exception<Error>(m, "GraadError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("asr_na_analytic",
        [](double c_t, double c_rd) {
          return asr::asr_na_analytic(asr::QueueModel::from_ratios(c_t, c_rd));
        },
        "c_t"_a, "c_rd"_a);
  m.def("asr_cn_analytic",
        [](double c_t, double c_rd, double c_r) {
          return asr::asr_cn_analytic(asr::QueueModel::from_ratios(c_t, c_rd, c_r));
        },
        "c_t"_a, "c_rd"_a, "c_r"_a);
  m.def("simulate_asr",
        [](const std::string& mode, double c_t, double c_rd, double c_r, std::uint64_t arrivals,
           std::uint64_t seed, bool reneging) {
          asr::SimResult r = asr::simulate_asr(
              {model(mode, c_t, c_rd, c_r), asr::parse_mode(mode), arrivals, seed, reneging});
          return py::dict("asr"_a = r.asr, "ci_half"_a = r.ci_half, "arrivals"_a = r.arrivals,
                          "successes"_a = r.successes, "fail_rd"_a = r.fail_rd,
                          "fail_r"_a = r.fail_r, "reneged"_a = r.reneged,
                          "mean_wait"_a = r.mean_wait);
        },
        "mode"_a, "c_t"_a, "c_rd"_a, "c_r"_a = 0.0, "arrivals"_a = 100000, "seed"_a = 1,
        "reneging"_a = false);
  m.def("md1_mean_wait",
        [](double c_t) { return asr::md1_mean_wait(asr::QueueModel::from_ratios(c_t, 1)); },
        "c_t"_a, "Pollaczek-Khinchine mean wait in units of the service time");

  m.def("sha256", [](const py::bytes& data) { return to_py(sha256(from_py(data))); });

  py::class_<PyDeployment>(m, "Deployment")
      .def(py::init<const std::string&, std::size_t, std::size_t, std::optional<std::uint64_t>>(),
           "backend"_a = "toy", "m"_a = 4, "w"_a = 2, "seed"_a = py::none())
      .def("register", &PyDeployment::register_ue, "name"_a, "group"_a)
      .def("revoke", &PyDeployment::revoke, "name"_a)
      .def("run_cn", &PyDeployment::run_cn, "a"_a, "b"_a)
      .def("run_na", &PyDeployment::run_na, "a"_a, "b"_a)
      .def("trace", &PyDeployment::trace, "evidence"_a)
      .def("directory", &PyDeployment::directory)
      .def_property_readonly("m", &PyDeployment::m)
      .def_property_readonly("w", &PyDeployment::w);
}
