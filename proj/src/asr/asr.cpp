#include "graad/asr/asr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace graad::asr {

std::string to_string(Mode m) { return m == Mode::na ? "na" : "cn"; }

Mode parse_mode(const std::string& s) {
  if (s == "na" || s == "NA") return Mode::na;
  if (s == "cn" || s == "CN") return Mode::cn;
  throw InvalidArgument("unknown ASR mode: " + s);
}

QueueModel QueueModel::from_ratios(double c_t, double c_rd, double c_r, double service) {
  if (!(c_t > 0) || !(c_rd > 0) || c_r < 0 || !(service > 0)) {
    throw InvalidArgument("ratios and service time must be positive");
  }
  QueueModel m;
  m.service = service;
  m.lambda_t = 1.0 / (c_t * service);
  m.lambda_rd = 1.0 / (c_rd * service);
  m.lambda_r = c_r > 0 ? 1.0 / (c_r * service) : 0.0;
  return m;
}

namespace {

void check(const QueueModel& m, bool need_r) {
  if (!(m.lambda_t > 0) || !(m.lambda_rd > 0) || !(m.service > 0) ||
      (need_r && !(m.lambda_r > 0))) {
    throw InvalidArgument("queue model parameters must be positive");
  }
  if (m.rho() >= 1) throw StabilityError("unstable queue: rho = lambda_t * T_s >= 1");
}

// e^{-2 s T} (1 - rho) s / (s - lambda_t (1 - e^{-s T}))
double factor(double s, const QueueModel& m) {
  double t = m.service;
  double denom = s + m.lambda_t * std::expm1(-s * t);
  return std::exp(-2 * s * t) * (1 - m.rho()) * s / denom;
}

}  // namespace

double asr_na_analytic(const QueueModel& m) {
  check(m, false);
  return factor(m.lambda_rd, m);
}

double asr_cn_analytic(const QueueModel& m) {
  check(m, true);
  return factor(m.lambda_rd, m) * factor(m.lambda_r, m);
}

double asr_analytic(Mode mode, const QueueModel& m) {
  return mode == Mode::na ? asr_na_analytic(m) : asr_cn_analytic(m);
}

double service_capacity(const QueueModel& m) {
  if (!(m.service > 0)) throw InvalidArgument("service time must be positive");
  return 1.0 / m.service;
}

// ---- RNG -------------------------------------------------------------------

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : state_(mix(seed ^ mix(stream_id + kGolden))) {}

std::uint64_t Stream::next() {
  state_ += kGolden;
  return mix(state_);
}

double Stream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Stream::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

// ---- simulator ---------------------------------------------------------------

std::string stability_warning(const QueueModel& m) {
  if (m.rho() >= 1) {
    return "warning: rho = " + format_g6(m.rho()) + " >= 1, queue is unstable";
  }
  return {};
}

SimResult simulate_asr(const SimConfig& cfg) {
  if (cfg.arrivals == 0) throw InvalidArgument("simulate_asr: zero arrivals");
  const QueueModel& m = cfg.model;
  if (!(m.lambda_t > 0) || !(m.lambda_rd > 0) || !(m.service > 0) ||
      (cfg.mode == Mode::cn && !(m.lambda_r > 0))) {
    throw InvalidArgument("queue model parameters must be positive");
  }
  Stream arrivals(cfg.seed, 0), rd(cfg.seed, 1), r(cfg.seed, 2);
  const double t_s = m.service;
  const double inf = std::numeric_limits<double>::infinity();

  SimResult out;
  out.arrivals = cfg.arrivals;
  double now = 0;        // arrival time of the current customer
  double free_at = 0;    // when the server finishes its current work
  double wait_sum = 0;
  std::uint64_t served = 0;
  for (std::uint64_t n = 0; n < cfg.arrivals; ++n) {
    now += arrivals.exponential(m.lambda_t);
    double t_rd = rd.exponential(m.lambda_rd);
    double t_r = cfg.mode == Mode::cn ? r.exponential(m.lambda_r) : inf;
    double wait = std::max(0.0, free_at - now);

    if (cfg.reneging && std::min(t_rd, t_r) < wait) {
      ++out.reneged;
      (t_rd <= t_r ? out.fail_rd : out.fail_r) += 1;
      continue;
    }
    free_at = now + wait + t_s;
    wait_sum += wait;
    ++served;

    double need = wait + 2 * t_s;
    if (t_rd < need) {
      ++out.fail_rd;
    } else if (t_r < need) {
      ++out.fail_r;
    } else {
      ++out.successes;
    }
  }
  double n = static_cast<double>(cfg.arrivals);
  out.asr = static_cast<double>(out.successes) / n;
  out.ci_half = 1.96 * std::sqrt(out.asr * (1 - out.asr) / n);
  out.mean_wait = served ? wait_sum / static_cast<double>(served) : 0;
  return out;
}

double md1_mean_wait(const QueueModel& m) {
  if (m.rho() >= 1) throw StabilityError("unstable queue: rho = lambda_t * T_s >= 1");
  return m.lambda_t * m.service * m.service / (2 * (1 - m.rho()));
}

// ---- sweep -------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix(seed + mix(index ^ 0x5eedULL));
}

std::vector<SweepRow> asr_sweep(const std::vector<SweepPoint>& grid, std::uint64_t arrivals,
                                std::uint64_t seed) {
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SweepPoint& p = grid[k];
    QueueModel m = QueueModel::from_ratios(p.c_t, p.c_rd, p.mode == Mode::cn ? p.c_r : 0);
    SweepRow row{p, asr_analytic(p.mode, m), 0, 0, arrivals, derive_seed(seed, k)};
    if (arrivals > 0) {
      SimResult s = simulate_asr(SimConfig{m, p.mode, arrivals, row.seed, false});
      row.sim = s.asr;
      row.ci_half = s.ci_half;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations(
    const std::vector<SweepRow>& rows) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const SweepPoint& p = rows[a].point;
      const SweepPoint& q = rows[b].point;
      if (p.mode != q.mode) continue;
      bool cn = p.mode == Mode::cn;
      int differ = (p.c_t != q.c_t) + (p.c_rd != q.c_rd) + (cn && p.c_r != q.c_r);
      if (differ != 1) continue;
      bool larger = p.c_t > q.c_t || p.c_rd > q.c_rd || (cn && p.c_r > q.c_r);
      if (larger && rows[a].analytic < rows[b].analytic - 1e-12) bad.emplace_back(a, b);
    }
  }
  return bad;
}

std::string format_g6(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "mode,c_t,c_rd,c_r,analytic,sim,ci_half,arrivals,seed\n";
  for (const auto& r : rows) {
    bool cn = r.point.mode == Mode::cn;
    out += to_string(r.point.mode) + "," + format_g6(r.point.c_t) + "," +
           format_g6(r.point.c_rd) + "," + (cn ? format_g6(r.point.c_r) : "") + "," +
           format_g6(r.analytic) + "," + (r.arrivals ? format_g6(r.sim) : "") + "," +
           (r.arrivals ? format_g6(r.ci_half) : "") + "," + std::to_string(r.arrivals) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace graad::asr
