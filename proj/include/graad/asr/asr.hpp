#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graad/crypto/error.hpp"

namespace graad::asr {

// rho = lambda_t * service >= 1.
class StabilityError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class Mode { na, cn };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct QueueModel {
  double lambda_t = 0;   // arrival rate
  double lambda_rd = 0;  // D2D residence rate
  double lambda_r = 0;   // eNB residence rate (CN only)
  double service = 1;    // constant service time T_s

  double rho() const { return lambda_t * service; }

  // c_x = mean time / T_s, i.e. lambda_x = 1 / (c_x * T_s).
  static QueueModel from_ratios(double c_t, double c_rd, double c_r = 0, double service = 1);
};

// Closed forms. Both throw InvalidArgument on non-positive parameters and
// StabilityError when rho >= 1.
double asr_na_analytic(const QueueModel& m);
double asr_cn_analytic(const QueueModel& m);
double asr_analytic(Mode mode, const QueueModel& m);

// 1 / T_s: requests the server can complete per unit time.
double service_capacity(const QueueModel& m);

// Counter-based SplitMix64 stream.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id);
  std::uint64_t next();
  double uniform();                  // [0, 1)
  double exponential(double rate);

 private:
  std::uint64_t state_;
};

struct SimConfig {
  QueueModel model;
  Mode mode = Mode::na;
  std::uint64_t arrivals = 1000000;
  std::uint64_t seed = 1;
  bool reneging = false;
};

struct SimResult {
  double asr = 0;
  double ci_half = 0;  // 95% normal approximation
  std::uint64_t arrivals = 0;
  std::uint64_t successes = 0;
  std::uint64_t fail_rd = 0;   // D2D residence expired first
  std::uint64_t fail_r = 0;    // eNB residence expired (CN)
  std::uint64_t reneged = 0;   // subset of the failures, reneging mode only
  double mean_wait = 0;        // mean t_Q over customers that entered service

  bool operator==(const SimResult&) const = default;
};

// FCFS single server, Poisson arrivals, constant service T_s. An arrival
// succeeds iff its residence clock(s) cover t_Q + 2 T_s, the requirement
// behind the closed forms' e^{-2 lambda T_s} factor. Without reneging,
// doomed customers still occupy the server. Throws InvalidArgument when
// arrivals == 0; an unstable model runs anyway (see stability_warning).
SimResult simulate_asr(const SimConfig& cfg);

// Non-empty when the configuration is unstable.
std::string stability_warning(const QueueModel& m);

// M/D/1 Pollaczek-Khinchine mean wait: lambda T^2 / (2 (1 - rho)).
double md1_mean_wait(const QueueModel& m);

struct SweepPoint {
  Mode mode = Mode::na;
  double c_t = 2;
  double c_rd = 10;
  double c_r = 0;  // ignored for NA

  bool operator==(const SweepPoint&) const = default;
};

struct SweepRow {
  SweepPoint point;
  double analytic = 0;
  double sim = 0;
  double ci_half = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t seed = 0;

  bool operator==(const SweepRow&) const = default;
};

// Rows in grid order. Point k simulates with seed derive_seed(seed, k);
// arrivals == 0 skips simulation.
std::vector<SweepRow> asr_sweep(const std::vector<SweepPoint>& grid, std::uint64_t arrivals,
                                std::uint64_t seed);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Pairs of rows (same mode, one ratio differing) where the larger ratio gives
// a smaller analytic value. Empty means monotone.
std::vector<std::pair<std::size_t, std::size_t>> monotonicity_violations(
    const std::vector<SweepRow>& rows);

// `mode,c_t,c_rd,c_r,analytic,sim,ci_half,arrivals,seed`, six significant
// digits, locale-independent.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string format_g6(double v);

}  // namespace graad::asr
