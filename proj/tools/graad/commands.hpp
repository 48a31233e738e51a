#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace graad::cli {

// Exit codes.
inline constexpr int kAccept = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kCorrupt = 3;

struct BenchOptions {
  std::string backend;
  int reps = 20;
};

// CSV `category,w,mean_us,reps` to out; composition summary to err.
int run_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace graad::cli
