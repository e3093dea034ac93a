#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace gramdist::cli {

struct BenchOptions {
  std::string suite = "all";  // all | quick | perf
  std::vector<std::uint64_t> sizes;
  std::uint64_t seed = 1;
  double epsilon = 0.5;
  bool timing = true;
};

void run_bench(const BenchOptions& options, std::ostream& out);

}  // namespace gramdist::cli
