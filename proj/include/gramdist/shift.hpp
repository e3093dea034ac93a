#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "gramdist/slp.hpp"

namespace gramdist {

// Offsets are for strings 1..k-1 relative to the last string, which stays fixed:
// score = #{i : X_1[(i+d_1) mod N] = ... = X_{k-1}[(i+d_{k-1}) mod N] = X_k[i]}.
struct ShiftResult {
  std::vector<std::uint64_t> offsets;
  std::uint64_t score = 0;
  std::uint64_t distance = 0;  // k * (N - score)
};

// Score of explicit offsets.
std::uint64_t shift_score(std::span<const Text> strings, std::span<const std::uint64_t> offsets);

// In-place iterative radix-2 transform; size must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// score[d] = #{i : x[(i+d) mod N] = y[i]} for every d.
std::vector<std::uint64_t> cyclic_match_counts(std::span<const Char> x, std::span<const Char> y);

ShiftResult shift_match_2(std::span<const Char> x, std::span<const Char> y);
ShiftResult shift_match_k(std::span<const Text> strings, unsigned threads = 1);
ShiftResult shift_match(std::span<const Slp> grammars, unsigned threads = 1);

struct ShiftBracket {
  std::uint64_t lower = 0, upper = 0;
  std::vector<std::vector<std::size_t>> groups;  // 0-based indices into strings 1..k-1
  std::vector<ShiftResult> per_group;             // offsets follow the group's order
};

// Splits X_1..X_{k-1} into `groups` contiguous near-equal groups, each solved together with X_k.
ShiftBracket shift_distance_approx(std::span<const Text> strings, std::size_t groups, unsigned threads = 1);

}  // namespace gramdist
