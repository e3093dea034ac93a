#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gramdist/slp.hpp"

namespace gramdist {

// Median k-edit distance of raw strings if it is at most d_cap, else nullopt.
// Furthest-reaching diagonals in the k-dimensional alignment lattice; k in [2, 4].
std::optional<std::int64_t> bounded_k_edit(std::span<const Text> strings, std::uint64_t d_cap);

// Largest q with X_1[j..q] = X_i[j+d_i..q+d_i] for all i > 1 (1-based, q = j-1 when nothing
// extends). offsets holds d_2..d_k.
std::uint64_t slide(std::span<const Text> strings, std::uint64_t j, std::span<const std::int64_t> offsets);

// Representatives for the length-`window` substrings of a text: substring at i is within edit
// distance delta_max of the substring at starts[rep_of[i]] (both truncated at the text end).
struct RepresentativeIndex {
  std::vector<std::uint32_t> rep_of;  // one entry per text position
  std::vector<std::uint64_t> starts;  // empty when every window maps to the empty string
  std::uint64_t window = 0;
  std::uint64_t delta_max = 0;

  bool empty_only() const noexcept { return starts.empty(); }
};

RepresentativeIndex lz77_representatives(std::span<const Char> text, std::uint64_t window, std::uint64_t delta_max);

// Pareto-minimal tuples (delta(X_1, C), ..., delta(X_k, C)) over centers C, inside {0..cap}^k.
using EditTuple = std::vector<std::int64_t>;

struct EditTupleSet {
  std::size_t k = 0;
  std::int64_t cap = 0;
  std::vector<EditTuple> tuples;  // sorted antichain
};

EditTupleSet edit_tuples_exact(std::span<const Text> strings, std::int64_t cap);
EditTupleSet vector_convolve(const EditTupleSet& a, const EditTupleSet& b, std::int64_t cap);
EditTupleSet round_tuples(const EditTupleSet& s, std::int64_t sigma);
// Sorts and drops dominated or out-of-cap members.
void pareto_minimize(EditTupleSet& s);

// Windowing parameters for one distance guess. Windows of X_1 tile it with length tau;
// windows of the other strings start and end at multiples of sigma.
struct WindowScheme {
  std::uint64_t tau = 1;
  double epsilon = 0;
  std::uint64_t guess = 1;
  std::uint64_t sigma = 1;
  std::vector<std::int64_t> delta_levels;  // ascending, tau + level >= 0

  static WindowScheme make(std::uint64_t tau, double epsilon, std::uint64_t guess, std::uint64_t x1_length);
};

// Internal epsilon used by the approximations: epsilon / (19k).
double median_internal_epsilon(double epsilon, std::size_t k);

std::int64_t median_edit_approx(std::span<const Slp> grammars, double epsilon);
std::int64_t center_edit_approx(std::span<const Slp> grammars, double epsilon);

}  // namespace gramdist
