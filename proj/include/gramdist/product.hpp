#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "gramdist/slp.hpp"

namespace gramdist {

inline constexpr std::size_t kMaxProductArity = 4;

// Equal-length fragments F_i of exp(A_i), one per input, each A_i of length <= tau.
struct RelevantTuple {
  std::array<Symbol, kMaxProductArity> symbols{};
  std::array<std::uint64_t, kMaxProductArity> starts{};
  std::uint64_t length = 0;  // 0 marks symbols with no tuple (the start rule, trivial products)
  int prefix_anchor = -1;    // some F_i that is a prefix of exp(A_i)
  int suffix_anchor = -1;    // some F_i that is a suffix of exp(A_i)
};

// Grammar for the zipped string X_1 ⊗ ... ⊗ X_k. Terminal characters index `tuples`.
struct ProductSlp {
  Slp grammar;
  std::size_t arity = 0;
  std::vector<std::array<Char, kMaxProductArity>> tuples;
  std::vector<RelevantTuple> provenance;  // indexed by product symbol; empty for trivial products
  std::uint64_t tau = 0;
  bool trivial = false;

  std::span<const Char> tuple_of(Symbol terminal) const {
    return {tuples[grammar.terminal_char(terminal)].data(), arity};
  }
  std::vector<std::array<Char, kMaxProductArity>> expand_tuples() const;
};

ProductSlp product_slp(std::span<const Slp> grammars, std::uint64_t tau);
// tau balancing N/tau against k * tau^(k-1) * prod n_i.
std::uint64_t product_tau(std::span<const Slp> grammars);

// Sum of delta over the positions of the zipped string, one bottom-up pass over the grammar.
template <class Delta>
auto additive_aggregate(const ProductSlp& p, Delta&& delta) {
  using Value = std::decay_t<std::invoke_result_t<Delta&, std::span<const Char>>>;
  const Slp& g = p.grammar;
  std::vector<Value> per_tuple(p.tuples.size());
  for (std::size_t t = 0; t < p.tuples.size(); ++t) per_tuple[t] = delta(std::span<const Char>(p.tuples[t].data(), p.arity));
  std::vector<Value> value(g.symbol_count());
  for (Symbol a = 0; a < g.symbol_count(); ++a) {
    if (g.is_terminal(a)) {
      value[a] = per_tuple[g.terminal_char(a)];
      continue;
    }
    Value sum{};
    for (Symbol c : g.rhs(a)) sum += value[c];
    value[a] = sum;
  }
  return value[g.start()];
}

enum class HammingMode { all_equal, median };

std::uint64_t hamming(const Slp& gx, const Slp& gy);
std::uint64_t hamming_multi(std::span<const Slp> grammars, HammingMode mode);

}  // namespace gramdist
