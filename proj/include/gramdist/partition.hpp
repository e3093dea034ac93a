#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gramdist/slp.hpp"

namespace gramdist {

// Right-hand-side item of a phrase-grammar rule: a phrase (symbol of the augmented
// grammar, length <= tau) or a reference to another middle rule.
struct PhraseItem {
  bool is_phrase = true;
  std::uint32_t id = 0;
};

// Grammar over phrases. Rules may be empty; rule `start` derives the phrase sequence.
class PhraseGrammar {
 public:
  std::uint32_t add_rule(std::span<const PhraseItem> items);
  std::uint32_t start() const noexcept { return start_; }
  void set_start(std::uint32_t r) noexcept { start_ = r; }
  std::size_t rule_count() const noexcept { return offsets_.size() - 1; }
  std::span<const PhraseItem> items(std::uint32_t r) const {
    return {items_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  // Number of phrases rule r derives.
  std::uint64_t phrase_count(std::uint32_t r) const { return counts_[r]; }
  void expand(std::uint32_t r, std::vector<Symbol>& out) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<PhraseItem> items_;
  std::vector<std::uint64_t> counts_;
  std::uint32_t start_ = 0;
};

inline constexpr std::uint32_t kNoSymbol = std::numeric_limits<std::uint32_t>::max();

struct PhrasePartition {
  Slp g_plus;              // input symbols keep their ids; L/R symbols follow
  PhraseGrammar g_p;
  std::vector<Symbol> phrases;           // symbols of g_plus, each of length <= tau
  std::vector<std::uint64_t> boundaries;  // 0 = b_0 < ... < b_p = N
  std::uint64_t tau = 0;
  // Per input symbol with length > tau: L(A), R(A) in g_plus and M(A) in g_p; kNoSymbol otherwise.
  std::vector<Symbol> left, right;
  std::vector<std::uint32_t> middle;

  std::size_t size() const noexcept { return phrases.size(); }
};

// g must be in Chomsky normal form.
PhrasePartition partition(const Slp& g, std::uint64_t tau);
inline std::span<const std::uint64_t> phrase_boundaries(const PhrasePartition& pp) { return pp.boundaries; }

}  // namespace gramdist
