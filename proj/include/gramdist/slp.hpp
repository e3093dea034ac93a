#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gramdist {

using Symbol = std::uint32_t;
using Char = std::uint32_t;
using Text = std::vector<Char>;

// Characters at or above this value never come from user text (code points stop at 0x10FFFF).
inline constexpr Char kSentinelBase = 0x110000;
inline constexpr Char kDollar = kSentinelBase;
inline constexpr Char kMismatch = kSentinelBase + 1;
inline constexpr Char kPad = kSentinelBase + 2;

inline constexpr bool is_sentinel(Char c) noexcept { return c >= kSentinelBase; }

// One grammar rule as supplied by a caller: ids are arbitrary and need not be ordered.
struct RuleSpec {
  std::uint64_t id = 0;
  bool terminal = false;
  Char ch = 0;
  std::vector<std::uint64_t> rhs;
};

class SlpBuilder;

// Immutable straight-line program. Symbols are dense ids in topological order
// (children before parents); terminals carry one character each.
class Slp {
 public:
  Slp() = default;  // empty placeholder; every factory returns a nonempty grammar
  static Slp build(std::span<const RuleSpec> rules, std::uint64_t start);
  static Slp single(Char c);

  std::size_t symbol_count() const noexcept { return lengths_.size(); }
  std::size_t rule_count() const noexcept { return symbol_count() - terminal_count_; }
  std::size_t terminal_count() const noexcept { return terminal_count_; }
  Symbol start() const noexcept { return start_; }
  std::uint64_t length() const noexcept { return lengths_[start_]; }
  std::uint64_t length(Symbol a) const { return lengths_[a]; }

  bool is_terminal(Symbol a) const { return offsets_[a] == offsets_[a + 1]; }
  Char terminal_char(Symbol a) const { return chars_[a]; }
  std::span<const Symbol> rhs(Symbol a) const {
    return {rhs_.data() + offsets_[a], offsets_[a + 1] - offsets_[a]};
  }
  std::uint32_t height(Symbol a) const { return heights_[a]; }
  std::uint32_t depth() const noexcept { return heights_[start_]; }
  bool is_cnf() const;

 private:
  friend class SlpBuilder;

  std::vector<std::uint64_t> lengths_;
  std::vector<std::uint32_t> heights_;
  std::vector<Char> chars_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Symbol> rhs_;
  std::size_t terminal_count_ = 0;
  Symbol start_ = 0;
};

// Appends symbols in topological order.
class SlpBuilder {
 public:
  Symbol terminal(Char c);
  Symbol rule(std::span<const Symbol> rhs);
  // Binary rule with hash-consing: the same (left, right) pair yields the same symbol.
  Symbol pair(Symbol left, Symbol right);

  std::uint64_t length(Symbol a) const { return lengths_[a]; }
  std::uint32_t height(Symbol a) const { return heights_[a]; }
  bool is_terminal(Symbol a) const { return offsets_[a] == offsets_[a + 1]; }
  std::span<const Symbol> rhs(Symbol a) const {
    return {rhs_.data() + offsets_[a], offsets_[a + 1] - offsets_[a]};
  }
  std::size_t size() const noexcept { return lengths_.size(); }

  // Drops symbols the start cannot reach unless keep_all is set.
  Slp finish(Symbol start, bool keep_all = false) const;

 private:
  std::vector<std::uint64_t> lengths_;
  std::vector<std::uint32_t> heights_;
  std::vector<Char> chars_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Symbol> rhs_;
  std::unordered_map<Char, Symbol> terminal_ids_;
  std::unordered_map<std::uint64_t, Symbol> pair_ids_;
};

// Expansion cap: 2^28 characters unless GRAMDIST_MAX_EXPAND overrides it.
std::uint64_t expansion_cap();

Slp to_cnf(const Slp& g);
Text expand(const Slp& g);
Text expand(const Slp& g, std::uint64_t cap);
// Appends exp(a) to out; no cap check.
void expand_symbol(const Slp& g, Symbol a, Text& out);
// 1-based random access.
Char char_at(const Slp& g, std::uint64_t position);

struct Lz77Factor {
  std::size_t source = 0;  // 0-based start of the earlier occurrence
  std::size_t length = 1;
  Char literal = 0;
  bool is_literal = true;
};

struct Lz77Factorization {
  std::vector<Lz77Factor> factors;
  std::size_t text_length = 0;

  Text decode() const;
};

Lz77Factorization lz77_factorize(std::span<const Char> text);
Slp slp_from_text(std::span<const Char> text);
Slp dollar_transform(const Slp& g);

std::vector<std::int32_t> suffix_array(std::span<const Char> text);

}  // namespace gramdist
