#include "gramdist/product.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "gramdist/error.hpp"
#include "gramdist/partition.hpp"

namespace gramdist {

namespace {

struct TupleKey {
  std::array<Symbol, kMaxProductArity> symbols{};
  std::array<std::uint32_t, kMaxProductArity> starts{};
  bool operator==(const TupleKey&) const = default;
};

struct TupleKeyHash {
  std::size_t operator()(const TupleKey& key) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::size_t i = 0; i < kMaxProductArity; ++i) {
      h ^= (static_cast<std::uint64_t>(key.symbols[i]) << 32 | key.starts[i]) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

void check_inputs(std::span<const Slp> grammars) {
  if (grammars.size() < 2 || grammars.size() > kMaxProductArity) {
    throw Error(Errc::unsupported_k, "products support 2 to 4 strings, got " + std::to_string(grammars.size()));
  }
  for (const auto& g : grammars) {
    if (g.length() != grammars[0].length()) {
      throw Error(Errc::length_mismatch, "inputs of lengths " + std::to_string(grammars[0].length()) + " and " +
                                             std::to_string(g.length()));
    }
  }
}

class ProductBuilder {
 public:
  ProductBuilder(std::span<const PhrasePartition> parts, ProductSlp& out) : parts_(parts), out_(out) {}

  Symbol resolve(const TupleKey& first) {
    enter(first);
    while (!stack_.empty()) {
      if (!has_ret_) {
        const TupleKey left = stack_.back().left;
        enter(left);
        continue;
      }
      Frame& f = stack_.back();
      has_ret_ = false;
      if (!f.have_left) {
        f.left_symbol = ret_;
        f.have_left = true;
        const TupleKey right = f.right;
        enter(right);
        continue;
      }
      const Symbol s = builder_.pair(f.left_symbol, ret_);
      record(s, f.key);
      memo_.emplace(f.key, s);
      stack_.pop_back();
      ret_ = s;
      has_ret_ = true;
    }
    return ret_;
  }

  SlpBuilder& builder() { return builder_; }

 private:
  struct Frame {
    TupleKey key, left, right;
    bool have_left = false;
    Symbol left_symbol = 0;
  };

  const Slp& g(std::size_t i) const { return parts_[i].g_plus; }

  std::uint64_t common_length(const TupleKey& key) const {
    std::uint64_t len = UINT64_MAX;
    for (std::size_t i = 0; i < parts_.size(); ++i) len = std::min(len, g(i).length(key.symbols[i]) - key.starts[i]);
    return len;
  }

  // Applies the two aliasing cases until the first non-terminal coordinate straddles its split.
  TupleKey canonical(TupleKey key, std::uint64_t len) const {
    for (std::size_t i = 0; i < parts_.size();) {
      const Slp& gi = g(i);
      if (gi.is_terminal(key.symbols[i])) {
        ++i;
        continue;
      }
      const auto kids = gi.rhs(key.symbols[i]);
      const auto split = gi.length(kids[0]);
      if (key.starts[i] + len <= split) {
        key.symbols[i] = kids[0];
      } else if (key.starts[i] >= split) {
        key.symbols[i] = kids[1];
        key.starts[i] -= static_cast<std::uint32_t>(split);
      } else {
        break;
      }
    }
    return key;
  }

  void enter(const TupleKey& raw) {
    const auto len = common_length(raw);
    const TupleKey key = canonical(raw, len);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ret_ = it->second;
      has_ret_ = true;
      return;
    }
    std::size_t j = 0;
    while (j < parts_.size() && g(j).is_terminal(key.symbols[j])) ++j;
    if (j == parts_.size()) {
      std::array<Char, kMaxProductArity> chars{};
      for (std::size_t i = 0; i < parts_.size(); ++i) chars[i] = g(i).terminal_char(key.symbols[i]);
      auto [it, inserted] = tuple_ids_.try_emplace(chars, static_cast<Char>(out_.tuples.size()));
      if (inserted) out_.tuples.push_back(chars);
      const Symbol s = builder_.terminal(it->second);
      record(s, key);
      memo_.emplace(key, s);
      ret_ = s;
      has_ret_ = true;
      return;
    }
    const auto kids = g(j).rhs(key.symbols[j]);
    const auto head = g(j).length(kids[0]) - key.starts[j];
    Frame f;
    f.key = key;
    f.left = key;
    f.left.symbols[j] = kids[0];
    f.right = key;
    f.right.symbols[j] = kids[1];
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i == j) f.right.starts[i] = 0;
      else f.right.starts[i] = key.starts[i] + static_cast<std::uint32_t>(head);
    }
    stack_.push_back(f);
    has_ret_ = false;
  }

  void record(Symbol s, const TupleKey& key) {
    if (out_.provenance.size() <= s) out_.provenance.resize(s + 1);
    RelevantTuple& t = out_.provenance[s];
    if (t.length != 0) return;
    t.length = common_length(key);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      t.symbols[i] = key.symbols[i];
      t.starts[i] = key.starts[i];
      if (t.prefix_anchor < 0 && key.starts[i] == 0) t.prefix_anchor = static_cast<int>(i);
      if (t.suffix_anchor < 0 && key.starts[i] + t.length == g(i).length(key.symbols[i])) {
        t.suffix_anchor = static_cast<int>(i);
      }
    }
  }

  std::span<const PhrasePartition> parts_;
  ProductSlp& out_;
  SlpBuilder builder_;
  std::unordered_map<TupleKey, Symbol, TupleKeyHash> memo_;
  std::map<std::array<Char, kMaxProductArity>, Char> tuple_ids_;
  std::vector<Frame> stack_;
  Symbol ret_ = 0;
  bool has_ret_ = false;
};

double symbol_product(std::span<const Slp> grammars) {
  double prod = 1;
  for (const auto& g : grammars) prod *= static_cast<double>(g.symbol_count());
  return prod;
}

ProductSlp trivial_product(std::span<const Slp> grammars) {
  ProductSlp p;
  p.arity = grammars.size();
  p.trivial = true;
  std::vector<Text> texts;
  for (const auto& g : grammars) texts.push_back(expand(g));
  const std::size_t n = texts[0].size();
  p.tau = n;
  SlpBuilder b;
  std::map<std::array<Char, kMaxProductArity>, Char> ids;
  std::vector<Symbol> body(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::array<Char, kMaxProductArity> chars{};
    for (std::size_t i = 0; i < p.arity; ++i) chars[i] = texts[i][j];
    auto [it, inserted] = ids.try_emplace(chars, static_cast<Char>(p.tuples.size()));
    if (inserted) p.tuples.push_back(chars);
    body[j] = b.terminal(it->second);
  }
  p.grammar = n == 1 ? b.finish(body[0]) : b.finish(b.rule(body));
  return p;
}

}  // namespace

std::uint64_t product_tau(std::span<const Slp> grammars) {
  const double n = static_cast<double>(grammars[0].length());
  const double k = static_cast<double>(grammars.size());
  const double t = std::round(std::pow(n / (k * symbol_product(grammars)), 1.0 / k));
  return static_cast<std::uint64_t>(std::clamp(t, 1.0, n));
}

ProductSlp product_slp(std::span<const Slp> grammars, std::uint64_t tau) {
  check_inputs(grammars);
  if (tau < 1) throw Error(Errc::invalid_tau, "tau must be at least 1");
  const std::uint64_t n = grammars[0].length();
  if (n > UINT32_MAX) throw Error(Errc::too_large, "product grammars are limited to 2^32 positions");

  std::vector<PhrasePartition> parts;
  std::vector<Slp> cnf;
  for (const auto& g : grammars) {
    cnf.push_back(g.is_cnf() ? g : to_cnf(g));
    parts.push_back(partition(cnf.back(), tau));
  }

  ProductSlp p;
  p.arity = grammars.size();
  p.tau = tau;
  ProductBuilder pb(parts, p);

  // Merge the boundary sets and cut every input at each common boundary.
  std::vector<std::uint64_t> cuts;
  for (const auto& pp : parts) cuts.insert(cuts.end(), pp.boundaries.begin(), pp.boundaries.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::size_t> phrase(p.arity, 0);
  std::vector<Symbol> body;
  body.reserve(cuts.size());
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    TupleKey key;
    for (std::size_t i = 0; i < p.arity; ++i) {
      const auto& bounds = parts[i].boundaries;
      while (bounds[phrase[i] + 1] <= cuts[j]) ++phrase[i];
      key.symbols[i] = parts[i].phrases[phrase[i]];
      key.starts[i] = static_cast<std::uint32_t>(cuts[j] - bounds[phrase[i]]);
    }
    body.push_back(pb.resolve(key));
  }
  auto& b = pb.builder();
  const Symbol start = body.size() == 1 ? body[0] : b.rule(body);
  p.provenance.resize(b.size());
  p.grammar = b.finish(start, true);
  return p;
}

std::vector<std::array<Char, kMaxProductArity>> ProductSlp::expand_tuples() const {
  Text ids = expand(grammar);
  std::vector<std::array<Char, kMaxProductArity>> out;
  out.reserve(ids.size());
  for (Char c : ids) out.push_back(tuples[c]);
  return out;
}

namespace {

ProductSlp auto_product(std::span<const Slp> grammars) {
  check_inputs(grammars);
  if (symbol_product(grammars) > static_cast<double>(grammars[0].length())) return trivial_product(grammars);
  return product_slp(grammars, product_tau(grammars));
}

}  // namespace

std::uint64_t hamming(const Slp& gx, const Slp& gy) {
  const Slp pair[] = {gx, gy};
  const auto p = auto_product(pair);
  return additive_aggregate(p, [](std::span<const Char> t) -> std::uint64_t { return t[0] != t[1] ? 1 : 0; });
}

std::uint64_t hamming_multi(std::span<const Slp> grammars, HammingMode mode) {
  const auto p = auto_product(grammars);
  if (mode == HammingMode::all_equal) {
    return additive_aggregate(p, [](std::span<const Char> t) -> std::uint64_t {
      return std::all_of(t.begin(), t.end(), [&](Char c) { return c == t[0]; }) ? 0 : 1;
    });
  }
  return additive_aggregate(p, [](std::span<const Char> t) -> std::uint64_t {
    std::uint64_t best = UINT64_MAX;
    for (Char centre : t) {
      std::uint64_t cost = 0;
      for (Char c : t) cost += c != centre ? 1 : 0;
      best = std::min(best, cost);
    }
    return best;
  });
}

}  // namespace gramdist
