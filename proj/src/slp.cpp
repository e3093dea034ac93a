#include "gramdist/slp.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>

#include "gramdist/error.hpp"

namespace gramdist {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw Error(Errc::too_large, "expansion length overflows 64 bits");
  }
  return a + b;
}

std::uint64_t pair_key(Symbol a, Symbol b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

// ---- SlpBuilder -------------------------------------------------------------

Symbol SlpBuilder::terminal(Char c) {
  auto [it, inserted] = terminal_ids_.try_emplace(c, static_cast<Symbol>(lengths_.size()));
  if (inserted) {
    lengths_.push_back(1);
    heights_.push_back(0);
    chars_.push_back(c);
    offsets_.push_back(rhs_.size());
  }
  return it->second;
}

Symbol SlpBuilder::rule(std::span<const Symbol> rhs) {
  if (rhs.empty()) throw Error(Errc::empty_production, "rule with empty right-hand side");
  std::uint64_t len = 0;
  std::uint32_t h = 0;
  for (Symbol s : rhs) {
    len = checked_add(len, lengths_[s]);
    h = std::max(h, heights_[s]);
  }
  const auto id = static_cast<Symbol>(lengths_.size());
  lengths_.push_back(len);
  heights_.push_back(h + 1);
  chars_.push_back(0);
  rhs_.insert(rhs_.end(), rhs.begin(), rhs.end());
  offsets_.push_back(rhs_.size());
  return id;
}

Symbol SlpBuilder::pair(Symbol left, Symbol right) {
  const auto key = pair_key(left, right);
  if (auto it = pair_ids_.find(key); it != pair_ids_.end()) return it->second;
  const Symbol both[2] = {left, right};
  const Symbol id = rule(both);
  pair_ids_.emplace(key, id);
  return id;
}

Slp SlpBuilder::finish(Symbol start, bool keep_all) const {
  std::vector<char> live(lengths_.size(), keep_all ? 1 : 0);
  live[start] = 1;
  for (std::size_t a = start + 1; a-- > 0;) {
    if (!live[a]) continue;
    for (std::size_t j = offsets_[a]; j < offsets_[a + 1]; ++j) live[rhs_[j]] = 1;
  }
  std::vector<Symbol> remap(lengths_.size(), 0);
  Slp g;
  const std::size_t last = keep_all ? lengths_.size() - 1 : start;
  for (std::size_t a = 0; a <= last; ++a) {
    if (!live[a]) continue;
    remap[a] = static_cast<Symbol>(g.lengths_.size());
    g.lengths_.push_back(lengths_[a]);
    g.heights_.push_back(heights_[a]);
    g.chars_.push_back(chars_[a]);
    for (std::size_t j = offsets_[a]; j < offsets_[a + 1]; ++j) g.rhs_.push_back(remap[rhs_[j]]);
    g.offsets_.push_back(g.rhs_.size());
    if (offsets_[a] == offsets_[a + 1]) ++g.terminal_count_;
  }
  g.start_ = remap[start];
  return g;
}

// ---- Slp --------------------------------------------------------------------

Slp Slp::single(Char c) {
  SlpBuilder b;
  return b.finish(b.terminal(c));
}

Slp Slp::build(std::span<const RuleSpec> rules, std::uint64_t start) {
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!index.emplace(rules[i].id, i).second) {
      throw Error(Errc::invalid_params, "symbol " + std::to_string(rules[i].id) + " declared twice");
    }
  }
  std::vector<std::vector<std::size_t>> children(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (r.terminal) continue;
    if (r.rhs.empty()) {
      throw Error(Errc::empty_production, "symbol " + std::to_string(r.id) + " has an empty rule");
    }
    for (auto id : r.rhs) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw Error(Errc::unknown_symbol, "symbol " + std::to_string(id) + " is not declared");
      }
      children[i].push_back(it->second);
    }
  }
  auto start_it = index.find(start);
  if (start_it == index.end()) {
    throw Error(Errc::unknown_symbol, "start symbol " + std::to_string(start) + " is not declared");
  }

  // Iterative DFS over every declared symbol: grey on entry, black on exit.
  std::vector<char> color(rules.size(), 0);
  std::vector<std::size_t> order;
  order.reserve(rules.size());
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < rules.size(); ++root) {
    if (color[root]) continue;
    stack.emplace_back(root, 0);
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < children[v].size()) {
        const std::size_t w = children[v][next++];
        if (color[w] == 1) {
          throw Error(Errc::cycle_detected, "symbol " + std::to_string(rules[w].id) + " derives itself");
        }
        if (color[w] == 0) {
          color[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  SlpBuilder b;
  std::vector<Symbol> mapped(rules.size(), 0);
  std::vector<Symbol> rhs;
  for (std::size_t v : order) {
    if (rules[v].terminal) {
      mapped[v] = b.terminal(rules[v].ch);
    } else {
      rhs.clear();
      for (std::size_t w : children[v]) rhs.push_back(mapped[w]);
      mapped[v] = b.rule(rhs);
    }
  }
  return b.finish(mapped[start_it->second]);
}

bool Slp::is_cnf() const {
  for (Symbol a = 0; a < symbol_count(); ++a) {
    if (!is_terminal(a) && rhs(a).size() != 2) return false;
  }
  return true;
}

// ---- normalization and access -----------------------------------------------

std::uint64_t expansion_cap() {
  static const std::uint64_t cap = [] {
    if (const char* env = std::getenv("GRAMDIST_MAX_EXPAND")) {
      char* end = nullptr;
      const auto v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 28;
  }();
  return cap;
}

Slp to_cnf(const Slp& g) {
  SlpBuilder b;
  std::vector<Symbol> mapped(g.symbol_count());
  for (Symbol a = 0; a < g.symbol_count(); ++a) {
    if (g.is_terminal(a)) {
      mapped[a] = b.terminal(g.terminal_char(a));
      continue;
    }
    auto rhs = g.rhs(a);
    Symbol acc = mapped[rhs[0]];
    for (std::size_t j = 1; j < rhs.size(); ++j) acc = b.pair(acc, mapped[rhs[j]]);
    mapped[a] = acc;  // unit rules become aliases
  }
  return b.finish(mapped[g.start()]);
}

void expand_symbol(const Slp& g, Symbol a, Text& out) {
  // For long expansions a symbol seen before is copied from its first occurrence.
  constexpr std::uint64_t kUnseen = std::numeric_limits<std::uint64_t>::max();
  const bool copy = g.length(a) >= g.symbol_count();
  std::vector<std::uint64_t> first(copy ? g.symbol_count() : 0, kUnseen);
  out.reserve(out.size() + g.length(a));
  std::vector<Symbol> stack{a};
  while (!stack.empty()) {
    const Symbol s = stack.back();
    stack.pop_back();
    if (g.is_terminal(s)) {
      out.push_back(g.terminal_char(s));
      continue;
    }
    if (!copy) {
      auto rhs = g.rhs(s);
      for (std::size_t j = rhs.size(); j-- > 0;) stack.push_back(rhs[j]);
      continue;
    }
    if (first[s] != kUnseen) {
      const std::size_t at = out.size();
      const auto from = static_cast<std::ptrdiff_t>(first[s]);
      out.resize(at + g.length(s));
      std::copy(out.begin() + from, out.begin() + from + static_cast<std::ptrdiff_t>(g.length(s)),
                out.begin() + static_cast<std::ptrdiff_t>(at));
      continue;
    }
    first[s] = out.size();
    auto rhs = g.rhs(s);
    for (std::size_t j = rhs.size(); j-- > 0;) stack.push_back(rhs[j]);
  }
}

Text expand(const Slp& g, std::uint64_t cap) {
  if (g.length() > cap) {
    throw Error(Errc::expansion_too_large,
                "expansion of " + std::to_string(g.length()) + " characters exceeds cap " + std::to_string(cap));
  }
  Text out;
  out.reserve(g.length());
  expand_symbol(g, g.start(), out);
  return out;
}

Text expand(const Slp& g) { return expand(g, expansion_cap()); }

Char char_at(const Slp& g, std::uint64_t position) {
  if (position == 0 || position > g.length()) {
    throw Error(Errc::out_of_range,
                "position " + std::to_string(position) + " outside [1, " + std::to_string(g.length()) + "]");
  }
  std::uint64_t offset = position - 1;
  Symbol a = g.start();
  while (!g.is_terminal(a)) {
    for (Symbol c : g.rhs(a)) {
      if (offset < g.length(c)) {
        a = c;
        break;
      }
      offset -= g.length(c);
    }
  }
  return g.terminal_char(a);
}

Slp dollar_transform(const Slp& g) {
  SlpBuilder b;
  const Symbol dollar = b.terminal(kDollar);
  std::vector<Symbol> mapped(g.symbol_count());
  std::vector<Symbol> rhs;
  for (Symbol a = 0; a < g.symbol_count(); ++a) {
    if (g.is_terminal(a)) {
      if (g.terminal_char(a) == kDollar) {
        throw Error(Errc::sentinel_in_alphabet, "input already contains the $ sentinel");
      }
      mapped[a] = b.pair(b.terminal(g.terminal_char(a)), dollar);
      continue;
    }
    rhs.clear();
    for (Symbol c : g.rhs(a)) rhs.push_back(mapped[c]);
    mapped[a] = b.rule(rhs);
  }
  return b.finish(mapped[g.start()]);
}

// ---- suffix array and LZ77 --------------------------------------------------

std::vector<std::int32_t> suffix_array(std::span<const Char> text) {
  const auto n = static_cast<std::int32_t>(text.size());
  std::vector<std::int32_t> sa(n), rank(n), tmp(n);
  if (n == 0) return sa;

  Text alphabet(text.begin(), text.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  for (std::int32_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::int32_t>(std::lower_bound(alphabet.begin(), alphabet.end(), text[i]) -
                                        alphabet.begin());
  }
  auto classes = static_cast<std::int32_t>(alphabet.size());
  std::vector<std::int32_t> count(std::max(classes, n) + 1);

  auto counting_sort = [&](const std::vector<std::int32_t>& in, std::vector<std::int32_t>& out) {
    std::fill(count.begin(), count.begin() + classes + 1, 0);
    for (auto i : in) ++count[rank[i] + 1];
    for (std::int32_t c = 0; c < classes; ++c) count[c + 1] += count[c];
    for (auto i : in) out[count[rank[i]]++] = i;
  };

  std::iota(tmp.begin(), tmp.end(), 0);
  counting_sort(tmp, sa);
  for (std::int32_t k = 1; classes < n; k <<= 1) {
    std::int32_t idx = 0;
    for (std::int32_t i = std::max(0, n - k); i < n; ++i) tmp[idx++] = i;
    for (std::int32_t j = 0; j < n; ++j) {
      if (sa[j] >= k) tmp[idx++] = sa[j] - k;
    }
    counting_sort(tmp, sa);
    auto second = [&](std::int32_t i) { return i + k < n ? rank[i + k] : -1; };
    tmp[sa[0]] = 0;
    for (std::int32_t j = 1; j < n; ++j) {
      const bool same = rank[sa[j]] == rank[sa[j - 1]] && second(sa[j]) == second(sa[j - 1]);
      tmp[sa[j]] = tmp[sa[j - 1]] + (same ? 0 : 1);
    }
    classes = tmp[sa[n - 1]] + 1;
    rank.swap(tmp);
    if (k > n) break;
  }
  return sa;
}

Lz77Factorization lz77_factorize(std::span<const Char> text) {
  if (text.empty()) throw Error(Errc::empty_input, "cannot factorize empty text");
  const std::size_t n = text.size();
  const auto sa = suffix_array(text);

  // For each position, the lexicographic neighbours among earlier positions.
  constexpr std::int64_t none = -1;
  std::vector<std::int64_t> prev_smaller(n, none), next_smaller(n, none);
  std::vector<std::int32_t> stack;
  for (std::int32_t p : sa) {
    while (!stack.empty() && stack.back() > p) {
      next_smaller[stack.back()] = p;
      stack.pop_back();
    }
    if (!stack.empty()) prev_smaller[p] = stack.back();
    stack.push_back(p);
  }

  auto lce = [&](std::size_t src, std::size_t i) {
    std::size_t l = 0;
    while (i + l < n && text[src + l] == text[i + l]) ++l;
    return l;
  };

  Lz77Factorization f;
  f.text_length = n;
  for (std::size_t i = 0; i < n;) {
    std::size_t best_len = 0, best_src = 0;
    for (auto cand : {prev_smaller[i], next_smaller[i]}) {
      if (cand == none) continue;
      const auto src = static_cast<std::size_t>(cand);
      const auto l = lce(src, i);
      if (l > best_len || (l == best_len && l > 0 && src < best_src)) {
        best_len = l;
        best_src = src;
      }
    }
    if (best_len == 0) {
      f.factors.push_back({0, 1, text[i], true});
      ++i;
    } else {
      f.factors.push_back({best_src, best_len, 0, false});
      i += best_len;
    }
  }
  return f;
}

Text Lz77Factorization::decode() const {
  Text out;
  out.reserve(text_length);
  for (const auto& f : factors) {
    if (f.is_literal) {
      out.push_back(f.literal);
    } else {
      for (std::size_t j = 0; j < f.length; ++j) out.push_back(out[f.source + j]);
    }
  }
  return out;
}

namespace {

// Height-balanced grammar over hash-consed binary nodes.
class AvlGrammar {
 public:
  SlpBuilder& builder() { return b_; }

  Symbol concat(Symbol a, Symbol c) {
    const auto ha = b_.height(a), hc = b_.height(c);
    if (ha > hc + 1) return join_right(a, c);
    if (hc > ha + 1) return join_left(a, c);
    return b_.pair(a, c);
  }

  Symbol extract(Symbol node, std::uint64_t from, std::uint64_t len) {
    if (from == 0 && len == b_.length(node)) return node;
    const auto kids = b_.rhs(node);
    const Symbol l = kids[0], r = kids[1];
    const auto ll = b_.length(l);
    if (from + len <= ll) return extract(l, from, len);
    if (from >= ll) return extract(r, from - ll, len);
    const Symbol left = extract(l, from, ll - from);
    const Symbol right = extract(r, 0, from + len - ll);
    return concat(left, right);
  }

  // Prefix of length total of the infinite power of base.
  Symbol power(Symbol base, std::uint64_t total) {
    const auto q = b_.length(base);
    const auto copies = total / q, rest = total % q;
    std::optional<Symbol> acc;
    if (copies > 0) {
      int top = 63;
      while (!((copies >> top) & 1)) --top;
      Symbol r = base;
      for (int bit = top - 1; bit >= 0; --bit) {
        r = concat(r, r);
        if ((copies >> bit) & 1) r = concat(r, base);
      }
      acc = r;
    }
    if (rest > 0) {
      const Symbol tail = extract(base, 0, rest);
      return acc ? concat(*acc, tail) : tail;
    }
    return *acc;
  }

 private:
  Symbol join_right(Symbol a, Symbol c) {
    const auto kids = b_.rhs(a);
    const Symbol l = kids[0], r = kids[1];
    const Symbol t = b_.height(r) > b_.height(c) + 1 ? join_right(r, c) : b_.pair(r, c);
    if (b_.height(t) <= b_.height(l) + 1) return b_.pair(l, t);
    const auto tk = b_.rhs(t);
    const Symbol tl = tk[0], tr = tk[1];
    if (b_.height(tr) >= b_.height(tl)) return b_.pair(b_.pair(l, tl), tr);
    const auto mk = b_.rhs(tl);
    const Symbol x = mk[0], y = mk[1];
    return b_.pair(b_.pair(l, x), b_.pair(y, tr));
  }

  Symbol join_left(Symbol a, Symbol c) {
    const auto kids = b_.rhs(c);
    const Symbol l = kids[0], r = kids[1];
    const Symbol t = b_.height(l) > b_.height(a) + 1 ? join_left(a, l) : b_.pair(a, l);
    if (b_.height(t) <= b_.height(r) + 1) return b_.pair(t, r);
    const auto tk = b_.rhs(t);
    const Symbol tl = tk[0], tr = tk[1];
    if (b_.height(tl) >= b_.height(tr)) return b_.pair(tl, b_.pair(tr, r));
    const auto mk = b_.rhs(tr);
    const Symbol x = mk[0], y = mk[1];
    return b_.pair(b_.pair(tl, x), b_.pair(y, r));
  }

  SlpBuilder b_;
};

}  // namespace

Slp slp_from_text(std::span<const Char> text) {
  if (text.empty()) throw Error(Errc::empty_input, "cannot compress empty text");
  const auto lz = lz77_factorize(text);
  AvlGrammar avl;
  auto& b = avl.builder();
  std::optional<Symbol> cur;
  std::uint64_t pos = 0;
  for (const auto& f : lz.factors) {
    if (f.is_literal) {
      const Symbol t = b.terminal(f.literal);
      cur = cur ? avl.concat(*cur, t) : t;
    } else if (f.source + f.length <= pos) {
      cur = avl.concat(*cur, avl.extract(*cur, f.source, f.length));
    } else {
      // Overlapping copy: text[source, pos + length) is periodic with period pos - source.
      const Symbol base = avl.extract(*cur, f.source, pos - f.source);
      const Symbol run = avl.power(base, pos - f.source + f.length);
      cur = f.source == 0 ? run : avl.concat(avl.extract(*cur, 0, f.source), run);
    }
    pos += f.length;
  }
  return b.finish(*cur);
}

}  // namespace gramdist
