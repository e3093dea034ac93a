#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gramdist/slp.hpp"

namespace testkit {

using gramdist::Char;
using gramdist::Slp;
using gramdist::Text;

inline Text text(const std::string& s) { return Text(s.begin(), s.end()); }

inline Text random_text(std::mt19937_64& rng, std::size_t n, unsigned sigma) {
  Text t(n);
  for (auto& c : t) c = 'a' + static_cast<Char>(rng() % sigma);
  return t;
}

// Random blocks copied from earlier text plus sprinkled noise: compresses well.
inline Text compressible_text(std::mt19937_64& rng, std::size_t n, unsigned sigma, double noise) {
  Text t;
  t.reserve(n);
  const std::size_t seed_len = std::min<std::size_t>(n, 8 + rng() % 24);
  for (std::size_t i = 0; i < seed_len; ++i) t.push_back('a' + static_cast<Char>(rng() % sigma));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (t.size() < n) {
    const std::size_t src = rng() % t.size();
    const std::size_t len = std::min(n - t.size(), 1 + rng() % (t.size() - src + 1));
    for (std::size_t j = 0; j < len; ++j) {
      Char c = t[src + j];
      if (u(rng) < noise) c = 'a' + static_cast<Char>(rng() % sigma);
      t.push_back(c);
    }
  }
  t.resize(n);
  return t;
}

inline Text mutate(std::mt19937_64& rng, Text t, std::size_t edits, unsigned sigma) {
  for (std::size_t e = 0; e < edits; ++e) {
    const auto op = rng() % 3;
    const std::size_t at = t.empty() ? 0 : rng() % (t.size() + (op == 1 ? 1 : 0));
    const Char c = 'a' + static_cast<Char>(rng() % sigma);
    if (op == 0 && !t.empty()) {
      t[at] = c;
    } else if (op == 1 || t.empty()) {
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(std::min(at, t.size())), c);
    } else if (t.size() > 1) {
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(at));
    }
  }
  return t;
}

inline Slp fibonacci_slp(int order) {
  // F1 -> b, F2 -> a, F_i -> F_{i-1} F_{i-2}
  std::vector<gramdist::RuleSpec> rules;
  rules.push_back({1, true, 'b', {}});
  rules.push_back({2, true, 'a', {}});
  for (int i = 3; i <= order; ++i) {
    rules.push_back({static_cast<std::uint64_t>(i), false, 0,
                     {static_cast<std::uint64_t>(i - 1), static_cast<std::uint64_t>(i - 2)}});
  }
  return Slp::build(rules, static_cast<std::uint64_t>(order));
}

// Random CNF grammar with expansion length at most max_len.
inline Slp random_cnf(std::mt19937_64& rng, std::size_t rules_wanted, std::uint64_t max_len, unsigned sigma) {
  std::vector<gramdist::RuleSpec> rules;
  std::vector<std::uint64_t> len;
  for (unsigned c = 0; c < sigma; ++c) {
    rules.push_back({c, true, 'a' + c, {}});
    len.push_back(1);
  }
  for (std::size_t r = 0; r < rules_wanted; ++r) {
    const std::size_t count = rules.size();
    std::uint64_t a = 0, b = 0;
    for (int attempt = 0; attempt < 32; ++attempt) {
      // bias toward recent symbols so the start grows long
      const std::size_t window = rng() % 4 == 0 ? count : std::min<std::size_t>(count, 6);
      a = count - 1 - rng() % window;
      b = rng() % count;
      if (rng() & 1) std::swap(a, b);
      if (len[a] + len[b] <= max_len) break;
      a = rng() % sigma;
      b = rng() % sigma;
    }
    rules.push_back({count, false, 0, {a, b}});
    len.push_back(len[a] + len[b]);
  }
  return Slp::build(rules, rules.size() - 1);
}

}  // namespace testkit
