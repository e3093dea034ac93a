#include "gramdist/partition.hpp"

#include <cassert>

#include "gramdist/error.hpp"

namespace gramdist {

std::uint32_t PhraseGrammar::add_rule(std::span<const PhraseItem> items) {
  std::uint64_t count = 0;
  for (const auto& it : items) count += it.is_phrase ? 1 : counts_[it.id];
  items_.insert(items_.end(), items.begin(), items.end());
  offsets_.push_back(items_.size());
  counts_.push_back(count);
  return static_cast<std::uint32_t>(counts_.size() - 1);
}

void PhraseGrammar::expand(std::uint32_t r, std::vector<Symbol>& out) const {
  std::vector<PhraseItem> stack{{false, r}};
  while (!stack.empty()) {
    const auto top = stack.back();
    stack.pop_back();
    if (top.is_phrase) {
      out.push_back(top.id);
      continue;
    }
    auto body = items(top.id);
    for (std::size_t j = body.size(); j-- > 0;) stack.push_back(body[j]);
  }
}

PhrasePartition partition(const Slp& g, std::uint64_t tau) {
  if (tau < 1) throw Error(Errc::invalid_tau, "tau must be at least 1");
  if (!g.is_cnf()) throw Error(Errc::invalid_params, "partition expects a grammar in Chomsky normal form");

  PhrasePartition pp;
  pp.tau = tau;
  const std::size_t n = g.symbol_count();
  pp.left.assign(n, kNoSymbol);
  pp.right.assign(n, kNoSymbol);
  pp.middle.assign(n, kNoSymbol);

  SlpBuilder b;
  for (Symbol a = 0; a < n; ++a) {
    if (g.is_terminal(a)) b.terminal(g.terminal_char(a));
    else b.rule(g.rhs(a));
  }

  if (g.length() <= tau) {
    pp.g_plus = b.finish(g.start(), true);
    const PhraseItem only{true, g.start()};
    pp.g_p.set_start(pp.g_p.add_rule({&only, 1}));
    pp.phrases = {g.start()};
    pp.boundaries = {0, g.length()};
    return pp;
  }

  auto& L = pp.left;
  auto& R = pp.right;
  auto& M = pp.middle;
  auto len = [&](Symbol s) { return b.length(s); };
  auto phrase = [](Symbol s) { return PhraseItem{true, s}; };
  auto mid = [](std::uint32_t r) { return PhraseItem{false, r}; };
  const std::uint32_t empty_middle = pp.g_p.add_rule({});

  for (Symbol a = 0; a < n; ++a) {
    if (g.is_terminal(a) || g.length(a) <= tau) continue;
    const Symbol bl = g.rhs(a)[0], br = g.rhs(a)[1];
    const bool big_l = g.length(bl) > tau, big_r = g.length(br) > tau;
    if (!big_l && !big_r) {
      L[a] = bl;
      R[a] = br;
      M[a] = empty_middle;
    } else if (big_l && big_r) {
      L[a] = L[bl];
      R[a] = R[br];
      const PhraseItem body[] = {mid(M[bl]), phrase(R[bl]), phrase(L[br]), mid(M[br])};
      M[a] = pp.g_p.add_rule(body);
    } else if (big_l) {
      L[a] = L[bl];
      if (len(R[bl]) + g.length(br) <= tau) {
        R[a] = b.pair(R[bl], br);
        M[a] = M[bl];
      } else {
        R[a] = br;
        const PhraseItem body[] = {mid(M[bl]), phrase(R[bl])};
        M[a] = pp.g_p.add_rule(body);
      }
    } else {
      R[a] = R[br];
      if (g.length(bl) + len(L[br]) <= tau) {
        L[a] = b.pair(bl, L[br]);
        M[a] = M[br];
      } else {
        L[a] = bl;
        const PhraseItem body[] = {phrase(L[br]), mid(M[br])};
        M[a] = pp.g_p.add_rule(body);
      }
    }
    assert(len(L[a]) + len(R[a]) + tau * (pp.g_p.phrase_count(M[a]) + 2) < 3 * g.length(a));
  }

  const Symbol s = g.start();
  const PhraseItem top[] = {phrase(L[s]), mid(M[s]), phrase(R[s])};
  pp.g_p.set_start(pp.g_p.add_rule(top));
  pp.g_plus = b.finish(s, true);

  pp.g_p.expand(pp.g_p.start(), pp.phrases);
  pp.boundaries.reserve(pp.phrases.size() + 1);
  pp.boundaries.push_back(0);
  for (Symbol p : pp.phrases) pp.boundaries.push_back(pp.boundaries.back() + pp.g_plus.length(p));
  return pp;
}

}  // namespace gramdist
