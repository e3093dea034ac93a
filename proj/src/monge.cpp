#include "gramdist/monge.hpp"

#include <algorithm>
#include <bit>

#include "gramdist/error.hpp"

namespace gramdist {

namespace {

// Bit-parallel LCS (Hyyro's formulation): bit i of the state is 0 iff the LCS grows
// when the pattern prefix is extended by character i.
class BitPattern {
 public:
  explicit BitPattern(std::span<const Char> pattern)
      : length_(pattern.size()), words_((pattern.size() + 63) / 64) {
    alphabet_.assign(pattern.begin(), pattern.end());
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    masks_.assign(alphabet_.size() * words_, 0);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const auto c = static_cast<std::size_t>(std::lower_bound(alphabet_.begin(), alphabet_.end(), pattern[i]) -
                                              alphabet_.begin());
      masks_[c * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::size_t words() const noexcept { return words_; }
  std::size_t length() const noexcept { return length_; }

  void reset(std::vector<std::uint64_t>& state) const { state.assign(words_, ~std::uint64_t{0}); }

  void step(std::vector<std::uint64_t>& state, Char c) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), c);
    if (it == alphabet_.end() || *it != c) return;
    const std::uint64_t* m = masks_.data() + static_cast<std::size_t>(it - alphabet_.begin()) * words_;
    std::uint64_t carry = 0, borrow = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t v = state[w], u = v & m[w];
      const std::uint64_t s1 = v + u;
      const std::uint64_t s2 = s1 + carry;
      carry = (s1 < v) | (s2 < s1);
      const std::uint64_t d1 = v - u;
      const std::uint64_t d2 = d1 - borrow;
      borrow = (v < u) | (d1 < borrow);
      state[w] = s2 | d2;
    }
  }

  // LCS between the whole pattern and the text consumed so far.
  std::size_t lcs(const std::vector<std::uint64_t>& state) const { return length_ - ones_prefix(state, length_); }

  std::size_t ones_prefix(const std::vector<std::uint64_t>& state, std::size_t bits) const {
    std::size_t ones = 0, w = 0;
    for (; (w + 1) * 64 <= bits; ++w) ones += static_cast<std::size_t>(std::popcount(state[w]));
    if (bits % 64) ones += static_cast<std::size_t>(std::popcount(state[w] & ((std::uint64_t{1} << (bits % 64)) - 1)));
    return ones;
  }

 private:
  std::size_t length_, words_;
  Text alphabet_;
  std::vector<std::uint64_t> masks_;
};

}  // namespace

DistMatrix dist_matrix(std::span<const Char> x, std::span<const Char> y) {
  if (x.size() > kMaxFragment || y.size() > kMaxFragment) {
    throw Error(Errc::fragment_too_large, "box fragments are limited to " + std::to_string(kMaxFragment) + " characters");
  }
  const auto w = static_cast<std::uint32_t>(x.size());
  const auto h = static_cast<std::uint32_t>(y.size());
  DistMatrix m(w, h);
  std::vector<std::uint64_t> state;
  auto dist = [](std::uint32_t dx, std::uint32_t dy, std::size_t lcs) {
    return static_cast<std::int32_t>(dx + dy - 2 * lcs);
  };

  // Sources on the bottom side: pattern y, text x[a..w).
  const BitPattern by_y(y);
  for (std::uint32_t a = 0; a <= w; ++a) {
    const std::size_t in = w - a;
    by_y.reset(state);
    for (std::uint32_t c = 0; c < a; ++c) m.at(in, m.out_index(c, h)) = static_cast<std::int32_t>(a - c + h);
    m.at(in, m.out_index(a, h)) = static_cast<std::int32_t>(h);
    for (std::uint32_t c = a; c < w;) {
      by_y.step(state, x[c]);
      ++c;
      m.at(in, m.out_index(c, h)) = dist(c - a, h, by_y.lcs(state));
    }
    // right side: LCS(x[a..w), y[0..d)) = d - ones among the first d bits
    std::size_t ones = 0;
    m.at(in, m.out_index(w, 0)) = static_cast<std::int32_t>(w - a);
    for (std::uint32_t d = 1; d <= h; ++d) {
      ones += (state[(d - 1) / 64] >> ((d - 1) % 64)) & 1;
      m.at(in, m.out_index(w, d)) = dist(w - a, d, d - ones);
    }
  }

  // Sources on the left side above the corner: pattern x, text y[b..h).
  const BitPattern by_x(x);
  for (std::uint32_t b = 1; b <= h; ++b) {
    const std::size_t in = w + b;
    by_x.reset(state);
    for (std::uint32_t d = 0; d < b; ++d) m.at(in, m.out_index(w, d)) = static_cast<std::int32_t>(w + b - d);
    m.at(in, m.out_index(w, b)) = static_cast<std::int32_t>(w);
    for (std::uint32_t d = b; d < h;) {
      by_x.step(state, y[d]);
      ++d;
      m.at(in, m.out_index(w, d)) = dist(w, d - b, by_x.lcs(state));
    }
    std::size_t ones = 0;
    m.at(in, m.out_index(0, h)) = static_cast<std::int32_t>(h - b);
    for (std::uint32_t c = 1; c < w; ++c) {
      ones += (state[(c - 1) / 64] >> ((c - 1) % 64)) & 1;
      m.at(in, m.out_index(c, h)) = dist(c, h - b, c - ones);
    }
  }
  return m;
}

bool check_monge(const DistMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (static_cast<std::int64_t>(m.at(i, j)) + m.at(i + 1, j + 1) >
          static_cast<std::int64_t>(m.at(i, j + 1)) + m.at(i + 1, j)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<RowMinimum> smawk_row_minima(const MongeView& view) {
  return smawk(view.rows.size(), view.cols.size(), [&](std::size_t r, std::size_t c) { return view(r, c); });
}

DistBoxOracle::DistBoxOracle(const PhrasePartition& px, const PhrasePartition& py) : px_(px), py_(py) {}

const Text& DistBoxOracle::text_of(const Slp& g, Symbol s, std::map<Symbol, Text>& cache) {
  auto it = cache.find(s);
  if (it == cache.end()) {
    Text t;
    expand_symbol(g, s, t);
    it = cache.emplace(s, std::move(t)).first;
  }
  return it->second;
}

const DistMatrix& DistBoxOracle::pair(Symbol sx, Symbol sy) {
  auto key = std::pair{sx, sy};
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++hits_;
    return *it->second;
  }
  ++misses_;
  const Text& tx = text_of(px_.g_plus, sx, texts_x_);
  const Text& ty = text_of(py_.g_plus, sy, texts_y_);
  auto m = std::make_unique<DistMatrix>(dist_matrix(tx, ty));
  const std::size_t bytes = m->size() * m->size() * sizeof(std::int32_t);
  if (bytes_ + bytes > budget_ && !memo_.empty()) {
    memo_.clear();
    bytes_ = 0;
  }
  bytes_ += bytes;
  return *memo_.emplace(key, std::move(m)).first->second;
}

const DistMatrix& DistBoxOracle::box(std::size_t i, std::size_t j) {
  return pair(px_.phrases.at(i), py_.phrases.at(j));
}

}  // namespace gramdist
