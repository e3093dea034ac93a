#include "gramdist/multi_edit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>

#include "gramdist/error.hpp"

namespace gramdist {

namespace {

using Strand = std::span<const Char>;

constexpr std::size_t kMaxDiagonalCells = std::size_t{1} << 22;
constexpr std::uint64_t kMaxTupleCells = 1'000'000;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this radius the LZ77 scheme picks a fresh representative at every crossing position,
// so each window's representative is a copy of the window itself.
constexpr std::uint64_t kCopyRadius = 4;

void check_k(std::size_t k, std::size_t lo, std::size_t hi) {
  if (k < lo || k > hi) {
    throw Error(Errc::unsupported_k, "k must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

// Longest common extensions between suffixes of several strings, from a suffix array over
// their concatenation with distinct separators.
class LceIndex {
 public:
  explicit LceIndex(std::span<const Strand> strings) {
    Text all;
    for (std::size_t i = 0; i < strings.size(); ++i) {
      offset_.push_back(all.size());
      all.insert(all.end(), strings[i].begin(), strings[i].end());
      all.push_back(kSentinelBase + 3 + static_cast<Char>(i));
    }
    const std::size_t n = all.size();
    const auto sa = suffix_array(all);
    rank_.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) rank_[static_cast<std::size_t>(sa[r])] = static_cast<std::uint32_t>(r);
    // Kasai
    std::vector<std::uint32_t> lcp(n, 0);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank_[i] == 0) {
        h = 0;
        continue;
      }
      const auto j = static_cast<std::size_t>(sa[rank_[i] - 1]);
      while (i + h < n && j + h < n && all[i + h] == all[j + h]) ++h;
      lcp[rank_[i]] = static_cast<std::uint32_t>(h);
      if (h > 0) --h;
    }
    table_.push_back(std::move(lcp));
    for (std::size_t w = 1; 2 * w <= n; w *= 2) {
      const auto& prev = table_.back();
      std::vector<std::uint32_t> next(n - 2 * w + 1);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + w]);
      table_.push_back(std::move(next));
    }
  }

  std::uint64_t operator()(std::size_t a, std::size_t pa, std::size_t b, std::size_t pb) const {
    std::size_t x = rank_[offset_[a] + pa], y = rank_[offset_[b] + pb];
    if (x == y) return std::numeric_limits<std::uint64_t>::max();
    if (x > y) std::swap(x, y);
    ++x;
    const auto level = static_cast<std::size_t>(std::bit_width(y - x + 1) - 1);
    return std::min(table_[level][x], table_[level][y + 1 - (std::size_t{1} << level)]);
  }

 private:
  std::vector<std::size_t> offset_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::vector<std::uint32_t>> table_;
};

std::uint64_t scan_lce(Strand x, std::size_t px, Strand y, std::size_t py) {
  std::uint64_t l = 0;
  while (px + l < x.size() && py + l < y.size() && x[px + l] == y[py + l]) ++l;
  return l;
}

// Median distance <= cap by furthest-reaching diagonals. A column advancing the subset S costs
// min(|S|, k - maxfreq_S); the only free column advances every string over one common
// character, which is the slide.
std::optional<std::int64_t> furthest_reaching(std::span<const Strand> s, std::int64_t cap, const LceIndex* index) {
  const std::size_t k = s.size();
  const auto n1 = static_cast<std::int64_t>(s[0].size());
  std::int64_t total = 0;
  for (Strand t : s) total += static_cast<std::int64_t>(t.size());
  cap = std::min(cap, total);

  std::array<std::int64_t, 3> target{};
  for (std::size_t i = 1; i < k; ++i) {
    target[i - 1] = static_cast<std::int64_t>(s[i].size()) - n1;
    if (std::abs(target[i - 1]) > cap) return std::nullopt;
  }
  const auto width = static_cast<std::size_t>(2 * cap + 1);
  std::size_t cells = 1;
  for (std::size_t i = 1; i < k; ++i) {
    cells *= width;
    if (cells > kMaxDiagonalCells) throw Error(Errc::too_large, "diagonal table exceeds 2^22 cells");
  }
  auto encode = [&](const std::array<std::int64_t, 3>& d) {
    std::size_t idx = 0;
    for (std::size_t i = k - 1; i-- > 0;) idx = idx * width + static_cast<std::size_t>(d[i] + cap);
    return idx;
  };
  auto decode = [&](std::size_t idx) {
    std::array<std::int64_t, 3> d{};
    for (std::size_t i = 0; i + 1 < k; ++i) {
      d[i] = static_cast<std::int64_t>(idx % width) - cap;
      idx /= width;
    }
    return d;
  };
  auto extend = [&](std::int64_t j, const std::array<std::int64_t, 3>& d) {
    std::uint64_t ext = static_cast<std::uint64_t>(n1 - j);
    for (std::size_t i = 1; i < k && ext > 0; ++i) {
      const auto pj = static_cast<std::size_t>(j), pi = static_cast<std::size_t>(j + d[i - 1]);
      std::uint64_t l;
      if (index) {
        l = pj == s[0].size() || pi == s[i].size() ? 0 : (*index)(0, pj, i, pi);
      } else {
        l = scan_lce(s[0], pj, s[i], pi);
      }
      ext = std::min(ext, l);
    }
    return j + static_cast<std::int64_t>(std::min<std::uint64_t>(ext, static_cast<std::uint64_t>(n1 - j)));
  };

  struct Layer {
    std::vector<std::int32_t> far;
    std::vector<std::uint32_t> active;
  };
  std::vector<Layer> ring(k);
  for (auto& l : ring) l.far.assign(cells, -1);
  auto offer = [](Layer& l, std::size_t idx, std::int64_t j) {
    if (l.far[idx] >= j) return;
    if (l.far[idx] < 0) l.active.push_back(static_cast<std::uint32_t>(idx));
    l.far[idx] = static_cast<std::int32_t>(j);
  };

  const std::array<std::int64_t, 3> origin{};
  offer(ring[0], encode(origin), extend(0, origin));
  const std::size_t goal = encode(target);

  for (std::int64_t h = 0; h <= cap; ++h) {
    Layer& cur = ring[static_cast<std::size_t>(h) % k];
    if (h > 0) {
      Layer& prev = ring[static_cast<std::size_t>(h - 1) % k];
      for (auto idx : prev.active) offer(cur, idx, prev.far[idx]);
      for (auto idx : prev.active) prev.far[idx] = -1;
      prev.active.clear();
    }
    if (cur.far[goal] >= n1) return h;

    for (std::size_t a = 0; a < cur.active.size(); ++a) {
      const std::size_t idx = cur.active[a];
      const std::int64_t j = cur.far[idx];
      const auto d = decode(idx);
      std::array<std::int64_t, 4> pos{j, 0, 0, 0};
      for (std::size_t i = 1; i < k; ++i) pos[i] = j + d[i - 1];
      for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        bool ok = true;
        std::array<Char, 4> ch{};
        std::int64_t size = 0;
        for (std::size_t i = 0; i < k && ok; ++i) {
          if (!(mask >> i & 1)) continue;
          if (pos[i] >= static_cast<std::int64_t>(s[i].size())) ok = false;
          else ch[static_cast<std::size_t>(size++)] = s[i][static_cast<std::size_t>(pos[i])];
        }
        if (!ok) continue;
        std::int64_t top = 0;
        for (std::int64_t x = 0; x < size; ++x) {
          std::int64_t f = 0;
          for (std::int64_t y = 0; y < size; ++y) f += ch[static_cast<std::size_t>(x)] == ch[static_cast<std::size_t>(y)];
          top = std::max(top, f);
        }
        const std::int64_t cost = std::min(size, static_cast<std::int64_t>(k) - top);
        if (cost == 0 || h + cost > cap) continue;
        const std::int64_t step1 = mask & 1;
        std::array<std::int64_t, 3> nd{};
        bool inside = true;
        for (std::size_t i = 1; i < k; ++i) {
          nd[i - 1] = d[i - 1] + (mask >> i & 1) - step1;
          inside = inside && std::abs(nd[i - 1]) <= cap;
        }
        if (!inside) continue;
        offer(ring[static_cast<std::size_t>(h + cost) % k], encode(nd), extend(j + step1, nd));
      }
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> bounded_median(std::span<const Strand> s, std::int64_t cap) {
  std::size_t total = 0;
  for (Strand t : s) total += t.size();
  if (total >= 256) {
    const LceIndex index(s);
    return furthest_reaching(s, cap, &index);
  }
  return furthest_reaching(s, cap, nullptr);
}

// ---------------------------------------------------------------------------------------------
// Edit tuples on fixed-width vectors (k <= 3, unused coordinates stay zero).

using Tup = std::array<std::int64_t, 3>;

void pareto(std::vector<Tup>& v, std::size_t k, std::int64_t cap) {
  std::erase_if(v, [&](const Tup& t) {
    for (std::size_t i = 0; i < k; ++i)
      if (t[i] > cap) return true;
    return false;
  });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  // after the sort every dominator comes first; keep a staircase of (t1, t2) minima
  std::vector<Tup> kept;
  std::map<std::int64_t, std::int64_t> stairs;
  for (const Tup& t : v) {
    auto it = stairs.upper_bound(t[1]);
    if (it != stairs.begin() && std::prev(it)->second <= t[2]) continue;
    kept.push_back(t);
    it = stairs.lower_bound(t[1]);
    while (it != stairs.end() && it->second >= t[2]) it = stairs.erase(it);
    stairs[t[1]] = t[2];
  }
  v = std::move(kept);
}

// Tuple sets for every prefix tuple of the strings; only the full-length cell survives
// unless keep_all is set.
struct TupleTable {
  std::array<std::uint64_t, 3> dims{1, 1, 1}, stride{};
  std::vector<std::vector<Tup>> cells;

  const std::vector<Tup>& at(std::span<const std::uint64_t> pos) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) idx += pos[i] * stride[i];
    return cells[idx];
  }
};

TupleTable tuple_table(std::span<const Strand> s, std::int64_t cap, bool keep_all) {
  const std::size_t k = s.size();
  TupleTable table;
  auto& dims = table.dims;
  auto& stride = table.stride;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    dims[i] = s[i].size() + 1;
    stride[i] = total;
    total *= dims[i];
    if (total > kMaxTupleCells) throw Error(Errc::too_large, "position tuples exceed 10^6");
  }
  auto& cell = table.cells;
  cell.resize(total);
  cell[0].push_back(Tup{});
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto& here = cell[idx];
    if (here.empty()) continue;
    pareto(here, k, cap);
    if (idx + 1 == total) break;
    std::array<std::uint64_t, 3> pos{};
    for (std::size_t i = 0, rest = idx; i < k; ++i) {
      pos[i] = rest % dims[i];
      rest /= dims[i];
    }
    auto push = [&](std::uint64_t next, const Tup& add) {
      for (const Tup& t : here) {
        Tup u = t;
        bool inside = true;
        for (std::size_t i = 0; i < k; ++i) {
          u[i] += add[i];
          inside = inside && u[i] <= cap;
        }
        if (inside) cell[next].push_back(u);
      }
    };
    // a character of X_i left out of the center
    for (std::size_t i = 0; i < k; ++i) {
      if (pos[i] + 1 >= dims[i]) continue;
      Tup add{};
      add[i] = 1;
      push(idx + stride[i], add);
    }
    // one center character c against the subset that advances
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      bool ok = true;
      std::uint64_t next = idx;
      for (std::size_t i = 0; i < k && ok; ++i) {
        if (!(mask >> i & 1)) continue;
        ok = pos[i] + 1 < dims[i];
        next += stride[i];
      }
      if (!ok) continue;
      for (std::size_t c = 0; c < k; ++c) {
        if (!(mask >> c & 1)) continue;
        const Char ch = s[c][pos[c]];
        bool first = true;
        for (std::size_t e = 0; e < c && first; ++e) first = !((mask >> e & 1) && s[e][pos[e]] == ch);
        if (!first) continue;
        Tup add{};
        for (std::size_t i = 0; i < k; ++i) add[i] = (mask >> i & 1) ? (s[i][pos[i]] != ch ? 1 : 0) : 1;
        push(next, add);
      }
    }
    if (!keep_all) {
      here.clear();
      here.shrink_to_fit();
    }
  }
  return table;
}

std::vector<Tup> tuples_of(std::span<const Strand> s, std::int64_t cap) {
  auto table = tuple_table(s, cap, false);
  auto out = std::move(table.cells.back());
  pareto(out, s.size(), cap);
  return out;
}

std::vector<Tup> convolve(const std::vector<Tup>& a, const std::vector<Tup>& b, std::size_t k, std::int64_t cap) {
  std::vector<Tup> out;
  for (const Tup& u : a) {
    for (const Tup& v : b) {
      Tup w{};
      bool inside = true;
      for (std::size_t i = 0; i < k; ++i) {
        w[i] = u[i] + v[i];
        inside = inside && w[i] <= cap;
      }
      if (inside) out.push_back(w);
    }
  }
  pareto(out, k, cap);
  return out;
}

std::int64_t round_up(std::int64_t v, std::int64_t step) { return (v + step - 1) / step * step; }

std::vector<Tup> rounded(std::vector<Tup> v, std::size_t k, std::int64_t step) {
  for (Tup& t : v)
    for (std::size_t i = 0; i < k; ++i) t[i] = round_up(t[i], step);
  pareto(v, k, std::numeric_limits<std::int64_t>::max());
  return v;
}

EditTupleSet to_public(const std::vector<Tup>& v, std::size_t k, std::int64_t cap) {
  EditTupleSet out{k, cap, {}};
  for (const Tup& t : v) out.tuples.emplace_back(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

std::vector<Tup> to_internal(const EditTupleSet& s) {
  if (s.k > 3) throw Error(Errc::unsupported_k, "edit tuples support k <= 3");
  std::vector<Tup> v;
  for (const EditTuple& t : s.tuples) {
    if (t.size() != s.k) throw Error(Errc::invalid_params, "tuple width differs from k");
    Tup u{};
    std::copy(t.begin(), t.end(), u.begin());
    v.push_back(u);
  }
  return v;
}

// ---------------------------------------------------------------------------------------------
// Window grid shared by the median and center algorithms.

struct Piece {
  std::uint64_t start = 0, length = 0;
  auto operator<=>(const Piece&) const = default;
};

using PieceKey = std::array<std::uint64_t, 6>;

struct PieceKeyHash {
  std::size_t operator()(const PieceKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto v : key) h = (h ^ v) * 0x100000001b3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

std::int64_t length_spread(std::span<const std::uint64_t> lengths) {
  std::array<std::uint64_t, 4> l{};
  std::copy(lengths.begin(), lengths.end(), l.begin());
  std::sort(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(lengths.size()));
  const std::uint64_t mid = l[lengths.size() / 2];
  std::int64_t total = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) total += std::abs(static_cast<std::int64_t>(l[i] - mid));
  return total;
}

class WindowGrid {
 public:
  WindowGrid(const std::vector<Text>& texts, std::uint64_t tau, double epsilon, std::uint64_t guess)
      : texts_(texts), k_(texts.size()) {
    scheme_ = WindowScheme::make(tau, epsilon, guess, texts[0].size());
    sigma_ = scheme_.sigma;
    tiles_ = texts[0].size() / tau;
    band_ = 4 * guess;
    limit_.assign(k_, texts[0].size());
    final_.assign(k_, texts[0].size());
    starts_by_end_.resize(k_);
    ends_by_start_.resize(k_);
    for (std::size_t i = 1; i < k_; ++i) build_windows(i);
  }

  std::size_t k() const noexcept { return k_; }
  std::uint64_t tau() const noexcept { return scheme_.tau; }
  std::uint64_t sigma() const noexcept { return sigma_; }
  std::uint64_t tiles() const noexcept { return tiles_; }
  double epsilon() const noexcept { return scheme_.epsilon; }
  std::uint64_t final_coordinate(std::size_t i) const { return final_[i]; }
  std::uint64_t limit(std::size_t i) const { return limit_[i]; }
  std::uint64_t longest_window() const noexcept { return scheme_.tau + 2 * band_ + sigma_; }
  const Text& text(std::size_t i) const { return texts_[i]; }

  // Coordinates of string i allowed in layer `tile`; empty when lo > hi.
  std::pair<std::uint64_t, std::uint64_t> range(std::size_t i, std::uint64_t tile) const {
    const std::uint64_t x1 = tile * scheme_.tau;
    const std::uint64_t lo = x1 > band_ ? x1 - band_ : 0;
    const std::uint64_t hi = std::min(final_[i], x1 + band_);
    return {(lo + sigma_ - 1) / sigma_ * sigma_, hi / sigma_ * sigma_};
  }

  // Window ends in X_i for windows starting at `start`.
  std::span<const std::uint64_t> ends_from(std::size_t i, std::uint64_t start) const {
    const auto& v = ends_by_start_[i];
    const std::uint64_t at = start / sigma_;
    if (start % sigma_ != 0 || at >= v.size()) return {};
    return v[at];
  }

  // Window starts in X_i whose window ends at `end`.
  std::span<const std::uint64_t> starts_ending_at(std::size_t i, std::uint64_t end) const {
    const auto& m = starts_by_end_[i];
    auto it = m.find(end);
    if (it == m.end()) return {};
    return it->second;
  }

  // Representative of the window of string i at [start, start+length), edit radius `radius`.
  Piece representative(std::size_t i, std::uint64_t radius, std::uint64_t start, std::uint64_t length) {
    if (radius < kCopyRadius || length == 0) return {start, length};
    auto key = std::make_tuple(i, radius, length);
    auto it = reps_.find(key);
    if (it == reps_.end()) {
      const Strand prefix(texts_[i].data(), limit_[i]);
      it = reps_.emplace(key, lz77_representatives(prefix, length, radius)).first;
    }
    const RepresentativeIndex& r = it->second;
    if (r.empty_only()) return {0, 0};
    const std::uint64_t s = r.starts[r.rep_of[start]];
    return {s, std::min(length, limit_[i] - s)};
  }

  Strand view(std::size_t i, Piece p) const { return Strand(texts_[i].data() + p.start, p.length); }

 private:
  void build_windows(std::size_t i) {
    const std::uint64_t n = texts_[i].size();
    limit_[i] = n / sigma_ * sigma_;
    final_[i] = (n + sigma_ - 1) / sigma_ * sigma_;
    const auto tau = static_cast<std::int64_t>(scheme_.tau);
    // predecessors stay inside the band, so longer or shorter windows are never used
    const auto reach = static_cast<std::int64_t>(2 * band_ + sigma_);
    auto& m = starts_by_end_[i];
    auto& ends = ends_by_start_[i];
    for (std::uint64_t start = 0; start <= limit_[i]; start += sigma_) {
      ends.emplace_back();
      for (std::int64_t level : scheme_.delta_levels) {
        if (level < -reach || level > reach) continue;
        const std::uint64_t raw = start + static_cast<std::uint64_t>(tau + level);
        const std::uint64_t end = std::min(raw, n) / sigma_ * sigma_;
        m[end].push_back(start);
        if (ends.back().empty() || ends.back().back() != end) ends.back().push_back(end);
        if (raw >= n) break;
      }
    }
    for (auto& [end, v] : m) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  const std::vector<Text>& texts_;
  std::size_t k_;
  WindowScheme scheme_;
  std::uint64_t sigma_ = 1, tiles_ = 0, band_ = 0;
  std::vector<std::uint64_t> limit_, final_;
  std::vector<std::map<std::uint64_t, std::vector<std::uint64_t>>> starts_by_end_;
  std::vector<std::vector<std::vector<std::uint64_t>>> ends_by_start_;
  std::map<std::tuple<std::size_t, std::uint64_t, std::uint64_t>, RepresentativeIndex> reps_;
};

// Dense storage for one layer x_1 = tile * tau over the other coordinates.
template <class Value>
class Layer {
 public:
  Layer(const WindowGrid& g, std::uint64_t tile) : k_(g.k()), sigma_(g.sigma()) {
    lo_.assign(k_, 0);
    count_.assign(k_, 1);
    std::size_t total = 1;
    for (std::size_t i = 1; i < k_; ++i) {
      auto [lo, hi] = g.range(i, tile);
      lo_[i] = lo;
      count_[i] = hi >= lo ? (hi - lo) / sigma_ + 1 : 0;
      total *= count_[i];
    }
    cells_.resize(total);
  }

  std::size_t size() const noexcept { return cells_.size(); }
  Value& at(std::size_t idx) { return cells_[idx]; }
  const Value& at(std::size_t idx) const { return cells_[idx]; }

  std::vector<std::uint64_t> coords(std::size_t idx) const {
    std::vector<std::uint64_t> x(k_, 0);
    for (std::size_t i = 1; i < k_; ++i) {
      x[i] = lo_[i] + (idx % count_[i]) * sigma_;
      idx /= count_[i];
    }
    return x;
  }

  // Flat index of coordinates, or nullopt outside the layer.
  std::optional<std::size_t> index(std::span<const std::uint64_t> x) const {
    std::size_t idx = 0;
    for (std::size_t i = k_; i-- > 1;) {
      if (x[i] < lo_[i] || (x[i] - lo_[i]) % sigma_ != 0) return std::nullopt;
      const std::uint64_t off = (x[i] - lo_[i]) / sigma_;
      if (off >= count_[i]) return std::nullopt;
      idx = idx * count_[i] + off;
    }
    return idx;
  }

 private:
  std::size_t k_;
  std::uint64_t sigma_;
  std::vector<std::uint64_t> lo_, count_;
  std::vector<Value> cells_;
};

// Calls visit(starts) for every tuple of window starts (index 0 unused) ending at x.
template <class Visit>
void for_each_window_tuple(const WindowGrid& g, std::span<const std::uint64_t> x, Visit&& visit) {
  const std::size_t k = g.k();
  std::vector<std::span<const std::uint64_t>> lists(k);
  for (std::size_t i = 1; i < k; ++i) {
    lists[i] = g.starts_ending_at(i, x[i]);
    if (lists[i].empty()) return;
  }
  std::vector<std::size_t> at(k, 0);
  std::vector<std::uint64_t> starts(k, 0);
  while (true) {
    for (std::size_t i = 1; i < k; ++i) starts[i] = lists[i][at[i]];
    visit(std::span<const std::uint64_t>(starts));
    std::size_t i = 1;
    while (i < k && ++at[i] == lists[i].size()) at[i++] = 0;
    if (i == k) return;
  }
}

std::vector<Text> expand_all(std::span<const Slp> grammars) {
  std::vector<Text> texts;
  for (const Slp& g : grammars) {
    texts.push_back(expand(g));
    for (Char c : texts.back()) {
      if (c >= kSentinelBase) throw Error(Errc::sentinel_in_alphabet, "input uses a reserved character");
    }
  }
  return texts;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0 && epsilon <= 1)) throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1]");
}

// tau = round(sqrt(N / (n * eps))), padded so that X_1 splits into whole windows.
std::uint64_t pad_for_windows(std::span<const Slp> grammars, std::vector<Text>& texts, double eps) {
  std::uint64_t n_max = 0, size = 1;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    n_max = std::max<std::uint64_t>(n_max, texts[i].size());
    size = std::max<std::uint64_t>(size, grammars[i].symbol_count());
  }
  auto tau = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n_max) / (static_cast<double>(size) * eps))));
  tau = std::clamp<std::uint64_t>(tau, 1, std::max<std::uint64_t>(1, n_max));
  const std::uint64_t pad = (tau - texts[0].size() % tau) % tau;
  for (Text& t : texts) t.insert(t.end(), pad, kPad);
  return tau;
}

std::uint64_t total_length(const std::vector<Text>& texts) {
  std::uint64_t total = 0;
  for (const Text& t : texts) total += t.size();
  return total;
}

// ---------------------------------------------------------------------------------------------

std::uint64_t remaining(const WindowGrid& g, std::size_t i, std::uint64_t x) {
  const std::uint64_t n = g.text(i).size();
  return n > x ? n - x : 0;
}

// Exact median distances between every prefix tuple of up to three strands (column model).
class MedianTable {
 public:
  explicit MedianTable(std::span<const Strand> s) {
    const std::size_t k = s.size();
    for (std::size_t i = 0; i < k; ++i) dims_[i] = s[i].size() + 1;
    stride_ = {dims_[1] * dims_[2], dims_[2], 1};
    cost_.assign(dims_[0] * dims_[1] * dims_[2], 0);
    std::array<Char, 3> ch{};
    for (std::size_t a = 0; a < dims_[0]; ++a) {
      for (std::size_t b = 0; b < dims_[1]; ++b) {
        for (std::size_t c = 0; c < dims_[2]; ++c) {
          const std::array<std::size_t, 3> pos{a, b, c};
          const std::size_t idx = a * stride_[0] + b * stride_[1] + c;
          if (idx == 0) continue;
          std::int32_t best = std::numeric_limits<std::int32_t>::max();
          for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
            std::size_t from = idx;
            std::int32_t size = 0;
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i) {
              if (!(mask >> i & 1)) continue;
              ok = pos[i] > 0;
              if (ok) {
                from -= stride_[i];
                ch[static_cast<std::size_t>(size++)] = s[i][pos[i] - 1];
              }
            }
            if (!ok) continue;
            std::int32_t top = 1;
            if (size == 2) top = ch[0] == ch[1] ? 2 : 1;
            if (size == 3) top = ch[0] == ch[1] && ch[1] == ch[2] ? 3 : (ch[0] == ch[1] || ch[1] == ch[2] || ch[0] == ch[2] ? 2 : 1);
            best = std::min(best, cost_[from] + std::min(size, static_cast<std::int32_t>(k) - top));
          }
          cost_[idx] = best;
        }
      }
    }
  }

  std::int64_t at(std::span<const std::uint64_t> lengths) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) idx += lengths[i] * stride_[i];
    return cost_[idx];
  }

 private:
  std::array<std::size_t, 3> dims_{1, 1, 1}, stride_{};
  std::vector<std::int32_t> cost_;
};

// Median DP over window-respecting alignments, pushed forward from each predecessor tuple.
// States whose remaining strings already cost more than `limit` are dropped: the guess is
// rejected for them anyway.
class MedianRun {
 public:
  MedianRun(WindowGrid& g, double limit) : g_(g), k_(g.k()), limit_(limit) {
    const double eps = g.epsilon();
    per_d_ = eps * static_cast<double>(k_);
    d_limit_ = 2.0 * static_cast<double>(k_) * static_cast<double>(g.tau()) / (eps * eps);
    // d whose representatives are plain copies of the windows
    while (copy_top_ * 2 <= d_limit_ && static_cast<std::uint64_t>(std::floor(eps * copy_top_ * 2)) < kCopyRadius) {
      copy_top_ *= 2;
    }
  }

  double solve() {
    const std::size_t k = k_;
    const std::uint64_t tau = g_.tau(), sigma = g_.sigma();
    std::optional<Layer<double>> prev;
    std::array<std::uint64_t, 3> rest{};
    for (std::uint64_t tile = 0; tile <= g_.tiles(); ++tile) {
      Layer<double> cur(g_, tile);
      for (std::size_t idx = 0; idx < cur.size(); ++idx) cur.at(idx) = kInf;
      if (prev) {
        push_windows(*prev, cur, tile);
      } else {
        const std::vector<std::uint64_t> origin(k, 0);
        if (auto j = cur.index(origin)) cur.at(*j) = 0;
      }
      for (std::size_t idx = 0; idx < cur.size(); ++idx) {
        auto x = cur.coords(idx);
        x[0] = tile * tau;
        double best = cur.at(idx);
        // sigma characters of X_i left outside every window
        for (std::size_t i = 1; i < k; ++i) {
          if (x[i] < sigma) continue;
          x[i] -= sigma;
          if (auto j = cur.index(x)) best = std::min(best, cur.at(*j) + static_cast<double>(sigma));
          x[i] += sigma;
        }
        for (std::size_t i = 0; i < k; ++i) rest[i] = remaining(g_, i, x[i]);
        const auto ahead = static_cast<double>(length_spread(std::span(rest.data(), k)));
        cur.at(idx) = best + ahead > limit_ ? kInf : best;
      }
      prev.emplace(std::move(cur));
    }
    std::vector<std::uint64_t> goal(k);
    goal[0] = g_.tiles() * tau;
    for (std::size_t i = 1; i < k; ++i) goal[i] = g_.final_coordinate(i);
    const auto j = prev->index(goal);
    return j ? prev->at(*j) : kInf;
  }

 private:
  void push_windows(const Layer<double>& prev, Layer<double>& cur, std::uint64_t tile) {
    const std::size_t k = k_;
    const std::uint64_t tau = g_.tau();
    const std::uint64_t from1 = (tile - 1) * tau;
    const Strand tile_text(g_.text(0).data() + from1, tau);
    std::vector<std::span<const std::uint64_t>> ends(k);
    std::vector<std::uint64_t> x(k);
    std::array<std::uint64_t, 3> lengths{};
    std::array<Strand, 3> views{};
    for (std::size_t p = 0; p < prev.size(); ++p) {
      const double base = prev.at(p);
      if (base == kInf) continue;
      const auto starts = prev.coords(p);
      bool any = true;
      for (std::size_t i = 1; i < k && any; ++i) {
        ends[i] = g_.ends_from(i, starts[i]);
        any = !ends[i].empty();
      }
      if (!any) continue;
      views[0] = tile_text;
      for (std::size_t i = 1; i < k; ++i) views[i] = g_.view(i, {starts[i], ends[i].back() - starts[i]});
      const MedianTable table(std::span(views.data(), k));

      std::vector<std::size_t> at(k, 0);
      x[0] = tile * tau;
      lengths[0] = tau;
      while (true) {
        for (std::size_t i = 1; i < k; ++i) x[i] = ends[i][at[i]];
        if (auto idx = cur.index(x)) {
          bool equal = true;
          for (std::size_t i = 1; i < k; ++i) {
            lengths[i] = x[i] - starts[i];
            equal = equal && lengths[i] == tau &&
                    std::equal(tile_text.begin(), tile_text.end(), g_.text(i).begin() + static_cast<std::ptrdiff_t>(starts[i]));
          }
          double& target = cur.at(*idx);
          if (equal) {
            target = std::min(target, base);
          } else if (base < target) {
            const std::int64_t exact = table.at(std::span(lengths.data(), k));
            std::array<Piece, 3> windows{};
            windows[0] = {from1, tau};
            for (std::size_t i = 1; i < k; ++i) windows[i] = {starts[i], lengths[i]};
            target = std::min(target, base + window_cost(windows, exact, target - base));
          }
        }
        std::size_t i = 1;
        while (i < k && ++at[i] == ends[i].size()) at[i++] = 0;
        if (i == k) break;
      }
    }
  }

  // min over d of (median distance of the representatives, if <= d) + eps*k*d, when below
  // budget. For d with copy representatives the window's own median `exact` applies, and the
  // smallest such d that fits it is the best of them.
  double window_cost(const std::array<Piece, 3>& windows, std::int64_t exact, double budget) {
    const double eps = g_.epsilon();
    double best = kInf;
    if (static_cast<double>(exact) <= copy_top_) {
      double fit = 1;
      while (fit < static_cast<double>(exact)) fit *= 2;
      best = static_cast<double>(exact) + per_d_ * fit;
    }
    std::array<Piece, 3> reps{};
    std::array<std::uint64_t, 3> lengths{};
    for (double d = copy_top_ * 2; d <= d_limit_; d *= 2) {
      const double room = std::min(budget, best) - per_d_ * d;
      if (room <= 0) break;
      const auto radius = static_cast<std::uint64_t>(std::floor(eps * d));
      const auto cap = std::min(static_cast<std::int64_t>(d), static_cast<std::int64_t>(std::ceil(room)) - 1);
      // representatives sit within radius of each window
      const std::int64_t floor_value = exact - static_cast<std::int64_t>(k_ * radius);
      if (cap < 0 || floor_value > cap) continue;
      for (std::size_t i = 0; i < k_; ++i) {
        reps[i] = g_.representative(i, radius, windows[i].start, windows[i].length);
        lengths[i] = reps[i].length;
      }
      const std::int64_t spread = length_spread(std::span(lengths.data(), k_));
      if (spread > cap) continue;
      std::optional<std::int64_t> m;
      for (std::int64_t probe = std::max<std::int64_t>({spread, floor_value, 1});; probe *= 2) {
        m = median(reps, std::min(probe, cap));
        if (m || probe >= cap) break;
      }
      if (m) best = std::min(best, static_cast<double>(*m) + per_d_ * d);
    }
    return best;
  }

  std::optional<std::int64_t> median(const std::array<Piece, 3>& reps, std::int64_t cap) {
    PieceKey key{};
    for (std::size_t i = 0; i < k_; ++i) {
      key[2 * i] = reps[i].start;
      key[2 * i + 1] = reps[i].length;
    }
    Memo& m = memo_[key];
    if (m.value >= 0) return m.value <= cap ? std::optional<std::int64_t>(m.value) : std::nullopt;
    if (m.exceeded >= cap) return std::nullopt;
    std::array<Strand, 3> views{};
    for (std::size_t i = 0; i < k_; ++i) views[i] = g_.view(i, reps[i]);
    auto r = bounded_median(std::span(views.data(), k_), cap);
    if (r) m.value = *r;
    else m.exceeded = cap;
    return r;
  }

  struct Memo {
    std::int64_t value = -1, exceeded = -1;
  };

  WindowGrid& g_;
  std::size_t k_;
  double limit_;
  double per_d_ = 0, d_limit_ = 0, copy_top_ = 1;
  std::unordered_map<PieceKey, Memo, PieceKeyHash> memo_;
};

// Center DP with sets of edit tuples per state. Tuples that cannot finish within `limit` in
// every coordinate are dropped.
class CenterRun {
 public:
  CenterRun(WindowGrid& g, std::uint64_t guess, std::uint64_t x1_length, std::int64_t limit)
      : g_(g), k_(g.k()), limit_(limit) {
    const double eps = g.epsilon();
    const double slack = eps * static_cast<double>(guess) * static_cast<double>(g.tau()) / static_cast<double>(x1_length);
    cap_ = 3 * static_cast<std::int64_t>(guess) + static_cast<std::int64_t>(std::floor(slack));
    radius_ = static_cast<std::uint64_t>(std::floor(eps * static_cast<double>(guess)));
    step_ = static_cast<std::int64_t>(g.sigma());
  }

  std::int64_t solve() {
    const std::size_t k = k_;
    const std::uint64_t tau = g_.tau(), sigma = g_.sigma();
    std::optional<Layer<std::vector<Tup>>> prev;
    std::vector<std::uint64_t> pred(k);
    std::array<std::int64_t, 3> rest{};
    for (std::uint64_t tile = 0; tile <= g_.tiles(); ++tile) {
      Layer<std::vector<Tup>> cur(g_, tile);
      for (std::size_t idx = 0; idx < cur.size(); ++idx) {
        auto x = cur.coords(idx);
        x[0] = tile * tau;
        std::vector<Tup> here;
        if (tile == 0 && std::all_of(x.begin() + 1, x.end(), [](auto v) { return v == 0; })) here.push_back(Tup{});
        for (std::size_t i = 1; i < k; ++i) {
          if (x[i] < sigma) continue;
          x[i] -= sigma;
          if (auto j = cur.index(x)) {
            for (Tup t : cur.at(*j)) {
              t[i] += static_cast<std::int64_t>(sigma);
              here.push_back(t);
            }
          }
          x[i] += sigma;
        }
        if (prev) {
          const Strand tile_text(g_.text(0).data() + (tile - 1) * tau, tau);
          for_each_window_tuple(g_, x, [&](std::span<const std::uint64_t> starts) {
            pred[0] = (tile - 1) * tau;
            for (std::size_t i = 1; i < k; ++i) pred[i] = starts[i];
            const auto j = prev->index(pred);
            if (!j || prev->at(*j).empty()) return;
            bool equal = true;
            std::array<Piece, 3> windows{};
            windows[0] = {(tile - 1) * tau, tau};
            for (std::size_t i = 1; i < k; ++i) {
              windows[i] = {starts[i], x[i] - starts[i]};
              equal = equal && windows[i].length == tau &&
                      std::equal(tile_text.begin(), tile_text.end(), g_.text(i).begin() + static_cast<std::ptrdiff_t>(starts[i]));
            }
            const auto& from = prev->at(*j);
            if (equal) {
              here.insert(here.end(), from.begin(), from.end());
              return;
            }
            const auto joined = convolve(from, window_tuples(windows), k, cap_);
            here.insert(here.end(), joined.begin(), joined.end());
          });
        }
        // each remaining piece costs at least its length gap to the remaining center
        for (std::size_t i = 0; i < k; ++i) rest[i] = static_cast<std::int64_t>(remaining(g_, i, x[i]));
        std::erase_if(here, [&](const Tup& t) {
          std::int64_t up = 0, down = std::numeric_limits<std::int64_t>::min();
          for (std::size_t i = 0; i < k; ++i) {
            up = std::max(up, t[i] + rest[i]);
            down = std::max(down, t[i] - rest[i]);
          }
          const std::int64_t bound = up >= down ? (up + down + 1) / 2 : down;
          return bound > limit_;
        });
        pareto(here, k, cap_);
        cur.at(idx) = std::move(here);
      }
      prev.emplace(std::move(cur));
    }
    std::vector<std::uint64_t> goal(k);
    goal[0] = g_.tiles() * tau;
    for (std::size_t i = 1; i < k; ++i) goal[i] = g_.final_coordinate(i);
    const auto j = prev->index(goal);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    if (j) {
      for (const Tup& t : prev->at(*j)) best = std::min(best, *std::max_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k)));
    }
    return best;
  }

 private:
  // Exact tuples of the representatives, widened by the representative radius and rounded.
  std::vector<Tup> window_tuples(const std::array<Piece, 3>& windows) {
    if (radius_ == 0) return from_shared_start(windows);
    std::array<Piece, 3> reps{};
    PieceKey key{};
    for (std::size_t i = 0; i < k_; ++i) {
      reps[i] = g_.representative(i, radius_, windows[i].start, windows[i].length);
      key[2 * i] = reps[i].start;
      key[2 * i + 1] = reps[i].length;
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::array<Strand, 3> views{};
    for (std::size_t i = 0; i < k_; ++i) views[i] = g_.view(i, reps[i]);
    auto tuples = tuples_of(std::span(views.data(), k_), cap_);
    for (Tup& t : tuples)
      for (std::size_t i = 0; i < k_; ++i) t[i] += static_cast<std::int64_t>(radius_);
    tuples = rounded(std::move(tuples), k_, step_);
    pareto(tuples, k_, cap_);
    return memo_.emplace(key, std::move(tuples)).first->second;
  }

  // Windows are their own representatives: one table per tuple of starts serves every end.
  std::vector<Tup> from_shared_start(const std::array<Piece, 3>& windows) {
    PieceKey key{};
    for (std::size_t i = 0; i < k_; ++i) key[i] = windows[i].start;
    auto it = tables_.find(key);
    if (it == tables_.end()) {
      std::array<Strand, 3> views{};
      views[0] = g_.view(0, windows[0]);
      for (std::size_t i = 1; i < k_; ++i) {
        const std::uint64_t s = windows[i].start;
        views[i] = g_.view(i, {s, std::min(g_.limit(i), s + g_.longest_window()) - s});
      }
      it = tables_.emplace(key, tuple_table(std::span(views.data(), k_), cap_, true)).first;
    }
    std::array<std::uint64_t, 3> len{};
    for (std::size_t i = 0; i < k_; ++i) len[i] = windows[i].length;
    const auto& cell = it->second.at(std::span(len.data(), k_));
    if (step_ == 1) return cell;
    return rounded(cell, k_, step_);
  }

  WindowGrid& g_;
  std::size_t k_;
  std::int64_t limit_;
  std::int64_t cap_ = 0, step_ = 1;
  std::uint64_t radius_ = 0;
  std::unordered_map<PieceKey, std::vector<Tup>, PieceKeyHash> memo_;
  std::unordered_map<PieceKey, TupleTable, PieceKeyHash> tables_;
};

}  // namespace

std::optional<std::int64_t> bounded_k_edit(std::span<const Text> strings, std::uint64_t d_cap) {
  check_k(strings.size(), 2, 4);
  std::vector<Strand> views(strings.begin(), strings.end());
  const auto cap = static_cast<std::int64_t>(std::min<std::uint64_t>(d_cap, std::numeric_limits<std::int32_t>::max()));
  return bounded_median(views, cap);
}

std::uint64_t slide(std::span<const Text> strings, std::uint64_t j, std::span<const std::int64_t> offsets) {
  check_k(strings.size(), 2, 4);
  if (offsets.size() + 1 != strings.size()) throw Error(Errc::invalid_params, "need offsets d_2..d_k");
  const std::uint64_t n1 = strings[0].size();
  if (j < 1 || j > n1 + 1) throw Error(Errc::out_of_range, "j outside X_1");
  std::uint64_t ext = n1 + 1 - j;
  for (std::size_t i = 1; i < strings.size(); ++i) {
    const auto at = static_cast<std::int64_t>(j) + offsets[i - 1];
    if (at < 1 || at > static_cast<std::int64_t>(strings[i].size()) + 1) throw Error(Errc::out_of_range, "offset leaves X_i");
    ext = std::min(ext, scan_lce(strings[0], j - 1, strings[i], static_cast<std::size_t>(at - 1)));
  }
  return j - 1 + ext;
}

RepresentativeIndex lz77_representatives(std::span<const Char> text, std::uint64_t window, std::uint64_t delta_max) {
  if (delta_max < 1) throw Error(Errc::invalid_params, "delta_max must be at least 1");
  RepresentativeIndex out;
  out.window = window;
  out.delta_max = delta_max;
  out.rep_of.assign(text.size(), 0);
  if (delta_max >= window || text.empty()) return out;

  const std::uint64_t step = std::max<std::uint64_t>(1, delta_max / 2);
  const auto lz = lz77_factorize(text);
  std::size_t at = 0;
  bool in_run = false;
  std::uint64_t run_rep_start = 0;
  for (const Lz77Factor& f : lz.factors) {
    for (std::size_t i = at; i < at + f.length; ++i) {
      const bool good = !f.is_literal && i + window <= at + f.length;
      if (good) {
        out.rep_of[i] = out.rep_of[f.source + (i - at)];
        in_run = false;
        continue;
      }
      // a window crossing the factor end: a fresh representative every step positions
      if (!in_run || i - run_rep_start >= step) {
        run_rep_start = i;
        out.starts.push_back(i);
      }
      out.rep_of[i] = static_cast<std::uint32_t>(out.starts.size() - 1);
      in_run = true;
    }
    at += f.length;
  }
  return out;
}

void pareto_minimize(EditTupleSet& s) {
  auto v = to_internal(s);
  pareto(v, s.k, s.cap);
  s = to_public(v, s.k, s.cap);
}

EditTupleSet edit_tuples_exact(std::span<const Text> strings, std::int64_t cap) {
  check_k(strings.size(), 2, 3);
  if (cap < 0) throw Error(Errc::invalid_cap, "cap must be non-negative");
  std::vector<Strand> views(strings.begin(), strings.end());
  return to_public(tuples_of(views, cap), strings.size(), cap);
}

EditTupleSet vector_convolve(const EditTupleSet& a, const EditTupleSet& b, std::int64_t cap) {
  if (a.k != b.k) throw Error(Errc::invalid_params, "tuple sets differ in k");
  return to_public(convolve(to_internal(a), to_internal(b), a.k, cap), a.k, cap);
}

EditTupleSet round_tuples(const EditTupleSet& s, std::int64_t sigma) {
  if (sigma < 1) throw Error(Errc::invalid_params, "sigma must be at least 1");
  return to_public(rounded(to_internal(s), s.k, sigma), s.k, round_up(s.cap, sigma));
}

WindowScheme WindowScheme::make(std::uint64_t tau, double epsilon, std::uint64_t guess, std::uint64_t x1_length) {
  if (tau < 1) throw Error(Errc::invalid_tau, "tau must be at least 1");
  WindowScheme w;
  w.tau = tau;
  w.epsilon = epsilon;
  w.guess = guess;
  if (x1_length > 0) {
    const double s = epsilon * static_cast<double>(guess) * static_cast<double>(tau) / static_cast<double>(x1_length);
    w.sigma = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(s)));
  }
  const double top = 2.0 * static_cast<double>(tau) / (epsilon * epsilon);
  const auto rounds = static_cast<std::int64_t>(std::ceil(std::log(top) / std::log1p(epsilon)));
  std::vector<std::int64_t> levels{0, 1, -1, -static_cast<std::int64_t>(tau)};
  double power = 1;
  std::int64_t last = 1;
  for (std::int64_t r = 1; r <= rounds; ++r) {
    power *= 1 + epsilon;
    const auto v = static_cast<std::int64_t>(std::floor(power));
    if (v == last) continue;
    last = v;
    levels.push_back(v);
    levels.push_back(-v);
  }
  std::erase_if(levels, [&](std::int64_t v) { return static_cast<std::int64_t>(tau) + v < 0; });
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  w.delta_levels = std::move(levels);
  return w;
}

double median_internal_epsilon(double epsilon, std::size_t k) { return epsilon / (19.0 * static_cast<double>(k)); }

std::int64_t median_edit_approx(std::span<const Slp> grammars, double epsilon) {
  check_k(grammars.size(), 2, 3);
  check_epsilon(epsilon);
  auto texts = expand_all(grammars);
  const double eps = median_internal_epsilon(epsilon, texts.size());
  const std::uint64_t tau = pad_for_windows(grammars, texts, eps);
  const std::uint64_t total = total_length(texts);
  for (std::uint64_t guess = 1;; guess *= 2) {
    WindowGrid grid(texts, tau, eps, guess);
    const double value = MedianRun(grid, 2.0 * static_cast<double>(guess)).solve();
    if (value <= 2.0 * static_cast<double>(guess) || guess > 2 * total + 2) {
      return static_cast<std::int64_t>(std::floor(value + 1e-9));
    }
  }
}

std::int64_t center_edit_approx(std::span<const Slp> grammars, double epsilon) {
  check_k(grammars.size(), 2, 3);
  check_epsilon(epsilon);
  auto texts = expand_all(grammars);
  const double eps = median_internal_epsilon(epsilon, texts.size());
  const std::uint64_t x1_length = texts[0].size();
  const std::uint64_t tau = pad_for_windows(grammars, texts, eps);
  const std::uint64_t total = total_length(texts);
  for (std::uint64_t guess = 1;; guess *= 2) {
    WindowGrid grid(texts, tau, eps, guess);
    const std::int64_t value =
        CenterRun(grid, guess, std::max<std::uint64_t>(1, x1_length), static_cast<std::int64_t>(2 * guess)).solve();
    if (value <= static_cast<std::int64_t>(2 * guess) || guess > 2 * total + 2) return value;
  }
}

}  // namespace gramdist
