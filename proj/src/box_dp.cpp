#include "gramdist/box_dp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "gramdist/error.hpp"

namespace gramdist {

namespace {

Slp cnf_of(const Slp& g) { return g.is_cnf() ? g : to_cnf(g); }

std::uint64_t clamp_tau(double raw, std::uint64_t total, const BoxTuning& t) {
  const std::uint64_t hi = std::max<std::uint64_t>(1, std::min({total, t.max_tau, std::uint64_t{kMaxFragment}}));
  const std::uint64_t lo = std::min(std::max<std::uint64_t>(1, t.min_tau), hi);
  if (!(raw >= 1.0)) return lo;
  const double r = std::round(raw * t.tau_scale);
  if (r >= static_cast<double>(hi)) return hi;
  return std::max(lo, static_cast<std::uint64_t>(r));
}

// floor((1+alpha)^r) for r >= 0 (or ceil when `up`), distinct and <= limit.
std::vector<std::uint64_t> geometric_levels(double alpha, std::uint64_t limit, bool up) {
  std::vector<std::uint64_t> out;
  if (limit == 0) return out;
  const double steps = std::log(static_cast<double>(limit) + 1.0) / std::log1p(alpha);
  if (!(steps < 4.0 * static_cast<double>(limit))) {
    for (std::uint64_t v = 1; v <= limit; ++v) out.push_back(v);
    return out;
  }
  for (double p = 1.0;; p *= 1.0 + alpha) {
    const double f = up ? std::ceil(p) : std::floor(p);
    if (f > static_cast<double>(limit)) break;
    const auto v = static_cast<std::uint64_t>(f);
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

double shrink(double alpha) { return alpha * (1.0 - 1e-6); }

struct Input {
  std::size_t index;  // in_index of the box
  std::int64_t value;
};

using FrontKey = std::pair<std::size_t, std::size_t>;  // (i + j, i)

// Drives boxes in order of i+j, then i. Only boxes with a reachable input are visited.
class Wavefront {
 public:
  Wavefront(BoxDecomposition& b, bool keep) : b_(b), keep_(keep) {}

  template <class Process>
  PortalDpRun run(Process&& process) {
    PortalDpRun result;
    std::set<FrontKey> pending{{0, 0}};
    const std::size_t px = b_.columns(), py = b_.rows();
    while (!pending.empty()) {
      const auto [sum, i] = *pending.begin();
      pending.erase(pending.begin());
      const std::size_t j = sum - i;
      if (!keep_) {
        while (!fronts_.empty() && fronts_.begin()->first.first + 1 < sum) fronts_.erase(fronts_.begin());
      }
      std::vector<Input> inputs = gather(i, j);
      if (inputs.empty()) continue;
      ++result.boxes;
      DpFront front;
      process(i, j, inputs, front);
      auto finite = [](const std::vector<std::int64_t>& v) {
        return std::any_of(v.begin(), v.end(), [](std::int64_t d) { return d < kUnreachable; });
      };
      if (i + 1 < px && finite(front.right_value)) pending.insert({sum + 1, i + 1});
      if (j + 1 < py && finite(front.top_value)) pending.insert({sum + 1, i});
      fronts_[{sum, i}] = std::move(front);
    }
    if (auto it = fronts_.find({px + py - 2, px - 1}); it != fronts_.end()) {
      const DpFront& f = it->second;
      if (!f.right_y.empty() && f.right_y.back() == b_.y_length()) result.value = f.right_value.back();
    }
    if (keep_) {
      for (auto& [key, f] : fronts_) result.fronts.emplace(FrontKey{key.second, key.first - key.second}, std::move(f));
    }
    return result;
  }

 private:
  std::vector<Input> gather(std::size_t i, std::size_t j) const {
    const auto bx = b_.x_boundaries();
    const auto by = b_.y_boundaries();
    const std::uint64_t x0 = bx[i], x1 = bx[i + 1], y0 = by[j];
    const std::uint64_t w = x1 - x0;
    std::vector<Input> in;
    if (i == 0 && j == 0) in.push_back({w, 0});
    if (j > 0) {
      if (auto it = fronts_.find({i + j - 1, i}); it != fronts_.end()) {
        const DpFront& f = it->second;
        for (std::size_t k = 0; k < f.top_x.size(); ++k) in.push_back({w - (f.top_x[k] - x0), f.top_value[k]});
      }
    }
    if (i > 0) {
      if (auto it = fronts_.find({i + j - 1, i - 1}); it != fronts_.end()) {
        const DpFront& f = it->second;
        for (std::size_t k = 0; k < f.right_y.size(); ++k) in.push_back({w + (f.right_y[k] - y0), f.right_value[k]});
      }
    }
    std::sort(in.begin(), in.end(), [](const Input& a, const Input& c) {
      return a.index != c.index ? a.index < c.index : a.value < c.value;
    });
    std::vector<Input> out;
    for (const Input& e : in) {
      if (e.value >= kUnreachable) continue;
      if (!out.empty() && out.back().index == e.index) continue;
      out.push_back(e);
    }
    return out;
  }

  BoxDecomposition& b_;
  bool keep_;
  std::map<FrontKey, DpFront> fronts_;
};

}  // namespace

BoxDecomposition::BoxDecomposition(const Slp& gx, const Slp& gy, std::uint64_t tau) : tau_(tau) {
  if (tau < 1 || tau > gx.length() + gy.length()) {
    throw Error(Errc::invalid_tau, "tau must lie in [1, N+M]");
  }
  px_ = std::make_unique<PhrasePartition>(partition(cnf_of(gx), tau));
  py_ = std::make_unique<PhrasePartition>(partition(cnf_of(gy), tau));
  oracle_ = std::make_unique<DistBoxOracle>(*px_, *py_);
}

BoxDecomposition box_decomposition(const Slp& gx, const Slp& gy, std::uint64_t tau) {
  return BoxDecomposition(gx, gy, tau);
}

// ---- portals ---------------------------------------------------------------

PortalSet PortalSet::band(std::uint64_t d_cap) { return PortalSet(Kind::band, d_cap, {}); }

PortalSet PortalSet::all_boundary() { return band(std::numeric_limits<std::uint64_t>::max() / 2); }

PortalSet PortalSet::diagonals(std::vector<std::uint64_t> offsets) {
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  return PortalSet(Kind::diagonals, 0, std::move(offsets));
}

void PortalSet::on_vertical(std::uint64_t x, std::uint64_t lo, std::uint64_t hi,
                            std::vector<std::uint64_t>& out) const {
  out.clear();
  if (kind_ == Kind::band) {
    const std::uint64_t from = std::max(lo, x > d_cap_ ? x - d_cap_ : 0);
    const std::uint64_t to = std::min(hi, x + std::min(d_cap_, hi));
    for (std::uint64_t y = from; y <= to; ++y) out.push_back(y);
    return;
  }
  out.push_back(lo);
  // x - y = s with y in (lo, hi)
  for (auto it = std::lower_bound(offsets_.begin(), offsets_.end(), x > hi ? x - hi : 0); it != offsets_.end(); ++it) {
    if (*it > x || x - *it <= lo) break;
    if (x - *it < hi) out.push_back(x - *it);
  }
  // y - x = s
  for (auto it = std::lower_bound(offsets_.begin(), offsets_.end(), lo > x ? lo - x : 0); it != offsets_.end(); ++it) {
    const std::uint64_t y = x + *it;
    if (y >= hi) break;
    if (y > lo) out.push_back(y);
  }
  if (hi != lo) out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

void PortalSet::on_horizontal(std::uint64_t y, std::uint64_t lo, std::uint64_t hi,
                              std::vector<std::uint64_t>& out) const {
  on_vertical(y, lo, hi, out);  // the portal rule is symmetric in x and y
}

bool PortalSet::contains(const BoxDecomposition& b, std::uint64_t x, std::uint64_t y) const {
  if (x > b.x_length() || y > b.y_length()) return false;
  const auto bx = b.x_boundaries();
  const auto by = b.y_boundaries();
  const bool vertical = std::binary_search(bx.begin(), bx.end(), x);
  const bool horizontal = std::binary_search(by.begin(), by.end(), y);
  if (!vertical && !horizontal) return false;
  const std::uint64_t gap = x > y ? x - y : y - x;
  if (kind_ == Kind::band) return gap <= d_cap_;
  return (vertical && horizontal) || std::binary_search(offsets_.begin(), offsets_.end(), gap);
}

std::uint64_t PortalSet::count(const BoxDecomposition& b) const {
  const auto bx = b.x_boundaries();
  const auto by = b.y_boundaries();
  std::vector<std::uint64_t> seg;
  std::uint64_t total = 0;
  for (std::uint64_t x : bx) {
    for (std::size_t j = 0; j + 1 < by.size(); ++j) {
      on_vertical(x, by[j], by[j + 1], seg);
      total += seg.size();
      if (j > 0 && !seg.empty() && seg.front() == by[j]) --total;  // shared with the segment below
    }
  }
  for (std::uint64_t y : by) {
    for (std::size_t i = 0; i + 1 < bx.size(); ++i) {
      on_horizontal(y, bx[i], bx[i + 1], seg);
      for (std::uint64_t x : seg) total += (x != bx[i] && x != bx[i + 1]);
    }
  }
  return total;
}

PortalSet approx_portals(const BoxDecomposition& b, double alpha) {
  if (!(alpha > 0)) throw Error(Errc::invalid_params, "alpha must be positive");
  std::vector<std::uint64_t> offsets = geometric_levels(alpha, b.x_length() + b.y_length(), false);
  offsets.push_back(0);
  return PortalSet::diagonals(std::move(offsets));
}

PortalSet bounded_portals(const BoxDecomposition&, std::uint64_t d_cap) { return PortalSet::band(d_cap); }

// ---- portal DP ---------------------------------------------------------------

PortalDpRun portal_dp_run(BoxDecomposition& b, const PortalSet& portals, bool keep_fronts) {
  const auto bx = b.x_boundaries();
  const auto by = b.y_boundaries();
  const std::size_t last_i = b.columns() - 1, last_j = b.rows() - 1;
  std::vector<std::uint64_t> ys, xs;
  MongeView view;

  Wavefront wave(b, keep_fronts);
  return wave.run([&](std::size_t i, std::size_t j, const std::vector<Input>& inputs, DpFront& front) {
    const std::uint64_t x0 = bx[i], x1 = bx[i + 1], y0 = by[j], y1 = by[j + 1];
    const std::uint64_t h = y1 - y0;
    portals.on_vertical(x1, y0, y1, ys);
    portals.on_horizontal(y1, x0, x1, xs);
    if (i == last_i && j == last_j) {
      if (ys.empty() || ys.back() != y1) ys.push_back(y1);
      if (xs.empty() || xs.back() != x1) xs.push_back(x1);
    }
    view.matrix = &b.dist(i, j);
    view.rows.clear();
    for (std::uint64_t y : ys) view.rows.push_back(y - y0);
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
      if (*it != x1) view.rows.push_back(h + (x1 - *it));
    }
    view.cols.clear();
    view.offsets.clear();
    for (const Input& in : inputs) {
      view.cols.push_back(in.index);
      view.offsets.push_back(in.value);
    }
    const std::vector<RowMinimum> minima = smawk_row_minima(view);

    front.right_y = ys;
    front.right_value.resize(ys.size());
    for (std::size_t r = 0; r < ys.size(); ++r) front.right_value[r] = minima[r].value;
    front.top_x = xs;
    front.top_value.resize(xs.size());
    std::size_t r = view.rows.size();
    for (std::size_t k = 0; k < xs.size(); ++k) {
      // xs ascending maps onto the tail of the rows in reverse
      front.top_value[k] = xs[k] == x1 ? front.right_value.back() : minima[--r].value;
    }
  });
}

std::int64_t portal_dp(BoxDecomposition& b, const PortalSet& portals) { return portal_dp_run(b, portals).value; }

PortalDpRun lcs_portal_run(BoxDecomposition& b, double alpha, bool keep_fronts) {
  if (!(alpha > 0)) throw Error(Errc::invalid_params, "alpha must be positive");
  const auto bx = b.x_boundaries();
  const auto by = b.y_boundaries();
  const std::vector<std::uint64_t> thresholds = geometric_levels(alpha, b.x_length() + b.y_length(), true);

  Wavefront wave(b, keep_fronts);
  return wave.run([&](std::size_t i, std::size_t j, const std::vector<Input>& inputs, DpFront& front) {
    const std::uint64_t x0 = bx[i], x1 = bx[i + 1], y0 = by[j], y1 = by[j + 1];
    const std::uint64_t h = y1 - y0;
    const DistMatrix& m = b.dist(i, j);
    auto walk = [&](std::size_t out) {
      std::int64_t best = kUnreachable;
      for (const Input& in : inputs) best = std::min(best, in.value + m.at(in.index, out));
      return best;
    };

    // Along a side the common-subsequence value (x+y-D)/2 never decreases, so the first vertex of
    // each geometric level is found by binary search. Probes that are not level starts are dropped.
    auto pick = [&](std::uint64_t lo, std::uint64_t hi, auto&& out_of, std::uint64_t other,
                    std::vector<std::uint64_t>& coords, std::vector<std::int64_t>& values) {
      std::map<std::uint64_t, std::int64_t> seen;
      auto walk_at = [&](std::uint64_t c) {
        auto it = seen.find(c);
        if (it == seen.end()) it = seen.emplace(c, walk(out_of(c))).first;
        return it->second;
      };
      auto common = [&](std::uint64_t c) {
        const std::int64_t d = walk_at(c);
        return d >= kUnreachable ? std::int64_t{-1} : (static_cast<std::int64_t>(c + other) - d) / 2;
      };
      std::vector<std::uint64_t> chosen{lo, hi};
      const std::int64_t first = common(lo), last = common(hi);
      auto t = std::upper_bound(thresholds.begin(), thresholds.end(),
                                static_cast<std::uint64_t>(std::max<std::int64_t>(first, 0)));
      for (; t != thresholds.end() && static_cast<std::int64_t>(*t) <= last; ++t) {
        std::uint64_t a = lo, z = hi;
        while (z - a > 1) {
          const std::uint64_t mid = a + (z - a) / 2;
          if (common(mid) >= static_cast<std::int64_t>(*t)) z = mid;
          else a = mid;
        }
        chosen.push_back(z);
      }
      std::sort(chosen.begin(), chosen.end());
      chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
      coords = chosen;
      values.clear();
      for (std::uint64_t c : chosen) values.push_back(walk_at(c));
    };
    pick(y0, y1, [&](std::uint64_t y) { return static_cast<std::size_t>(y - y0); }, x1, front.right_y,
         front.right_value);
    pick(x0, x1, [&](std::uint64_t x) { return static_cast<std::size_t>(h + (x1 - x)); }, y1, front.top_x,
         front.top_value);
  });
}

// ---- end-to-end algorithms ---------------------------------------------------

std::optional<std::int64_t> deletion_distance_greedy(std::span<const Char> x, std::span<const Char> y,
                                                     std::uint64_t d_cap) {
  const auto n = static_cast<std::int64_t>(x.size());
  const auto m = static_cast<std::int64_t>(y.size());
  const auto cap = static_cast<std::int64_t>(std::min<std::uint64_t>(d_cap, x.size() + y.size()));
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min() / 4;
  // furthest x reached on diagonal k = x - y
  std::vector<std::int64_t> reach(static_cast<std::size_t>(2 * cap + 3), kNone);
  auto at = [&](std::int64_t k) -> std::int64_t& { return reach[static_cast<std::size_t>(k + cap + 1)]; };
  for (std::int64_t d = 0; d <= cap; ++d) {
    for (std::int64_t k = -d; k <= d; k += 2) {
      if (k < -m || k > n) {
        at(k) = kNone;
        continue;
      }
      std::int64_t px = kNone;
      if (d == 0) {
        px = 0;
      } else {
        if (k + 1 <= d - 1 && at(k + 1) != kNone && at(k + 1) - k <= m) px = at(k + 1);
        if (k - 1 >= -(d - 1) && at(k - 1) != kNone && at(k - 1) + 1 <= n) px = std::max(px, at(k - 1) + 1);
      }
      if (px == kNone) {
        at(k) = kNone;
        continue;
      }
      std::int64_t py = px - k;
      while (px < n && py < m && x[static_cast<std::size_t>(px)] == y[static_cast<std::size_t>(py)]) {
        ++px;
        ++py;
      }
      at(k) = px;
      if (px == n && py == m) return d;
    }
  }
  return std::nullopt;
}

namespace {

// Plain expansions, made at most once per call chain.
struct PlainTexts {
  const Slp& gx;
  const Slp& gy;
  std::optional<Text> x, y;

  std::optional<std::int64_t> greedy(std::uint64_t d_cap) {
    if (!x) x = expand(gx);
    if (!y) y = expand(gy);
    return deletion_distance_greedy(*x, *y, d_cap);
  }
};

std::optional<std::int64_t> bounded(PlainTexts& plain, std::uint64_t d_cap, const BoxTuning& tuning) {
  const Slp& gx = plain.gx;
  const Slp& gy = plain.gy;
  const std::uint64_t n_len = gx.length(), m_len = gy.length();
  const std::uint64_t total = n_len + m_len;
  if (d_cap < 1 || d_cap > total) throw Error(Errc::invalid_cap, "cap must lie in [1, N+M]");
  const std::uint64_t gap = n_len > m_len ? n_len - m_len : m_len - n_len;
  if (gap > d_cap) return std::nullopt;

  const double nm = static_cast<double>(gx.symbol_count()) * static_cast<double>(gy.symbol_count());
  const double d = static_cast<double>(d_cap), len = static_cast<double>(total);
  bool banded = tuning.path == BoxTuning::Path::banded;
  if (tuning.path == BoxTuning::Path::automatic) {
    banded = nm > d * len || len + d * d <= tuning.banded_bias * std::sqrt(nm * d * len);
  }
  if (banded) return plain.greedy(d_cap);

  const std::uint64_t tau = clamp_tau(std::sqrt(d * len / nm), total, tuning);
  BoxDecomposition b(gx, gy, tau);
  const std::int64_t v = portal_dp(b, bounded_portals(b, d_cap));
  if (v > static_cast<std::int64_t>(d_cap)) return std::nullopt;
  return v;
}

}  // namespace

std::optional<std::int64_t> deletion_distance_bounded(const Slp& gx, const Slp& gy, std::uint64_t d_cap,
                                                      const BoxTuning& tuning) {
  PlainTexts plain{gx, gy, {}, {}};
  return bounded(plain, d_cap, tuning);
}

std::int64_t edit_distance_exact(const Slp& gx, const Slp& gy, const BoxTuning& tuning) {
  const Slp xd = dollar_transform(gx);
  const Slp yd = dollar_transform(gy);
  const std::uint64_t total = xd.length() + yd.length();
  PlainTexts plain{xd, yd, {}, {}};
  for (std::uint64_t d = 1;; d *= 2) {
    const std::uint64_t cap = std::min(d, total);
    if (auto v = bounded(plain, cap, tuning)) return *v / 2;
    if (cap == total) throw Error(Errc::invalid_params, "deletion distance exceeded N+M");
  }
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1]");
}

// Which exact shortcut the dominance analysis prefers, if any.
enum class Shortcut { none, uncompressed, bounded };

Shortcut approx_shortcut(const Slp& gx, const Slp& gy, double epsilon, const BoxTuning& tuning) {
  if (tuning.path == BoxTuning::Path::boxes) return Shortcut::none;
  if (tuning.path == BoxTuning::Path::banded) return Shortcut::uncompressed;
  const double nm = static_cast<double>(gx.symbol_count()) * static_cast<double>(gy.symbol_count());
  const double len = static_cast<double>(gx.length() + gy.length());
  if (nm >= len * len / epsilon) return Shortcut::uncompressed;
  if (1.0 / epsilon >= nm * len) return Shortcut::bounded;
  return Shortcut::none;
}

std::uint64_t approx_tau(const Slp& gx, const Slp& gy, double epsilon, const BoxTuning& tuning) {
  const double nm = static_cast<double>(gx.symbol_count()) * static_cast<double>(gy.symbol_count());
  const std::uint64_t total = gx.length() + gy.length();
  const double len = static_cast<double>(total);
  return clamp_tau(std::cbrt(len * len / (epsilon * nm)), total, tuning);
}

}  // namespace

std::int64_t edit_distance_approx(const Slp& gx, const Slp& gy, double epsilon, const BoxTuning& tuning) {
  check_epsilon(epsilon);
  const Slp xd = dollar_transform(gx);
  const Slp yd = dollar_transform(gy);
  switch (approx_shortcut(xd, yd, epsilon, tuning)) {
    case Shortcut::uncompressed:
      return *PlainTexts{xd, yd, {}, {}}.greedy(xd.length() + yd.length()) / 2;
    case Shortcut::bounded:
      return edit_distance_exact(gx, gy, tuning);
    case Shortcut::none:
      break;
  }
  BoxDecomposition b(xd, yd, approx_tau(xd, yd, epsilon, tuning));
  const std::size_t steps = b.columns() + b.rows() - 2;
  const PortalSet portals = steps == 0 ? PortalSet::diagonals({0})
                                       : approx_portals(b, shrink((std::pow(1.0 + epsilon, 1.0 / steps) - 1.0) / 2.0));
  return portal_dp(b, portals) / 2;
}

std::int64_t lcs_approx(const Slp& gx, const Slp& gy, double epsilon, const BoxTuning& tuning) {
  check_epsilon(epsilon);
  const std::int64_t total = static_cast<std::int64_t>(gx.length() + gy.length());
  switch (approx_shortcut(gx, gy, epsilon, tuning)) {
    case Shortcut::uncompressed:
      return (total - *PlainTexts{gx, gy, {}, {}}.greedy(gx.length() + gy.length())) / 2;
    case Shortcut::bounded: {
      BoxTuning boxes = tuning;
      boxes.path = BoxTuning::Path::boxes;
      return (total - *deletion_distance_bounded(gx, gy, gx.length() + gy.length(), boxes)) / 2;
    }
    case Shortcut::none:
      break;
  }
  BoxDecomposition b(gx, gy, approx_tau(gx, gy, epsilon, tuning));
  const std::size_t steps = b.columns() + b.rows() - 2;
  const double alpha = steps == 0 ? 1.0 : shrink(std::pow(1.0 + epsilon, 1.0 / steps) - 1.0);
  const std::int64_t d = lcs_portal_run(b, alpha).value;
  return (total - d) / 2;
}

}  // namespace gramdist
