#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace oracle {

Str str(const std::string& s) { return Str(s.begin(), s.end()); }

std::int64_t edit_distance_naive(const Str& x, const Str& y) {
  const std::size_t n = x.size(), m = y.size();
  std::vector<std::int64_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::int64_t lcs2(const Str& x, const Str& y) {
  const std::size_t m = y.size();
  std::vector<std::int64_t> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::int64_t deletion_distance_naive(const Str& x, const Str& y) {
  return static_cast<std::int64_t>(x.size() + y.size()) - 2 * lcs2(x, y);
}

std::int64_t lcs_naive(const std::vector<Str>& strings) {
  if (strings.size() == 1) return static_cast<std::int64_t>(strings[0].size());
  if (strings.size() == 2) return lcs2(strings[0], strings[1]);
  if (strings.size() != 3) throw std::invalid_argument("lcs_naive supports up to 3 strings");
  const auto& a = strings[0];
  const auto& b = strings[1];
  const auto& c = strings[2];
  const std::size_t nb = b.size() + 1, nc = c.size() + 1;
  if ((a.size() + 1) * nb * nc > 10'000'000) throw std::length_error("lcs_naive: too large");
  std::vector<std::int64_t> prev(nb * nc, 0), cur(nb * nc, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t l = 0; l < nc; ++l) {
        if (j == 0 || l == 0) {
          cur[j * nc + l] = 0;
          continue;
        }
        if (a[i - 1] == b[j - 1] && b[j - 1] == c[l - 1]) {
          cur[j * nc + l] = prev[(j - 1) * nc + l - 1] + 1;
        } else {
          cur[j * nc + l] = std::max({prev[j * nc + l], cur[(j - 1) * nc + l], cur[j * nc + l - 1]});
        }
      }
    }
    std::swap(prev, cur);
  }
  return prev[(nb - 1) * nc + nc - 1];
}

std::int64_t median_edit_naive(const std::vector<Str>& strings) {
  const std::size_t k = strings.size();
  if (k > 16) throw std::length_error("median_edit_naive: too many strings");
  std::vector<std::size_t> dims(k), stride(k);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    dims[i] = strings[i].size() + 1;
    stride[i] = total;
    total *= dims[i];
    if (total > 1'000'000) throw std::length_error("median_edit_naive: too large");
  }
  // Column model: a subset S advances one character each; the column costs
  // min(|S|, k - maxfreq_S) (either drop all of them or emit the majority character).
  std::vector<std::int64_t> best(total, kInf);
  best[0] = 0;
  std::vector<std::size_t> pos(k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < k; ++i) {
      pos[i] = rest % dims[i];
      rest /= dims[i];
    }
    if (best[idx] >= kInf) continue;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      bool ok = true;
      std::size_t next = idx;
      std::array<std::uint32_t, 32> column{};
      std::size_t size = 0;
      for (std::size_t i = 0; i < k && ok; ++i) {
        if (!(mask >> i & 1)) continue;
        if (pos[i] + 1 >= dims[i]) {
          ok = false;
          break;
        }
        next += stride[i];
        column[size++] = strings[i][pos[i]];
      }
      if (!ok) continue;
      std::int64_t top = 0;
      for (std::size_t a = 0; a < size; ++a)
        top = std::max<std::int64_t>(top, std::count(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(size), column[a]));
      const std::int64_t cost = std::min(static_cast<std::int64_t>(size), static_cast<std::int64_t>(k) - top);
      best[next] = std::min(best[next], best[idx] + cost);
    }
  }
  return best[total - 1];
}

namespace {

// Walks every center string over the joint alphabet, keeping one DP row per input.
// visit(rows) returns false to stop descending below the current center.
void walk_centers(const std::vector<Str>& strings, std::size_t max_len,
                  const std::function<bool(const std::vector<std::vector<std::int64_t>>&)>& visit) {
  std::set<std::uint32_t> alpha_set;
  for (const auto& s : strings) alpha_set.insert(s.begin(), s.end());
  const std::vector<std::uint32_t> alphabet(alpha_set.begin(), alpha_set.end());
  std::vector<std::vector<std::int64_t>> rows(strings.size());
  for (std::size_t i = 0; i < strings.size(); ++i) {
    rows[i].resize(strings[i].size() + 1);
    for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] = static_cast<std::int64_t>(j);
  }
  std::size_t nodes = 0;
  std::function<void(std::size_t, const std::vector<std::vector<std::int64_t>>&)> dfs =
      [&](std::size_t depth, const std::vector<std::vector<std::int64_t>>& cur) {
        if (++nodes > 50'000'000) throw std::length_error("center enumeration too large");
        if (!visit(cur) || depth >= max_len) return;
        for (auto c : alphabet) {
          std::vector<std::vector<std::int64_t>> next(cur.size());
          for (std::size_t i = 0; i < cur.size(); ++i) {
            const auto& s = strings[i];
            next[i].resize(cur[i].size());
            next[i][0] = cur[i][0] + 1;
            for (std::size_t j = 1; j < cur[i].size(); ++j) {
              next[i][j] = std::min({cur[i][j] + 1, next[i][j - 1] + 1, cur[i][j - 1] + (s[j - 1] == c ? 0 : 1)});
            }
          }
          dfs(depth + 1, next);
        }
      };
  dfs(0, rows);
}

std::int64_t row_min(const std::vector<std::int64_t>& r) { return *std::min_element(r.begin(), r.end()); }

}  // namespace

std::int64_t center_edit_naive(const std::vector<Str>& strings) {
  std::size_t min_len = SIZE_MAX, max_len = 0;
  for (const auto& s : strings) {
    min_len = std::min(min_len, s.size());
    max_len = std::max(max_len, s.size());
  }
  std::int64_t best = static_cast<std::int64_t>(max_len);  // empty center
  for (const auto& c : strings) {
    std::int64_t worst = 0;
    for (const auto& s : strings) worst = std::max(worst, edit_distance_naive(s, c));
    best = std::min(best, worst);
  }
  walk_centers(strings, min_len + static_cast<std::size_t>(best), [&](const auto& rows) {
    std::int64_t here = 0, lower = 0;
    for (const auto& r : rows) {
      here = std::max(here, r.back());
      lower = std::max(lower, row_min(r));
    }
    best = std::min(best, here);
    return lower < best;
  });
  return best;
}

std::vector<std::vector<std::int64_t>> edit_tuples_naive(const std::vector<Str>& strings, std::int64_t cap) {
  std::size_t min_len = SIZE_MAX;
  for (const auto& s : strings) min_len = std::min(min_len, s.size());
  std::set<std::vector<std::int64_t>> found;
  walk_centers(strings, min_len + static_cast<std::size_t>(cap), [&](const auto& rows) {
    std::vector<std::int64_t> t;
    bool inside = true, alive = true;
    for (const auto& r : rows) {
      t.push_back(r.back());
      inside = inside && r.back() <= cap;
      alive = alive && row_min(r) <= cap;
    }
    if (inside) found.insert(t);
    return alive;
  });
  std::vector<std::vector<std::int64_t>> front;
  for (const auto& t : found) {
    bool dominated = false;
    for (const auto& u : found) {
      if (u == t) continue;
      bool le = true;
      for (std::size_t i = 0; i < t.size(); ++i) le = le && u[i] <= t[i];
      if (le) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(t);
  }
  return front;
}

std::int64_t hamming_naive(const std::vector<Str>& strings, HammingMode mode) {
  const std::size_t n = strings[0].size();
  std::int64_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (mode == HammingMode::all_equal) {
      bool same = true;
      for (const auto& s : strings) same = same && s[j] == strings[0][j];
      total += same ? 0 : 1;
    } else {
      std::int64_t best = INT64_MAX;
      for (const auto& a : strings) {
        std::int64_t cost = 0;
        for (const auto& b : strings) cost += a[j] != b[j] ? 1 : 0;
        best = std::min(best, cost);
      }
      total += best;
    }
  }
  return total;
}

ShiftAnswer shift_naive(const std::vector<Str>& strings) {
  const std::size_t k = strings.size();
  const std::size_t n = strings[0].size();
  ShiftAnswer best;
  best.score = -1;
  // Lexicographic sweep with a strict improvement test keeps the smallest offsets on ties.
  std::vector<std::int64_t> off(k - 1, 0);
  while (true) {
    std::int64_t score = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool all = true;
      for (std::size_t s = 0; s + 1 < k && all; ++s) {
        all = strings[s][(i + static_cast<std::size_t>(off[s])) % n] == strings[k - 1][i];
      }
      score += all ? 1 : 0;
    }
    if (score > best.score) {
      best.score = score;
      best.offsets = off;
    }
    std::size_t d = off.size();
    while (d > 0 && ++off[d - 1] == static_cast<std::int64_t>(n)) off[--d] = 0;
    if (d == 0) break;
  }
  return best;
}

namespace {

// Undirected 0-1 BFS inside the (|x|+1) x (|y|+1) grid from (a0, b0).
std::vector<std::vector<std::int64_t>> grid_bfs(const Str& x, const Str& y, std::size_t a0, std::size_t b0,
                                                bool directed) {
  const std::size_t w = x.size(), h = y.size();
  std::vector<std::vector<std::int64_t>> dist(w + 1, std::vector<std::int64_t>(h + 1, kInf));
  std::deque<std::pair<std::size_t, std::size_t>> dq;
  dist[a0][b0] = 0;
  dq.emplace_back(a0, b0);
  while (!dq.empty()) {
    auto [a, b] = dq.front();
    dq.pop_front();
    const auto d = dist[a][b];
    auto relax = [&](std::size_t na, std::size_t nb, std::int64_t cost) {
      if (dist[na][nb] > d + cost) {
        dist[na][nb] = d + cost;
        if (cost == 0) dq.emplace_front(na, nb);
        else dq.emplace_back(na, nb);
      }
    };
    if (a < w) relax(a + 1, b, 1);
    if (b < h) relax(a, b + 1, 1);
    if (a < w && b < h && x[a] == y[b]) relax(a + 1, b + 1, 0);
    if (directed) continue;
    if (a > 0) relax(a - 1, b, 1);
    if (b > 0) relax(a, b - 1, 1);
    if (a > 0 && b > 0 && x[a - 1] == y[b - 1]) relax(a - 1, b - 1, 0);
  }
  return dist;
}

}  // namespace

std::vector<std::vector<std::int64_t>> dist_matrix_naive(const Str& x, const Str& y) {
  const std::size_t w = x.size(), h = y.size(), size = w + h + 1;
  auto in_vertex = [&](std::size_t k) {
    return k <= w ? std::pair{w - k, std::size_t{0}} : std::pair{std::size_t{0}, k - w};
  };
  auto out_vertex = [&](std::size_t k) {
    return k <= h ? std::pair{w, k} : std::pair{w - (k - h), h};
  };
  std::vector<std::vector<std::int64_t>> m(size, std::vector<std::int64_t>(size));
  for (std::size_t i = 0; i < size; ++i) {
    auto [a, b] = in_vertex(i);
    const auto dist = grid_bfs(x, y, a, b, false);
    for (std::size_t j = 0; j < size; ++j) {
      auto [c, d] = out_vertex(j);
      m[i][j] = dist[c][d];
    }
  }
  return m;
}

std::vector<std::vector<std::int64_t>> per_vertex_distances(const Str& x, const Str& y) {
  return grid_bfs(x, y, 0, 0, true);
}

}  // namespace oracle
