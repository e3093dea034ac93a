#include "bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "gramdist/box_dp.hpp"
#include "gramdist/product.hpp"
#include "gramdist/shift.hpp"
#include "gramdist/slp.hpp"

namespace gramdist::cli {

namespace {

constexpr const char* kSchema = "bench.v1";
constexpr std::uint64_t kShiftNaiveLimit = 4096;
constexpr std::uint64_t kPerfLength = 1'000'000;
constexpr std::size_t kPerfEdits = 64;

using Clock = std::chrono::steady_clock;

template <class F>
auto timed(double& seconds, F&& f) {
  const auto t0 = Clock::now();
  auto v = f();
  seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return v;
}

Text fibonacci_word(std::uint64_t n) {
  Text a{'a'}, b{'a', 'b'};  // F2 = a, F3 = ab
  while (b.size() < n) {
    Text next = b;
    next.insert(next.end(), a.begin(), a.end());
    a = std::move(b);
    b = std::move(next);
  }
  b.resize(n);
  return b;
}

Text thue_morse(std::uint64_t n) {
  Text t(n);
  for (std::uint64_t i = 0; i < n; ++i) t[i] = (std::popcount(i) & 1) ? 'b' : 'a';
  return t;
}

Text repeated_block(std::uint64_t n, std::mt19937_64& rng) {
  Text block(64);
  for (auto& c : block) c = 'a' + static_cast<Char>(rng() % 4);
  Text t(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    t[i] = block[i % block.size()];
    if (rng() % 1000 == 0) t[i] = 'a' + static_cast<Char>(rng() % 4);
  }
  return t;
}

Text with_edits(Text t, std::size_t edits, std::mt19937_64& rng) {
  for (std::size_t e = 0; e < edits && !t.empty(); ++e) {
    const std::size_t at = rng() % t.size();
    const Char c = 'a' + static_cast<Char>(rng() % 2);
    switch (rng() % 3) {
      case 0: t[at] = c; break;
      case 1: t.insert(t.begin() + static_cast<std::ptrdiff_t>(at), c); break;
      default: if (t.size() > 1) t.erase(t.begin() + static_cast<std::ptrdiff_t>(at)); break;
    }
  }
  return t;
}

Text with_substitutions(Text t, std::size_t count, std::mt19937_64& rng) {
  for (std::size_t e = 0; e < count && !t.empty(); ++e) t[rng() % t.size()] = 'a' + static_cast<Char>(rng() % 3);
  return t;
}

// Ukkonen band with doubling; indel_only gives the deletion distance.
std::int64_t banded_distance(const Text& x, const Text& y, bool indel_only) {
  const auto n = static_cast<std::int64_t>(x.size()), m = static_cast<std::int64_t>(y.size());
  const std::int64_t sub = indel_only ? 2 : 1;
  for (std::int64_t band = std::max<std::int64_t>(1, std::abs(n - m));; band *= 2) {
    const std::int64_t width = 2 * band + 1, inf = 2 * (n + m) + 1;
    std::vector<std::int64_t> prev(static_cast<std::size_t>(width), inf), cur(prev.size(), inf);
    for (std::int64_t j = 0; j <= std::min(m, band); ++j) prev[static_cast<std::size_t>(j + band)] = j;
    for (std::int64_t i = 1; i <= n; ++i) {
      std::fill(cur.begin(), cur.end(), inf);
      for (std::int64_t j = std::max<std::int64_t>(0, i - band); j <= std::min(m, i + band); ++j) {
        const auto slot = static_cast<std::size_t>(j - i + band);
        std::int64_t v = i;
        if (j > 0) {
          v = prev[slot] + (x[static_cast<std::size_t>(i - 1)] == y[static_cast<std::size_t>(j - 1)] ? 0 : sub);
          v = std::min(v, cur[slot - 1] + 1);
        }
        if (slot + 1 < prev.size()) v = std::min(v, prev[slot + 1] + 1);
        cur[slot] = v;
      }
      std::swap(prev, cur);
    }
    const std::int64_t got = prev[static_cast<std::size_t>(m - n + band)];
    if (got <= band) return got;
  }
}

std::uint64_t naive_best_shift(const Text& x, const Text& y) {
  const std::size_t n = x.size();
  std::uint64_t best = 0;
  for (std::size_t d = 0; d < n; ++d) {
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += x[(i + d) % n] == y[i];
    best = std::max(best, hits);
  }
  return best;
}

class Table {
 public:
  Table(std::ostream& out, bool timing) : out_(out), timing_(timing) {
    out_ << "schema,family,n,measure,parameter,tested,reference,ratio,agree,tested_seconds,reference_seconds\n";
  }

  void row(const std::string& family, std::uint64_t n, const std::string& measure, const std::string& parameter,
           double tested, double reference, bool agree, double tested_s, double reference_s) {
    const double ratio = reference == 0 ? (tested == 0 ? 1.0 : INFINITY) : tested / reference;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%s,%s,%.0f,%.0f,%.6f,%d,", kSchema, family.c_str(),
                  static_cast<unsigned long long>(n), measure.c_str(), parameter.c_str(), tested, reference, ratio,
                  agree ? 1 : 0);
    out_ << buf;
    if (timing_) {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f", tested_s, reference_s);
      out_ << buf;
    } else {
      out_ << ',';
    }
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ostream& out_;
  bool timing_;
};

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epsilon=%g", eps);
  return buf;
}

void bench_family(Table& table, const std::string& family, const Text& x, std::mt19937_64& rng,
                  const BenchOptions& o) {
  const std::uint64_t n = x.size();
  const Slp gx = slp_from_text(x);
  double ts = 0, rs = 0;

  {
    const Text y = with_substitutions(x, 1 + n / 1000, rng);
    const Slp gy = slp_from_text(y);
    const auto got = timed(ts, [&] { return hamming(gx, gy); });
    const auto want = timed(rs, [&] {
      std::uint64_t h = 0;
      for (std::size_t i = 0; i < n; ++i) h += x[i] != y[i];
      return h;
    });
    table.row(family, n, "hamming", "", static_cast<double>(got), static_cast<double>(want), got == want, ts, rs);
  }

  const Text y = with_edits(x, std::min<std::size_t>(32, 1 + n / 200), rng);
  const Slp gy = slp_from_text(y);
  const auto exact_ref = timed(rs, [&] { return banded_distance(x, y, false); });
  const double exact_rs = rs;
  {
    const auto got = timed(ts, [&] { return edit_distance_exact(gx, gy); });
    table.row(family, n, "edit", "", static_cast<double>(got), static_cast<double>(exact_ref), got == exact_ref, ts,
              exact_rs);
  }
  {
    const auto got = timed(ts, [&] { return edit_distance_approx(gx, gy, o.epsilon); });
    const bool ok = got >= exact_ref && static_cast<double>(got) <= (1 + o.epsilon) * static_cast<double>(exact_ref) + 1e-9;
    table.row(family, n, "edit-approx", eps_label(o.epsilon), static_cast<double>(got), static_cast<double>(exact_ref),
              ok, ts, exact_rs);
  }
  {
    const auto del = timed(rs, [&] { return banded_distance(x, y, true); });
    const auto lcs = (static_cast<std::int64_t>(x.size() + y.size()) - del) / 2;
    const auto got = timed(ts, [&] { return lcs_approx(gx, gy, o.epsilon); });
    const bool ok = got <= lcs && static_cast<double>(got) * (1 + o.epsilon) >= static_cast<double>(lcs) - 1e-9;
    table.row(family, n, "lcs-approx", eps_label(o.epsilon), static_cast<double>(got), static_cast<double>(lcs), ok,
              ts, rs);
  }
  if (n <= kShiftNaiveLimit) {
    Text rotated(n);
    const std::size_t r = rng() % n;
    for (std::size_t i = 0; i < n; ++i) rotated[i] = x[(i + r) % n];
    rotated = with_substitutions(rotated, 1 + n / 500, rng);
    const auto got = timed(ts, [&] { return shift_match_2(x, rotated).score; });
    const auto want = timed(rs, [&] { return naive_best_shift(x, rotated); });
    table.row(family, n, "shift-score", "", static_cast<double>(got), static_cast<double>(want), got == want, ts, rs);
  }
}

// Fibonacci pair of length 10^6 with 64 random edits: compressed exact edit distance against the
// banded DP, plus the box path forced.
void bench_perf(Table& table, std::mt19937_64& rng) {
  const Text x = fibonacci_word(kPerfLength);
  const Text y = with_edits(x, kPerfEdits, rng);
  const Slp gx = slp_from_text(x), gy = slp_from_text(y);
  double ts = 0, bs = 0, rs = 0;
  const auto want = timed(rs, [&] { return banded_distance(x, y, false); });
  const auto got = timed(ts, [&] { return edit_distance_exact(gx, gy); });
  BoxTuning boxes;
  boxes.path = BoxTuning::Path::boxes;
  const auto boxed = timed(bs, [&] { return edit_distance_exact(gx, gy, boxes); });
  table.row("fibonacci-64-edits", kPerfLength, "edit", "path=auto", static_cast<double>(got),
            static_cast<double>(want), got == want, ts, rs);
  table.row("fibonacci-64-edits", kPerfLength, "edit", "path=boxes", static_cast<double>(boxed),
            static_cast<double>(want), boxed == want, bs, rs);
}

}  // namespace

void run_bench(const BenchOptions& o, std::ostream& out) {
  Table table(out, o.timing);
  std::mt19937_64 rng(o.seed);
  std::vector<std::uint64_t> sizes = o.sizes;
  if (sizes.empty()) {
    if (o.suite == "quick") sizes = {1000, 5000};
    else if (o.suite == "all") sizes = {1000, 10000, 100000};
  }
  if (o.suite != "perf") {
    for (std::uint64_t n : sizes) {
      if (n == 0) continue;
      bench_family(table, "fibonacci", fibonacci_word(n), rng, o);
      bench_family(table, "thue-morse", thue_morse(n), rng, o);
      bench_family(table, "repeated-block", repeated_block(n, rng), rng, o);
    }
  }
  if (o.suite == "all" || o.suite == "perf") bench_perf(table, rng);
}

}  // namespace gramdist::cli
