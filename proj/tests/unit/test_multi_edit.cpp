#include <algorithm>
#include <set>

#include "doctest.h"
#include "gramdist/error.hpp"
#include "gramdist/multi_edit.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gramdist;
using testkit::text;

namespace {

oracle::Str as_str(const Text& t) { return oracle::Str(t.begin(), t.end()); }

std::vector<oracle::Str> as_strs(const std::vector<Text>& v) {
  std::vector<oracle::Str> out;
  for (const Text& t : v) out.push_back(as_str(t));
  return out;
}

std::vector<Slp> grammars_of(const std::vector<Text>& v) {
  std::vector<Slp> out;
  for (const Text& t : v) out.push_back(slp_from_text(t));
  return out;
}

std::vector<Text> all_binary_upto(std::size_t max_len) {
  std::vector<Text> out{Text{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      Text t(len);
      for (std::size_t i = 0; i < len; ++i) t[i] = (bits >> i & 1) ? 'b' : 'a';
      out.push_back(t);
    }
  }
  return out;
}

using Tuples = std::vector<std::vector<std::int64_t>>;

Tuples sorted(Tuples v) {
  std::sort(v.begin(), v.end());
  return v;
}

Tuples pareto_brute(Tuples v, std::int64_t cap) {
  std::erase_if(v, [&](const auto& t) { return std::any_of(t.begin(), t.end(), [&](auto x) { return x > cap; }); });
  std::set<std::vector<std::int64_t>> all(v.begin(), v.end());
  Tuples out;
  for (const auto& t : all) {
    bool dominated = false;
    for (const auto& u : all) {
      if (u == t) continue;
      bool le = true;
      for (std::size_t i = 0; i < t.size(); ++i) le = le && u[i] <= t[i];
      dominated = dominated || le;
    }
    if (!dominated) out.push_back(t);
  }
  return out;
}

EditTupleSet random_set(std::mt19937_64& rng, std::size_t k, std::int64_t cap) {
  EditTupleSet s{k, cap, {}};
  const std::size_t count = 1 + rng() % 6;
  for (std::size_t c = 0; c < count; ++c) {
    EditTuple t(k);
    for (auto& x : t) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap + 1));
    s.tuples.push_back(t);
  }
  pareto_minimize(s);
  return s;
}

bool is_antichain(const Tuples& v) {
  for (const auto& a : v) {
    for (const auto& b : v) {
      if (a == b) continue;
      bool le = true;
      for (std::size_t i = 0; i < a.size(); ++i) le = le && a[i] <= b[i];
      if (le) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("slide") {
  const std::vector<Text> same{text("abcab"), text("abcab"), text("abcab")};
  const std::int64_t zero[] = {0, 0};
  CHECK(slide(same, 1, zero) == 5);
  const std::vector<Text> differ{text("abc"), text("xbc"), text("abc")};
  CHECK(slide(differ, 1, zero) == 0);
  CHECK(slide(differ, 2, zero) == 3);
  CHECK(slide(same, 6, zero) == 5);

  std::mt19937_64 rng(1);
  for (int round = 0; round < 500; ++round) {
    std::vector<Text> s;
    for (int i = 0; i < 3; ++i) s.push_back(testkit::random_text(rng, 1 + rng() % 20, 2));
    const std::uint64_t j = 1 + rng() % (s[0].size() + 1);
    std::vector<std::int64_t> d;
    for (int i = 1; i < 3; ++i) {
      const auto lo = 1 - static_cast<std::int64_t>(j);
      const auto hi = static_cast<std::int64_t>(s[i].size()) + 1 - static_cast<std::int64_t>(j);
      d.push_back(lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1)));
    }
    // character-by-character scan
    std::uint64_t q = j - 1;
    while (q < s[0].size()) {
      bool all = true;
      for (int i = 1; i < 3; ++i) {
        const auto at = static_cast<std::int64_t>(q) + d[i - 1];
        all = all && at < static_cast<std::int64_t>(s[i].size()) && s[i][static_cast<std::size_t>(at)] == s[0][q];
      }
      if (!all) break;
      ++q;
    }
    CHECK(slide(s, j, d) == q);
  }
  const std::int64_t far[] = {10, 0};
  CHECK_THROWS_AS(slide(same, 1, far), Error);
  CHECK_THROWS_AS(slide(same, 0, zero), Error);
  CHECK_THROWS_AS(slide(same, 7, zero), Error);
}

TEST_CASE("bounded k-edit basics") {
  const std::vector<Text> same{text("abba"), text("abba"), text("abba")};
  CHECK(bounded_k_edit(same, 0) == 0);
  const std::vector<Text> drop{text("ab"), text("ab"), text("b")};
  CHECK(bounded_k_edit(drop, 5) == 1);
  CHECK_FALSE(bounded_k_edit(drop, 0).has_value());
  const std::vector<Text> one{text("ab")};
  CHECK_THROWS_AS(bounded_k_edit(one, 3), Error);
  const std::vector<Text> five(5, text("ab"));
  CHECK_THROWS_AS(bounded_k_edit(five, 3), Error);
}

TEST_CASE("bounded k-edit equals the median oracle on every binary triple up to length 6") {
  const auto words = all_binary_upto(6);
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t a = 0; a < words.size(); ++a) {
    for (std::size_t b = a; b < words.size(); ++b) {
      for (std::size_t c = b; c < words.size(); ++c) {
        std::vector<Text> s{words[a], words[b], words[c]};
        const std::int64_t truth = oracle::median_edit_naive(as_strs(s));
        std::sort(s.begin(), s.end());
        do {
          const auto full = bounded_k_edit(s, 18);
          const auto tight = bounded_k_edit(s, static_cast<std::uint64_t>(truth));
          const bool ok = full == truth && tight == truth &&
                          (truth == 0 || !bounded_k_edit(s, static_cast<std::uint64_t>(truth - 1)).has_value());
          mismatches += ok ? 0 : 1;
          ++checked;
        } while (std::next_permutation(s.begin(), s.end()));
      }
    }
  }
  CHECK(checked > 2'000'000);
  CHECK(mismatches == 0);
}

TEST_CASE("bounded k-edit on random inputs") {
  std::mt19937_64 rng(2);
  for (int round = 0; round < 300; ++round) {
    std::vector<Text> s;
    const Text base = testkit::random_text(rng, 1 + rng() % 30, 3);
    for (int i = 0; i < 3; ++i) s.push_back(rng() % 2 ? testkit::mutate(rng, base, rng() % 6, 3) : testkit::random_text(rng, rng() % 30, 3));
    const std::int64_t truth = oracle::median_edit_naive(as_strs(s));
    const std::uint64_t cap = rng() % 40;
    const auto got = bounded_k_edit(s, cap);
    if (truth <= static_cast<std::int64_t>(cap)) CHECK(got == truth);
    else CHECK_FALSE(got.has_value());
  }
  // k = 2 is edit distance, k = 4 against the oracle at small sizes
  for (int round = 0; round < 200; ++round) {
    std::vector<Text> two{testkit::random_text(rng, rng() % 40, 3), testkit::random_text(rng, rng() % 40, 3)};
    CHECK(bounded_k_edit(two, 80) == oracle::edit_distance_naive(as_str(two[0]), as_str(two[1])));
    std::vector<Text> four;
    for (int i = 0; i < 4; ++i) four.push_back(testkit::random_text(rng, rng() % 8, 2));
    CHECK(bounded_k_edit(four, 40) == oracle::median_edit_naive(as_strs(four)));
  }
  // long inputs go through the suffix-array extension path
  const Text big = testkit::random_text(rng, 600, 4);
  std::vector<Text> s{big, testkit::mutate(rng, big, 3, 4), testkit::mutate(rng, big, 2, 4)};
  const auto got = bounded_k_edit(s, 12);
  REQUIRE(got.has_value());
  CHECK(*got <= 5);
}

TEST_CASE("lz77 representatives") {
  const Text a(1000, 'a');
  auto wide = lz77_representatives(a, 10, 10);
  CHECK(wide.empty_only());
  CHECK(std::all_of(wide.rep_of.begin(), wide.rep_of.end(), [](auto r) { return r == 0; }));

  auto flat = lz77_representatives(a, 10, 4);
  CHECK(flat.starts.size() <= 3 * 2 * 10 / 4 + 2);
  for (std::size_t i = 0; i + 10 <= a.size(); i += 37) {
    const std::uint64_t s = flat.starts[flat.rep_of[i]];
    CHECK(std::equal(a.begin() + static_cast<std::ptrdiff_t>(i), a.begin() + static_cast<std::ptrdiff_t>(i + 10),
                     a.begin() + static_cast<std::ptrdiff_t>(s)));
  }

  std::mt19937_64 rng(3);
  for (int round = 0; round < 6; ++round) {
    const Text t = testkit::compressible_text(rng, 1500, 3, 0.02);
    const std::uint64_t window = 8 + rng() % 40, delta = 1 + rng() % 12;
    const auto idx = lz77_representatives(t, window, delta);
    const std::size_t z = lz77_factorize(t).factors.size();
    if (!idx.empty_only()) CHECK(idx.starts.size() <= 3 * z * window / delta + z);
    for (int sample = 0; sample < 200; ++sample) {
      const std::size_t i = rng() % t.size();
      const auto end_w = std::min<std::size_t>(t.size(), i + window);
      const oracle::Str w(t.begin() + static_cast<std::ptrdiff_t>(i), t.begin() + static_cast<std::ptrdiff_t>(end_w));
      oracle::Str r;
      if (!idx.empty_only()) {
        const std::size_t s = idx.starts[idx.rep_of[i]];
        r.assign(t.begin() + static_cast<std::ptrdiff_t>(s),
                 t.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(t.size(), s + window)));
      }
      CHECK(oracle::edit_distance_naive(w, r) <= static_cast<std::int64_t>(delta));
    }
  }
  CHECK_THROWS_AS(lz77_representatives(a, 10, 0), Error);
}

TEST_CASE("window scheme") {
  const auto w = WindowScheme::make(20, 0.25, 8, 400);
  CHECK(w.sigma == 1);
  CHECK(std::binary_search(w.delta_levels.begin(), w.delta_levels.end(), 0));
  CHECK(std::binary_search(w.delta_levels.begin(), w.delta_levels.end(), 1));
  CHECK(std::binary_search(w.delta_levels.begin(), w.delta_levels.end(), -1));
  CHECK(std::binary_search(w.delta_levels.begin(), w.delta_levels.end(), -20));
  for (auto d : w.delta_levels) {
    CHECK(20 + d >= 0);
    CHECK(20 + d <= 2 * 20 / (0.25 * 0.25) + 2 * 20);
  }
  CHECK(std::is_sorted(w.delta_levels.begin(), w.delta_levels.end()));
  CHECK(WindowScheme::make(20, 0.5, 100, 400).sigma == 2);
  CHECK_THROWS_AS(WindowScheme::make(0, 0.5, 1, 10), Error);
}

TEST_CASE("edit tuples") {
  const std::vector<Text> eq{text("abc"), text("abc")};
  CHECK(edit_tuples_exact(eq, 3).tuples == Tuples{{0, 0}});

  const std::vector<Text> ab{text("a"), text("b")};
  const auto t = edit_tuples_exact(ab, 2).tuples;
  CHECK(std::find(t.begin(), t.end(), EditTuple{1, 0}) != t.end());
  CHECK(std::find(t.begin(), t.end(), EditTuple{0, 1}) != t.end());
  CHECK(std::find(t.begin(), t.end(), EditTuple{0, 0}) == t.end());

  std::mt19937_64 rng(4);
  for (int round = 0; round < 60; ++round) {
    const std::size_t k = 2 + rng() % 2;
    std::vector<Text> s;
    for (std::size_t i = 0; i < k; ++i) s.push_back(testkit::random_text(rng, rng() % 5, 2));
    const std::int64_t cap = rng() % 5;
    const auto got = edit_tuples_exact(s, cap).tuples;
    CHECK(sorted(got) == sorted(oracle::edit_tuples_naive(as_strs(s), cap)));
    CHECK(is_antichain(got));
    // min over tuples of the largest coordinate is the center distance
    const auto all = edit_tuples_exact(s, 20).tuples;
    std::int64_t best = INT64_MAX;
    for (const auto& v : all) best = std::min(best, *std::max_element(v.begin(), v.end()));
    CHECK(best == oracle::center_edit_naive(as_strs(s)));
  }
  const std::vector<Text> huge(3, Text(120, 'a'));
  CHECK_THROWS_AS(edit_tuples_exact(huge, 3), Error);
}

TEST_CASE("tuple convolution and rounding") {
  EditTupleSet zero{2, 10, {{0, 0}}};
  EditTupleSet a{2, 10, {{1, 3}, {2, 1}}};
  CHECK(vector_convolve(a, zero, 10).tuples == a.tuples);
  EditTupleSet x{2, 10, {{1, 0}}}, y{2, 10, {{0, 1}}};
  CHECK(vector_convolve(x, y, 10).tuples == Tuples{{1, 1}});

  std::mt19937_64 rng(5);
  for (int round = 0; round < 200; ++round) {
    const std::size_t k = 2 + rng() % 2;
    const std::int64_t cap = 3 + static_cast<std::int64_t>(rng() % 6);
    const auto p = random_set(rng, k, cap), q = random_set(rng, k, cap), r = random_set(rng, k, cap);
    const std::int64_t out_cap = 2 * cap;
    Tuples sums;
    for (const auto& u : p.tuples) {
      for (const auto& v : q.tuples) {
        EditTuple w(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = u[i] + v[i];
        sums.push_back(w);
      }
    }
    const auto pq = vector_convolve(p, q, out_cap);
    CHECK(pq.tuples == pareto_brute(sums, out_cap));
    CHECK(vector_convolve(q, p, out_cap).tuples == pq.tuples);
    const std::int64_t big = 3 * cap;
    CHECK(vector_convolve(vector_convolve(p, q, big), r, big).tuples ==
          vector_convolve(p, vector_convolve(q, r, big), big).tuples);

    const std::int64_t sigma = 1 + static_cast<std::int64_t>(rng() % 4);
    const auto rounded = round_tuples(p, sigma);
    CHECK(is_antichain(rounded.tuples));
    for (const auto& u : p.tuples) {
      bool covered = false;
      for (const auto& v : rounded.tuples) {
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) ok = ok && v[i] % sigma == 0 && v[i] <= u[i] + sigma - 1;
        covered = covered || ok;
      }
      CHECK(covered);
    }
    for (const auto& v : rounded.tuples) {
      bool above = false;
      for (const auto& u : p.tuples) {
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) ok = ok && u[i] <= v[i];
        above = above || ok;
      }
      CHECK(above);
    }
  }
  CHECK(round_tuples(a, 1).tuples == a.tuples);
  EditTupleSet one{2, 10, {{3, 5}}};
  CHECK(round_tuples(one, 4).tuples == Tuples{{4, 8}});
  CHECK_THROWS_AS(round_tuples(one, 0), Error);
}

TEST_CASE("median approximation on identical strings") {
  std::mt19937_64 rng(6);
  const Text t = testkit::random_text(rng, 50, 3);
  CHECK(median_edit_approx(grammars_of({t, t, t}), 0.5) == 0);
  CHECK(median_edit_approx(grammars_of({t, t}), 1.0) == 0);
}

TEST_CASE("median approximation brackets the exact value on small triples") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 24; ++round) {
    const std::size_t n = round < 8 ? 4 + rng() % 12 : (round < 20 ? 16 + rng() % 16 : 40);
    const double epsilon = round % 3 == 0 ? 0.25 : 1.0;
    const Text base = testkit::random_text(rng, n, 2);
    std::vector<Text> s;
    for (int i = 0; i < 3; ++i) {
      Text x = rng() % 3 ? testkit::mutate(rng, base, rng() % 6, 2) : testkit::random_text(rng, n, 2);
      if (x.size() > 40) x.resize(40);
      s.push_back(x);
    }
    const std::int64_t exact = oracle::median_edit_naive(as_strs(s));
    const std::int64_t got = median_edit_approx(grammars_of(s), epsilon);
    const double bound = 1 + 19 * median_internal_epsilon(epsilon, 3) * 3;
    CHECK(got >= exact);
    CHECK(static_cast<double>(got) <= bound * static_cast<double>(exact) + 1e-9);
  }
}

TEST_CASE("two-string median approximation brackets edit distance") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 30; ++round) {
    const Text x = testkit::compressible_text(rng, 20 + rng() % 100, 3, 0.05);
    const Text y = rng() % 2 ? testkit::mutate(rng, x, rng() % 10, 3) : testkit::random_text(rng, 20 + rng() % 60, 3);
    const double epsilon = round % 2 ? 0.5 : 1.0;
    const std::int64_t exact = oracle::edit_distance_naive(as_str(x), as_str(y));
    const std::int64_t got = median_edit_approx(grammars_of({x, y}), epsilon);
    CHECK(got >= exact);
    CHECK(static_cast<double>(got) <= (1 + epsilon) * static_cast<double>(exact) + 1e-9);
  }
}

TEST_CASE("center approximation") {
  std::mt19937_64 rng(9);
  const Text t = testkit::random_text(rng, 12, 2);
  CHECK(center_edit_approx(grammars_of({t, t, t}), 0.5) == 0);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 2 + rng() % 7;
    const Text base = testkit::random_text(rng, n, 2);
    std::vector<Text> s;
    for (int i = 0; i < 3; ++i) s.push_back(rng() % 2 ? testkit::mutate(rng, base, rng() % 3, 2) : testkit::random_text(rng, 1 + rng() % n, 2));
    const std::int64_t exact = oracle::center_edit_naive(as_strs(s));
    const std::int64_t got = center_edit_approx(grammars_of(s), 1.0);
    CHECK(got >= exact);
    CHECK(got <= 2 * exact);
  }
  // two strings: the center distance is half the edit distance, rounded up
  for (int round = 0; round < 30; ++round) {
    const Text x = testkit::random_text(rng, 1 + rng() % 14, 2);
    const Text y = rng() % 2 ? testkit::mutate(rng, x, rng() % 4, 2) : testkit::random_text(rng, 1 + rng() % 14, 2);
    const std::int64_t ed = oracle::edit_distance_naive(as_str(x), as_str(y));
    const std::int64_t got = center_edit_approx(grammars_of({x, y}), 0.5);
    CHECK(oracle::center_edit_naive(as_strs({x, y})) == (ed + 1) / 2);
    CHECK(got >= (ed + 1) / 2);
    CHECK(static_cast<double>(got) <= 1.5 * static_cast<double>((ed + 1) / 2) + 1e-9);
  }
}

TEST_CASE("multi-string errors") {
  const std::vector<Text> four(4, text("ab"));
  CHECK_THROWS_AS(median_edit_approx(grammars_of(four), 0.5), Error);
  CHECK_THROWS_AS(center_edit_approx(grammars_of(four), 0.5), Error);
  const std::vector<Text> two{text("ab"), text("ba")};
  CHECK_THROWS_AS(median_edit_approx(grammars_of(two), 0.0), Error);
  CHECK_THROWS_AS(median_edit_approx(grammars_of(two), 1.5), Error);
  CHECK_THROWS_AS(center_edit_approx(grammars_of(two), -1.0), Error);
}
