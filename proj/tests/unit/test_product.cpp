#include <cmath>

#include "doctest.h"
#include "gramdist/error.hpp"
#include "gramdist/product.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gramdist;
using testkit::text;

namespace {

void check_zip(const std::vector<Text>& texts, std::uint64_t tau) {
  std::vector<Slp> gs;
  for (const auto& t : texts) gs.push_back(slp_from_text(t));
  const auto p = product_slp(gs, tau);
  const auto zipped = p.expand_tuples();
  REQUIRE(zipped.size() == texts[0].size());
  for (std::size_t j = 0; j < zipped.size(); ++j) {
    for (std::size_t i = 0; i < texts.size(); ++i) REQUIRE(zipped[j][i] == texts[i][j]);
  }
  for (Symbol s = 0; s < p.grammar.symbol_count(); ++s) {
    const auto& t = p.provenance[s];
    if (t.length == 0) continue;
    CHECK(t.length == p.grammar.length(s));
    CHECK(t.prefix_anchor >= 0);
    CHECK(t.suffix_anchor >= 0);
  }
}

double bound(const std::vector<Slp>& gs, std::uint64_t tau) {
  double prod = 1;
  for (const auto& g : gs) prod *= static_cast<double>(to_cnf(g).symbol_count());
  const double k = static_cast<double>(gs.size());
  return static_cast<double>(gs[0].length()) / static_cast<double>(tau) +
         k * std::pow(static_cast<double>(tau), k - 1) * prod;
}

}  // namespace

TEST_CASE("small products") {
  const Slp same[] = {slp_from_text(text("ab")), slp_from_text(text("ab"))};
  auto p = product_slp(same, 2);
  auto z = p.expand_tuples();
  REQUIRE(z.size() == 2);
  CHECK((z[0][0] == 'a' && z[0][1] == 'a' && z[1][0] == 'b' && z[1][1] == 'b'));
  const Slp swapped[] = {slp_from_text(text("ab")), slp_from_text(text("ba"))};
  z = product_slp(swapped, 1).expand_tuples();
  CHECK((z[0][0] == 'a' && z[0][1] == 'b' && z[1][0] == 'b' && z[1][1] == 'a'));
  CHECK(additive_aggregate(p, [](std::span<const Char>) { return 0; }) == 0);
  CHECK(additive_aggregate(p, [](std::span<const Char>) { return 1; }) == 2);
}

TEST_CASE("errors") {
  const Slp uneven[] = {slp_from_text(text("ab")), slp_from_text(text("abc"))};
  CHECK_THROWS_AS(product_slp(uneven, 1), Error);
  CHECK_THROWS_AS(hamming(uneven[0], uneven[1]), Error);
  const Slp one[] = {slp_from_text(text("ab"))};
  CHECK_THROWS_AS(product_slp(one, 1), Error);
  std::vector<Slp> five(5, slp_from_text(text("ab")));
  CHECK_THROWS_AS(hamming_multi(five, HammingMode::median), Error);
}

TEST_CASE("exhaustive zips of short binary strings") {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        Text x(n), y(n);
        for (std::size_t j = 0; j < n; ++j) {
          x[j] = 'a' + (a >> j & 1);
          y[j] = 'a' + (b >> j & 1);
        }
        for (std::uint64_t tau = 1; tau <= n; ++tau) check_zip({x, y}, tau);
      }
    }
  }
}

TEST_CASE("random zips up to 64 characters, k = 2 and 3") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 400; ++round) {
    const std::size_t n = 1 + rng() % 64;
    const std::size_t k = 2 + round % 2;
    std::vector<Text> texts;
    const auto base = testkit::compressible_text(rng, n, 2, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      texts.push_back(rng() % 2 ? testkit::random_text(rng, n, 2) : testkit::mutate(rng, base, 0, 2));
      texts.back().resize(n, 'a');
    }
    check_zip(texts, 1 + rng() % n);
  }
}

TEST_CASE("hamming against the oracle, symmetry and triangle inequality") {
  CHECK(hamming(slp_from_text(text("ab")), slp_from_text(text("ba"))) == 2);
  std::mt19937_64 rng(5);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 1 + rng() % 5000;
    const auto x = testkit::compressible_text(rng, n, 3, 0.01);
    auto y = testkit::compressible_text(rng, n, 3, 0.01);
    if (round % 3 == 0) {
      y = x;
      for (int e = 0; e < 5; ++e) y[rng() % n] = 'a' + rng() % 3;
    }
    auto z = x;
    for (int e = 0; e < 7; ++e) z[rng() % n] = 'a' + rng() % 3;
    const auto gx = slp_from_text(x), gy = slp_from_text(y), gz = slp_from_text(z);
    const auto hxy = hamming(gx, gy);
    CHECK(hxy == static_cast<std::uint64_t>(oracle::hamming_naive({x, y}, oracle::HammingMode::all_equal)));
    CHECK(hamming(gy, gx) == hxy);
    CHECK(hamming(gx, gx) == 0);
    CHECK(hxy <= hamming(gx, gz) + hamming(gz, gy));
  }
}

TEST_CASE("product grammar size bound") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 100 + rng() % 20000;
    const std::size_t k = 2 + round % 3;
    std::vector<Slp> gs;
    const auto base = testkit::compressible_text(rng, n, 2, 0.001);
    for (std::size_t i = 0; i < k; ++i) {
      auto t = base;
      for (int e = 0; e < 3; ++e) t[rng() % n] = 'a' + rng() % 2;
      gs.push_back(to_cnf(slp_from_text(t)));
    }
    for (std::uint64_t tau : {product_tau(gs), std::uint64_t{1}, std::uint64_t{4}}) {
      const auto p = product_slp(gs, tau);
      const double size = static_cast<double>(p.grammar.symbol_count() + p.grammar.rhs(p.grammar.start()).size());
      CHECK(size <= 4 * bound(gs, tau));
    }
  }
}

TEST_CASE("hamming_multi") {
  const std::vector<Slp> three{slp_from_text(text("ab")), slp_from_text(text("ab")), slp_from_text(text("ba"))};
  CHECK(hamming_multi(three, HammingMode::all_equal) == 2);
  CHECK(hamming_multi(three, HammingMode::median) == 2);
  const std::vector<Slp> equal(3, slp_from_text(text("abcab")));
  CHECK(hamming_multi(equal, HammingMode::all_equal) == 0);
  CHECK(hamming_multi(equal, HammingMode::median) == 0);
  std::mt19937_64 rng(2);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 1 + rng() % 3000, k = 2 + rng() % 3;
    std::vector<Text> texts;
    std::vector<Slp> gs;
    const auto base = testkit::compressible_text(rng, n, 3, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      auto t = base;
      for (int e = 0; e < 10; ++e) t[rng() % n] = 'a' + rng() % 3;
      texts.push_back(t);
      gs.push_back(slp_from_text(t));
    }
    CHECK(hamming_multi(gs, HammingMode::all_equal) ==
          static_cast<std::uint64_t>(oracle::hamming_naive(texts, oracle::HammingMode::all_equal)));
    CHECK(hamming_multi(gs, HammingMode::median) ==
          static_cast<std::uint64_t>(oracle::hamming_naive(texts, oracle::HammingMode::median)));
  }
}
