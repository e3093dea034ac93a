#include "gramdist/shift.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <thread>

#include "gramdist/error.hpp"

namespace gramdist {

namespace {

constexpr std::uint64_t kMaxShiftLength = std::uint64_t{1} << 20;
constexpr std::uint64_t kMaxOuterTuples = 1'000'000;

std::size_t common_length(std::span<const Text> strings) {
  if (strings.empty()) throw Error(Errc::empty_input, "no strings given");
  const std::size_t n = strings.front().size();
  for (const Text& s : strings) {
    if (s.size() != n) throw Error(Errc::length_mismatch, "shift distance needs equal lengths");
    for (Char c : s) {
      if (c >= kSentinelBase) throw Error(Errc::sentinel_in_alphabet, "input uses a reserved character");
    }
  }
  if (n == 0) throw Error(Errc::empty_input, "strings are empty");
  if (n > kMaxShiftLength) throw Error(Errc::too_large, "shift distance supports N <= 2^20");
  return n;
}

// Transforms of the indicator vectors of x, reused for many y.
class Correlator {
 public:
  explicit Correlator(std::span<const Char> x) : n_(x.size()), size_(std::bit_ceil(2 * x.size())) {
    std::map<Char, std::vector<std::complex<double>>> by_char;
    for (std::size_t i = 0; i < n_; ++i) {
      auto& v = by_char[x[i]];
      if (v.empty()) v.assign(size_, 0.0);
      v[i] = 1.0;
    }
    for (auto& [c, v] : by_char) {
      fft(v, false);
      spectra_.emplace(c, std::move(v));
    }
  }

  std::vector<std::uint64_t> counts(std::span<const Char> y) const {
    std::map<Char, std::vector<std::complex<double>>> by_char;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!spectra_.count(y[i])) continue;
      auto& v = by_char[y[i]];
      if (v.empty()) v.assign(size_, 0.0);
      v[i] = 1.0;
    }
    std::vector<std::complex<double>> acc(size_, 0.0);
    for (auto& [c, v] : by_char) {
      fft(v, false);
      const auto& a = spectra_.at(c);
      for (std::size_t f = 0; f < size_; ++f) acc[f] += a[f] * std::conj(v[f]);
    }
    fft(acc, true);
    // acc[t] = sum_i x[i+t] y[i], negative t wrapped to size - |t|
    std::vector<std::uint64_t> out(n_);
    for (std::size_t d = 0; d < n_; ++d) {
      double v = acc[d].real();
      if (d > 0) v += acc[size_ - n_ + d].real();
      out[d] = static_cast<std::uint64_t>(std::llround(v));
    }
    return out;
  }

 private:
  std::size_t n_, size_;
  std::map<Char, std::vector<std::complex<double>>> spectra_;
};

struct Candidate {
  std::uint64_t score = 0;
  std::vector<std::uint64_t> offsets;
  bool set = false;

  void offer(std::uint64_t s, const std::vector<std::uint64_t>& o) {
    if (!set || s > score || (s == score && o < offsets)) {
      score = s;
      offsets = o;
      set = true;
    }
  }
};

ShiftResult finish(Candidate c, std::size_t k, std::size_t n) {
  ShiftResult r;
  r.offsets = std::move(c.offsets);
  r.score = c.score;
  r.distance = k * (n - c.score);
  return r;
}

}  // namespace

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = 2 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1 : -1);
    const std::complex<double> step(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= step;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

std::uint64_t shift_score(std::span<const Text> strings, std::span<const std::uint64_t> offsets) {
  const std::size_t n = common_length(strings);
  const std::size_t k = strings.size();
  if (offsets.size() + 1 != k) throw Error(Errc::invalid_params, "need one offset per string but the last");
  std::uint64_t score = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Char c = strings[k - 1][i];
    bool all = true;
    for (std::size_t s = 0; s + 1 < k && all; ++s) all = strings[s][(i + offsets[s]) % n] == c;
    score += all;
  }
  return score;
}

std::vector<std::uint64_t> cyclic_match_counts(std::span<const Char> x, std::span<const Char> y) {
  const Text tx(x.begin(), x.end()), ty(y.begin(), y.end());
  const Text both[] = {tx, ty};
  common_length(both);
  return Correlator(x).counts(y);
}

ShiftResult shift_match_2(std::span<const Char> x, std::span<const Char> y) {
  const auto counts = cyclic_match_counts(x, y);
  Candidate best;
  for (std::size_t d = 0; d < counts.size(); ++d) best.offer(counts[d], {d});
  return finish(std::move(best), 2, x.size());
}

ShiftResult shift_match_k(std::span<const Text> strings, unsigned threads) {
  const std::size_t k = strings.size();
  if (k < 2 || k > 4) throw Error(Errc::unsupported_k, "shift matching supports k in [2, 4]");
  const std::size_t n = common_length(strings);
  if (k == 2) return shift_match_2(strings[0], strings[1]);

  // Enumerate offsets of X_2..X_{k-1}; merge them into X_k and match X_1 against the result.
  const std::size_t inner = k - 2;
  std::uint64_t tuples = 1;
  for (std::size_t s = 0; s < inner; ++s) {
    tuples *= n;
    if (tuples > kMaxOuterTuples) throw Error(Errc::too_large, "N^(k-2) exceeds 10^6 offset tuples");
  }
  const Correlator first(strings[0]);
  const Text& last = strings[k - 1];

  auto work = [&](std::uint64_t begin, std::uint64_t end, Candidate& best) {
    Text merged(n);
    std::vector<std::uint64_t> offsets(k - 1);
    for (std::uint64_t t = begin; t < end; ++t) {
      std::uint64_t rest = t;
      for (std::size_t s = inner; s-- > 0;) {
        offsets[s + 1] = rest % n;
        rest /= n;
      }
      for (std::size_t i = 0; i < n; ++i) {
        bool all = true;
        for (std::size_t s = 1; s + 1 < k && all; ++s) all = strings[s][(i + offsets[s]) % n] == last[i];
        merged[i] = all ? last[i] : kMismatch;
      }
      const auto counts = first.counts(merged);
      std::size_t arg = 0;
      for (std::size_t d = 1; d < n; ++d)
        if (counts[d] > counts[arg]) arg = d;
      offsets[0] = arg;
      best.offer(counts[arg], offsets);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(tuples, 64))));
  std::vector<Candidate> partial(workers);
  if (workers == 1) {
    work(0, tuples, partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, tuples * w / workers, tuples * (w + 1) / workers, std::ref(partial[w]));
    }
    for (auto& t : pool) t.join();
  }
  Candidate best;
  for (auto& c : partial)
    if (c.set) best.offer(c.score, c.offsets);
  return finish(std::move(best), k, n);
}

ShiftResult shift_match(std::span<const Slp> grammars, unsigned threads) {
  std::vector<Text> texts;
  texts.reserve(grammars.size());
  for (const Slp& g : grammars) texts.push_back(expand(g));
  return shift_match_k(texts, threads);
}

ShiftBracket shift_distance_approx(std::span<const Text> strings, std::size_t groups, unsigned threads) {
  const std::size_t k = strings.size();
  if (groups < 2 || k < 3 || groups > k - 1) {
    throw Error(Errc::invalid_groups, "group count must lie in [2, k-1]");
  }
  const std::size_t n = common_length(strings);
  ShiftBracket out;
  const std::size_t others = k - 1;
  std::size_t next = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = others / groups + (g < others % groups ? 1 : 0);
    std::vector<std::size_t> members;
    std::vector<Text> texts;
    for (std::size_t s = 0; s < size; ++s) {
      members.push_back(next);
      texts.push_back(strings[next++]);
    }
    texts.push_back(strings[k - 1]);
    const ShiftResult r = shift_match_k(texts, threads);
    // a group's unmatched positions are charged at the full k
    const std::uint64_t dist = k * (n - r.score);
    out.lower = std::max(out.lower, dist);
    out.upper += dist;
    out.groups.push_back(std::move(members));
    out.per_group.push_back(r);
  }
  return out;
}

}  // namespace gramdist
