#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "gramdist/partition.hpp"
#include "gramdist/slp.hpp"

namespace gramdist {

inline constexpr std::size_t kMaxFragment = 4096;
inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

// Distances from the input boundary (bottom side right to left, then left side upwards)
// to the output boundary (right side upwards, then top side right to left) of a box.
class DistMatrix {
 public:
  DistMatrix(std::uint32_t width, std::uint32_t height)
      : width_(width), height_(height), data_(static_cast<std::size_t>(width + height + 1) * (width + height + 1)) {}

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return width_ + height_ + 1; }

  std::int32_t at(std::size_t in, std::size_t out) const { return data_[in * size() + out]; }
  std::int32_t& at(std::size_t in, std::size_t out) { return data_[in * size() + out]; }

  // Box-local coordinates of boundary vertices.
  std::pair<std::uint32_t, std::uint32_t> in_vertex(std::size_t k) const {
    return k <= width_ ? std::pair{width_ - static_cast<std::uint32_t>(k), 0u}
                       : std::pair{0u, static_cast<std::uint32_t>(k - width_)};
  }
  std::pair<std::uint32_t, std::uint32_t> out_vertex(std::size_t k) const {
    return k <= height_ ? std::pair{width_, static_cast<std::uint32_t>(k)}
                        : std::pair{width_ - static_cast<std::uint32_t>(k - height_), height_};
  }
  std::size_t in_index(std::uint32_t x, std::uint32_t y) const { return y == 0 ? width_ - x : width_ + y; }
  std::size_t out_index(std::uint32_t x, std::uint32_t y) const { return x == width_ ? y : height_ + (width_ - x); }

 private:
  std::uint32_t width_, height_;
  std::vector<std::int32_t> data_;
};

DistMatrix dist_matrix(std::span<const Char> x_fragment, std::span<const Char> y_fragment);
bool check_monge(const DistMatrix& m);

struct RowMinimum {
  std::size_t column = 0;
  std::int64_t value = 0;
};

// Row minima of a totally monotone rows x cols matrix given by value(r, c); ties go to the smallest column.
template <class Value>
std::vector<RowMinimum> smawk(std::size_t rows, std::size_t cols, Value&& value);

// Transposed slice of a DIST matrix: row r is output vertex rows[r], column c is input vertex
// cols[c], entry DIST[cols[c]][rows[r]] + offsets[c].
struct MongeView {
  const DistMatrix* matrix = nullptr;
  std::vector<std::size_t> rows, cols;
  std::vector<std::int64_t> offsets;

  std::int64_t operator()(std::size_t r, std::size_t c) const {
    return matrix->at(cols[c], rows[r]) + offsets[c];
  }
};

std::vector<RowMinimum> smawk_row_minima(const MongeView& view);

// DIST matrices of the boxes of two phrase partitions, memoized per phrase-symbol pair.
// The memo is dropped wholesale once it outgrows the byte budget, so a returned reference
// stays valid only until the next call.
class DistBoxOracle {
 public:
  DistBoxOracle(const PhrasePartition& px, const PhrasePartition& py);

  const DistMatrix& box(std::size_t i, std::size_t j);
  const DistMatrix& pair(Symbol sx, Symbol sy);
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  void set_budget(std::size_t bytes) noexcept { budget_ = bytes; }

 private:
  const Text& text_of(const Slp& g, Symbol s, std::map<Symbol, Text>& cache);

  const PhrasePartition& px_;
  const PhrasePartition& py_;
  std::map<Symbol, Text> texts_x_, texts_y_;
  std::map<std::pair<Symbol, Symbol>, std::unique_ptr<DistMatrix>> memo_;
  std::size_t hits_ = 0, misses_ = 0;
  std::size_t bytes_ = 0, budget_ = std::size_t{1} << 28;
};

inline DistBoxOracle dist_box_oracle(const PhrasePartition& px, const PhrasePartition& py) {
  return DistBoxOracle(px, py);
}

// ---- implementation of the SMAWK template ----------------------------------

namespace detail {

template <class Value>
void smawk_rec(std::span<const std::size_t> rows, std::vector<std::size_t> cols, Value& value,
               std::vector<RowMinimum>& out) {
  if (rows.empty()) return;
  // Reduce to at most |rows| columns that can still hold a leftmost minimum.
  std::vector<std::size_t> kept;
  kept.reserve(rows.size());
  for (std::size_t c : cols) {
    while (!kept.empty()) {
      const std::size_t r = rows[kept.size() - 1];
      if (value(r, kept.back()) > value(r, c)) kept.pop_back();
      else break;
    }
    if (kept.size() < rows.size()) kept.push_back(c);
  }
  std::vector<std::size_t> odd;
  odd.reserve(rows.size() / 2);
  for (std::size_t i = 1; i < rows.size(); i += 2) odd.push_back(rows[i]);
  smawk_rec(std::span<const std::size_t>(odd), kept, value, out);

  std::size_t p = 0;
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    const std::size_t r = rows[i];
    const std::size_t upper = i + 1 < rows.size() ? out[rows[i + 1]].column : kept.back();
    std::size_t best = kept[p];
    std::int64_t best_val = value(r, best);
    while (kept[p] != upper) {
      ++p;
      const std::int64_t v = value(r, kept[p]);
      if (v < best_val) {
        best_val = v;
        best = kept[p];
      }
    }
    out[r] = {best, best_val};
  }
}

}  // namespace detail

template <class Value>
std::vector<RowMinimum> smawk(std::size_t rows, std::size_t cols, Value&& value) {
  std::vector<RowMinimum> out(rows);
  if (rows == 0 || cols == 0) return out;
  std::vector<std::size_t> row_ids(rows), col_ids(cols);
  for (std::size_t i = 0; i < rows; ++i) row_ids[i] = i;
  for (std::size_t j = 0; j < cols; ++j) col_ids[j] = j;
  detail::smawk_rec(std::span<const std::size_t>(row_ids), std::move(col_ids), value, out);
  return out;
}

}  // namespace gramdist
