#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gramdist/monge.hpp"
#include "gramdist/partition.hpp"
#include "gramdist/slp.hpp"

namespace gramdist {

// Knobs for the tau formulas and the choice between the box DP and the uncompressed
// banded algorithm.
struct BoxTuning {
  enum class Path { automatic, boxes, banded };

  double tau_scale = 1.0;
  std::uint64_t min_tau = 16;
  std::uint64_t max_tau = 512;
  // automatic: take the banded algorithm when (N+M+D^2) <= banded_bias * sqrt(nmD(N+M)).
  double banded_bias = 4.0;
  Path path = Path::automatic;
};

// Box grid over the alignment graph of X (horizontal) and Y (vertical).
// Boxes are 0-based: box (i, j) spans x in [bx[i], bx[i+1]] and y in [by[j], by[j+1]].
class BoxDecomposition {
 public:
  BoxDecomposition(const Slp& gx, const Slp& gy, std::uint64_t tau);

  std::size_t columns() const noexcept { return px_->size(); }
  std::size_t rows() const noexcept { return py_->size(); }
  std::uint64_t x_length() const noexcept { return px_->boundaries.back(); }
  std::uint64_t y_length() const noexcept { return py_->boundaries.back(); }
  std::uint64_t tau() const noexcept { return tau_; }
  std::span<const std::uint64_t> x_boundaries() const noexcept { return px_->boundaries; }
  std::span<const std::uint64_t> y_boundaries() const noexcept { return py_->boundaries; }
  const PhrasePartition& x_partition() const noexcept { return *px_; }
  const PhrasePartition& y_partition() const noexcept { return *py_; }

  // Valid until the next call.
  const DistMatrix& dist(std::size_t i, std::size_t j) { return oracle_->box(i, j); }
  DistBoxOracle& oracle() noexcept { return *oracle_; }

 private:
  std::unique_ptr<PhrasePartition> px_, py_;
  std::unique_ptr<DistBoxOracle> oracle_;
  std::uint64_t tau_ = 0;
};

BoxDecomposition box_decomposition(const Slp& gx, const Slp& gy, std::uint64_t tau);

// Boundary vertices allowed as crossing points. Either a band |x-y| <= d_cap, or all grid
// vertices plus the diagonals |x-y| in `offsets`.
class PortalSet {
 public:
  static PortalSet band(std::uint64_t d_cap);
  static PortalSet all_boundary();
  static PortalSet diagonals(std::vector<std::uint64_t> offsets);

  // Portals on the vertical line x with lo <= y <= hi, ascending. lo and hi must be
  // consecutive y boundaries.
  void on_vertical(std::uint64_t x, std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) const;
  void on_horizontal(std::uint64_t y, std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) const;

  bool contains(const BoxDecomposition& b, std::uint64_t x, std::uint64_t y) const;
  std::uint64_t count(const BoxDecomposition& b) const;
  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }

 private:
  enum class Kind { band, diagonals };
  PortalSet(Kind kind, std::uint64_t d_cap, std::vector<std::uint64_t> offsets)
      : kind_(kind), d_cap_(d_cap), offsets_(std::move(offsets)) {}

  Kind kind_;
  std::uint64_t d_cap_;
  std::vector<std::uint64_t> offsets_;  // sorted, distinct
};

PortalSet approx_portals(const BoxDecomposition& b, double alpha);
PortalSet bounded_portals(const BoxDecomposition& b, std::uint64_t d_cap);

// Output-portal values of one box: right side indexed by y, top side by x (global coordinates).
// The top-right corner appears on both sides.
struct DpFront {
  std::vector<std::uint64_t> right_y, top_x;
  std::vector<std::int64_t> right_value, top_value;
};

struct PortalDpRun {
  std::int64_t value = kUnreachable;  // walk length to (N, M)
  std::size_t boxes = 0;              // boxes with at least one reachable input
  std::map<std::pair<std::size_t, std::size_t>, DpFront> fronts;  // filled when requested
};

PortalDpRun portal_dp_run(BoxDecomposition& b, const PortalSet& portals, bool keep_fronts = false);
std::int64_t portal_dp(BoxDecomposition& b, const PortalSet& portals);

// Adaptive-portal run behind lcs_approx; fronts hold deletion-walk lengths D (L = (x+y-D)/2).
PortalDpRun lcs_portal_run(BoxDecomposition& b, double alpha, bool keep_fronts = false);

// nullopt when the deletion distance exceeds d_cap.
std::optional<std::int64_t> deletion_distance_bounded(const Slp& gx, const Slp& gy, std::uint64_t d_cap,
                                                      const BoxTuning& tuning = {});
std::int64_t edit_distance_exact(const Slp& gx, const Slp& gy, const BoxTuning& tuning = {});
std::int64_t edit_distance_approx(const Slp& gx, const Slp& gy, double epsilon, const BoxTuning& tuning = {});
std::int64_t lcs_approx(const Slp& gx, const Slp& gy, double epsilon, const BoxTuning& tuning = {});

// Deletion distance of plain strings by greedy diagonal extension, or nullopt above d_cap.
std::optional<std::int64_t> deletion_distance_greedy(std::span<const Char> x, std::span<const Char> y,
                                                     std::uint64_t d_cap);

}  // namespace gramdist
