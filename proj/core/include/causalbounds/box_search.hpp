#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "causalbounds/probability.hpp"

namespace causalbounds {

/// 21^8: the largest factorial grid the search will enumerate.
inline constexpr std::uint64_t kDefaultMaxGridPoints = 37822859361ULL;

struct SearchConfig {
  std::size_t grid_points_per_dim = 21;
  std::size_t multistart_count = 16;
  bool local_refine = true;
  double refine_tolerance = 1e-9;
  std::uint64_t seed = 0;
  std::uint64_t max_grid_points = kDefaultMaxGridPoints;

  /// Throws DomainError (grid_points_per_dim < 2, non-positive tolerance).
  void validate() const;
};

/// Deterministic stream of points over a box: the full factorial grid first
/// (endpoints are grid points, so every corner appears), then
/// `multistart_count` seeded uniform points. Zero-width dimensions contribute
/// a single grid value. Random access by index.
class BoxSampler {
 public:
  /// Throws TooManyPointsError when the grid exceeds cfg.max_grid_points.
  BoxSampler(std::vector<NamedInterval> dims, const SearchConfig& cfg);

  const std::vector<NamedInterval>& dims() const noexcept { return dims_; }
  std::uint64_t grid_size() const noexcept { return grid_size_; }
  std::uint64_t size() const noexcept { return grid_size_ + random_count_; }

  void point(std::uint64_t index, std::span<double> out) const;
  std::vector<double> point(std::uint64_t index) const;

 private:
  std::vector<NamedInterval> dims_;
  std::vector<std::uint64_t> per_dim_;
  std::uint64_t grid_size_ = 1;
  std::uint64_t random_count_ = 0;
  std::uint64_t seed_ = 0;
};

/// Materialized BoxSampler stream.
std::vector<std::vector<double>> sample_box(std::span<const NamedInterval> dims,
                                            const SearchConfig& cfg);

/// Objective over a point in the box. May throw ModelConstraintError to mark
/// the point invalid; any other exception aborts the search.
using BoxObjective = std::function<double(std::span<const double>)>;

struct BoxSearchResult {
  double min = 0.0;
  double max = 0.0;
  std::vector<double> argmin;
  std::vector<double> argmax;
  std::uint64_t evaluations = 0;
  std::uint64_t grid_evaluations = 0;
  std::uint64_t violations = 0;
  /// First few constraint-violation messages, with their points.
  std::vector<std::string> violation_samples;
  bool degenerate = false;
  bool refined = false;
};

/// Global min and max of `f` over the box: exhaustive stream evaluation, then
/// (if enabled) box-clamped Nelder-Mead from the best `multistart_count`
/// points for each direction. Ties resolve to the earliest point in stream
/// order; refinement replaces an incumbent only when strictly better.
/// Throws SearchAbortedError when more than 1% of grid evaluations violate
/// constraints.
BoxSearchResult search_box(const BoxObjective& f, std::span<const NamedInterval> dims,
                           const SearchConfig& cfg);

}  // namespace causalbounds
