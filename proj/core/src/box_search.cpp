#include "causalbounds/box_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace causalbounds {

namespace {

constexpr std::size_t kMaxViolationSamples = 5;
constexpr double kViolationAbortFraction = 0.01;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::string describe_point(std::span<const NamedInterval> dims, std::span<const double> x) {
  std::ostringstream os;
  os.precision(10);
  for (std::size_t d = 0; d < dims.size(); ++d) {
    os << (d ? ", " : "") << dims[d].name << "=" << x[d];
  }
  return os.str();
}

/// Bounded "best K" set ordered by (key, stream index).
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}
  void offer(double key, std::uint64_t index) {
    if (k_ == 0) return;
    const std::pair<double, std::uint64_t> item{key, index};
    if (best_.size() < k_) {
      best_.insert(item);
    } else if (item < *best_.rbegin()) {
      best_.erase(std::prev(best_.end()));
      best_.insert(item);
    }
  }
  std::vector<std::uint64_t> indices() const {
    std::vector<std::uint64_t> out;
    for (const auto& [key, idx] : best_) out.push_back(idx);
    return out;
  }

 private:
  std::size_t k_;
  std::set<std::pair<double, std::uint64_t>> best_;
};

struct NmOutcome {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
};

/// Nelder-Mead minimization with every trial point clamped into [lo, hi].
/// Invalid points evaluate to +inf.
NmOutcome nelder_mead(const std::function<double(std::span<const double>)>& f,
                      std::vector<double> x0, std::span<const double> lo,
                      std::span<const double> hi, double tol, std::uint64_t max_evals,
                      std::uint64_t& evals) {
  const std::size_t n = x0.size();
  auto clamp = [&](std::vector<double>& x) {
    for (std::size_t d = 0; d < n; ++d) x[d] = std::clamp(x[d], lo[d], hi[d]);
  };
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t d = 0; d < n; ++d) {
    const double step = 0.05 * (hi[d] - lo[d]);
    simplex[d + 1][d] = (x0[d] + step <= hi[d]) ? x0[d] + step : x0[d] - step;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    fv[k] = f(simplex[k]);
    ++evals;
  }
  std::uint64_t used = n + 1;
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  auto trial = [&](std::vector<double>& out, double coef, std::size_t worst) {
    for (std::size_t d = 0; d < n; ++d) out[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
    clamp(out);
    ++evals;
    ++used;
    return f(out);
  };

  const double xtol = std::sqrt(tol);
  while (used < max_evals) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double spread_x = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t d = 0; d < n; ++d) {
        const double w = hi[d] - lo[d];
        spread_x = std::max(spread_x, std::abs(simplex[k][d] - simplex[best][d]) / w);
      }
    }
    const bool flat = std::isfinite(fv[worst]) && std::abs(fv[worst] - fv[best]) <= tol;
    if (flat && spread_x <= xtol) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[k][d] / static_cast<double>(n);
    }

    const double fr = trial(xr, -1.0, worst);
    if (fr < fv[best]) {
      const double fe = trial(xe, -2.0, worst);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const double fc = trial(xc, outside ? -0.5 : 0.5, worst);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      for (std::size_t d = 0; d < n; ++d) {
        simplex[k][d] = simplex[best][d] + 0.5 * (simplex[k][d] - simplex[best][d]);
      }
      fv[k] = f(simplex[k]);
      ++evals;
      ++used;
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  NmOutcome out;
  out.f = *it;
  out.x = simplex[static_cast<std::size_t>(it - fv.begin())];
  return out;
}

}  // namespace

void SearchConfig::validate() const {
  if (grid_points_per_dim < 2) throw DomainError("grid_points_per_dim must be at least 2");
  if (!(refine_tolerance > 0.0)) throw DomainError("refine_tolerance must be positive");
}

BoxSampler::BoxSampler(std::vector<NamedInterval> dims, const SearchConfig& cfg)
    : dims_(std::move(dims)), random_count_(cfg.multistart_count), seed_(cfg.seed) {
  cfg.validate();
  for (const auto& d : dims_) {
    const std::uint64_t n = d.range.degenerate() ? 1 : cfg.grid_points_per_dim;
    per_dim_.push_back(n);
    if (grid_size_ > cfg.max_grid_points / n) {
      throw TooManyPointsError(
          "factorial grid over " + std::to_string(dims_.size()) + " dimensions with " +
          std::to_string(cfg.grid_points_per_dim) + " points each exceeds " +
          std::to_string(cfg.max_grid_points) + " points; use a smaller grid_points_per_dim");
    }
    grid_size_ *= n;
  }
}

void BoxSampler::point(std::uint64_t index, std::span<double> out) const {
  if (index < grid_size_) {
    // Mixed radix with the last dimension varying fastest.
    for (std::size_t d = dims_.size(); d-- > 0;) {
      const std::uint64_t n = per_dim_[d];
      const std::uint64_t k = index % n;
      index /= n;
      const auto& r = dims_[d].range;
      if (n == 1) out[d] = r.lo();
      else if (k == n - 1) out[d] = r.hi();
      else out[d] = r.lo() + r.width() * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return;
  }
  std::uint64_t state = seed_ ^ (0xD1B54A32D192ED03ULL * (index - grid_size_ + 1));
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const auto& r = dims_[d].range;
    out[d] = r.degenerate() ? r.lo() : std::min(r.hi(), r.lo() + r.width() * unit_double(splitmix64(state)));
  }
}

std::vector<double> BoxSampler::point(std::uint64_t index) const {
  std::vector<double> x(dims_.size());
  point(index, x);
  return x;
}

std::vector<std::vector<double>> sample_box(std::span<const NamedInterval> dims,
                                            const SearchConfig& cfg) {
  BoxSampler s(std::vector<NamedInterval>(dims.begin(), dims.end()), cfg);
  std::vector<std::vector<double>> out;
  out.reserve(s.size());
  for (std::uint64_t i = 0; i < s.size(); ++i) out.push_back(s.point(i));
  return out;
}

BoxSearchResult search_box(const BoxObjective& f, std::span<const NamedInterval> dims,
                           const SearchConfig& cfg) {
  const BoxSampler sampler(std::vector<NamedInterval>(dims.begin(), dims.end()), cfg);
  BoxSearchResult res;
  res.degenerate = std::all_of(dims.begin(), dims.end(),
                               [](const NamedInterval& d) { return d.range.degenerate(); });
  // A degenerate box is a single point; nothing beyond it to sample.
  const std::uint64_t total = res.degenerate ? 1 : sampler.size();

  std::vector<double> x(dims.size());
  double best_min = std::numeric_limits<double>::infinity();
  double best_max = -best_min;
  std::uint64_t arg_min_idx = 0, arg_max_idx = 0;
  TopK min_starts(cfg.multistart_count), max_starts(cfg.multistart_count);
  std::uint64_t valid = 0;

  auto record_violation = [&](const ModelConstraintError& e, std::span<const double> at) {
    ++res.violations;
    if (res.violation_samples.size() < kMaxViolationSamples) {
      res.violation_samples.push_back(std::string(e.what()) + " at " + describe_point(dims, at));
    }
  };

  for (std::uint64_t i = 0; i < total; ++i) {
    sampler.point(i, x);
    double v = 0.0;
    ++res.evaluations;
    if (i < sampler.grid_size()) ++res.grid_evaluations;
    try {
      v = f(x);
    } catch (const ModelConstraintError& e) {
      record_violation(e, x);
      continue;
    }
    ++valid;
    if (v < best_min) {
      best_min = v;
      arg_min_idx = i;
    }
    if (v > best_max) {
      best_max = v;
      arg_max_idx = i;
    }
    min_starts.offer(v, i);
    max_starts.offer(-v, i);
    if (i + 1 == sampler.grid_size() &&
        static_cast<double>(res.violations) > kViolationAbortFraction * static_cast<double>(res.grid_evaluations)) {
      break;
    }
  }

  const double violation_fraction = res.grid_evaluations == 0
                                        ? 0.0
                                        : static_cast<double>(res.violations) /
                                              static_cast<double>(res.grid_evaluations);
  if (violation_fraction > kViolationAbortFraction || valid == 0) {
    std::string msg = "search aborted: " + std::to_string(res.violations) + " of " +
                      std::to_string(res.grid_evaluations) +
                      " grid evaluations violate model constraints";
    for (const auto& s : res.violation_samples) msg += "\n  " + s;
    throw SearchAbortedError(msg);
  }

  res.min = best_min;
  res.max = best_max;
  res.argmin = sampler.point(arg_min_idx);
  res.argmax = sampler.point(arg_max_idx);

  if (!cfg.local_refine || res.degenerate) return res;

  // Refinement runs in the subspace of non-degenerate dimensions.
  std::vector<std::size_t> free_dims;
  std::vector<double> lo, hi;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (!dims[d].range.degenerate()) {
      free_dims.push_back(d);
      lo.push_back(dims[d].range.lo());
      hi.push_back(dims[d].range.hi());
    }
  }
  const std::uint64_t budget = 200 * (free_dims.size() + 1);
  std::vector<double> full(dims.size());

  auto run = [&](const std::vector<std::uint64_t>& starts, double sign, double& incumbent,
                 std::vector<double>& arg) {
    auto reduced = [&](std::span<const double> z) {
      for (std::size_t k = 0; k < free_dims.size(); ++k) full[free_dims[k]] = z[k];
      try {
        return sign * f(full);
      } catch (const ModelConstraintError& e) {
        record_violation(e, full);
        return std::numeric_limits<double>::infinity();
      }
    };
    for (const auto idx : starts) {
      const std::vector<double> start_full = sampler.point(idx);
      full = start_full;
      std::vector<double> z0;
      for (const auto d : free_dims) z0.push_back(start_full[d]);
      const NmOutcome out = nelder_mead(reduced, z0, lo, hi, cfg.refine_tolerance, budget, res.evaluations);
      if (std::isfinite(out.f) && out.f < sign * incumbent) {
        incumbent = sign * out.f;
        arg = start_full;
        for (std::size_t k = 0; k < free_dims.size(); ++k) arg[free_dims[k]] = out.x[k];
      }
    }
  };
  // Both directions minimize sign * f.
  run(min_starts.indices(), 1.0, res.min, res.argmin);
  run(max_starts.indices(), -1.0, res.max, res.argmax);
  res.refined = true;
  return res;
}

}  // namespace causalbounds
