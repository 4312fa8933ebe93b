#include <doctest.h>

#include <cmath>
#include <set>

#include "causalbounds/box_search.hpp"
#include "causalbounds/error.hpp"

using namespace causalbounds;

TEST_CASE("one dimension, three grid points") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 3;
  cfg.multistart_count = 0;
  const std::vector<NamedInterval> dims{{"x", Interval(0, 1)}};
  const auto pts = sample_box(dims, cfg);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0][0] == 0.0);
  CHECK(pts[1][0] == 0.5);
  CHECK(pts[2][0] == 1.0);
}

TEST_CASE("two points per dimension are the corners") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 2;
  cfg.multistart_count = 0;
  const std::vector<NamedInterval> dims{{"x", Interval(-1, 1)}, {"y", Interval(2, 3)}};
  std::set<std::pair<double, double>> seen;
  for (const auto& p : sample_box(dims, cfg)) seen.insert({p[0], p[1]});
  CHECK(seen == std::set<std::pair<double, double>>{{-1, 2}, {-1, 3}, {1, 2}, {1, 3}});
}

TEST_CASE("stream is deterministic and seeded") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 4;
  cfg.multistart_count = 10;
  const std::vector<NamedInterval> dims{{"x", Interval(0, 1)}, {"y", Interval(-5, 5)}};
  const auto a = sample_box(dims, cfg);
  const auto b = sample_box(dims, cfg);
  CHECK(a == b);
  CHECK(a.size() == 16 + 10);
  cfg.seed = 7;
  const auto c = sample_box(dims, cfg);
  CHECK(std::equal(a.begin(), a.begin() + 16, c.begin()));
  CHECK_FALSE(a == c);
  for (const auto& p : c) {
    CHECK(dims[0].range.contains(p[0]));
    CHECK(dims[1].range.contains(p[1]));
  }
}

TEST_CASE("degenerate dimensions contribute one grid value") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 5;
  cfg.multistart_count = 0;
  const std::vector<NamedInterval> dims{{"x", Interval(0, 1)}, {"k", Interval(2, 2)}};
  CHECK(BoxSampler(dims, cfg).grid_size() == 5);
}

TEST_CASE("too many grid points") {
  SearchConfig cfg;
  std::vector<NamedInterval> dims;
  for (int k = 0; k < 9; ++k) dims.push_back({"p" + std::to_string(k), Interval(0, 1)});
  try {
    BoxSampler(dims, cfg);
    FAIL("expected TooManyPointsError");
  } catch (const TooManyPointsError& e) {
    CHECK(std::string(e.what()).find("grid_points_per_dim") != std::string::npos);
  }
  dims.pop_back();
  CHECK_NOTHROW(BoxSampler(dims, cfg));
}

TEST_CASE("config validation") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.grid_points_per_dim = 2;
  cfg.refine_tolerance = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("search finds interior optimum via refinement") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 5;
  const std::vector<NamedInterval> dims{{"x", Interval(-1, 1)}, {"y", Interval(-1, 1)}};
  auto f = [](std::span<const double> x) { return -(x[0] - 0.3141) * (x[0] - 0.3141) - (x[1] + 0.27) * (x[1] + 0.27); };
  const auto r = search_box(f, dims, cfg);
  CHECK(r.refined);
  CHECK(r.max == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(r.argmax[0] == doctest::Approx(0.3141).epsilon(1e-3));
  CHECK(r.argmax[1] == doctest::Approx(-0.27).epsilon(1e-3));
  CHECK(r.min == doctest::Approx(-(1.3141 * 1.3141) - 1.27 * 1.27));

  cfg.local_refine = false;
  const auto g = search_box(f, dims, cfg);
  CHECK_FALSE(g.refined);
  CHECK(g.max <= r.max);
  CHECK(g.evaluations == 25 + cfg.multistart_count);
}

TEST_CASE("constraint violations are counted, and too many abort") {
  SearchConfig cfg;
  cfg.grid_points_per_dim = 101;
  cfg.local_refine = false;
  cfg.multistart_count = 0;
  const std::vector<NamedInterval> dims{{"x", Interval(0, 1)}};
  auto f = [](std::span<const double> x) -> double {
    if (x[0] > 0.995) throw ModelConstraintError("x too large", "f", x[0]);
    return x[0];
  };
  const auto r = search_box(f, dims, cfg);
  CHECK(r.violations == 1);
  CHECK(r.max == doctest::Approx(0.99));
  CHECK(r.violation_samples.size() == 1);

  auto g = [](std::span<const double> x) -> double {
    if (x[0] > 0.95) throw ModelConstraintError("x too large", "g", x[0]);
    return x[0];
  };
  CHECK_THROWS_AS(search_box(g, dims, cfg), SearchAbortedError);
}

TEST_CASE("degenerate search is a single evaluation") {
  SearchConfig cfg;
  const std::vector<NamedInterval> dims{{"x", Interval(0.5, 0.5)}};
  int calls = 0;
  auto f = [&](std::span<const double> x) {
    ++calls;
    return x[0] * 2;
  };
  const auto r = search_box(f, dims, cfg);
  CHECK(r.degenerate);
  CHECK(r.min == 1.0);
  CHECK(r.max == 1.0);
  CHECK(calls == 1);
}
