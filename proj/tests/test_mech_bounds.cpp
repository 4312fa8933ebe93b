#include <doctest.h>

#include <cmath>

#include "causalbounds/error.hpp"
#include "causalbounds/mech_bounds.hpp"
#include "oracles/oracles.hpp"

using namespace causalbounds;

namespace {

MediatorMechanism mech(const char* src) { return MediatorMechanism(dsl::parse_model(src)); }

const char* kExpit = "fun g(a) = expit(2*a); fun h(a, m) = expit(-1 + 2*m);";

double ex(double x) { return static_cast<double>(oracle::expit_ld(x)); }

}  // namespace

TEST_CASE("mu_bar for the expit mechanism") {
  const auto m = mech(kExpit);
  CHECK(mu_bar(m, Arm::control, {}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mu_bar(m, Arm::treated, {}) == doctest::Approx(0.6759728631680573).epsilon(1e-14));
  const auto c = mech("param t in [0, 3]; fun g(a) = expit(t*a); fun h(a, m) = 0.37;");
  CHECK(mu_bar(c, Arm::treated, {{"t", 2.5}}) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(mu_bar(c, Arm::control, {{"t", 1.0}}) == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("psi_bar") {
  CHECK(psi_bar(mech(kExpit), {}) == doctest::Approx(0.1759728631680573).epsilon(1e-14));
  CHECK(psi_bar(mech("fun g(a) = 0.3; fun h(a, m) = 0.2 + 0.5*m;"), {}) == 0.0);
  CHECK(psi_bar(mech("fun g(a) = a; fun h(a, m) = m;"), {}) == 1.0);
}

TEST_CASE("constraint violations name the function") {
  const auto m = mech("param k in [0, 2]; fun g(a) = k*a; fun h(a, m) = m;");
  try {
    psi_bar(m, {{"k", 1.5}});
    FAIL("expected ModelConstraintError");
  } catch (const ModelConstraintError& e) {
    CHECK(std::string(e.what()).find("g(1)") != std::string::npos);
    CHECK(std::string(e.what()).find("1.5") != std::string::npos);
  }
}

TEST_CASE("mechanism arity checks") {
  CHECK_THROWS_AS(mech("fun g(a) = 0.5;"), DomainError);
  CHECK_THROWS_AS(mech("fun g(a, b) = 0.5; fun h(a, m) = 0.5;"), DomainError);
  CHECK_THROWS_AS(mech("fun g(a) = 0.5; fun h(a) = 0.5;"), DomainError);
  CHECK_NOTHROW(MediatorMechanism(dsl::parse_model("fun p(a) = 0.5; fun q(a, m) = 0.5;"), "p", "q"));
}

TEST_CASE("degenerate box gives a point result") {
  const auto r = bound_psi(mech(kExpit), SearchConfig{});
  CHECK(r.kind == IdentificationKind::point);
  CHECK(r.interval.lo() == r.interval.hi());
  CHECK(r.interval.lo() == doctest::Approx(0.1759728631680573).epsilon(1e-14));

  const auto fixed = mech("param t = 2; fun g(a) = expit(t*a); fun h(a, m) = expit(-1 + 2*m);");
  const auto f = bound_psi(fixed, SearchConfig{});
  CHECK(f.kind == IdentificationKind::point);
  CHECK(f.interval.lo() == psi_bar(fixed, {{"t", 2}}));
}

TEST_CASE("no treatment effect on the mediator gives zero") {
  const auto m = mech(
      "param t0 in [-2, 2]; param t1 in [0, 0]; param l0 in [-3, 3]; param l2 in [-1, 4];"
      "fun g(a) = expit(t0 + t1*a); fun h(a, m) = expit(l0 + l2*m);");
  const auto r = bound_psi(m, SearchConfig{});
  CHECK(r.interval.lo() == 0.0);
  CHECK(r.interval.hi() == 0.0);
}

TEST_CASE("one-parameter mechanism matches a 10^6-point oracle") {
  const auto m = mech("param t1 in [0, 2]; fun g(a) = expit(t1*a); fun h(a, m) = expit(-1 + 2*m);");
  const auto r = bound_psi(m, SearchConfig{});
  auto psi = [](std::span<const double> x) {
    const double h1 = ex(1), h0 = ex(-1);
    const double g1 = ex(x[0]), g0 = 0.5;
    return (h1 * g1 + h0 * (1 - g1)) - (h1 * g0 + h0 * (1 - g0));
  };
  const auto [lo, hi] = oracle::grid_extremes(psi, {{0, 2}}, 1000000);
  CHECK(std::abs(r.interval.lo() - lo) < 1e-4);
  CHECK(std::abs(r.interval.hi() - hi) < 1e-4);
  REQUIRE(r.argmax.has_value());
  CHECK(r.argmax->front().second == doctest::Approx(2.0));
  CHECK(r.diagnostics.method == "grid+nelder-mead");
}

TEST_CASE("check_vacuous on the logistic family") {
  const auto m = mech(
      "param t0 in [-1,1]; param t1 in [-1,1]; param l0 in [-1,1]; param l1 in [-1,1];"
      "param l2 in [-1,1]; param l3 in [-1,1];"
      "fun g(a) = expit(t0 + t1*a); fun h(a, m) = expit(l0 + l1*a + l2*m + l3*a*m);");
  SearchConfig cfg;
  cfg.grid_points_per_dim = 5;
  const auto rep = check_vacuous(m, 20.0, cfg);
  CHECK(rep.vacuous);
  CHECK(rep.sup >= 0.99);
  CHECK(rep.inf <= -0.99);
  CHECK(rep.search.kind == IdentificationKind::vacuous_parameter_space);
  CHECK(rep.statement.find("cap") != std::string::npos);
  CHECK(rep.widened_box.size() == 6);
  CHECK(rep.widened_box[0].range == Interval(-20, 20));
}

TEST_CASE("check_vacuous with constant outcome") {
  const auto m = mech("param t0 in [-1,1]; param t1 in [-1,1]; fun g(a) = expit(t0 + t1*a); fun h(a, m) = 0.5;");
  const auto rep = check_vacuous(m, 20.0, SearchConfig{});
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.sup == 0.0);
  CHECK(rep.inf == 0.0);
  CHECK(rep.search.kind == IdentificationKind::partial);
}

TEST_CASE("check_vacuous without a direct path compares against its oracle") {
  // psi-bar factors as (h(1)-h(0)) (g(1)-g(0)), so its supremum stays below 1
  // at any finite cap; at cap 20 both factors reach expit(10)-expit(-10).
  const auto m = mech(
      "param t0 in [-1,1]; param t1 in [-1,1]; param l0 in [-1,1]; param l2 in [-1,1];"
      "fun g(a) = expit(t0 + t1*a); fun h(a, m) = expit(l0 + l2*m);");
  SearchConfig cfg;
  cfg.grid_points_per_dim = 5;
  const auto rep = check_vacuous(m, 20.0, cfg);
  CHECK(rep.sup < 1.0);
  auto psi = [](std::span<const double> x) {
    const double g1 = ex(x[0] + x[1]), g0 = ex(x[0]);
    const double h1 = ex(x[2] + x[3]), h0 = ex(x[2]);
    return (h1 - h0) * (g1 - g0);
  };
  const auto [lo, hi] = oracle::grid_extremes(psi, {{-20, 20}, {-20, 20}, {-20, 20}, {-20, 20}}, 41);
  CHECK(rep.sup == doctest::Approx(hi).epsilon(1e-6));
  CHECK(rep.inf == doctest::Approx(lo).epsilon(1e-6));
  CHECK(rep.vacuous == (hi >= 0.99 && lo <= -0.99));
}

TEST_CASE("nonnegative ranges widen to [0, cap]") {
  const auto m = mech("param k in [0, 1]; fun g(a) = a*k/(1 + k); fun h(a, m) = m;");
  const auto rep = check_vacuous(m, 50.0, SearchConfig{});
  CHECK(rep.widened_box[0].range == Interval(0, 50));
  CHECK(rep.sup == doctest::Approx(50.0 / 51.0).epsilon(1e-12));
  CHECK_FALSE(rep.vacuous);
  CHECK_THROWS_AS(check_vacuous(m, 0.0, SearchConfig{}), DomainError);
}
