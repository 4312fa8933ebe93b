#include <doctest.h>

#include "causalbounds/error.hpp"
#include "causalbounds/stat_identify.hpp"
#include "oracles/oracles.hpp"

using namespace causalbounds;

namespace {
const BinaryJointTable kWorked{JointEntries{0.30, 0.20, 0.10, 0.40}};
}

TEST_CASE("manski_mu_bounds") {
  auto b1 = manski_mu_bounds(kWorked, Arm::treated);
  CHECK(b1.lo() == doctest::Approx(0.30).epsilon(1e-15));
  CHECK(b1.hi() == doctest::Approx(0.80).epsilon(1e-15));
  auto b0 = manski_mu_bounds(kWorked, Arm::control);
  CHECK(b0.lo() == doctest::Approx(0.10).epsilon(1e-15));
  CHECK(b0.hi() == doctest::Approx(0.60).epsilon(1e-15));
  const auto pm = manski_mu_bounds(BinaryJointTable{JointEntries{1, 0, 0, 0}}, Arm::treated);
  CHECK(pm.lo() == 1.0);
  CHECK(pm.hi() == 1.0);
}

TEST_CASE("manski_ace_bounds worked examples") {
  const auto r = manski_ace_bounds(kWorked);
  CHECK(r.kind == IdentificationKind::partial);
  CHECK(r.interval.lo() == doctest::Approx(-0.30).epsilon(1e-15));
  CHECK(r.interval.hi() == doctest::Approx(0.70).epsilon(1e-15));
  CHECK(r.diagnostics.method == "manski-closed-form");
  REQUIRE(r.argmin.has_value());
  REQUIRE(r.argmax.has_value());

  const auto corner = manski_ace_bounds(BinaryJointTable{JointEntries{0, 0, 0, 1}});
  CHECK(corner.interval.lo() == 0.0);
  CHECK(corner.interval.hi() == 1.0);

  const auto sym = manski_ace_bounds(BinaryJointTable{JointEntries{0.25, 0.25, 0.25, 0.25}});
  CHECK(sym.interval.lo() == -0.5);
  CHECK(sym.interval.hi() == 0.5);
}

TEST_CASE("manski_oracle examples") {
  const auto o = manski_oracle(kWorked, 1e-3);
  CHECK(o.lo() == doctest::Approx(-0.30).epsilon(1e-3));
  CHECK(o.hi() == doctest::Approx(0.70).epsilon(1e-3));
  const auto c = manski_oracle(BinaryJointTable{JointEntries{0, 0, 0, 1}}, 1e-3);
  CHECK(std::abs(c.lo()) <= 1e-3);
  CHECK(std::abs(c.hi() - 1.0) <= 1e-3);
  oracle::Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const BinaryJointTable t(oracle::random_table(rng));
    CHECK(std::abs(manski_oracle(t, 0.05).width() - 1.0) <= 2 * 0.05);
  }
  CHECK_THROWS_AS(manski_oracle(kWorked, 0.0), DomainError);
  CHECK_THROWS_AS(manski_oracle(kWorked, 0.2), DomainError);
}

TEST_CASE("randomized_point_estimate") {
  const auto r = randomized_point_estimate(kWorked);
  CHECK(r.kind == IdentificationKind::point);
  CHECK(r.interval.lo() == doctest::Approx(0.40).epsilon(1e-14));
  CHECK(r.interval.lo() == r.interval.hi());
  CHECK(manski_ace_bounds(kWorked).interval.contains(r.interval.lo()));
  CHECK(randomized_point_estimate(BinaryJointTable{JointEntries{0.25, 0.25, 0.25, 0.25}}).interval.lo() == 0.0);
  CHECK(randomized_point_estimate(BinaryJointTable{JointEntries{0.5, 0, 0, 0.5}}).interval.lo() == 1.0);
  CHECK_THROWS_AS(randomized_point_estimate(BinaryJointTable{JointEntries{0.5, 0.5, 0, 0}}), PositivityError);
}

TEST_CASE("gformula_nonparametric two-stratum example") {
  const StratifiedTable s({Stratum{"w0", 0.4, 0.50, 0.25, {}, {}}, Stratum{"w1", 0.6, 0.80, 0.50, {}, {}}});
  const auto r = gformula_nonparametric(s);
  CHECK(r.kind == IdentificationKind::point);
  CHECK(r.interval.lo() == doctest::Approx(0.28).epsilon(1e-14));
  double mu1 = 0, mu0 = 0;
  for (const auto& [k, v] : r.components) {
    if (k == "mu1") mu1 = v;
    if (k == "mu0") mu0 = v;
  }
  CHECK(mu1 == doctest::Approx(0.68).epsilon(1e-14));
  CHECK(mu0 == doctest::Approx(0.40).epsilon(1e-14));
}

TEST_CASE("gformula_nonparametric null and single stratum") {
  const StratifiedTable null({Stratum{"a", 0.3, 0.4, 0.4, {}, {}}, Stratum{"b", 0.7, 0.9, 0.9, {}, {}}});
  CHECK(gformula_nonparametric(null).interval.lo() == doctest::Approx(0.0).epsilon(1e-15));

  // Single stratum: equals the randomized contrast of the implied joint.
  const StratifiedTable one({Stratum{"all", 1.0, 0.6, 0.2, {}, {}}});
  CHECK(gformula_nonparametric(one).interval.lo() ==
        doctest::Approx(randomized_point_estimate(kWorked).interval.lo()).epsilon(1e-14));
}

TEST_CASE("gformula_nonparametric positivity and zero-mass strata") {
  const StratifiedTable bad({Stratum{"ok", 0.5, 0.5, 0.5, {}, {}}, Stratum{"lonely", 0.5, 0.5, std::nullopt, {}, {}}});
  try {
    gformula_nonparametric(bad);
    FAIL("expected PositivityError");
  } catch (const PositivityError& e) {
    CHECK(std::string(e.what()).find("lonely") != std::string::npos);
  }
  const StratifiedTable dropped({Stratum{"ok", 1.0, 0.5, 0.25, {}, {}}, Stratum{"empty", 0.0, std::nullopt, std::nullopt, {}, {}}});
  const auto r = gformula_nonparametric(dropped);
  CHECK(r.interval.lo() == doctest::Approx(0.25));
  CHECK_FALSE(r.diagnostics.notes.empty());
}
