#include "oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace oracle {

causalbounds::JointEntries random_table(Rng& rng) {
  double e[4];
  double total = 0.0;
  for (double& x : e) {
    x = rng.coin(0.05) ? 0.0 : -std::log(1.0 - rng.uniform());
    total += x;
  }
  if (total == 0.0) {
    e[0] = 1.0;
    total = 1.0;
  }
  for (double& x : e) x /= total;
  return {e[0], e[1], e[2], e[3]};
}

std::pair<double, double> manski_brute_force(const causalbounds::JointEntries& t, int levels) {
  const double treated = t.p11 + t.p01;
  const double untreated = t.p10 + t.p00;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < levels; ++i) {
    const double y1_among_untreated = untreated * i / (levels - 1);
    const double mu1 = t.p11 + y1_among_untreated;
    for (int j = 0; j < levels; ++j) {
      const double y0_among_treated = treated * j / (levels - 1);
      const double mu0 = t.p10 + y0_among_treated;
      lo = std::min(lo, mu1 - mu0);
      hi = std::max(hi, mu1 - mu0);
    }
  }
  return {lo, hi};
}

GFormula gformula_from_records(std::span<const causalbounds::BinaryRecord> records) {
  struct Cell {
    double n[2] = {0, 0};
    double y[2] = {0, 0};
  };
  std::map<std::string, Cell> cells;
  for (const auto& r : records) {
    auto& c = cells[r.stratum];
    c.n[r.a] += 1;
    c.y[r.a] += r.y;
  }
  GFormula g;
  const double n = static_cast<double>(records.size());
  for (const auto& [w, c] : cells) {
    const double f = (c.n[0] + c.n[1]) / n;
    g.mu1 += f * c.y[1] / c.n[1];
    g.mu0 += f * c.y[0] / c.n[0];
  }
  return g;
}

std::vector<causalbounds::BinaryRecord> random_stratified_records(Rng& rng, int strata) {
  std::vector<causalbounds::BinaryRecord> out;
  for (int w = 0; w < strata; ++w) {
    const std::string label = "w" + std::to_string(w);
    for (int a = 0; a < 2; ++a) {
      const double p = rng.uniform(0.15, 0.85);
      const int n = rng.integer(20, 120);
      // Guarantee both outcomes so cell means stay strictly inside (0, 1).
      out.push_back({1, a, label});
      out.push_back({0, a, label});
      for (int k = 0; k < n; ++k) out.push_back({rng.coin(p) ? 1 : 0, a, label});
    }
  }
  std::shuffle(out.begin(), out.end(), rng.engine());
  return out;
}

long double expit_ld(long double x) { return 1.0L / (1.0L + std::exp(-x)); }

std::pair<double, double> grid_extremes(const Objective& f,
                                        const std::vector<std::pair<double, double>>& box, int points) {
  const std::size_t d = box.size();
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (;;) {
    for (std::size_t k = 0; k < d; ++k) {
      const auto [a, b] = box[k];
      x[k] = a == b ? a : a + (b - a) * idx[k] / (points - 1);
    }
    const double v = f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    std::size_t k = 0;
    for (; k < d; ++k) {
      const int limit = box[k].first == box[k].second ? 1 : points;
      if (++idx[k] < limit) break;
      idx[k] = 0;
    }
    if (k == d) break;
  }
  return {lo, hi};
}

}  // namespace oracle
