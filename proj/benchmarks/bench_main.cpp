#include <benchmark/benchmark.h>

#include <random>

#include "causalbounds/csv.hpp"
#include "causalbounds/logistic.hpp"
#include "causalbounds/mech_bounds.hpp"
#include "causalbounds/model_dsl.hpp"
#include "causalbounds/pkpd.hpp"
#include "causalbounds/stat_identify.hpp"

using namespace causalbounds;

namespace {

std::vector<BinaryRecord> records(std::size_t n, int strata) {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> u;
  std::vector<BinaryRecord> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int w = static_cast<int>(k % static_cast<std::size_t>(strata));
    const int a = u(eng) < 0.5 ? 1 : 0;
    const int y = u(eng) < 0.2 + 0.1 * w / strata + 0.3 * a ? 1 : 0;
    out.push_back({y, a, "w" + std::to_string(w)});
  }
  return out;
}

pkpd::WeightedEmpiricalDist baseline(std::size_t n) {
  std::mt19937_64 eng(2);
  std::normal_distribution<double> sbp(125, 20);
  std::uniform_real_distribution<double> wt(1000, 90000);
  pkpd::WeightedEmpiricalDist d;
  for (std::size_t k = 0; k < n; ++k) d.points.push_back({sbp(eng), wt(eng)});
  return pkpd::truncate_renormalize(d, 140);
}

}  // namespace

static void BM_ManskiBounds(benchmark::State& state) {
  const auto t = table_from_counts(30, 20, 10, 40);
  for (auto _ : state) benchmark::DoNotOptimize(manski_ace_bounds(t));
}
BENCHMARK(BM_ManskiBounds);

static void BM_LogisticFit(benchmark::State& state) {
  const auto recs = records(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(recs, LogisticDesign::saturated));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogisticFit)->Arg(1000)->Arg(100000);

static void BM_DslEvaluate(benchmark::State& state) {
  const auto spec = dsl::parse_model(read_file(CAUSALBOUNDS_SOURCE_DIR "/models/logistic-full.model"));
  const auto binding = dsl::SlotBinding::defaults(spec);
  const auto h = *spec.find_fun("h");
  const double args[] = {1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(dsl::evaluate(spec, h, args, binding));
}
BENCHMARK(BM_DslEvaluate);

static void BM_BoundPsi(benchmark::State& state) {
  const MediatorMechanism m(dsl::parse_model(read_file(CAUSALBOUNDS_SOURCE_DIR "/models/no-direct-path.model")));
  SearchConfig cfg;
  cfg.grid_points_per_dim = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bound_psi(m, cfg));
}
BENCHMARK(BM_BoundPsi)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_CaseBounds(benchmark::State& state) {
  const auto d = baseline(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pkpd::case_bounds(d, pkpd::PkpdConfig{}, SearchConfig{}));
}
BENCHMARK(BM_CaseBounds)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
