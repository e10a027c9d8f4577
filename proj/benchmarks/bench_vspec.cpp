#include <benchmark/benchmark.h>

#include <cmath>

#include "vspec/dft.hpp"
#include "vspec/eigen.hpp"
#include "vspec/evolve.hpp"
#include "vspec/flat.hpp"
#include "vspec/special.hpp"

namespace {

using namespace vspec;

const VortexProfile& profile() {
  static const VortexProfile p =
      solve_profile(std::make_shared<const RadialGrid>(RadialGrid::default_grid()), 1e-8);
  return p;
}

// Small table: 0.5 <= xi <= 3.
const EigenTable& small_table() {
  static const EigenTable t = build_table(profile(), FrequencyGrid::make(0.5, 3.0, 0.1), profile().grid);
  return t;
}

RadialField bump(std::shared_ptr<const RadialGrid> g) {
  RadialField f(std::move(g));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f.grid->r(i);
    f.u[i] = r * std::exp(-r * r / 2.0);
    f.v[i] = 0.5 * r * std::exp(-r * r / 2.0);
  }
  return f;
}

void BM_BesselJ0(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(special::bessel({special::Family::J, 0}, x));
}
BENCHMARK(BM_BesselJ0)->Arg(1)->Arg(10)->Arg(100);

void BM_Eigenfunction(benchmark::State& state) {
  const double xi = static_cast<double>(state.range(0)) / 10.0;
  const auto& p = profile();
  for (auto _ : state) benchmark::DoNotOptimize(eigenfunction(SpectralPoint::from_xi(xi), p, p.grid));
}
BENCHMARK(BM_Eigenfunction)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const auto& t = small_table();
  const auto f = bump(t.grid());
  for (auto _ : state) benchmark::DoNotOptimize(forward(f, t, 1));
  state.counters["nodes"] = static_cast<double>(t.size());
}
BENCHMARK(BM_Forward)->Unit(benchmark::kMillisecond);

void BM_Inverse(benchmark::State& state) {
  const auto& t = small_table();
  const auto z = forward(bump(t.grid()), t, 1);
  for (auto _ : state) benchmark::DoNotOptimize(inverse(z, t, 1));
}
BENCHMARK(BM_Inverse)->Unit(benchmark::kMillisecond);

void BM_FlatForward(benchmark::State& state) {
  static const FlatBasis b(FrequencyGrid::make(1e-3, 20.0, 0.04),
                           std::make_shared<const RadialGrid>(RadialGrid::default_grid()), 1);
  const auto f = bump(b.grid());
  for (auto _ : state) benchmark::DoNotOptimize(b.forward(f));
}
BENCHMARK(BM_FlatForward)->Unit(benchmark::kMillisecond);

void BM_ModelIntegral(benchmark::State& state) {
  const double q = static_cast<double>(state.range(0)) / 100.0;
  auto phi = [](double x) {
    const double y = x / 1.5;
    return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
  };
  auto w = [](double x, double r) { return std::pow(1.0 + x * x * r * r, -0.25); };
  for (auto _ : state) benchmark::DoNotOptimize(model_integral(50.0, q * 50.0, phi, w));
}
BENCHMARK(BM_ModelIntegral)->Arg(50)->Arg(141)->Arg(160)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
