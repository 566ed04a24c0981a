#include <benchmark/benchmark.h>

#include <vector>

#include "afnls/evolution.hpp"
#include "afnls/kernels.hpp"
#include "afnls/rng.hpp"
#include "afnls/spectral.hpp"

namespace k = afnls::kernels;
using afnls::cplx;

namespace {

std::vector<cplx> data(std::size_t n) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {afnls::uniform(1, 0, 2 * i) - 0.5, afnls::uniform(1, 0, 2 * i + 1) - 0.5};
  return v;
}

template <bool Parallel>
void sum_abs_pow(benchmark::State& st) {
  const auto v = data(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double s = Parallel ? k::parallel::sum_abs_pow(v, 3.5) : k::serial::sum_abs_pow(v, 3.5);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void nonlinear_phase(benchmark::State& st) {
  auto v = data(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    if (Parallel) k::parallel::nonlinear_phase(v, 1e-3, 4);
    else k::serial::nonlinear_phase(v, 1e-3, 4);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void weighted_abs2(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto v = data(static_cast<std::size_t>(n) * n);
  auto w = [](int i, int j) { return 1.0 + i * i + std::sqrt(static_cast<double>(j)); };
  for (auto _ : st) {
    double s = Parallel ? k::parallel::weighted_abs2(v, n, n, w) : k::serial::weighted_abs2(v, n, n, w);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

template <bool Parallel>
void power_nonlinearity(benchmark::State& st) {
  const auto v = data(static_cast<std::size_t>(st.range(0)));
  std::vector<cplx> out(v.size());
  for (auto _ : st) {
    if (Parallel) k::parallel::power_nonlinearity(v, out, 3.5);
    else k::serial::power_nonlinearity(v, out, 3.5);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void splitting_step(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = afnls::build_grid(n, n, 8, 8);
  afnls::ModelParams m;
  m.s = 0.75;
  m.p = 3;
  afnls::Field u = afnls::random_field(g, 1, 0);
  for (auto _ : st) {
    u = afnls::step(u, 1e-3, m);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(sum_abs_pow<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(sum_abs_pow<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(nonlinear_phase<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(nonlinear_phase<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(weighted_abs2<false>)->Arg(256)->Arg(1024);
BENCHMARK(weighted_abs2<true>)->Arg(256)->Arg(1024);
BENCHMARK(power_nonlinearity<false>)->Arg(1 << 20);
BENCHMARK(power_nonlinearity<true>)->Arg(1 << 20);
BENCHMARK(splitting_step)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
