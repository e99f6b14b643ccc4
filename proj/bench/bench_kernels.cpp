// Parallel kernels against their serial references on the lab beam.
#include <benchmark/benchmark.h>

#include <memory>

#include "beamflat/genfun.hpp"
#include "beamflat/kernels.hpp"
#include "beamflat/planner.hpp"
#include "beamflat/spectral.hpp"

using namespace beamflat;

namespace {

std::shared_ptr<const Plan> plan() {
  static const auto p = [] {
    const BeamParams P;
    auto table = std::make_shared<const GenTable>(compute_gen_tables(P, 12, P.grid_n));
    PlanSpec s;
    s.y0 = TrajectoryGen::sum(
        {TrajectoryGen::constant(1.0), TrajectoryGen::poly_exp({0.0, 0.0, 10.0}, -2.0)});
    return std::make_shared<const Plan>(table, s);
  }();
  return p;
}

std::shared_ptr<const GenTableQ> qtable() {
  static const auto t = spectral_table(BeamParams{}, 2000.0);
  return t;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

template <bool Parallel>
void BM_sample_control(benchmark::State& st) {
  const auto p = plan();
  const auto ts = linspace(0.0, 3.0, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto f = Parallel ? kernels::sample_control(*p, ts, 2) : kernels::sample_control_serial(*p, ts, 2);
    benchmark::DoNotOptimize(f.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_sample_field(benchmark::State& st) {
  const auto p = plan();
  const auto xs = linspace(0.0, 0.5, 64);
  const auto ts = linspace(0.0, 3.0, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto w = Parallel ? kernels::sample_field(*p, xs, ts, 2, 0)
                      : kernels::sample_field_serial(*p, xs, ts, 2, 0);
    benchmark::DoNotOptimize(w.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0) * 64);
}

template <bool Parallel>
void BM_scan_char_fn(benchmark::State& st) {
  const auto t = qtable();
  const auto om = linspace(1.0, 2000.0, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto d = Parallel ? kernels::scan_char_fn(*t, om) : kernels::scan_char_fn_serial(*t, om);
    benchmark::DoNotOptimize(d.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_sample_control<false>)->Name("sample_control/serial")->Arg(2001);
BENCHMARK(BM_sample_control<true>)->Name("sample_control/parallel")->Arg(2001);
BENCHMARK(BM_sample_field<false>)->Name("sample_field/serial")->Arg(301);
BENCHMARK(BM_sample_field<true>)->Name("sample_field/parallel")->Arg(301);
BENCHMARK(BM_scan_char_fn<false>)->Name("scan_char_fn/serial")->Arg(400);
BENCHMARK(BM_scan_char_fn<true>)->Name("scan_char_fn/parallel")->Arg(400);

BENCHMARK_MAIN();
