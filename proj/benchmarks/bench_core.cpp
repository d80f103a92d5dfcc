#include <benchmark/benchmark.h>

#include <numbers>

#include "plaplab/bounds.hpp"
#include "plaplab/initial_data.hpp"
#include "plaplab/solver.hpp"
#include "plaplab/spectral.hpp"
#include "plaplab/transport.hpp"

using namespace plaplab;

static void BM_PLaplacianStep(benchmark::State& state) {
  SolverConfig c;
  c.grid = Grid(2, static_cast<int>(state.range(0)));
  c.nu = 1e-3;
  Solver solver(c);
  SolverState s = SolverState::from_field(random_band_limited(c.grid, 8, 1), 0.0);
  const double dt = solver.cfl_dt(s);
  for (auto _ : state) {
    solver.p_laplacian_step(s, dt);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.grid.size()));
}
BENCHMARK(BM_PLaplacianStep)->Arg(64)->Arg(128)->Arg(256);

static void BM_ShearTransport(benchmark::State& state) {
  const Grid g(2, static_cast<int>(state.range(0)));
  const Transporter t(g, VelocityField::alternating_shear(1.0, 1.0));
  const ScalarField f = sine_mode(g);
  std::vector<double> v(f.values().begin(), f.values().end());
  double s = 0.0;
  for (auto _ : state) {
    t.advance(v, s, s + 0.01);
    s += 0.01;
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_ShearTransport)->Arg(128)->Arg(256);

static void BM_SplineTransport(benchmark::State& state) {
  const Grid g(2, static_cast<int>(state.range(0)));
  const Transporter t(g, VelocityField::cellular(1.0));
  const ScalarField f = sine_mode(g);
  std::vector<double> v(f.values().begin(), f.values().end());
  double s = 0.0;
  for (auto _ : state) {
    t.advance(v, s, s + 0.01);
    s += 0.01;
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_SplineTransport)->Arg(64)->Arg(128);

static void BM_SobolevNorm(benchmark::State& state) {
  const ScalarField f = random_band_limited(Grid(2, static_cast<int>(state.range(0))), 16, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(f, -1.0));
}
BENCHMARK(BM_SobolevNorm)->Arg(128)->Arg(256)->Arg(512);

static void BM_H1Threshold(benchmark::State& state) {
  BoundInputs in;
  in.nu = 1e-16;
  in.grad_u_sup = 2 * std::numbers::pi;
  in.h = RateFunction::exponential(1.0, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(H1(in).value);
}
BENCHMARK(BM_H1Threshold);
BENCHMARK_MAIN();
