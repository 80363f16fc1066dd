#include <benchmark/benchmark.h>

#include "critnet/checks.hpp"
#include "critnet/criticality.hpp"
#include "critnet/currents.hpp"
#include "critnet/density.hpp"
#include "critnet/generators.hpp"

using namespace critnet;

namespace {

Net jittered_grid(int n, std::uint64_t seed) {
  const Net g = grid_net(2, n).net;
  Rng rng(seed);
  std::vector<Vector> pos;
  for (int v = 0; v < g.vertex_count(); ++v) {
    Vector p = g.position(v);
    if (!g.is_leaf(v)) p += 0.05 * rng.unit_vector(2);
    pos.push_back(std::move(p));
  }
  return g.with_positions(pos);
}

void BM_RelaxGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Net start = jittered_grid(n, 1);
  SolverParams params;
  params.tolerance = 1e-9;
  for (auto _ : state) {
    const RelaxResult res = relax(start, params);
    benchmark::DoNotOptimize(res.final_residual);
  }
}
BENCHMARK(BM_RelaxGrid)->Arg(2)->Arg(4)->Arg(8);

void BM_CurrentProfile(benchmark::State& state) {
  const Net g = grid_net(2, static_cast<int>(state.range(0))).net;
  Rng rng(2);
  const Vector v = rng.unit_vector(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(current_profile(g, v).c_in);
  }
}
BENCHMARK(BM_CurrentProfile)->Arg(4)->Arg(8)->Arg(16);

void BM_CutScan(benchmark::State& state) {
  const Net g = grid_net(2, static_cast<int>(state.range(0))).net;
  Rng rng(3);
  const Vector v = rng.unit_vector(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cut_scan(g, v).slabs.size());
  }
}
BENCHMARK(BM_CutScan)->Arg(4)->Arg(8);

void BM_OuterBall(benchmark::State& state) {
  const Net g = grid_net(3, static_cast<int>(state.range(0))).net;
  for (auto _ : state) {
    benchmark::DoNotOptimize(outer_ball(g).radius);
  }
}
BENCHMARK(BM_OuterBall)->Arg(2)->Arg(4);

void BM_DensityProfile(benchmark::State& state) {
  const ExtendedNet ext = extend_leaves(grid_net(2, 4).net);
  Vector center(2);
  center << 2.0, 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        density_profile(ext, center, 0.21, 30.0, static_cast<int>(state.range(0)))
            .valid_count);
  }
}
BENCHMARK(BM_DensityProfile)->Arg(50)->Arg(200);

void BM_RunSuite(benchmark::State& state) {
  const Net g = grid_net(2, static_cast<int>(state.range(0))).net;
  CheckOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_suite(g, options).passed);
  }
}
BENCHMARK(BM_RunSuite)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
