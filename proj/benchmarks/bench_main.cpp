// SPDX-License-Identifier: Apache-2.0
#include <memory>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "plasmahom/analysis.hpp"
#include "plasmahom/cellsolver.hpp"
#include "plasmahom/effperm.hpp"
#include "plasmahom/geometry.hpp"
#include "plasmahom/macrosolver.hpp"
#include "plasmahom/materials.hpp"
#include "plasmahom/mesh.hpp"

namespace ph = plasmahom;

namespace
{
ph::UnitCellGeometry make(ph::GeometryKind kind)
{
  ph::GeometrySpec s;
  s.kind = kind;
  return ph::build_geometry(s);
}

double h_from_arg(const benchmark::State &state) { return 1.0 / state.range(0); }
}  // namespace

static void BM_MeshTube(benchmark::State &state)
{
  const auto g = make(ph::GeometryKind::tube);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ph::generate_mesh(g, h_from_arg(state)));
  }
}
BENCHMARK(BM_MeshTube)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_EffectiveTensorRibbon(benchmark::State &state)
{
  const auto g = make(ph::GeometryKind::ribbon);
  const auto mesh = std::make_shared<const ph::Mesh>(ph::generate_mesh(g, h_from_arg(state)));
  const auto mat = ph::drude_material(1.0, 20.72)(2.0);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ph::compute_effective_tensor(g, mesh, mat, 2.0));
  }
}
BENCHMARK(BM_EffectiveTensorRibbon)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_ReducedSweepTube(benchmark::State &state)
{
  const auto g = make(ph::GeometryKind::tube);
  const auto mesh = std::make_shared<const ph::Mesh>(ph::generate_mesh(g, h_from_arg(state)));
  const auto grid = ph::linear_grid(0.5, 4.0, 100);
  const auto mat = ph::drude_material(1.0, 20.72);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ph::frequency_sweep(g, mesh, mat, grid));
  }
}
BENCHMARK(BM_ReducedSweepTube)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_MacroDipole(benchmark::State &state)
{
  ph::MacroProblem p;
  p.lx = p.ly = 4.0;
  p.nx = p.ny = static_cast<int>(state.range(0));
  p.omega = 2.0 * std::numbers::pi;
  p.pml.cells = p.nx / 8;
  ph::MacroSource s;
  s.x = s.y = 2.0;
  s.radius = 0.1;
  p.sources.push_back(s);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ph::solve_macro(p));
  }
}
BENCHMARK(BM_MacroDipole)->Arg(80)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
