// Hot-path benchmarks: surface projection, curvature assembly, line tracing,
// and chart meshing at the default radius.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "curvatura/curvature.hpp"
#include "curvatura/fields.hpp"
#include "curvatura/stereo.hpp"
#include "curvatura/tracer.hpp"
#include "curvatura/umbilic.hpp"

namespace {

using namespace curvatura;

constexpr double kR = 0.31622776601683794;  // 1/sqrt(10)

const LinkSurface& surface() {
  static const LinkSurface s = make_double_torus(2, 3, kR);
  return s;
}

std::vector<Vec4> off_surface_points(int n) {
  std::vector<Vec4> pts;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> jitter(-1e-3 * kR, 1e-3 * kR);
  for (const SurfacePoint& sp : seeds_on_e2(surface(), n)) {
    Vec4 x = sp.position;
    for (int i = 0; i < 4; ++i) x[i] += jitter(rng);
    pts.push_back(x);
  }
  return pts;
}

void BM_ProjectToSurface(benchmark::State& state) {
  const LinkSurface& s = surface();
  const std::vector<Vec4> pts = off_surface_points(64);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_surface(s, pts[i++ % pts.size()]));
  }
}
BENCHMARK(BM_ProjectToSurface);

void BM_OmegaAssembly(benchmark::State& state) {
  const LinkSurface& s = surface();
  const std::vector<SurfacePoint> seeds = seeds_on_e2(s, 64);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega_at(s, seeds[i++ % seeds.size()].position));
  }
}
BENCHMARK(BM_OmegaAssembly);

void BM_PrincipalCurvatures(benchmark::State& state) {
  const LinkSurface& s = surface();
  const std::vector<SurfacePoint> seeds = seeds_on_e2(s, 64);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(principal_curvatures(s, seeds[i++ % seeds.size()]));
  }
}
BENCHMARK(BM_PrincipalCurvatures);

void BM_TraceClosedLine(benchmark::State& state) {
  const LinkSurface& s = surface();
  const SurfacePoint seed = seeds_on_e2(s, 20)[9];
  for (auto _ : state) {
    const Trace t = trace_curvature_line(s, seed, Foliation::Max);
    benchmark::DoNotOptimize(t.arc_length);
  }
  state.counters["vertices"] =
      static_cast<double>(trace_curvature_line(s, seed, Foliation::Max).vertices.size());
}
BENCHMARK(BM_TraceClosedLine)->Unit(benchmark::kMillisecond);

void BM_UmbilicCensus(benchmark::State& state) {
  const LinkSurface& s = surface();
  UmbilicSearchOptions opts;
  opts.run_sweep = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_umbilics(s, opts));
  }
}
BENCHMARK(BM_UmbilicCensus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MeshDoubleTorus(benchmark::State& state) {
  const LinkSurface& s = surface();
  const StereoMap st = StereoMap::make(s, StereoMap::default_pole(kR));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const SurfaceMesh m = mesh_double_torus(s, st, n);
    benchmark::DoNotOptimize(m.vertices3.data());
  }
  state.counters["faces"] =
      static_cast<double>(mesh_double_torus(s, st, n).faces.size());
}
BENCHMARK(BM_MeshDoubleTorus)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_StereoRoundTrip(benchmark::State& state) {
  const LinkSurface& s = surface();
  const StereoMap st = StereoMap::make(s, StereoMap::default_pole(kR));
  const std::vector<SurfacePoint> seeds = seeds_on_e2(s, 64);
  size_t i = 0;
  for (auto _ : state) {
    const Vec4& x = seeds[i++ % seeds.size()].position;
    benchmark::DoNotOptimize(st.unproject(st.project(x)));
  }
}
BENCHMARK(BM_StereoRoundTrip);

}  // namespace

BENCHMARK_MAIN();
