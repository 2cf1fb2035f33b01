// Serial reference vs OpenMP kernels. Set QHGEO_THREADS to pick the worker count.

#include <benchmark/benchmark.h>

#include "qhgeo/classify.hpp"
#include "qhgeo/geodesics.hpp"
#include "qhgeo/metrics.hpp"
#include "qhgeo/parallel.hpp"

using namespace qhgeo;

namespace {

const DomainSpec& punctured_disk() {
  static const DomainSpec d =
      with_punctures(DomainSpec::ball(Point{0, 0}, 1.0), PunctureSet({Point{0, 0}, Point{0.6, 0}}));
  return d;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "parallel x" + std::to_string(worker_count()) : "serial");
}

void BM_SearchGraphBuild(benchmark::State& state) {
  SearchGraphOptions opts;
  opts.exec = exec_of(state);
  const double res = 1.0 / static_cast<double>(state.range(1));
  std::size_t edges = 0;
  for (auto _ : state) {
    const auto g = build_search_graph(punctured_disk(), res, 0.0, opts);
    edges = g.edge_count();
    benchmark::DoNotOptimize(edges);
  }
  state.counters["edges"] = static_cast<double>(edges);
  label(state);
}
BENCHMARK(BM_SearchGraphBuild)->ArgsProduct({{0, 1}, {10, 20}})->Unit(benchmark::kMillisecond);

// k brackets over a batch of pairs, the shape of every sweep in the toolkit.
void BM_PairSweep(benchmark::State& state) {
  const auto& d = punctured_disk();
  const std::size_t n = static_cast<std::size_t>(state.range(1));
  const auto xs = sample_interior(d, n, 1, 1e-2), ys = sample_interior(d, n, 2, 1e-2);
  const KOptions k{.max_rounds = 1, .use_graph = false, .use_cell_bound = false, .descent_rounds = 2,
                   .exec = Exec::serial};
  for (auto _ : state) {
    const auto mids = parallel_map<double>(n, [&](std::size_t i) { return k_distance(d, xs[i], ys[i], 0.01, k).midpoint(); },
                                           exec_of(state));
    benchmark::DoNotOptimize(mids.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
  label(state);
}
BENCHMARK(BM_PairSweep)->ArgsProduct({{0, 1}, {64}})->Unit(benchmark::kMillisecond);

void BM_JohnEstimate(benchmark::State& state) {
  JohnOptions opts;
  opts.exec = exec_of(state);
  opts.use_neargeodesic = false;
  for (auto _ : state) {
    const auto r = john_estimate(DomainSpec::ball(Point{0, 0}, 1.0), 32, 7, opts);
    benchmark::DoNotOptimize(r.estimate);
  }
  label(state);
}
BENCHMARK(BM_JohnEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
