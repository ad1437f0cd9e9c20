#include <benchmark/benchmark.h>

#include <memory>

#include "oceansrc/forward.hpp"
#include "oceansrc/green.hpp"
#include "oceansrc/locator.hpp"
#include "oceansrc/scenario.hpp"

using namespace oceansrc;

namespace {

std::shared_ptr<const ModalBasis> desk_basis() {
  static const auto b =
      std::make_shared<const ModalBasis>(find_modes(WaveguideConfig{}, 1.0 / 6.0, 1e-6));
  return b;
}

void find_modes_desk(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_modes(WaveguideConfig{}, 1.0 / 6.0, 1e-6));
}
BENCHMARK(find_modes_desk)->Unit(benchmark::kMillisecond);

// Green's function at a near distance (many evanescent terms) and a far one.
void green_evaluate(benchmark::State& state) {
  const GreenFunction g(desk_basis());
  const double r = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(r, 25.0, 43.0));
  state.counters["active_modes"] = static_cast<double>(g.active_modes(r));
}
BENCHMARK(green_evaluate)->Arg(2)->Arg(10)->Arg(100)->Arg(500);

void kernel_assembly(benchmark::State& state) {
  const Scenario s = make_preset("example3");
  const auto g = std::make_shared<const GreenFunction>(desk_basis());
  const VolumeMesh mesh = make_volume_mesh(s.waveguide, s.inclusion, s.cell);
  for (auto _ : state) benchmark::DoNotOptimize(InteractionKernel(g, mesh));
}
BENCHMARK(kernel_assembly)->Unit(benchmark::kMillisecond);

// One indicator evaluation: forward solve for a trial source plus synthesis.
void indicator_evaluation(benchmark::State& state) {
  const Scenario s = make_preset("example3");
  const auto g = std::make_shared<const GreenFunction>(desk_basis());
  const auto k = std::make_shared<const InteractionKernel>(
      g, make_volume_mesh(s.waveguide, s.inclusion, s.cell));
  const auto synth = std::make_shared<const ScatterSynthesizer>(k, s.receivers, s.iteration);
  const WaveguideForwardModel model(synth);
  ScatterRecord data;
  data.receivers = s.receivers.positions;
  data.values = synth->synthesize(s.source);
  for (auto _ : state) benchmark::DoNotOptimize(indicator_raw(Point3{20, 22, 30}, data, model));
}
BENCHMARK(indicator_evaluation)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
