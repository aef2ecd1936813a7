#include <benchmark/benchmark.h>

#include "sld/channel.hpp"
#include "sld/codebook.hpp"
#include "sld/gamma.hpp"
#include "sld/montecarlo.hpp"
#include "sld/rate_design.hpp"
#include "sld/throughput.hpp"

namespace {

sld::SystemParams base() {
  sld::SystemParams p;
  p.antennas = 4;
  p.cdi_bits = 10;
  p.power = 10.0;
  p.connection_outage = 0.05;
  p.secrecy_outage = 0.02;
  p.cgi_bits = 5;
  return p;
}

void BM_DesignClosedForm(benchmark::State& state) {
  const auto p = base();
  double g = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sld::design_closed_form(p, g));
    g = g < 30.0 ? g * 1.01 : 3.0;
  }
}
BENCHMARK(BM_DesignClosedForm);

void BM_DesignNumeric(benchmark::State& state) {
  const auto p = base();
  for (auto _ : state) benchmark::DoNotOptimize(sld::design_numeric(p, 4.0));
}
BENCHMARK(BM_DesignNumeric);

void BM_ThroughputExact(benchmark::State& state) {
  const auto p = base();
  for (auto _ : state) benchmark::DoNotOptimize(sld::throughput_exact_cgi(p));
}
BENCHMARK(BM_ThroughputExact);

void BM_ThroughputEqualized(benchmark::State& state) {
  auto p = base();
  p.cgi_bits = static_cast<int>(state.range(0));
  const auto q = sld::build_equalized_quantizer(p);
  for (auto _ : state) benchmark::DoNotOptimize(sld::throughput_quantized_cgi(p, q));
}
BENCHMARK(BM_ThroughputEqualized)->Arg(4)->Arg(8)->Arg(12)->Arg(20);

void BM_BitAllocationSweep(benchmark::State& state) {
  auto p = base();
  p.truncation_mass = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(sld::sweep_bit_allocation(p, 40));
}
BENCHMARK(BM_BitAllocationSweep)->Unit(benchmark::kMillisecond);

void BM_GammaUpperInverse(benchmark::State& state) {
  double y = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sld::gamma_reg_upper_inv(4, y));
    y = y < 0.9 ? y * 1.1 : 1e-6;
  }
}
BENCHMARK(BM_GammaUpperInverse);

void BM_QuantizeDirection(benchmark::State& state) {
  auto rng = sld::derive_stream(1, 0);
  const auto cb = sld::generate_rvq(4, static_cast<int>(state.range(0)), rng);
  const auto d = sld::sample_direction(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sld::quantize_direction(d, cb));
}
BENCHMARK(BM_QuantizeDirection)->Arg(6)->Arg(10);

void BM_EmpiricalPco(benchmark::State& state) {
  sld::SimConfig cfg;
  cfg.params = base();
  cfg.draws = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sld::empirical_pco(cfg, 2.5, 0.7, 3.0));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_EmpiricalPco)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
