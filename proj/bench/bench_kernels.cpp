#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "blackstart/kernels/kernels.hpp"
#include "blackstart/scenario/simulation.hpp"

namespace k = blackstart::kernels;
namespace sc = blackstart::scenario;

namespace {

// 50 Hz with some harmonics and noise, sampled at 20 kHz.
std::vector<double> waveform(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * 50e-6;
    const double w = 2.0 * std::numbers::pi * 50.0 * t;
    x[i] = std::sin(w) + 0.05 * std::sin(5.0 * w) + 0.03 * std::sin(7.0 * w) + noise(rng);
  }
  return x;
}

// A 25 s record at full rate; 400 samples is one cycle.
const std::vector<double>& record() {
  static const std::vector<double> x = waveform(500'000, 1);
  return x;
}

template <auto Fn>
void sliding_rms(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(record(), 400));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record().size()));
}

template <auto Fn>
void channel_stats(benchmark::State& state) {
  static const std::vector<std::vector<double>> data = [] {
    std::vector<std::vector<double>> d;
    for (unsigned c = 0; c < 96; ++c) d.push_back(waveform(25'000, c));
    return d;
  }();
  std::vector<std::span<const double>> spans(data.begin(), data.end());
  for (auto _ : state) benchmark::DoNotOptimize(Fn(spans));
}

template <auto Fn>
void harmonics(benchmark::State& state) {
  const std::span<const double> ten_cycles(record().data(), 4000);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(ten_cycles, 10, 50));
}

// Two short independent runs, the shape of the compare command.
std::vector<sc::SimulationJob> jobs() {
  sc::CaseDefinition hard = sc::build_hard_switch_case();
  hard.run.duration_s = 1.2;
  sc::CaseDefinition soft = sc::build_default_case();
  soft.run.duration_s = 1.2;
  sc::EventSchedule soft_schedule = sc::default_schedule();
  soft_schedule.events.resize(3);  // up to the first WT at 1 s
  return {{hard, sc::hard_switch_schedule()}, {soft, soft_schedule}};
}

template <auto Fn>
void simulate_pair(benchmark::State& state) {
  const auto j = jobs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(j));
}

}  // namespace

BENCHMARK(sliding_rms<k::serial::sliding_rms>)->Name("sliding_rms/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(sliding_rms<k::omp::sliding_rms>)->Name("sliding_rms/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(channel_stats<k::serial::channel_stats>)->Name("channel_stats/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(channel_stats<k::omp::channel_stats>)
    ->Name("channel_stats/omp")
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(harmonics<k::serial::harmonic_magnitudes>)->Name("harmonics/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(harmonics<k::omp::harmonic_magnitudes>)->Name("harmonics/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(simulate_pair<sc::simulate_all_serial>)->Name("simulate_pair/serial")->Unit(benchmark::kSecond)->Iterations(2);
BENCHMARK(simulate_pair<sc::simulate_all>)
    ->Name("simulate_pair/omp")
    ->Unit(benchmark::kSecond)
    ->Iterations(2)
    ->UseRealTime();

BENCHMARK_MAIN();
