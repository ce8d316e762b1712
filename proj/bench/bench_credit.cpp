// Serial vs OpenMP pair-scan kernels on a synthetic transfer-heavy log.
#include <benchmark/benchmark.h>

#include "reciprosim/detectors.hpp"
#include "reciprosim/engine.hpp"
#include "reciprosim/rng.hpp"

namespace {

using namespace reciprosim;

// Dense uniform-random GIVE traffic: every pair carries balance history, which
// is the worst case for the scan.
EventLog synthetic_log(std::uint32_t agents, Tick ticks, std::uint32_t gives_per_tick) {
  EventLog log(LogHeader{1, 0xbe9cbe9cu, 0});
  SplitMix64 rng(0xfeedface);
  std::uint64_t seq_base = 0;
  for (Tick t = 0; t < ticks; ++t) {
    for (std::uint32_t g = 0; g < gives_per_tick; ++g) {
      AgentId a = static_cast<AgentId>(rng.next_u64() % agents);
      AgentId b = static_cast<AgentId>(rng.next_u64() % agents);
      if (a == b) b = (b + 1) % agents;
      InteractionEvent e;
      e.tick = t;
      e.seq = g;
      e.kind = EventKind::Give;
      e.actor = a;
      e.target = b;
      e.amount = 1 + static_cast<Amount>(rng.next_u64() % 5);
      log.append(e);
    }
    seq_base += gives_per_tick;
  }
  (void)seq_base;
  return log;
}

const EventLog& shared_log() {
  static EventLog log = synthetic_log(64, 4000, 32);
  return log;
}

void bench_scan(benchmark::State& state, ScanMode mode) {
  const EventLog& log = shared_log();
  CreditParams params;
  params.delta = 4;
  params.epsilon = 3;
  params.window = 50;
  params.min_duration = 2;
  for (auto _ : state) {
    CreditReport report = detect_credit(log, params, mode);
    benchmark::DoNotOptimize(report);
  }
}

void BM_credit_serial(benchmark::State& state) { bench_scan(state, ScanMode::Serial); }
void BM_credit_parallel(benchmark::State& state) { bench_scan(state, ScanMode::Parallel); }

BENCHMARK(BM_credit_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_credit_parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
