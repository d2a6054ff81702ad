#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ppgtrack/preprocess.hpp"
#include "ppgtrack/signal_model.hpp"
#include "ppgtrack/spectrum.hpp"
#include "ppgtrack/ssa.hpp"
#include "ppgtrack/synth.hpp"
#include "ppgtrack/tracker.hpp"

using namespace ppgtrack;

namespace {

constexpr double kFs = 125.0;

RecordingSession bench_session(std::size_t windows) {
  MaTone cadence;
  cadence.freq_hz = 2.9;
  cadence.ppg = {TonePart{3.0, 0.1}, TonePart{2.4, 0.5}};
  cadence.accel = {TonePart{1.0, 0.1}, TonePart{0.8, 0.4}, TonePart{0.6, 0.7}};
  SynthOptions o;
  o.snr_db = 20.0;
  o.accel_noise_rms = 0.1;
  const std::vector<MaTone> ma{cadence};
  return synth_session(linear_profile(90.0, 130.0, windows), ma, o);
}

void BM_Bandpass(benchmark::State& state) {
  const RecordingSession s = bench_session(1);
  for (auto _ : state) benchmark::DoNotOptimize(bandpass(s.ppg1, 0.4, 5.0));
}
BENCHMARK(BM_Bandpass)->Unit(benchmark::kMicrosecond);

void BM_ImatSpectrum(benchmark::State& state) {
  const RecordingSession s = bench_session(1);
  const ImatOptions opt{static_cast<int>(state.range(0)), 5, 0.1, true};
  for (auto _ : state) benchmark::DoNotOptimize(imat_spectrum(s.ppg1.samples(), kFs, opt));
}
BENCHMARK(BM_ImatSpectrum)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_ExtractReferences(benchmark::State& state) {
  const RecordingSession s = bench_session(1);
  TrackerConfig cfg;
  cfg.n_refs = static_cast<int>(state.range(0));
  const SampledSignal x = bandpass(s.accel_x, cfg.band_low_hz, cfg.band_high_hz);
  const SampledSignal y = bandpass(s.accel_y, cfg.band_low_hz, cfg.band_high_hz);
  const SampledSignal z = bandpass(s.accel_z, cfg.band_low_hz, cfg.band_high_hz);
  for (auto _ : state) benchmark::DoNotOptimize(extract_references(x, y, z, cfg));
}
BENCHMARK(BM_ExtractReferences)->Arg(3)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_WindowPipeline(benchmark::State& state) {
  const RecordingSession s = bench_session(8);
  TrackerConfig cfg;
  cfg.n_refs = static_cast<int>(state.range(0));
  const auto windows = make_windows(s, cfg);
  for (auto _ : state) {
    HeartRateTracker tracker(cfg, kFs);
    for (const auto& w : windows) benchmark::DoNotOptimize(tracker.process(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.size()));
}
BENCHMARK(BM_WindowPipeline)->Arg(3)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
