#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ppgtrack/signal_model.hpp"
#include "ppgtrack/spectrum.hpp"

namespace ppgtrack {

/// Closed bin interval [lo, hi].
struct BinRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const BinRange&, const BinRange&) = default;
};

/// Search ranges around the previous estimate and its 2nd and 3rd harmonics.
using HarmonicRanges = std::array<BinRange, 3>;

/// Highest peak per harmonic range: bins[h] is the location for harmonic h + 1.
struct PeakTriple {
  std::array<int, 3> bins{};
  std::array<double, 3> magnitudes{};
};

enum class SelectionCase { kInitial, kDominantPeak, kHarmonicPair, kLongWindow };

struct Selection {
  FrequencyIndex index;
  SelectionCase which = SelectionCase::kInitial;
};

/// State carried between windows.
struct TrackerState {
  FrequencyIndex n_prev;
  std::array<std::vector<double>, 2> prev_window;  // cleansed, mean-removed
  std::size_t window_index = 0;
};

/// Bins of the configured heart-rate band on this spectrum grid.
BinRange band_bins(const SpectrumEstimate& spectrum, const TrackerConfig& cfg);

/// Global in-band maximum over both spectra. Ties prefer channel 1, then the lower bin.
/// Throws Error(kEmptySpectrum) if both spectra are zero inside the band.
FrequencyIndex initialize(const SpectrumEstimate& spec1, const SpectrumEstimate& spec2,
                          const TrackerConfig& cfg);

/// [h * n_prev - eps_h, h * n_prev + eps_h] for h = 1, 2, 3, clamped to [0, bins - 1].
HarmonicRanges harmonic_ranges(FrequencyIndex n_prev, const TrackerConfig& cfg,
                               std::size_t spectrum_bins);

/// Per range, the lowest bin attaining the maximum magnitude. A range that
/// clamps to nothing yields its lower bound with magnitude 0.
PeakTriple find_peaks(const SpectrumEstimate& spec, const HarmonicRanges& ranges);

/// Rounds half up to the nearest integer bin.
int round_bin(double fractional_bin);

/// Inputs to the long-window fallback: the cleansed windows of both channels.
struct LongWindowInput {
  std::span<const double> previous[2];
  std::span<const double> current[2];
  double sample_rate_hz = 0.0;
  std::size_t stride_samples = 0;
};

/// Three-case decision: unique dominant peak, else best harmonic pair, else
/// the twelve-fundamental average over the current and long-window spectra.
Selection select(const PeakTriple& peaks1, const PeakTriple& peaks2, FrequencyIndex n_prev,
                 const LongWindowInput& long_window, const TrackerConfig& cfg);

/// Long-window spectra used by the fallback case (exposed for testing).
std::array<SpectrumEstimate, 2> long_window_spectra(const LongWindowInput& input,
                                                    const TrackerConfig& cfg);

struct WindowTrace {
  std::size_t index = 0;
  double bpm = 0.0;
  FrequencyIndex bin;
  SelectionCase which = SelectionCase::kInitial;
  std::size_t reference_count = 0;
  double seconds = 0.0;  // wall clock of the whole per-window pipeline
};

struct TrackResult {
  std::vector<double> bpm;
  std::vector<double> window_seconds;
  std::vector<WindowTrace> windows;
};

/// Called once per window with both channels' final spectra.
using SpectrumObserver =
    std::function<void(std::size_t window, const SpectrumEstimate&, const SpectrumEstimate&)>;

/// Stateful per-window pipeline: band-pass, reference extraction, cascaded
/// cancellation, sparse spectra and peak selection. Windows must be fed in order.
class HeartRateTracker {
 public:
  HeartRateTracker(TrackerConfig cfg, double sample_rate_hz);

  WindowTrace process(const AnalysisWindow& window);

  const std::optional<TrackerState>& state() const noexcept { return state_; }
  void set_spectrum_observer(SpectrumObserver observer) { observer_ = std::move(observer); }

 private:
  TrackerConfig cfg_;
  double sample_rate_hz_;
  std::optional<TrackerState> state_;
  SpectrumObserver observer_;
};

/// Runs the tracker over every window of a session, timing each window.
TrackResult track_session(const RecordingSession& session, const TrackerConfig& cfg,
                          const SpectrumObserver& observer = {});

}  // namespace ppgtrack
