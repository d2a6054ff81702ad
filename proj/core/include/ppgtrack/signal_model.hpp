#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppgtrack {

/// A uniformly sampled real signal. Construction validates that the samples
/// are non-empty and finite and that the rate is positive.
class SampledSignal {
 public:
  SampledSignal(std::vector<double> samples, double sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  /// Copy of samples [begin, begin + count); no resampling.
  SampledSignal slice(std::size_t begin, std::size_t count) const;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
};

/// Synchronised two-channel PPG plus three-axis acceleration recording.
struct RecordingSession {
  std::string session_id;
  SampledSignal ppg1;
  SampledSignal ppg2;
  SampledSignal accel_x;
  SampledSignal accel_y;
  SampledSignal accel_z;
  std::optional<std::vector<double>> truth_bpm;

  double sample_rate_hz() const noexcept { return ppg1.sample_rate_hz(); }
  std::size_t size() const noexcept { return ppg1.size(); }

  /// Throws Error(kInvalidSignal) if the channels disagree on rate or length.
  void validate() const;
};

/// How the Case-3 long window is assembled from the previous and current
/// cleansed windows.
enum class LongWindowMode {
  kPreviousPlusNewTail,  // previous window + the stride's worth of new samples (10 s at defaults)
  kPreviousPlusCurrent,  // literal concatenation of both windows (16 s at defaults)
};

/// All tunable pipeline constants. Defaults reproduce the published setting.
struct TrackerConfig {
  double window_len_s = 8.0;
  double stride_s = 2.0;
  double band_low_hz = 0.4;
  double band_high_hz = 5.0;
  int bandpass_order = 4;  // Butterworth prototype order, applied forward-backward

  int ssa_d = 100;
  int ssa_embed_len = 0;  // 0 selects round(window_samples / 2)
  int n_refs = 100;

  int lms_order = 25;
  double lms_mu = 0.005;
  // References of a window share one gain that brings the pooled RMS of the
  // band-limited acceleration to this value.
  double lms_ref_rms = 0.45;

  int imat_iters = 5;
  double imat_alpha = 0.1;
  int grid_size = 16384;

  double dominance_threshold = 0.6;  // T
  double delta_bins = 9.0;
  double eps1_bins = 60.0;
  double eps2_bins = 80.0;
  double eps3_bins = 100.0;
  LongWindowMode long_window = LongWindowMode::kPreviousPlusNewTail;

  bool ev_sample_variance = false;

  std::size_t window_samples(double sample_rate_hz) const;
  std::size_t stride_samples(double sample_rate_hz) const;
  std::size_t embed_len(std::size_t window_samples) const;

  /// Throws Error(kInvalidConfig) when a field is out of range for this rate.
  void validate(double sample_rate_hz) const;
};

struct AnalysisWindow {
  std::size_t index = 0;
  std::size_t start_sample = 0;
  SampledSignal ppg1;
  SampledSignal ppg2;
  SampledSignal accel_x;
  SampledSignal accel_y;
  SampledSignal accel_z;
};

/// floor((n - win) / stride) + 1, or 0 when n < win.
std::size_t window_count(std::size_t n, std::size_t win, std::size_t stride);

/// Causal tiling: window i covers [i * stride, i * stride + win).
std::vector<AnalysisWindow> make_windows(const RecordingSession& session,
                                         const TrackerConfig& cfg);

}  // namespace ppgtrack
