#pragma once

#include <cstddef>
#include <span>

namespace ppgtrack {

struct MetricsReport {
  double aae_bpm = 0.0;
  double aep_percent = 0.0;
  double ev = 0.0;  // BPM^2
  double pc = 0.0;
  double astpf_s = 0.0;
  std::size_t window_count = 0;
};

/// AAE, AEP, error variance, Pearson correlation and mean per-window time.
/// EV divides by W unless sample_variance is set (W - 1).
/// Throws Error(kLengthMismatch) for unequal or too short inputs and
/// Error(kDegenerateTruth) for non-positive truth, or constant truth unless
/// the estimate equals it exactly (PC is then reported as 1).
/// An empty time sequence gives astpf 0.
MetricsReport compute_metrics(std::span<const double> est, std::span<const double> truth,
                              std::span<const double> per_window_times,
                              bool sample_variance = false);

}  // namespace ppgtrack
