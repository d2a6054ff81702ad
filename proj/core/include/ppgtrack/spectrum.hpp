#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ppgtrack/signal_model.hpp"

namespace ppgtrack {

/// Index into a one-sided spectrum grid.
struct FrequencyIndex {
  int bin = 0;
  friend bool operator==(FrequencyIndex, FrequencyIndex) = default;
};

/// One-sided magnitude spectrum on a grid of grid_size points:
/// magnitudes[k] for k in [0, grid_size / 2), bin k at k * sample_rate / grid_size Hz.
class SpectrumEstimate {
 public:
  SpectrumEstimate(std::vector<double> magnitudes, std::size_t grid_size, double sample_rate_hz);

  std::span<const double> magnitudes() const noexcept { return magnitudes_; }
  double operator[](std::size_t bin) const { return magnitudes_[bin]; }
  std::size_t size() const noexcept { return magnitudes_.size(); }
  std::size_t grid_size() const noexcept { return grid_size_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double bin_hz() const noexcept { return sample_rate_hz_ / static_cast<double>(grid_size_); }

  /// Bin nearest to a frequency, clamped into the grid.
  FrequencyIndex index_of(double freq_hz) const;

 private:
  std::vector<double> magnitudes_;
  std::size_t grid_size_;
  double sample_rate_hz_;
};

struct ImatOptions {
  int grid_size = 16384;
  int iterations = 5;
  double alpha = 0.1;
  bool threshold = true;  // false keeps every coefficient (tau = 0)
};

/// Sparse spectrum of M observed samples placed at the head of a grid_size
/// frame. Each iteration re-imposes the observed samples on the current
/// estimate, transforms, hard-thresholds at beta * exp(-alpha * k) with beta
/// the peak of the zero-padded transform, and inverse-transforms. The result
/// is the magnitude spectrum of the final re-imposed estimate.
/// Throws Error(kGridTooSmall) if M > grid_size.
SpectrumEstimate imat_spectrum(std::span<const double> samples, double sample_rate_hz,
                               const ImatOptions& options);

SpectrumEstimate imat_spectrum(const SampledSignal& signal, const TrackerConfig& cfg);

/// The threshold schedule beta * exp(-alpha * k), k = 0 .. iterations - 1.
std::vector<double> imat_thresholds(double beta, double alpha, int iterations);

double bpm_of(FrequencyIndex index, const SpectrumEstimate& spectrum);

}  // namespace ppgtrack
