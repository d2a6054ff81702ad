#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ppgtrack/signal_model.hpp"

namespace ppgtrack {

/// One second-order section, a0 normalised to 1.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

/// Digital Butterworth band-pass (bilinear transform with pre-warping),
/// realised as a cascade of biquads. Applied forward and backward the
/// response is zero-phase with squared magnitude.
class BandpassFilter {
 public:
  /// Throws Error(kInvalidBand) unless 0 < low < high < fs / 2.
  BandpassFilter(double low_hz, double high_hz, double sample_rate_hz, int order = 4);

  const std::vector<Biquad>& sections() const noexcept { return sections_; }

  /// Single-pass (causal) complex response at frequency f.
  std::complex<double> response(double freq_hz) const;

  /// Zero-phase filtering with odd-symmetric edge extension.
  std::vector<double> filtfilt(std::span<const double> x) const;

 private:
  std::vector<Biquad> sections_;
  double sample_rate_hz_;
  double low_hz_;
};

/// Zero-phase band-pass of a whole signal; output has the input's length and rate.
SampledSignal bandpass(const SampledSignal& signal, double low_hz, double high_hz,
                       int order = 4);

}  // namespace ppgtrack
