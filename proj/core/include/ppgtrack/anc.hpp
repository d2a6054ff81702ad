#pragma once

#include <span>
#include <vector>

#include "ppgtrack/signal_model.hpp"
#include "ppgtrack/ssa.hpp"

namespace ppgtrack {

/// Plain LMS transversal filter. Weights start at zero; the tap line is
/// zero-filled before the first sample.
class LmsStage {
 public:
  static constexpr double kWeightBound = 1e6;

  LmsStage(int order, double mu);

  /// Filters one sample pair and adapts; returns the error primary - w^T r.
  double step(double primary, double reference);

  std::span<const double> weights() const noexcept { return weights_; }
  int order() const noexcept { return static_cast<int>(weights_.size()); }
  bool diverged() const noexcept { return diverged_; }

 private:
  std::vector<double> weights_;
  std::vector<double> taps_;  // circular history, newest at head_
  std::size_t head_ = 0;
  double mu_;
  bool diverged_ = false;
};

/// Residual e[n] = primary[n] - w^T [r[n], ..., r[n - order + 1]] with
/// per-sample update w += mu * e[n] * r-window.
/// Throws Error(kFilterDiverged) if any weight leaves [-1e6, 1e6] or turns non-finite.
SampledSignal lms_cancel(const SampledSignal& primary, const SampledSignal& reference, int order,
                         double mu);

/// Common gain applied to every reference of a window: target_rms divided by
/// the pooled RMS of the (band-limited) acceleration channels. Relative
/// amplitudes between references are preserved, so weak noise components
/// adapt slowly and cut narrow notches. Returns 0 for silent acceleration.
double reference_gain(std::span<const SampledSignal* const> accel, double target_rms);

/// Successive cancellation: residual_0 = ppg, residual_i =
/// lms_cancel(residual_{i-1}, gain * ref_i). Diverged stages are bypassed.
SampledSignal cascade(const SampledSignal& ppg, std::span<const ComponentGroup> references,
                      const TrackerConfig& cfg, double gain = 1.0);

}  // namespace ppgtrack
