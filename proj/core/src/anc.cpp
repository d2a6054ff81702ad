#include "ppgtrack/anc.hpp"

#include <algorithm>
#include <cmath>

#include "ppgtrack/error.hpp"

namespace ppgtrack {

namespace {
constexpr std::string_view kModule = "anc";
}

LmsStage::LmsStage(int order, double mu)
    : weights_(static_cast<std::size_t>(std::max(order, 1)), 0.0),
      taps_(weights_.size(), 0.0),
      mu_(mu) {
  if (order < 1 || !(mu > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, kModule, "LMS needs order >= 1 and mu > 0");
  }
}

double LmsStage::step(double primary, double reference) {
  const std::size_t n = taps_.size();
  head_ = (head_ + n - 1) % n;
  taps_[head_] = reference;

  double estimate = 0.0;
  for (std::size_t j = 0; j < n; ++j) estimate += weights_[j] * taps_[(head_ + j) % n];
  const double error = primary - estimate;

  const double g = mu_ * error;
  for (std::size_t j = 0; j < n; ++j) {
    double& w = weights_[j];
    w += g * taps_[(head_ + j) % n];
    if (!std::isfinite(w) || std::abs(w) > kWeightBound) diverged_ = true;
  }
  return error;
}

SampledSignal lms_cancel(const SampledSignal& primary, const SampledSignal& reference, int order,
                         double mu) {
  if (primary.size() != reference.size()) {
    throw Error(ErrorKind::kLengthMismatch, kModule, "primary and reference lengths differ");
  }
  LmsStage stage(order, mu);
  std::vector<double> out(primary.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = stage.step(primary[i], reference[i]);
    if (stage.diverged()) {
      throw Error(ErrorKind::kFilterDiverged, kModule,
                  "weights left the stable range at sample " + std::to_string(i));
    }
  }
  return SampledSignal(std::move(out), primary.sample_rate_hz());
}

double reference_gain(std::span<const SampledSignal* const> accel, double target_rms) {
  double power = 0.0;
  std::size_t count = 0;
  for (const SampledSignal* s : accel) {
    for (double v : s->samples()) power += v * v;
    count += s->size();
  }
  if (count == 0 || !(power > 0.0)) return 0.0;
  return target_rms / std::sqrt(power / static_cast<double>(count));
}

SampledSignal cascade(const SampledSignal& ppg, std::span<const ComponentGroup> references,
                      const TrackerConfig& cfg, double gain) {
  SampledSignal residual = ppg;
  for (const ComponentGroup& ref : references) {
    std::vector<double> scaled(ref.series.values());
    for (double& v : scaled) v *= gain;
    try {
      residual = lms_cancel(residual, SampledSignal(std::move(scaled), ppg.sample_rate_hz()),
                            cfg.lms_order, cfg.lms_mu);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kFilterDiverged) throw;
    }
  }
  return residual;
}

}  // namespace ppgtrack
