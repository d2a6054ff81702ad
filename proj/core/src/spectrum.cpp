#include "ppgtrack/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ppgtrack/error.hpp"
#include "ppgtrack/fft.hpp"

namespace ppgtrack {

namespace {
constexpr std::string_view kModule = "spectrum";
}

SpectrumEstimate::SpectrumEstimate(std::vector<double> magnitudes, std::size_t grid_size,
                                   double sample_rate_hz)
    : magnitudes_(std::move(magnitudes)), grid_size_(grid_size), sample_rate_hz_(sample_rate_hz) {
  if (magnitudes_.size() != grid_size_ / 2) {
    throw Error(ErrorKind::kInvalidSignal, kModule, "spectrum must hold grid_size / 2 bins");
  }
}

FrequencyIndex SpectrumEstimate::index_of(double freq_hz) const {
  const auto bin = static_cast<long>(std::lround(freq_hz / bin_hz()));
  return {static_cast<int>(std::clamp<long>(bin, 0, static_cast<long>(size()) - 1))};
}

std::vector<double> imat_thresholds(double beta, double alpha, int iterations) {
  std::vector<double> tau(static_cast<std::size_t>(std::max(iterations, 0)));
  for (std::size_t k = 0; k < tau.size(); ++k) {
    tau[k] = beta * std::exp(-alpha * static_cast<double>(k));
  }
  return tau;
}

SpectrumEstimate imat_spectrum(std::span<const double> samples, double sample_rate_hz,
                               const ImatOptions& options) {
  const auto grid = static_cast<std::size_t>(options.grid_size);
  if (samples.size() > grid) {
    throw Error(ErrorKind::kGridTooSmall, kModule,
                std::to_string(samples.size()) + " samples do not fit a grid of " +
                    std::to_string(grid));
  }
  RealFft& fft = cached_fft(grid);
  std::vector<std::complex<double>> coeffs(fft.bins());
  std::vector<double> estimate(grid, 0.0);

  fft.forward(samples, coeffs);
  double beta = 0.0;
  for (const auto& c : coeffs) beta = std::max(beta, std::abs(c));
  const std::vector<double> tau = imat_thresholds(beta, options.alpha, options.iterations);

  for (int k = 0; k < options.iterations; ++k) {
    std::copy(samples.begin(), samples.end(), estimate.begin());
    fft.forward(estimate, coeffs);
    if (options.threshold) {
      const double t = tau[static_cast<std::size_t>(k)];
      for (auto& c : coeffs) {
        if (std::abs(c) < t) c = 0.0;
      }
    }
    fft.inverse(coeffs, estimate);
  }
  std::copy(samples.begin(), samples.end(), estimate.begin());
  fft.forward(estimate, coeffs);

  std::vector<double> mag(grid / 2);
  for (std::size_t b = 0; b < mag.size(); ++b) mag[b] = std::abs(coeffs[b]);
  return SpectrumEstimate(std::move(mag), grid, sample_rate_hz);
}

SpectrumEstimate imat_spectrum(const SampledSignal& signal, const TrackerConfig& cfg) {
  return imat_spectrum(signal.samples(), signal.sample_rate_hz(),
                       ImatOptions{cfg.grid_size, cfg.imat_iters, cfg.imat_alpha, true});
}

double bpm_of(FrequencyIndex index, const SpectrumEstimate& spectrum) {
  return static_cast<double>(index.bin) * spectrum.bin_hz() * 60.0;
}

}  // namespace ppgtrack
