#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ppgtrack {

/// Real-to-complex transform of fixed length n backed by FFTW plans.
/// forward() yields the n/2 + 1 non-negative frequency bins (unnormalised);
/// inverse() is the exact inverse (includes the 1/n factor).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  /// Input shorter than n is zero-padded at the tail.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Per-thread cache of transforms keyed by length.
RealFft& cached_fft(std::size_t n);

/// |X_k| of the zero-padded length-nfft transform, k = 0 .. nfft/2.
std::vector<double> magnitude_spectrum(std::span<const double> x, std::size_t nfft);

}  // namespace ppgtrack
