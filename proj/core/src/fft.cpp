#include "ppgtrack/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ppgtrack {

namespace {
// FFTW's planner is not re-entrant; execution with distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t n) {
    const int len = static_cast<int>(n);
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    if (real == nullptr || spec == nullptr) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(len, real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(len, spec, real, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd != nullptr) fftw_destroy_plan(fwd);
    if (inv != nullptr) fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("RealFft length must be at least 2");
  impl_ = std::make_unique<Impl>(n);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() > n_ || out.size() < bins()) {
    throw std::invalid_argument("RealFft::forward size mismatch");
  }
  std::copy(in.begin(), in.end(), impl_->real);
  std::fill(impl_->real + in.size(), impl_->real + n_, 0.0);
  fftw_execute(impl_->fwd);
  for (std::size_t k = 0; k < bins(); ++k) {
    out[k] = {impl_->spec[k][0], impl_->spec[k][1]};
  }
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() < bins() || out.size() < n_) {
    throw std::invalid_argument("RealFft::inverse size mismatch");
  }
  for (std::size_t k = 0; k < bins(); ++k) {
    impl_->spec[k][0] = in[k].real();
    impl_->spec[k][1] = in[k].imag();
  }
  // c2r destroys its input array, which is our private buffer.
  fftw_execute(impl_->inv);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = impl_->real[i] * scale;
}

RealFft& cached_fft(std::size_t n) {
  thread_local std::map<std::size_t, RealFft> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, RealFft(n)).first;
  return it->second;
}

std::vector<double> magnitude_spectrum(std::span<const double> x, std::size_t nfft) {
  RealFft& fft = cached_fft(nfft);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.forward(x, spec);
  std::vector<double> mag(spec.size());
  std::transform(spec.begin(), spec.end(), mag.begin(),
                 [](const std::complex<double>& c) { return std::abs(c); });
  return mag;
}

}  // namespace ppgtrack
