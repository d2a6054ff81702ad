#include "ppgtrack/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ppgtrack/error.hpp"

namespace ppgtrack {

namespace {

using cplx = std::complex<double>;

void run_sections(const std::vector<Biquad>& sections, std::vector<double>& x) {
  for (const Biquad& s : sections) {
    double z1 = 0.0;
    double z2 = 0.0;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace

BandpassFilter::BandpassFilter(double low_hz, double high_hz, double sample_rate_hz, int order)
    : sample_rate_hz_(sample_rate_hz), low_hz_(low_hz) {
  if (!(sample_rate_hz > 0.0 && low_hz > 0.0 && low_hz < high_hz &&
        high_hz < sample_rate_hz / 2.0)) {
    throw Error(ErrorKind::kInvalidBand, "preprocess",
                "band [" + std::to_string(low_hz) + ", " + std::to_string(high_hz) +
                    "] Hz is not inside (0, fs/2)");
  }
  if (order < 1) throw Error(ErrorKind::kInvalidBand, "preprocess", "order must be positive");

  const double pi = std::numbers::pi;
  const double fs2 = 2.0 * sample_rate_hz;
  const double wl = fs2 * std::tan(pi * low_hz / sample_rate_hz);
  const double wh = fs2 * std::tan(pi * high_hz / sample_rate_hz);
  const double w0sq = wl * wh;
  const double bw = wh - wl;

  // Low-pass prototype poles mapped to band-pass, then through the bilinear transform.
  std::vector<cplx> upper;
  std::vector<double> real;
  for (int k = 0; k < order; ++k) {
    const cplx p = std::polar(1.0, pi * (2.0 * k + order + 1) / (2.0 * order));
    const cplx disc = std::sqrt(p * p * bw * bw - 4.0 * w0sq);
    for (const cplx s : {(p * bw + disc) / 2.0, (p * bw - disc) / 2.0}) {
      const cplx z = (fs2 + s) / (fs2 - s);
      if (std::abs(z.imag()) < 1e-12) {
        real.push_back(z.real());
      } else if (z.imag() > 0.0) {
        upper.push_back(z);
      }
    }
  }
  std::sort(real.begin(), real.end());
  for (const cplx& z : upper) {
    sections_.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  }
  for (std::size_t i = 0; i + 1 < real.size(); i += 2) {
    sections_.push_back({1.0, 0.0, -1.0, -(real[i] + real[i + 1]), real[i] * real[i + 1]});
  }

  // Unit gain at the (warped) geometric centre of the band.
  const double centre_hz = sample_rate_hz / pi * std::atan(std::sqrt(w0sq) / fs2);
  const double gain = std::abs(response(centre_hz));
  sections_.front().b0 /= gain;
  sections_.front().b1 /= gain;
  sections_.front().b2 /= gain;
}

std::complex<double> BandpassFilter::response(double freq_hz) const {
  const cplx zinv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_rate_hz_);
  cplx h = 1.0;
  for (const Biquad& s : sections_) {
    h *= (s.b0 + s.b1 * zinv + s.b2 * zinv * zinv) / (1.0 + s.a1 * zinv + s.a2 * zinv * zinv);
  }
  return h;
}

std::vector<double> BandpassFilter::filtfilt(std::span<const double> x) const {
  const std::size_t n = x.size();
  if (n < 2) return std::vector<double>(x.begin(), x.end());

  // Reflect about each end point (odd extension) over several low-cut time constants.
  const auto settle = static_cast<std::size_t>(std::ceil(6.0 * sample_rate_hz_ / low_hz_));
  const std::size_t pad = std::min(n - 1, settle);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  run_sections(sections_, ext);
  std::reverse(ext.begin(), ext.end());
  run_sections(sections_, ext);
  std::reverse(ext.begin(), ext.end());

  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                             ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

SampledSignal bandpass(const SampledSignal& signal, double low_hz, double high_hz, int order) {
  const BandpassFilter filter(low_hz, high_hz, signal.sample_rate_hz(), order);
  return SampledSignal(filter.filtfilt(signal.samples()), signal.sample_rate_hz());
}

}  // namespace ppgtrack
