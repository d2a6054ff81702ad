#pragma once

// Reference computations written independently of the library code paths:
// direct O(N^2) transforms, explicit Hankel matrices, least-squares tone fits.

#include <cmath>
#include <complex>
#include <cstddef>
#include <algorithm>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::vector<double> sine(std::size_t n, double freq_hz, double fs, double amp = 1.0,
                                double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amp * std::sin(kTwoPi * freq_hz * static_cast<double>(i) / fs + phase);
  }
  return x;
}

inline std::vector<double> add(std::vector<double> a, std::span<const double> b, double scale = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
  return a;
}

inline std::vector<double> white_noise(std::size_t n, unsigned seed, double sigma = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

/// |sum_n x[n] e^{-2 pi i k n / nfft}| evaluated directly.
inline double dft_magnitude(std::span<const double> x, std::size_t nfft, std::size_t k) {
  std::complex<double> acc = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double arg = -kTwoPi * static_cast<double>(k) * static_cast<double>(n) /
                       static_cast<double>(nfft);
    acc += x[n] * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return std::abs(acc);
}

/// Amplitude of the best least-squares fit a sin + b cos at freq over [begin, end).
inline double tone_amplitude(std::span<const double> x, double freq_hz, double fs,
                             std::size_t begin = 0, std::size_t end = 0) {
  if (end == 0) end = x.size();
  double ss = 0, cc = 0, sc = 0, xs = 0, xc = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const double t = kTwoPi * freq_hz * static_cast<double>(i) / fs;
    const double s = std::sin(t), c = std::cos(t);
    ss += s * s;
    cc += c * c;
    sc += s * c;
    xs += x[i] * s;
    xc += x[i] * c;
  }
  const double det = ss * cc - sc * sc;
  const double a = (xs * cc - xc * sc) / det;
  const double b = (xc * ss - xs * sc) / det;
  return std::hypot(a, b);
}

inline double rms(std::span<const double> x, std::size_t begin = 0, std::size_t end = 0) {
  if (end == 0) end = x.size();
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += x[i] * x[i];
  return std::sqrt(s / static_cast<double>(end - begin));
}

inline double energy(std::span<const double> x, std::size_t begin = 0, std::size_t end = 0) {
  if (end == 0) end = x.size();
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += x[i] * x[i];
  return s;
}

/// Explicit L x K lag matrix, row-major: h[i][j] = x[i + j].
inline std::vector<std::vector<double>> hankel(std::span<const double> x, std::size_t L) {
  const std::size_t K = x.size() - L + 1;
  std::vector<std::vector<double>> h(L, std::vector<double>(K));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < K; ++j) h[i][j] = x[i + j];
  }
  return h;
}

/// Average of each anti-diagonal i + j = s of a row-major matrix.
inline std::vector<double> anti_diagonal_mean(const std::vector<std::vector<double>>& m) {
  const std::size_t L = m.size(), K = m[0].size();
  std::vector<double> sum(L + K - 1, 0.0), count(L + K - 1, 0.0);
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      sum[i + j] += m[i][j];
      count[i + j] += 1.0;
    }
  }
  for (std::size_t s = 0; s < sum.size(); ++s) sum[s] /= count[s];
  return sum;
}

inline double relative_error(std::span<const double> got, std::span<const double> want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

inline double correlation(std::span<const double> a, std::span<const double> b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Bins of the k largest strict local maxima (left-strict, right-weak).
inline std::vector<std::size_t> top_peaks(std::span<const double> mag, std::size_t k) {
  std::vector<std::size_t> lm;
  for (std::size_t i = 1; i + 1 < mag.size(); ++i) {
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) lm.push_back(i);
  }
  std::stable_sort(lm.begin(), lm.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  if (lm.size() > k) lm.resize(k);
  std::sort(lm.begin(), lm.end());
  return lm;
}

/// Random k-sparse on-grid cosine mixture observed on the first m samples.
/// Bins are drawn from [margin, grid/2 - margin) with pairwise separation >= sep.
struct SparseCase {
  std::vector<std::size_t> bins;  // ascending
  std::vector<double> samples;
};

inline SparseCase sparse_case(std::mt19937& rng, std::size_t k, std::size_t grid, std::size_t m,
                              std::size_t sep = 64, std::size_t margin = 64) {
  std::uniform_int_distribution<std::size_t> pick(margin, grid / 2 - margin - 1);
  std::uniform_real_distribution<double> amp(0.5, 1.0), phase(0.0, kTwoPi);
  SparseCase c;
  while (true) {
    c.bins.clear();
    for (std::size_t i = 0; i < k; ++i) c.bins.push_back(pick(rng));
    std::sort(c.bins.begin(), c.bins.end());
    bool ok = true;
    for (std::size_t i = 1; i < k; ++i) ok &= c.bins[i] - c.bins[i - 1] >= sep;
    if (ok) break;
  }
  c.samples.assign(m, 0.0);
  for (std::size_t b : c.bins) {
    const double a = amp(rng), p = phase(rng);
    for (std::size_t n = 0; n < m; ++n) {
      c.samples[n] += a * std::cos(kTwoPi * static_cast<double>(b * n) / static_cast<double>(grid) + p);
    }
  }
  return c;
}

inline double db(double ratio) { return 20.0 * std::log10(ratio); }

}  // namespace oracle
