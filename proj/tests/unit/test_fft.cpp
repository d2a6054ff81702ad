#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppgtrack/fft.hpp"

using namespace ppgtrack;

TEST(RealFft, MatchesDirectDft) {
  const auto x = oracle::white_noise(100, 7);
  const auto mag = magnitude_spectrum(x, 256);
  ASSERT_EQ(mag.size(), 129u);
  for (std::size_t k = 0; k < mag.size(); k += 5) {
    EXPECT_NEAR(mag[k], oracle::dft_magnitude(x, 256, k), 1e-9) << k;
  }
}

TEST(RealFft, InverseRoundTrip) {
  RealFft fft(64);
  const auto x = oracle::white_noise(64, 9);
  std::vector<std::complex<double>> spec(fft.bins());
  std::vector<double> back(64);
  fft.forward(x, spec);
  fft.inverse(spec, back);
  EXPECT_LE(oracle::relative_error(back, x), 1e-12);
}

TEST(RealFft, CachedPlansAreReused) {
  RealFft& a = cached_fft(512);
  RealFft& b = cached_fft(512);
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(a.size(), 512u);
}
