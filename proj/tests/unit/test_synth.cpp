#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "ppgtrack/error.hpp"
#include "ppgtrack/fft.hpp"
#include "ppgtrack/synth.hpp"

using namespace ppgtrack;

namespace {
constexpr double kFs = 125.0;

// Frequency of the largest in-band bin of a zero-padded window (bin width fs / nfft).
double argmax_hz(std::span<const double> x, std::size_t nfft = 16384) {
  const auto mag = magnitude_spectrum(x, nfft);
  std::size_t best = 1;
  for (std::size_t k = 1; k < mag.size(); ++k) {
    if (mag[k] > mag[best]) best = k;
  }
  return static_cast<double>(best) * kFs / static_cast<double>(nfft);
}

MaTone tone(double f, double ppg_amp, std::array<double, 3> gains) {
  MaTone t;
  t.freq_hz = f;
  t.ppg = {TonePart{ppg_amp, 0.1}, TonePart{0.8 * ppg_amp, 0.5}};
  t.accel = {TonePart{gains[0], 0.0}, TonePart{gains[1], 0.3}, TonePart{gains[2], 0.6}};
  return t;
}
}  // namespace

TEST(Synth, CleanConstantRateWindowsPeakAtTwoHertz) {
  const auto s = synth_session(std::vector<double>(6, 120.0), {}, SynthOptions{});
  const double bin = kFs / 16384.0;
  for (std::size_t w = 0; w < 6; ++w) {
    const auto win = s.ppg1.slice(w * 250, 1000).values();
    EXPECT_NEAR(argmax_hz(win), 2.0, bin) << w;
  }
}

TEST(Synth, DeterministicForSeed) {
  SynthOptions o;
  o.snr_db = 10;
  o.accel_noise_rms = 0.2;
  o.seed = 77;
  const std::vector<MaTone> ma = {tone(2.3, 1.0, {1, 0, 0})};
  const auto profile = linear_profile(80, 120, 10);
  const auto a = synth_session(profile, ma, o);
  const auto b = synth_session(profile, ma, o);
  EXPECT_EQ(a.ppg1.values(), b.ppg1.values());
  EXPECT_EQ(a.accel_z.values(), b.accel_z.values());
  o.seed = 78;
  const auto c = synth_session(profile, ma, o);
  EXPECT_NE(a.ppg1.values(), c.ppg1.values());
}

TEST(Synth, StrongArtifactDominatesRawSpectrum) {
  const std::vector<MaTone> ma = {tone(2.8, 3.0, {1, 0.5, 0.2})};
  const auto s = synth_session(std::vector<double>(3, 100.0), ma, SynthOptions{});
  EXPECT_NEAR(argmax_hz(s.ppg1.slice(0, 1000).values()), 2.8, kFs / 16384.0);
}

TEST(Synth, TruthMatchesWindowCountAndToneInAccel) {
  SynthOptions o;
  o.accel_noise_rms = 0.1;
  const std::vector<MaTone> ma = {tone(1.4, 3.0, {1, 0.5, 0}), tone(3.1, 2.0, {0, 0.3, 1})};
  const auto profile = linear_profile(90, 130, 25);
  const auto s = synth_session(profile, ma, o);
  ASSERT_TRUE(s.truth_bpm);
  EXPECT_EQ(*s.truth_bpm, profile);
  EXPECT_EQ(window_count(s.size(), 1000, 250), profile.size());
  const double bin = kFs / 16384.0;
  EXPECT_NEAR(argmax_hz(s.accel_x.slice(0, 1000).values()), 1.4, bin);
  EXPECT_NEAR(argmax_hz(s.accel_z.slice(0, 1000).values()), 3.1, bin);
}

TEST(Synth, PhaseContinuousPulse) {
  // A ramp has no jumps: consecutive samples of the clean pulse differ by at most
  // the derivative bound (1 + 2 * 0.3) * 2 pi f / fs.
  const auto s = synth_session(linear_profile(60, 180, 40), {}, SynthOptions{});
  const auto& x = s.ppg1.values();
  const double bound = 1.6 * oracle::kTwoPi * 3.0 / kFs;
  for (std::size_t i = 1; i < x.size(); ++i) ASSERT_LE(std::abs(x[i] - x[i - 1]), bound) << i;
}

TEST(Synth, OnsetKeepsEarlySamplesClean) {
  SynthOptions o;
  o.ma_onset_s = 8.0;
  o.ma_ramp_s = 4.0;
  const std::vector<MaTone> ma = {tone(2.8, 3.0, {1, 1, 1})};
  const auto s = synth_session(std::vector<double>(10, 100.0), ma, o);
  for (std::size_t i = 0; i < 1000; ++i) ASSERT_EQ(s.accel_x[i], 0.0);
  EXPECT_GT(oracle::rms(s.accel_x.values(), 1500, 2000), 0.5);
}

TEST(Synth, SnrSetsNoiseLevel) {
  SynthOptions o;
  o.snr_db = 20.0;
  const auto clean = synth_session(std::vector<double>(20, 100.0), {}, SynthOptions{});
  const auto noisy = synth_session(std::vector<double>(20, 100.0), {}, o);
  std::vector<double> noise(clean.size());
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noisy.ppg1[i] - clean.ppg1[i];
  EXPECT_NEAR(oracle::db(oracle::rms(clean.ppg1.values()) / oracle::rms(noise)), 20.0, 0.5);
}

TEST(Synth, BadProfile) {
  for (const std::vector<double>& p : {std::vector<double>{}, {20.0}, {120, 301}}) {
    try {
      synth_session(p, {}, SynthOptions{});
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kBadProfile);
    }
  }
  const std::vector<MaTone> bad = {tone(70.0, 1, {1, 1, 1})};
  EXPECT_THROW(synth_session(std::vector<double>{100}, bad, SynthOptions{}), Error);
}

TEST(Synth, LinearProfile) {
  EXPECT_EQ(linear_profile(80, 160, 5), (std::vector<double>{80, 100, 120, 140, 160}));
  EXPECT_EQ(linear_profile(90, 10, 1), (std::vector<double>{90}));
}
