#include <gtest/gtest.h>

#include <cmath>

#include "ppgtrack/error.hpp"
#include "ppgtrack/signal_model.hpp"

using namespace ppgtrack;

namespace {

RecordingSession ramp_session(std::size_t n, double fs = 125.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return {"ramp", SampledSignal(x, fs), SampledSignal(x, fs), SampledSignal(x, fs),
          SampledSignal(x, fs), SampledSignal(x, fs), std::nullopt};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIoError;
}

}  // namespace

TEST(SampledSignal, RejectsEmptyNonFiniteAndBadRate) {
  EXPECT_EQ(kind_of([] { SampledSignal({}, 125.0); }), ErrorKind::kInvalidSignal);
  EXPECT_EQ(kind_of([] { SampledSignal({1.0, NAN}, 125.0); }), ErrorKind::kInvalidSignal);
  EXPECT_EQ(kind_of([] { SampledSignal({1.0, INFINITY}, 125.0); }), ErrorKind::kInvalidSignal);
  EXPECT_EQ(kind_of([] { SampledSignal({1.0}, 0.0); }), ErrorKind::kInvalidSignal);
  EXPECT_EQ(kind_of([] { SampledSignal({1.0}, -3.0); }), ErrorKind::kInvalidSignal);
}

TEST(RecordingSession, ValidateCatchesLengthAndRateDisagreement) {
  RecordingSession s = ramp_session(10);
  EXPECT_NO_THROW(s.validate());
  s.accel_z = SampledSignal(std::vector<double>(9, 0.0), 125.0);
  EXPECT_THROW(s.validate(), Error);
  s.accel_z = SampledSignal(std::vector<double>(10, 0.0), 100.0);
  EXPECT_THROW(s.validate(), Error);
}

TEST(MakeWindows, SixtyFourSecondsGiveTwentyNineWindows) {
  const auto windows = make_windows(ramp_session(64 * 125), TrackerConfig{});
  ASSERT_EQ(windows.size(), 29u);
  // Starts enumerated independently: 0, 250, ..., 7000.
  for (std::size_t i = 0; i < windows.size(); ++i) {
    EXPECT_EQ(windows[i].start_sample, i * 250);
    EXPECT_EQ(windows[i].index, i);
    EXPECT_EQ(windows[i].ppg1.size(), 1000u);
  }
  EXPECT_EQ(windows.back().start_sample + 1000, 8000u);
}

TEST(MakeWindows, ExactlyOneWindowAtBoundary) {
  const auto windows = make_windows(ramp_session(1000), TrackerConfig{});
  ASSERT_EQ(windows.size(), 1u);
  EXPECT_EQ(windows[0].start_sample, 0u);
}

TEST(MakeWindows, ShortSessionIsRejected) {
  EXPECT_EQ(kind_of([] { make_windows(ramp_session(987), TrackerConfig{}); }),
            ErrorKind::kSessionTooShort);
}

TEST(MakeWindows, SlicesCopySessionSamplesExactly) {
  const RecordingSession s = ramp_session(3000);
  const auto windows = make_windows(s, TrackerConfig{});
  for (const auto& w : windows) {
    for (std::size_t j = 0; j < w.ppg1.size(); j += 97) {
      EXPECT_EQ(w.ppg1[j], s.ppg1[w.index * 250 + j]);
      EXPECT_EQ(w.accel_y[j], s.accel_y[w.index * 250 + j]);
    }
  }
}

TEST(WindowCount, PureFunctionOfLengths) {
  for (std::size_t n : {999u, 1000u, 1249u, 1250u, 8000u, 22500u}) {
    std::size_t brute = 0;
    for (std::size_t start = 0; start + 1000 <= n; start += 250) ++brute;
    EXPECT_EQ(window_count(n, 1000, 250), brute) << n;
  }
  EXPECT_EQ(window_count(10, 0, 1), 0u);
}

TEST(TrackerConfig, DefaultsAreValidAndChecksRanges) {
  TrackerConfig c;
  EXPECT_NO_THROW(c.validate(125.0));
  EXPECT_EQ(c.window_samples(125.0), 1000u);
  EXPECT_EQ(c.stride_samples(125.0), 250u);
  EXPECT_EQ(c.embed_len(1000), 500u);

  auto bad = [](auto mutate) {
    TrackerConfig c;
    mutate(c);
    return kind_of([&] { c.validate(125.0); });
  };
  EXPECT_EQ(bad([](TrackerConfig& c) { c.dominance_threshold = 1.0; }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(bad([](TrackerConfig& c) { c.dominance_threshold = 0.0; }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(bad([](TrackerConfig& c) { c.band_high_hz = 70.0; }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(bad([](TrackerConfig& c) { c.band_low_hz = 6.0; }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(bad([](TrackerConfig& c) { c.lms_order = 0; }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(bad([](TrackerConfig& c) { c.grid_size = 1001; }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(bad([](TrackerConfig& c) { c.ssa_embed_len = 1000; }), ErrorKind::kInvalidConfig);
}
