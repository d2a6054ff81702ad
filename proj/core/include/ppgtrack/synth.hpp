#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ppgtrack/signal_model.hpp"

namespace ppgtrack {

/// Amplitude and phase (radians) of one tone in one channel.
struct TonePart {
  double amplitude = 0.0;
  double phase = 0.0;
};

/// A motion-artifact tone present in PPG and acceleration with per-channel
/// gain and phase.
struct MaTone {
  double freq_hz = 0.0;
  std::array<TonePart, 2> ppg{};
  std::array<TonePart, 3> accel{};
};

struct SynthOptions {
  double sample_rate_hz = 125.0;
  double window_len_s = 8.0;
  double stride_s = 2.0;
  double snr_db = std::numeric_limits<double>::infinity();  // PPG noise vs. pulse power
  double accel_noise_rms = 0.0;
  double harmonic_amplitude = 0.3;
  double harmonic_phase = 0.5;
  // Tones fade in with a raised-cosine ramp starting at ma_onset_s.
  double ma_onset_s = 0.0;
  double ma_ramp_s = 0.0;
  std::uint64_t seed = 1;
  std::string session_id = "synthetic";
};

/// Session whose windows (under the given window/stride) have heart rates
/// hr_profile_bpm. The pulse frequency is interpolated linearly between
/// window centres and integrated to a continuous phase; the pulse is
/// sin(phi) + a2 sin(2 phi + p2). truth_bpm equals the profile.
/// Throws Error(kBadProfile) for an empty profile or rates outside [24, 300] BPM,
/// and Error(kInvalidConfig) for tone frequencies outside (0, Nyquist).
RecordingSession synth_session(std::span<const double> hr_profile_bpm,
                               std::span<const MaTone> ma, const SynthOptions& options);

/// n values spaced evenly from first to last inclusive.
std::vector<double> linear_profile(double first_bpm, double last_bpm, std::size_t n);

}  // namespace ppgtrack
