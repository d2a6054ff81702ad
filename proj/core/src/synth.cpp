#include "ppgtrack/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ppgtrack/error.hpp"

namespace ppgtrack {

namespace {
constexpr std::string_view kModule = "synth";
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

std::vector<double> linear_profile(double first_bpm, double last_bpm, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? first_bpm
                    : first_bpm + (last_bpm - first_bpm) * static_cast<double>(i) /
                                      static_cast<double>(n - 1);
  }
  return out;
}

RecordingSession synth_session(std::span<const double> hr_profile_bpm,
                               std::span<const MaTone> ma, const SynthOptions& options) {
  if (hr_profile_bpm.empty()) throw Error(ErrorKind::kBadProfile, kModule, "empty profile");
  for (double bpm : hr_profile_bpm) {
    if (!(bpm >= 24.0 && bpm <= 300.0)) {
      throw Error(ErrorKind::kBadProfile, kModule,
                  "heart rate " + std::to_string(bpm) + " outside [24, 300] BPM");
    }
  }
  const double fs = options.sample_rate_hz;
  if (!(fs > 0.0)) throw Error(ErrorKind::kInvalidConfig, kModule, "sample rate must be positive");
  for (const MaTone& tone : ma) {
    if (!(tone.freq_hz > 0.0 && tone.freq_hz < fs / 2.0)) {
      throw Error(ErrorKind::kInvalidConfig, kModule, "tone frequency outside (0, Nyquist)");
    }
  }

  const auto win = static_cast<std::size_t>(std::llround(options.window_len_s * fs));
  const auto stride = static_cast<std::size_t>(std::llround(options.stride_s * fs));
  const std::size_t windows = hr_profile_bpm.size();
  const std::size_t n = win + (windows - 1) * stride;

  // Instantaneous frequency, linear between window centres and held outside.
  std::vector<double> phase(n);
  double phi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pos = (static_cast<double>(k) - static_cast<double>(win) / 2.0) /
                       static_cast<double>(stride);
    double bpm;
    if (pos <= 0.0) {
      bpm = hr_profile_bpm.front();
    } else if (pos >= static_cast<double>(windows - 1)) {
      bpm = hr_profile_bpm.back();
    } else {
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      bpm = hr_profile_bpm[i] + frac * (hr_profile_bpm[i + 1] - hr_profile_bpm[i]);
    }
    phi += kTwoPi * (bpm / 60.0) / fs;
    phase[k] = phi;
  }

  std::vector<double> pulse(n);
  for (std::size_t k = 0; k < n; ++k) {
    pulse[k] = std::sin(phase[k]) +
               options.harmonic_amplitude * std::sin(2.0 * phase[k] + options.harmonic_phase);
  }

  std::array<std::vector<double>, 2> ppg{pulse, pulse};
  std::array<std::vector<double>, 3> accel;
  for (auto& a : accel) a.assign(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    double env = 1.0;
    if (t < options.ma_onset_s) {
      env = 0.0;
    } else if (options.ma_ramp_s > 0.0 && t < options.ma_onset_s + options.ma_ramp_s) {
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * (t - options.ma_onset_s) / options.ma_ramp_s);
    }
    if (env == 0.0) continue;
    for (const MaTone& tone : ma) {
      const double arg = kTwoPi * tone.freq_hz * t;
      for (std::size_t c = 0; c < 2; ++c) {
        ppg[c][k] += env * tone.ppg[c].amplitude * std::sin(arg + tone.ppg[c].phase);
      }
      for (std::size_t c = 0; c < 3; ++c) {
        accel[c][k] += env * tone.accel[c].amplitude * std::sin(arg + tone.accel[c].phase);
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (std::isfinite(options.snr_db)) {
    double power = 0.0;
    for (double v : pulse) power += v * v;
    power /= static_cast<double>(n);
    const double sigma = std::sqrt(power) * std::pow(10.0, -options.snr_db / 20.0);
    for (auto& ch : ppg) {
      for (double& v : ch) v += sigma * gauss(rng);
    }
  }
  if (options.accel_noise_rms > 0.0) {
    for (auto& ch : accel) {
      for (double& v : ch) v += options.accel_noise_rms * gauss(rng);
    }
  }

  RecordingSession session{options.session_id,
                           SampledSignal(std::move(ppg[0]), fs),
                           SampledSignal(std::move(ppg[1]), fs),
                           SampledSignal(std::move(accel[0]), fs),
                           SampledSignal(std::move(accel[1]), fs),
                           SampledSignal(std::move(accel[2]), fs),
                           std::vector<double>(hr_profile_bpm.begin(), hr_profile_bpm.end())};
  return session;
}

}  // namespace ppgtrack
